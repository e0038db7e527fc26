#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geocausal/model.hpp"

namespace geocausal {

// One observation test. Numeric comparators carry a Quantity threshold,
// =/!= a Quantity or a Categorical, present/absent none.
struct Condition {
    std::string attribute;
    Comparator comparator;
    std::optional<Value> threshold;

    std::string to_string() const; // "SeaSurfaceTemp > 82 degF"

    friend bool operator==(const Condition&, const Condition&) = default;
};

// Conjunction of conditions which, when satisfied by a situation, effects
// an event of `event_kind`. Alternatives are separate sets.
struct PreconditionSet {
    std::string id;
    std::string event_kind;
    std::vector<Condition> conditions;

    friend bool operator==(const PreconditionSet&, const PreconditionSet&) = default;
};

enum class CauseConstraint { CoOccurs, Precedes, PrecedesWithin };

struct CauseRule {
    std::string id;
    std::string cause_kind;
    std::string effect_kind;
    CauseConstraint constraint = CauseConstraint::CoOccurs;
    Duration max_gap{}; // PrecedesWithin only

    friend bool operator==(const CauseRule&, const CauseRule&) = default;
};

class RuleSet {
public:
    RuleSet() = default;
    // Validates every invariant (InvalidValue, DuplicateRuleId) and sorts
    // both lists by id.
    RuleSet(std::vector<PreconditionSet> preconditions, std::vector<CauseRule> cause_rules);

    const std::vector<PreconditionSet>& preconditions() const noexcept { return preconditions_; }
    const std::vector<CauseRule>& cause_rules() const noexcept { return cause_rules_; }
    const PreconditionSet* find_precondition(std::string_view id) const;
    bool empty() const noexcept { return preconditions_.empty() && cause_rules_.empty(); }

    friend bool operator==(const RuleSet&, const RuleSet&) = default;

private:
    std::vector<PreconditionSet> preconditions_;
    std::vector<CauseRule> cause_rules_;
};

// Throws ParseError (line, column, expected token); the error code is
// ParseError, UnknownUnit or DuplicateRuleId.
RuleSet parse_rules(std::string_view text);
RuleSet load_rules_file(const std::string& path);
// Canonical form: preconditions then rules, each sorted by id.
std::string print_rules(const RuleSet& rules);

// Ordered False < Unknown < True.
enum class Truth { False = 0, Unknown = 1, True = 2 };
std::string_view truth_name(Truth t);

enum class ConditionOutcome { True, False, Unknown, Error };

struct ConditionResult {
    Condition condition;
    ConditionOutcome outcome;
    std::optional<Value> observed;
    std::string diagnostic; // set for Error and Unknown
};

struct SatisfactionResult {
    Truth satisfied;
    std::vector<ConditionResult> per_condition;
};

// Unknown for a missing observation; an incomparable observation is an
// Error outcome and makes the aggregate False.
SatisfactionResult evaluate(const PreconditionSet& pc, const GeoSituation& situation);

} // namespace geocausal
