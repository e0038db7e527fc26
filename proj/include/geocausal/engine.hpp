#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "geocausal/graph.hpp"
#include "geocausal/rules.hpp"

namespace geocausal {

struct EngineConfig {
    // Largest gap between a situation's end and the start of the event it
    // effects.
    Duration max_gap{24 * 3600};
    // When false, effects/causes rules ignore geometry entirely.
    bool require_spatial_overlap = true;
};

// Names of the four inference rules; provenance rule ids are these,
// suffixed with ":<rule-set id>" where one applies (e.g. "R-CAU:R1").
inline constexpr std::string_view kRuleSatisfies = "R-SAT";
inline constexpr std::string_view kRuleEffects = "R-EFF";
inline constexpr std::string_view kRuleCauses = "R-CAU";
inline constexpr std::string_view kRuleAffects = "R-AFF";

struct Diagnostic {
    std::string rule;
    std::vector<std::string> entities;
    std::string reason; // unknown-satisfaction | mixed-setting | no-temporal-adjacency | no-spatial-overlap

    // "SKIP <rule> <entities...> reason=<code>"
    std::string to_string() const;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct InferenceResult {
    std::vector<Triple> derived; // in derivation order
    std::size_t iterations = 0;
    std::vector<Diagnostic> diagnostics;
};

// Materializes the least fixpoint of the satisfies/effects/causes/affects
// rules. Registers each precondition set of `rules` as a graph entity.
// Throws ConfigError (negative max_gap) and ValidationFailure (graph fails
// validation, or a precondition id collides with another entity).
InferenceResult infer(KnowledgeGraph& g, const RuleSet& rules, const EngineConfig& cfg = {});

struct ProvenanceTree {
    Triple triple;
    std::vector<ProvenanceTree> premises;
};

// Throws UnknownTriple.
ProvenanceTree explain(const KnowledgeGraph& g, const TripleKey& key);
// Indented, one triple per line, rule ids in brackets.
std::string render_provenance(const ProvenanceTree& tree);

} // namespace geocausal
