#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geocausal/engine.hpp"
#include "geocausal/graph.hpp"
#include "geocausal/rules.hpp"

namespace geocausal {

// Observation evidence behind an effects edge.
struct Evidence {
    std::string precondition_id;
    bool conditions_known = false; // false when the rule set was not supplied
    Truth satisfied = Truth::Unknown;
    std::vector<ConditionResult> conditions;
};

struct ExplanationEdge {
    Triple triple;
    std::size_t depth; // hops from the root; 1 for edges into the root
    ProvenanceTree provenance;
    std::optional<Evidence> evidence; // effects edges only
};

// Backward causes/effects DAG rooted at an event. Edges only ever link a
// node at depth d to one at depth d+1.
struct Explanation {
    EntityId root;
    std::vector<EntityId> nodes; // breadth-first, root first
    std::vector<ExplanationEdge> edges;
    std::vector<Triple> affects; // side information from situations in the DAG
    std::size_t depth_reached = 0;
    bool truncated = false;
};

inline constexpr std::size_t kDefaultWhyDepth = 10;

// Throws UnknownEntity / NotAnEvent. `rules` (optional) supplies the
// conditions of each satisfied precondition set for evidence lines.
Explanation why(const KnowledgeGraph& g, const EntityId& event, std::size_t max_depth = kDefaultWhyDepth,
                const RuleSet* rules = nullptr);

std::string render_explanation_text(const KnowledgeGraph& g, const Explanation& ex);

// "<id|?> <relation|?> <id|?>". Throws PatternParseError.
TriplePattern parse_pattern(std::string_view text);
std::vector<Triple> query(const KnowledgeGraph& g, std::string_view pattern);
// One "subject predicate object" per line, derived triples suffixed with
// " [rule]".
std::string render_triples(const std::vector<Triple>& triples);

enum class ExportFormat { Dot, Json };

std::string export_graph(const KnowledgeGraph& g, ExportFormat format);
std::string export_explanation(const KnowledgeGraph& g, const Explanation& ex, ExportFormat format);
// Inverse of export_graph(g, Json). Throws ParseError / SchemaViolation.
KnowledgeGraph import_graph_json(std::string_view text);

} // namespace geocausal
