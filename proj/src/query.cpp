#include "geocausal/query.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "geocausal/error.hpp"

namespace geocausal {

namespace {

std::string node_label(const KnowledgeGraph& g, const EntityId& id) {
    const Entity* e = g.find(id);
    if (!e) return id.str();
    if (const auto* ev = std::get_if<GeoEvent>(e)) return id.str() + " [" + ev->kind + "]";
    if (const auto* o = std::get_if<GeoObject>(e)) return id.str() + " [" + o->kind + "]";
    return id.str() + " [" + std::string(role_name(entity_role(*e))) + "]";
}

std::optional<Evidence> effects_evidence(const KnowledgeGraph& g, const Triple& edge, const RuleSet* rules) {
    const EntityId& sid = edge.key.subject;
    std::string pc_id;
    const std::string& rule = edge.provenance.rule;
    std::string prefix = std::string(kRuleEffects) + ":";
    if (rule.rfind(prefix, 0) == 0) {
        pc_id = rule.substr(prefix.size());
    } else {
        const auto* ev = g.get<GeoEvent>(edge.key.object);
        for (const auto& sat : g.match({sid, RelationKind::Satisfies, std::nullopt})) {
            const auto* ref = g.get<PreconditionRef>(sat.key.object);
            if (ref && ev && ref->event_kind == ev->kind) {
                pc_id = sat.key.object.str();
                break;
            }
        }
    }
    if (pc_id.empty()) return std::nullopt;

    Evidence evidence;
    evidence.precondition_id = pc_id;
    const auto* situation = g.get<GeoSituation>(sid);
    const PreconditionSet* pc = rules ? rules->find_precondition(pc_id) : nullptr;
    if (pc && situation) {
        auto result = evaluate(*pc, *situation);
        evidence.conditions_known = true;
        evidence.satisfied = result.satisfied;
        evidence.conditions = std::move(result.per_condition);
    }
    return evidence;
}

std::string_view outcome_name(ConditionOutcome o) {
    switch (o) {
    case ConditionOutcome::True: return "true";
    case ConditionOutcome::False: return "false";
    case ConditionOutcome::Unknown: return "unknown";
    case ConditionOutcome::Error: return "error";
    }
    return "?";
}

} // namespace

Explanation why(const KnowledgeGraph& g, const EntityId& event, std::size_t max_depth, const RuleSet* rules) {
    if (!g.get<GeoEvent>(event)) {
        g.entity(event); // UnknownEntity
        fail(Errc::NotAnEvent, "'" + event.str() + "' is not a geo-event");
    }

    Explanation ex{event, {event}, {}, {}, 0, false};
    std::map<EntityId, std::size_t> depth_of{{event, 0}};
    std::deque<EntityId> queue{event};

    while (!queue.empty()) {
        EntityId node = queue.front();
        queue.pop_front();
        std::size_t d = depth_of.at(node);
        if (g.get<GeoSituation>(node)) continue;

        std::vector<Triple> incoming = g.match({std::nullopt, RelationKind::Causes, node});
        auto eff = g.match({std::nullopt, RelationKind::Effects, node});
        incoming.insert(incoming.end(), eff.begin(), eff.end());
        std::sort(incoming.begin(), incoming.end(),
                  [](const Triple& a, const Triple& b) { return a.key < b.key; });
        if (incoming.empty()) continue;
        if (d >= max_depth) {
            ex.truncated = true;
            continue;
        }
        for (auto& t : incoming) {
            const EntityId& cause = t.key.subject;
            auto [it, fresh] = depth_of.try_emplace(cause, d + 1);
            if (!fresh && it->second != d + 1) continue; // would close a cycle or skip a level
            if (fresh) {
                ex.nodes.push_back(cause);
                queue.push_back(cause);
            }
            ExplanationEdge edge{t, d + 1, explain(g, t.key), std::nullopt};
            if (t.key.predicate == RelationKind::Effects) edge.evidence = effects_evidence(g, t, rules);
            ex.edges.push_back(std::move(edge));
            ex.depth_reached = std::max(ex.depth_reached, d + 1);
        }
    }

    for (const auto& id : ex.nodes)
        if (g.get<GeoSituation>(id))
            for (auto& t : g.match({id, RelationKind::Affects, std::nullopt})) ex.affects.push_back(std::move(t));
    return ex;
}

std::string render_explanation_text(const KnowledgeGraph& g, const Explanation& ex) {
    std::ostringstream out;
    std::map<EntityId, std::vector<const ExplanationEdge*>> into;
    for (const auto& e : ex.edges) into[e.triple.key.object].push_back(&e);
    std::set<EntityId> expanded;

    out << node_label(g, ex.root) << '\n';
    std::function<void(const EntityId&, int)> walk = [&](const EntityId& node, int indent) {
        if (!expanded.insert(node).second) return;
        auto it = into.find(node);
        if (it == into.end()) return;
        for (const auto* e : it->second) {
            std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
            const auto& key = e->triple.key;
            out << pad << "<- " << relation_token(key.predicate) << " -- " << node_label(g, key.subject);
            out << (e->triple.provenance.derived() ? " (" + e->triple.provenance.rule + ")" : " (asserted)");
            bool seen = expanded.count(key.subject) && into.count(key.subject);
            out << (seen ? " (see above)\n" : "\n");
            if (e->evidence) {
                const auto& ev = *e->evidence;
                if (!ev.conditions_known) {
                    out << pad << "    evidence " << ev.precondition_id << ": conditions not loaded\n";
                }
                for (const auto& c : ev.conditions) {
                    out << pad << "    evidence " << ev.precondition_id << ": " << c.condition.to_string()
                        << "; observed "
                        << (c.observed ? value_to_string(*c.observed) : std::string("nothing")) << ": "
                        << outcome_name(c.outcome) << '\n';
                }
            }
            for (const auto& a : ex.affects)
                if (a.key.subject == key.subject)
                    out << pad << "    affects " << node_label(g, a.key.object) << '\n';
            if (!seen) walk(key.subject, indent + 1);
        }
    };
    walk(ex.root, 1);
    out << "depth " << ex.depth_reached << ", " << ex.edges.size() << " edge"
        << (ex.edges.size() == 1 ? "" : "s") << (ex.truncated ? ", truncated" : "") << '\n';
    return out.str();
}

TriplePattern parse_pattern(std::string_view text) {
    std::vector<std::string> parts;
    std::istringstream in{std::string(text)};
    for (std::string tok; in >> tok;) parts.push_back(tok);
    if (parts.size() != 3)
        fail(Errc::PatternParseError, "pattern must have three terms '<id|?> <relation|?> <id|?>', got " +
                                          std::to_string(parts.size()));
    TriplePattern p;
    if (parts[0] != "?") p.subject = EntityId(parts[0]);
    if (parts[2] != "?") p.object = EntityId(parts[2]);
    if (parts[1] != "?") {
        try {
            p.predicate = relation_from_token(parts[1]);
        } catch (const Error&) {
            fail(Errc::PatternParseError,
                 "unknown relation '" + parts[1] + "'; valid tokens: " + relation_token_list());
        }
    }
    return p;
}

std::vector<Triple> query(const KnowledgeGraph& g, std::string_view pattern) {
    return g.match(parse_pattern(pattern));
}

std::string render_triples(const std::vector<Triple>& triples) {
    std::string out;
    for (const auto& t : triples) {
        out += t.key.to_string();
        if (t.provenance.derived()) out += " [" + t.provenance.rule + "]";
        out += '\n';
    }
    return out;
}

} // namespace geocausal
