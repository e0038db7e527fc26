#include <algorithm>

#include <json.hpp>

#include "geocausal/error.hpp"
#include "geocausal/query.hpp"

namespace geocausal {

using nlohmann::json;

namespace {

// DOT -----------------------------------------------------------------------

std::string dot_quote(std::string_view s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string_view dot_shape(Role r) {
    switch (r) {
    case Role::Event: return "box";
    case Role::Object: return "ellipse";
    case Role::Situation: return "hexagon";
    case Role::Region: return "note";
    case Role::Precondition: return "component";
    default: return "plaintext";
    }
}

std::string dot_node(const KnowledgeGraph& g, const EntityId& id) {
    const Entity& e = g.entity(id);
    Role role = entity_role(e);
    std::string label = id.str();
    if (const auto* ev = std::get_if<GeoEvent>(&e)) label += "\\n" + ev->kind;
    else if (const auto* o = std::get_if<GeoObject>(&e)) label += "\\n" + o->kind;
    else if (const auto* p = std::get_if<PreconditionRef>(&e)) label += "\\n" + p->event_kind;
    else label += "\\n" + std::string(role_name(role));
    std::string quoted = dot_quote(label);
    // dot_quote escaped the "\n" separators; restore them.
    for (std::size_t pos; (pos = quoted.find("\\\\n")) != std::string::npos;) quoted.replace(pos, 3, "\\n");
    return "  " + dot_quote(id.str()) + " [label=" + quoted + ", shape=" + std::string(dot_shape(role)) +
           ", role=" + std::string(role_name(role)) + "];\n";
}

std::string dot_edge(const Triple& t) {
    std::string out = "  " + dot_quote(t.key.subject.str()) + " -> " + dot_quote(t.key.object.str()) +
                      " [label=" + dot_quote(relation_token(t.key.predicate));
    if (t.provenance.derived()) out += ", style=dashed, rule=" + dot_quote(t.provenance.rule);
    return out + "];\n";
}

// JSON ----------------------------------------------------------------------

json value_json(const Value& v) {
    if (const auto* q = std::get_if<Quantity>(&v))
        return json{{"magnitude", q->magnitude()}, {"unit", std::string(q->unit().symbol)}};
    return json{{"token", std::get<Categorical>(v).token()}};
}

json measurements_json(const MeasurementSet& set) {
    json out = json::object();
    for (const auto& m : set) out[m.attribute] = value_json(m.value);
    return out;
}

json key_json(const TripleKey& k) {
    return json::array({k.subject.str(), std::string(relation_token(k.predicate)), k.object.str()});
}

json triple_json(const Triple& t) {
    json j{{"subject", t.key.subject.str()},
           {"predicate", std::string(relation_token(t.key.predicate))},
           {"object", t.key.object.str()}};
    if (t.provenance.derived()) {
        json premises = json::array();
        for (const auto& p : t.provenance.premises) premises.push_back(key_json(p));
        j["provenance"] = {{"rule", t.provenance.rule}, {"premises", premises}};
    }
    return j;
}

json entity_json(const Entity& e) {
    json j{{"id", entity_id(e).str()}, {"role", std::string(role_name(entity_role(e)))}};
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, GeoObject>) {
                j["kind"] = v.kind;
                j["attributes"] = measurements_json(v.attributes);
            } else if constexpr (std::is_same_v<T, GeoEvent>) {
                j["kind"] = v.kind;
            } else if constexpr (std::is_same_v<T, GeoSituation>) {
                j["holds"] = {{"start", v.holds_during.start().to_string()},
                              {"end", v.holds_during.end().to_string()}};
                j["observations"] = measurements_json(v.observations);
            } else if constexpr (std::is_same_v<T, SpatioTemporalRegion>) {
                j["geometry"] = v.geometry.to_string();
                j["start"] = v.interval.start().to_string();
                j["end"] = v.interval.end().to_string();
            } else {
                j["event_kind"] = v.event_kind;
            }
        },
        e);
    return j;
}

json tree_json(const ProvenanceTree& t) {
    json j{{"triple", key_json(t.triple.key)},
           {"rule", t.triple.provenance.derived() ? json(t.triple.provenance.rule) : json(nullptr)}};
    json premises = json::array();
    for (const auto& p : t.premises) premises.push_back(tree_json(p));
    j["premises"] = premises;
    return j;
}

// Import ------------------------------------------------------------------------

[[noreturn]] void bad_json(const std::string& what) { throw ParseError("invalid graph document: " + what, 0); }

const json& member(const json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) bad_json(std::string("missing '") + name + "'");
    return j.at(name);
}

std::string text_member(const json& j, const char* name) {
    const json& v = member(j, name);
    if (!v.is_string()) bad_json(std::string("'") + name + "' must be a string");
    return v.get<std::string>();
}

MeasurementSet measurements_from(const json& j) {
    if (!j.is_object()) bad_json("measurements must be an object");
    MeasurementSet set;
    for (const auto& [name, v] : j.items()) {
        if (v.contains("token")) {
            set.add(Measurement{name, Categorical(text_member(v, "token"))});
        } else {
            const json& mag = member(v, "magnitude");
            if (!mag.is_number()) bad_json("magnitude must be a number");
            set.add(Measurement{name, Quantity(mag.get<double>(), text_member(v, "unit"))});
        }
    }
    return set;
}

TripleKey key_from(const json& j) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_string() || !j[1].is_string() || !j[2].is_string())
        bad_json("premise must be [subject, predicate, object]");
    return TripleKey{EntityId(j[0].get<std::string>()), relation_from_token(j[1].get<std::string>()),
                     EntityId(j[2].get<std::string>())};
}

} // namespace

std::string export_graph(const KnowledgeGraph& g, ExportFormat format) {
    if (format == ExportFormat::Dot) {
        std::string out = "digraph geocausal {\n";
        for (const auto& [id, _] : g.entities()) out += dot_node(g, id);
        for (const auto& [key, prov] : g.triples()) out += dot_edge(Triple{key, prov});
        return out + "}\n";
    }
    json entities = json::array();
    for (const auto& [_, e] : g.entities()) entities.push_back(entity_json(e));
    json triples = json::array();
    for (const auto& [key, prov] : g.triples()) triples.push_back(triple_json(Triple{key, prov}));
    json doc{{"format", "geocausal-graph"}, {"version", 1}, {"entities", entities}, {"triples", triples}};
    return doc.dump(2) + "\n";
}

std::string export_explanation(const KnowledgeGraph& g, const Explanation& ex, ExportFormat format) {
    if (format == ExportFormat::Dot) {
        std::string out = "digraph why {\n";
        for (const auto& id : ex.nodes) out += dot_node(g, id);
        for (const auto& e : ex.edges) out += dot_edge(e.triple);
        for (const auto& a : ex.affects) {
            out += dot_node(g, a.key.object);
            out += dot_edge(a);
        }
        return out + "}\n";
    }
    json nodes = json::array();
    for (const auto& id : ex.nodes) nodes.push_back(entity_json(g.entity(id)));
    json edges = json::array();
    for (const auto& e : ex.edges) {
        json j = triple_json(e.triple);
        j["depth"] = e.depth;
        j["explanation"] = tree_json(e.provenance);
        if (e.evidence) {
            json conditions = json::array();
            for (const auto& c : e.evidence->conditions) {
                std::string outcome = c.outcome == ConditionOutcome::True    ? "true"
                                      : c.outcome == ConditionOutcome::False ? "false"
                                      : c.outcome == ConditionOutcome::Error ? "error"
                                                                             : "unknown";
                conditions.push_back({{"condition", c.condition.to_string()},
                                      {"observed", c.observed ? json(value_to_string(*c.observed)) : json(nullptr)},
                                      {"outcome", outcome}});
            }
            j["evidence"] = {{"precondition", e.evidence->precondition_id},
                             {"conditions_known", e.evidence->conditions_known},
                             {"satisfied", std::string(truth_name(e.evidence->satisfied))},
                             {"conditions", conditions}};
        }
        edges.push_back(std::move(j));
    }
    json affects = json::array();
    for (const auto& a : ex.affects) affects.push_back(triple_json(a));
    json doc{{"format", "geocausal-explanation"},
             {"version", 1},
             {"root", ex.root.str()},
             {"depth_reached", ex.depth_reached},
             {"truncated", ex.truncated},
             {"nodes", nodes},
             {"edges", edges},
             {"affects", affects}};
    return doc.dump(2) + "\n";
}

KnowledgeGraph import_graph_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what(), 0);
    }
    if (text_member(doc, "format") != "geocausal-graph") bad_json("format must be 'geocausal-graph'");

    KnowledgeGraph g;
    try {
        for (const auto& e : member(doc, "entities")) {
            std::string id = text_member(e, "id");
            std::string role = text_member(e, "role");
            if (role == "object") {
                g.add_entity(make_object(id, text_member(e, "kind"), measurements_from(member(e, "attributes"))));
            } else if (role == "event") {
                g.add_entity(make_event(id, text_member(e, "kind")));
            } else if (role == "situation") {
                const json& holds = member(e, "holds");
                g.add_entity(make_situation(id, make_interval(text_member(holds, "start"), text_member(holds, "end")),
                                            measurements_from(member(e, "observations"))));
            } else if (role == "region") {
                g.add_entity(SpatioTemporalRegion{EntityId(id), Geometry::parse(text_member(e, "geometry")),
                                                  make_interval(text_member(e, "start"), text_member(e, "end"))});
            } else if (role == "precondition") {
                std::string kind = text_member(e, "event_kind");
                if (!is_valid_kind(kind)) bad_json("invalid event_kind");
                g.add_entity(PreconditionRef{EntityId(id), kind});
            } else {
                bad_json("unknown role '" + role + "'");
            }
        }
        std::vector<Triple> derived;
        for (const auto& t : member(doc, "triples")) {
            TripleKey key{EntityId(text_member(t, "subject")), relation_from_token(text_member(t, "predicate")),
                          EntityId(text_member(t, "object"))};
            if (t.contains("provenance")) {
                const json& p = t.at("provenance");
                Provenance prov{text_member(p, "rule"), {}};
                for (const auto& k : member(p, "premises")) prov.premises.push_back(key_from(k));
                if (prov.rule.empty()) bad_json("empty rule id");
                derived.push_back(Triple{key, std::move(prov)});
            } else {
                g.assert_triple(key);
            }
        }
        // Premises may themselves be derived; insert in dependency order.
        while (!derived.empty()) {
            std::vector<Triple> waiting;
            for (auto& t : derived) {
                bool ready = std::all_of(t.provenance.premises.begin(), t.provenance.premises.end(),
                                         [&](const TripleKey& k) { return g.contains(k); });
                if (ready) g.add_derived(t.key, t.provenance);
                else waiting.push_back(std::move(t));
            }
            if (waiting.size() == derived.size())
                fail(Errc::ValidationFailure, "derived triple " + waiting.front().key.to_string() +
                                                  " has missing or cyclic premises");
            derived = std::move(waiting);
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid graph document: ") + e.what(), 0);
    }
    return g;
}

} // namespace geocausal
