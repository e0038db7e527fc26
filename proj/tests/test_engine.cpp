#include <doctest.h>

#include "geocausal/engine.hpp"
#include "geocausal/error.hpp"
#include "geocausal/query.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace geocausal;

namespace {

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::Internal;
}

EntityId id(const char* s) { return EntityId(s); }

KnowledgeGraph fixture(const char* name) { return load_graph_file(std::string(GC_FIXTURE_DIR "/") + name); }

RuleSet rules(const char* name) { return load_rules_file(std::string(GC_FIXTURE_DIR "/") + name); }

std::map<TripleKey, std::string> derived_map(const InferenceResult& r) {
    std::map<TripleKey, std::string> out;
    for (const auto& t : r.derived) out.emplace(t.key, t.provenance.rule);
    return out;
}

} // namespace

TEST_CASE("fixture A: heavy rain causes the flash flood") {
    KnowledgeGraph g = fixture("flood_a.kg");
    auto r = infer(g, rules("flood.gcr"));
    REQUIRE(r.derived.size() == 1);
    CHECK(r.derived[0].key == TripleKey{id("ev:heavyrain"), RelationKind::Causes, id("ev:flashflood")});

    auto tree = explain(g, r.derived[0].key);
    CHECK(tree.triple.provenance.rule == "R-CAU:R1");
    REQUIRE(tree.premises.size() == 2);
    CHECK(tree.premises[0].triple.key.to_string() == "ev:heavyrain spatio-temporally-present reg:heavyrain");
    CHECK(tree.premises[1].triple.key.to_string() == "ev:flashflood spatio-temporally-present reg:flashflood");
    CHECK(tree.premises[0].premises.empty());
}

TEST_CASE("fixture B: the dam situation effects the flood") {
    KnowledgeGraph g = fixture("flood_b.kg");
    auto r = infer(g, rules("flood.gcr"));
    TripleKey sat{id("sit:dam-overflow"), RelationKind::Satisfies, id("PC_FLOOD")};
    TripleKey eff{id("sit:dam-overflow"), RelationKind::Effects, id("ev:flood")};
    CHECK(g.contains(sat));
    CHECK(g.contains(eff));
    CHECK(g.match({id("obj:dam"), RelationKind::Causes, std::nullopt}).empty());
    CHECK(code_of([&] { g.assert_triple(id("obj:dam"), RelationKind::Causes, id("ev:flood")); }) ==
          Errc::SchemaViolation);

    auto tree = explain(g, eff);
    CHECK(tree.triple.provenance.rule == "R-EFF:PC_FLOOD");
    std::vector<std::string> premises;
    for (const auto& p : tree.premises) premises.push_back(p.triple.key.to_string());
    CHECK(premises == std::vector<std::string>{"sit:dam-overflow satisfies PC_FLOOD", "obj:dam setting sit:dam-overflow",
                                               "obj:dam spatio-temporally-present reg:dam",
                                               "ev:flood spatio-temporally-present reg:flood"});
    CHECK(tree.premises[0].triple.provenance.rule == "R-SAT:PC_FLOOD");
}

TEST_CASE("fixture B respects max_gap") {
    KnowledgeGraph g = fixture("flood_b.kg");
    EngineConfig cfg;
    cfg.max_gap = Duration{3600};
    auto r = infer(g, rules("flood.gcr"), cfg);
    CHECK_FALSE(g.contains(TripleKey{id("sit:dam-overflow"), RelationKind::Effects, id("ev:flood")}));
    bool reported = false;
    for (const auto& d : r.diagnostics)
        reported = reported || d.to_string() == "SKIP R-EFF sit:dam-overflow ev:flood reason=no-temporal-adjacency";
    CHECK(reported);
}

TEST_CASE("empty rule set") {
    KnowledgeGraph g = fixture("flood_a.kg");
    auto r = infer(g, RuleSet{});
    CHECK(r.derived.empty());
    CHECK(r.iterations == 1);
}

TEST_CASE("mixed setting skips effects") {
    KnowledgeGraph g = fixture("flood_b.kg");
    g.add_entity(make_event("ev:rain", "HeavyRain"));
    g.assert_triple(id("ev:rain"), RelationKind::Setting, id("sit:dam-overflow"));
    auto r = infer(g, rules("flood.gcr"));
    CHECK(g.contains(TripleKey{id("sit:dam-overflow"), RelationKind::Satisfies, id("PC_FLOOD")}));
    CHECK_FALSE(g.contains(TripleKey{id("sit:dam-overflow"), RelationKind::Effects, id("ev:flood")}));
    REQUIRE(r.diagnostics.size() >= 1);
    CHECK(r.diagnostics[0].to_string() == "SKIP R-EFF sit:dam-overflow PC_FLOOD reason=mixed-setting");
}

TEST_CASE("unknown satisfaction is reported, not derived") {
    KnowledgeGraph g;
    g.add_entity(make_situation("sit:quiet", make_interval("2005-08-29", "2005-08-30")));
    auto r = infer(g, rules("flood.gcr"));
    CHECK(r.derived.empty());
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].to_string() == "SKIP R-SAT sit:quiet PC_FLOOD reason=unknown-satisfaction");
}

TEST_CASE("affects from an event setting") {
    KnowledgeGraph g;
    g.add_entity(make_event("ev:surge", "StormSurge"));
    g.add_entity(make_object("obj:levee", "Levee"));
    g.add_entity(make_situation("sit:high-tide", make_interval("2005-08-29", "2005-08-30")));
    g.assert_triple(id("ev:surge"), RelationKind::Setting, id("sit:high-tide"));
    g.assert_triple(id("obj:levee"), RelationKind::ParticipantIn, id("ev:surge"));
    auto r = infer(g, RuleSet{});
    REQUIRE(r.derived.size() == 1);
    CHECK(r.derived[0].key.to_string() == "sit:high-tide affects obj:levee");
    CHECK(r.derived[0].provenance.rule == "R-AFF");
}

TEST_CASE("configuration and validation errors") {
    KnowledgeGraph g = fixture("flood_a.kg");
    EngineConfig cfg;
    cfg.max_gap = Duration{-3600};
    CHECK(code_of([&] { infer(g, RuleSet{}, cfg); }) == Errc::ConfigError);

    KnowledgeGraph clash = fixture("flood_a.kg");
    clash.add_entity(make_event("PC_FLOOD", "Flood"));
    CHECK(code_of([&] { infer(clash, rules("flood.gcr")); }) == Errc::ValidationFailure);
}

TEST_CASE("explain") {
    KnowledgeGraph g = fixture("flood_a.kg");
    TripleKey asserted{id("ev:heavyrain"), RelationKind::SpatioTemporallyPresent, id("reg:heavyrain")};
    auto leaf = explain(g, asserted);
    CHECK_FALSE(leaf.triple.provenance.derived());
    CHECK(leaf.premises.empty());
    CHECK(code_of([&] { explain(g, TripleKey{id("ev:flashflood"), RelationKind::Causes, id("ev:heavyrain")}); }) ==
          Errc::UnknownTriple);
}

TEST_CASE("engine matches the brute-force closure") {
    gctest::Rng rng(41);
    std::map<std::string, int> by_rule;
    for (int i = 0; i < 300; ++i) {
        auto c = gctest::random_engine_case(rng);
        auto want = gctest::oracle_closure(c.graph, c.rules, c.config);
        for (const auto& [k, rule] : want) ++by_rule[rule.substr(0, 5)];
        KnowledgeGraph g = c.graph;
        auto r = infer(g, c.rules, c.config);
        CHECK(derived_map(r) == want);
        CHECK(r.iterations >= 1);
        CHECK(r.iterations <= 1 + r.derived.size());
        CHECK(g.validate().ok());
        for (const auto& t : r.derived) {
            CHECK(signature_allows(t.key.predicate, entity_role(g.entity(t.key.subject)),
                                   entity_role(g.entity(t.key.object))));
            for (const auto& p : t.provenance.premises) CHECK(g.contains(p));
        }
    }
    // The generator must exercise all four rules.
    for (const char* rule : {"R-SAT", "R-EFF", "R-CAU", "R-AFF"}) CHECK(by_rule[rule] >= 5);
}

TEST_CASE("inference is deterministic") {
    gctest::Rng rng(43);
    for (int i = 0; i < 50; ++i) {
        auto c = gctest::random_engine_case(rng);
        KnowledgeGraph a = c.graph, b = c.graph;
        auto ra = infer(a, c.rules, c.config);
        auto rb = infer(b, c.rules, c.config);
        CHECK(save_graph(a) == save_graph(b));
        CHECK(export_graph(a, ExportFormat::Json) == export_graph(b, ExportFormat::Json));
        CHECK(ra.diagnostics == rb.diagnostics);
    }
}

// Object settings and participation only. An event setting turns a
// situation's setting mixed, which withdraws its effects edges by design.
TEST_CASE("adding an asserted triple never removes a derivation") {
    gctest::Rng rng(47);
    for (int i = 0; i < 100; ++i) {
        auto c = gctest::random_engine_case(rng);
        auto before = gctest::oracle_closure(c.graph, c.rules, c.config);

        KnowledgeGraph bigger = c.graph;
        std::vector<EntityId> objects, events, situations;
        for (const auto& [eid, e] : bigger.entities()) {
            if (std::holds_alternative<GeoObject>(e)) objects.push_back(eid);
            if (std::holds_alternative<GeoEvent>(e)) events.push_back(eid);
            if (std::holds_alternative<GeoSituation>(e)) situations.push_back(eid);
        }
        if (!objects.empty() && !situations.empty())
            bigger.assert_triple(gctest::pick(rng, objects), RelationKind::Setting, gctest::pick(rng, situations));
        else if (!objects.empty() && !events.empty())
            bigger.assert_triple(gctest::pick(rng, objects), RelationKind::ParticipantIn, gctest::pick(rng, events));
        else
            continue;

        auto r = infer(bigger, c.rules, c.config);
        for (const auto& [k, rule] : before) CHECK(bigger.contains(k));
    }
}
