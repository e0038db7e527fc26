#include <doctest.h>

#include "geocausal/error.hpp"
#include "geocausal/graph.hpp"
#include "geocausal/ingest.hpp"
#include "support/generators.hpp"

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

KnowledgeGraph flood_graph() {
    KnowledgeGraph g;
    g.add_entity(make_event("ev:HeavyRain", "HeavyRain"));
    g.add_entity(make_event("ev:FlashFlood", "FlashFlood"));
    g.add_entity(make_event("ev:Flood", "Flood"));
    g.add_entity(make_object("obj:Dam", "Dam"));
    g.add_entity(make_situation("sit:DamOverflow", make_interval("2005-08-29", "2005-08-29T10:00:00Z"),
                                parse_measurements("WaterLevel=\"12 m\"")));
    return g;
}

} // namespace

TEST_CASE("add_entity") {
    KnowledgeGraph g;
    g.add_entity(make_event("ev:Katrina", "Hurricane"));
    CHECK(g.entity_count() == 1);
    CHECK(code_of([&] { g.add_entity(make_event("ev:Katrina", "Hurricane")); }) == Errc::DuplicateId);
    for (int i = 0; i < 23; ++i) g.add_entity(make_event("ev:sub-" + std::to_string(i), "HeavyRain"));
    for (int i = 0; i < 23; ++i) CHECK(g.get<GeoEvent>(EntityId("ev:sub-" + std::to_string(i))));
    CHECK(code_of([&] { g.entity(id("ev:nope")); }) == Errc::UnknownEntity);
}

TEST_CASE("assert enforces the schema table") {
    KnowledgeGraph g = flood_graph();
    CHECK(g.assert_triple(id("ev:HeavyRain"), RelationKind::Causes, id("ev:FlashFlood")));
    CHECK_FALSE(g.assert_triple(id("ev:HeavyRain"), RelationKind::Causes, id("ev:FlashFlood")));
    CHECK(g.triple_count() == 1);
    CHECK(code_of([&] { g.assert_triple(id("obj:Dam"), RelationKind::Causes, id("ev:Flood")); }) ==
          Errc::SchemaViolation);
    CHECK(g.assert_triple(id("sit:DamOverflow"), RelationKind::Effects, id("ev:Flood")));
    CHECK(code_of([&] { g.assert_triple(id("ev:Flood"), RelationKind::Causes, id("ev:Nope")); }) ==
          Errc::UnknownEntity);

    try {
        g.assert_triple(id("obj:Dam"), RelationKind::Causes, id("ev:Flood"));
    } catch (const Error& e) {
        std::string msg = e.what();
        CHECK(msg.find("object") != std::string::npos);
        CHECK(msg.find("event -> event") != std::string::npos);
    }
}

TEST_CASE("match") {
    KnowledgeGraph empty;
    CHECK(empty.match({}).empty());

    KnowledgeGraph g = flood_graph();
    g.assert_triple(id("ev:HeavyRain"), RelationKind::Causes, id("ev:FlashFlood"));
    g.assert_triple(id("sit:DamOverflow"), RelationKind::Effects, id("ev:Flood"));
    g.assert_triple(id("obj:Dam"), RelationKind::Setting, id("sit:DamOverflow"));
    auto hits = g.match({std::nullopt, RelationKind::Causes, id("ev:FlashFlood")});
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].key.subject == id("ev:HeavyRain"));
    CHECK(g.match({}).size() == 3);
}

TEST_CASE("katrina part-of count") {
    KnowledgeGraph g;
    ingest_storm_csv_file(g, GC_FIXTURE_DIR "/katrina_storm.csv");
    CHECK(g.match({std::nullopt, RelationKind::PartOf, id("ev:episode-1")}).size() == 23);
}

TEST_CASE("index and scan agree") {
    gctest::Rng rng(21);
    for (int round = 0; round < 30; ++round) {
        KnowledgeGraph g = gctest::random_store_graph(rng, 60);
        std::vector<EntityId> ids;
        for (const auto& [eid, e] : g.entities()) ids.push_back(eid);
        for (int q = 0; q < 40; ++q) {
            TriplePattern p;
            if (gctest::coin(rng)) p.subject = gctest::pick(rng, ids);
            if (gctest::coin(rng)) p.predicate = all_relations()[static_cast<std::size_t>(gctest::uniform_int(rng, 0, 9))];
            if (gctest::coin(rng)) p.object = gctest::pick(rng, ids);
            CHECK(g.match(p) == g.scan(p));
        }
        for (const auto& [k, prov] : g.triples()) {
            CHECK(g.match({k.subject, k.predicate, k.object}) == g.scan({k.subject, k.predicate, k.object}));
            CHECK(signature_allows(k.predicate, entity_role(g.entity(k.subject)), entity_role(g.entity(k.object))));
        }
    }
}

TEST_CASE("region_of") {
    KnowledgeGraph g;
    g.add_entity(make_event("ev:rain", "HeavyRain"));
    g.add_entity(make_event("ev:dry", "Drought"));
    g.add_entity(make_object("obj:levee", "Levee"));
    SpatioTemporalRegion r{id("reg:1"), Geometry::point(30, -90), make_interval("2005-08-29", "2005-08-30")};
    g.add_entity(r);
    g.assert_triple(id("ev:rain"), RelationKind::SpatioTemporallyPresent, id("reg:1"));
    g.assert_triple(id("obj:levee"), RelationKind::SpatioTemporallyPresent, id("reg:1"));
    g.assert_triple(id("obj:levee"), RelationKind::ParticipantIn, id("ev:rain"));
    CHECK(g.region_of(id("ev:rain")) == r);
    CHECK_FALSE(g.region_of(id("ev:dry")));
    CHECK(g.region_of(id("obj:levee")) == g.region_of(id("ev:rain")));
    CHECK(code_of([&] { g.region_of(id("ev:none")); }) == Errc::UnknownEntity);
    CHECK(g.validate().ok());
    CHECK(g.validate().warnings.empty());
}

TEST_CASE("validate warns on participants that never meet the event") {
    KnowledgeGraph g;
    g.add_entity(make_event("ev:rain", "HeavyRain"));
    g.add_entity(make_object("obj:levee", "Levee"));
    g.add_entity(SpatioTemporalRegion{id("reg:a"), Geometry::point(30, -90), make_interval("2005-08-29", "2005-08-30")});
    g.add_entity(SpatioTemporalRegion{id("reg:b"), Geometry::point(40, -90), make_interval("2005-08-29", "2005-08-30")});
    g.assert_triple(id("ev:rain"), RelationKind::SpatioTemporallyPresent, id("reg:a"));
    g.assert_triple(id("obj:levee"), RelationKind::SpatioTemporallyPresent, id("reg:b"));
    g.assert_triple(id("obj:levee"), RelationKind::ParticipantIn, id("ev:rain"));
    auto report = g.validate();
    CHECK(report.ok());
    CHECK(report.warnings.size() == 1);
}

TEST_CASE("derived triples need stored premises") {
    KnowledgeGraph g = flood_graph();
    TripleKey cause{id("ev:HeavyRain"), RelationKind::Causes, id("ev:FlashFlood")};
    TripleKey missing{id("obj:Dam"), RelationKind::Setting, id("sit:DamOverflow")};
    CHECK(code_of([&] { g.add_derived(cause, Provenance{"R-CAU:R1", {missing}}); }) == Errc::Internal);
    g.assert_triple(missing);
    CHECK(g.add_derived(cause, Provenance{"R-CAU:R1", {missing}}));
    CHECK(g.provenance(cause).rule == "R-CAU:R1");
    CHECK(code_of([&] { g.provenance(TripleKey{id("ev:Flood"), RelationKind::Causes, id("ev:HeavyRain")}); }) ==
          Errc::UnknownTriple);
}

TEST_CASE("persistence format") {
    KnowledgeGraph g = flood_graph();
    g.add_entity(SpatioTemporalRegion{id("reg:dam"), Geometry::point(30, -90), make_interval("2005-01-01", "2005-12-31")});
    g.assert_triple(id("obj:Dam"), RelationKind::SpatioTemporallyPresent, id("reg:dam"));
    TripleKey setting{id("obj:Dam"), RelationKind::Setting, id("sit:DamOverflow")};
    g.assert_triple(setting);
    g.add_derived({id("sit:DamOverflow"), RelationKind::Effects, id("ev:Flood")}, Provenance{"R-EFF:PC_FLOOD", {setting}});
    std::string text = save_graph(g);
    CHECK(text.find("ENT obj:Dam object Dam\n") != std::string::npos);
    CHECK(text.find("REG reg:dam POINT(30 -90) 2005-01-01T00:00:00Z 2005-12-31T00:00:00Z\n") != std::string::npos);
    CHECK(text.find("TRI sit:DamOverflow effects ev:Flood DERIVED rule=R-EFF:PC_FLOOD premises=1\n"
                    "PRE obj:Dam setting sit:DamOverflow\n") != std::string::npos);
    CHECK(text.find("WaterLevel=\"12 m\"") != std::string::npos);
    KnowledgeGraph back = load_graph(text);
    CHECK(back == g);
    CHECK(save_graph(back) == text);

    CHECK(load_graph(save_graph(KnowledgeGraph{})) == KnowledgeGraph{});
}

TEST_CASE("load errors") {
    CHECK(code_of([] {
              load_graph("ENT obj:dam object Dam\nENT ev:flood event Flood\nTRI obj:dam causes ev:flood\n");
          }) == Errc::SchemaViolation);
    try {
        load_graph("# header\nENT ev:a event A\nENT ev:b\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK(code_of([] { load_graph("TRI ev:a causes ev:b\n"); }) == Errc::UnknownEntity);
    CHECK(code_of([] {
              load_graph("ENT ev:a event A\nENT ev:b event B\nTRI ev:a causes ev:b DERIVED rule=X premises=1\n"
                         "PRE ev:b causes ev:a\n");
          }) == Errc::ValidationFailure);
}

TEST_CASE("round trip of the katrina ingest") {
    KnowledgeGraph g;
    ingest_storm_csv_file(g, GC_FIXTURE_DIR "/katrina_storm.csv");
    CHECK(load_graph(save_graph(g)) == g);
}

TEST_CASE("round trip of random graphs") {
    gctest::Rng rng(33);
    for (int i = 0; i < 20; ++i) {
        KnowledgeGraph g = gctest::random_store_graph(rng, gctest::uniform_int(rng, 0, 300));
        std::string text = save_graph(g);
        KnowledgeGraph back = load_graph(text);
        CHECK(back == g);
        CHECK(save_graph(back) == text);
        CHECK(back.validate().ok());
    }
}
