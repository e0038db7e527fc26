#include <doctest.h>

#include "geocausal/error.hpp"
#include "geocausal/ingest.hpp"
#include "support/generators.hpp"

using namespace geocausal;

namespace {

const char* kHeader =
    "EPISODE_ID,EVENT_ID,EVENT_TYPE,CZ_TIMEZONE,BEGIN_DATE_TIME,END_DATE_TIME,DEATHS_DIRECT,DAMAGE_PROPERTY,"
    "MAGNITUDE,MAGNITUDE_TYPE,BEGIN_LAT,BEGIN_LON,END_LAT,END_LON\n";

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return Errc::Internal;
}

EntityId id(const std::string& s) { return EntityId(s); }

} // namespace

TEST_CASE("katrina fixture structure") {
    KnowledgeGraph g;
    auto report = ingest_storm_csv_file(g, GC_FIXTURE_DIR "/katrina_storm.csv");
    CHECK(report.rows_read == 23);
    CHECK(report.entities_created == 23);
    CHECK(report.episodes_created == 1);
    CHECK(report.errors.empty());
    CHECK(report.warnings.size() == 3); // rows without coordinates

    std::size_t episodes = 0;
    for (const auto& [eid, e] : g.entities())
        if (const auto* ev = std::get_if<GeoEvent>(&e)) episodes += ev->kind == "Episode";
    CHECK(episodes == 1);
    auto parts = g.match({std::nullopt, RelationKind::PartOf, id("ev:episode-1")});
    CHECK(parts.size() == 23);
    std::set<EntityId> row_regions;
    for (const auto& t : parts) row_regions.insert(g.region_of(t.key.subject)->id);
    CHECK(row_regions.size() == 23);

    // Every created triple passes the schema table.
    CHECK(g.validate().ok());

    auto flood = g.get<GeoObject>(id("obj:impact-1004"));
    REQUIRE(flood);
    CHECK(flood->attributes.find("DamageProperty")->value == Value(Quantity(1.2e9, "USD")));
    CHECK(flood->attributes.find("DeathsDirect")->value == Value(Quantity(1, "count")));
    auto wind = g.get<GeoObject>(id("obj:impact-1007"));
    REQUIRE(wind);
    CHECK(wind->attributes.find("Magnitude")->value == Value(Quantity(65, "kn")));

    // Episode region envelopes its children.
    auto episode = g.region_of(id("ev:episode-1"));
    REQUIRE(episode);
    for (const auto& t : parts) {
        auto child = g.region_of(t.key.subject);
        CHECK(child->interval.start() >= episode->interval.start());
        CHECK(child->interval.end() <= episode->interval.end());
    }
}

TEST_CASE("header only") {
    KnowledgeGraph g;
    auto report = ingest_storm_csv(g, kHeader);
    CHECK(report.rows_read == 0);
    CHECK(g.entity_count() == 0);
    CHECK(g.triple_count() == 0);
}

TEST_CASE("missing columns") {
    KnowledgeGraph g;
    CHECK(code_of([&] { ingest_storm_csv(g, "EPISODE_ID,EVENT_ID\n1,2\n"); }) == Errc::MissingColumn);
    CHECK(code_of([&] { ingest_observations_csv(g, "situation_id,value\n"); }) == Errc::MissingColumn);
}

TEST_CASE("row ending before it begins") {
    std::string text = std::string(kHeader) +
                       "1,10,Heavy Rain,CST-6,29-AUG-05 06:00:00,29-AUG-05 12:00:00,,,,,30,-90,,\n"
                       "1,11,Flash Flood,CST-6,29-AUG-05 06:00:00,28-AUG-05 12:00:00,,,,,30,-90,,\n";
    KnowledgeGraph g;
    auto report = ingest_storm_csv(g, text);
    CHECK(report.entities_created == 1);
    REQUIRE(report.errors.size() == 1);
    CHECK(report.errors[0].line == 3);
    CHECK(report.errors[0].code == Errc::OrderViolation);

    KnowledgeGraph strict;
    IngestOptions opts;
    opts.strictness = Strictness::Strict;
    try {
        ingest_storm_csv(strict, text, opts);
        FAIL("expected strict ingestion to abort");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.code() == Errc::OrderViolation);
    }
    CHECK(strict.entity_count() == 0);
}

TEST_CASE("timezones normalize to UTC") {
    std::string text = std::string(kHeader) +
                       "1,10,Heavy Rain,CST-6,29-AUG-05 00:30:00,29-AUG-05 02:00:00,,,,,30,-90,,\n"
                       "1,11,Heavy Rain,EST-5,29-AUG-05 01:30:00,29-AUG-05 03:00:00,,,,,30,-90,,\n";
    KnowledgeGraph g;
    ingest_storm_csv(g, text);
    auto a = g.region_of(id("ev:event-10"));
    auto b = g.region_of(id("ev:event-11"));
    CHECK(a->interval.start() == b->interval.start());
    CHECK(a->interval.start() == Timestamp::parse("2005-08-29T06:30:00Z"));
    CHECK(parse_local_timestamp("29-AUG-05 00:30:00", "CST") == parse_local_timestamp("29-AUG-05 01:30:00", "EST"));
    CHECK(parse_local_timestamp("2005-08-29 06:30:00", "") == Timestamp::parse("2005-08-29T06:30:00Z"));
    CHECK(code_of([] { parse_local_timestamp("29-AUG-05 00:30:00", "XYZ"); }) == Errc::ParseError);
}

TEST_CASE("damage strings and event types") {
    CHECK(parse_damage("10.00K") == 10000.0);
    CHECK(parse_damage("2.5M") == 2.5e6);
    CHECK(parse_damage("1B") == 1e9);
    CHECK(parse_damage("250") == 250.0);
    CHECK(code_of([] { parse_damage("lots"); }) == Errc::ParseError);
    CHECK(sanitize_event_type("Flash Flood") == "FlashFlood");
    CHECK(sanitize_event_type("Hurricane (Typhoon)") == "HurricaneTyphoon");
    CHECK(sanitize_event_type("Storm Surge/Tide") == "StormSurgeTide");
}

TEST_CASE("ingesting twice reports duplicates") {
    KnowledgeGraph g;
    ingest_storm_csv_file(g, GC_FIXTURE_DIR "/katrina_storm.csv");
    std::size_t entities = g.entity_count();
    auto again = ingest_storm_csv_file(g, GC_FIXTURE_DIR "/katrina_storm.csv");
    CHECK(again.entities_created == 0);
    CHECK(again.errors.size() == 23);
    for (const auto& e : again.errors) CHECK(e.code == Errc::DuplicateId);
    CHECK(g.entity_count() == entities);

    IngestOptions prefixed;
    prefixed.id_prefix = "b/";
    auto other = ingest_storm_csv_file(g, GC_FIXTURE_DIR "/katrina_storm.csv", prefixed);
    CHECK(other.entities_created == 23);
    CHECK(g.match({std::nullopt, RelationKind::PartOf, id("ev:b/episode-1")}).size() == 23);
}

TEST_CASE("count conservation on noisy files") {
    gctest::Rng rng(53);
    const char* types[] = {"Heavy Rain", "Flash Flood", "Tornado", "Hail", "High Wind"};
    for (int round = 0; round < 40; ++round) {
        std::string text = kHeader;
        int rows = gctest::uniform_int(rng, 0, 30);
        for (int i = 0; i < rows; ++i) {
            int day = gctest::uniform_int(rng, 1, 28);
            int kind = gctest::uniform_int(rng, 0, 6);
            std::string begin = std::to_string(day) + "-AUG-05 06:00:00";
            std::string end = std::to_string(kind == 5 ? day - 1 : day) + "-AUG-05 09:00:00";
            std::string event = std::to_string(kind == 6 ? 1 : 100 + i);
            text += std::to_string(gctest::uniform_int(rng, 1, 3)) + "," + event + "," + types[kind % 5] + ",CST-6," +
                    begin + "," + end + ",,,,,";
            text += gctest::coin(rng) ? "30,-90,,\n" : ",,,\n";
        }
        KnowledgeGraph g;
        auto report = ingest_storm_csv(g, text);
        CHECK(report.entities_created + report.errors.size() == report.rows_read);
        CHECK(g.validate().ok());
    }
}

TEST_CASE("observation CSV") {
    KnowledgeGraph g;
    auto report = ingest_observations_csv(g, "situation_id,timestamp_start,timestamp_end,attribute,value,unit\n"
                                             "sit:a,2005-08-23T00:00:00Z,2005-08-23T06:00:00Z,SeaSurfaceTemp,83,degF\n"
                                             "sit:a,2005-08-23T03:00:00Z,2005-08-23T09:00:00Z,WindShear,12,m/s\n");
    CHECK(report.entities_created == 1);
    auto s = g.get<GeoSituation>(id("sit:a"));
    REQUIRE(s);
    CHECK(s->observations.size() == 2);
    CHECK(s->holds_during == make_interval("2005-08-23T00:00:00Z", "2005-08-23T09:00:00Z"));
}

TEST_CASE("observation CSV errors") {
    KnowledgeGraph g;
    auto report = ingest_observations_csv(g, "situation_id,timestamp_start,timestamp_end,attribute,value,unit\n"
                                             "sit:a,2005-08-23,2005-08-24,WaterLevel,12,m\n"
                                             "sit:a,2005-08-23,2005-08-24,WaterLevel,9,m\n"
                                             "sit:a,2005-08-23,2005-08-24,Speed,3,furlongs/fortnight\n");
    REQUIRE(report.errors.size() == 2);
    CHECK(report.errors[0].line == 3);
    CHECK(report.errors[0].code == Errc::InvalidValue);
    CHECK(report.errors[1].code == Errc::UnknownUnit);
    CHECK(g.get<GeoSituation>(id("sit:a"))->observations.find("WaterLevel")->value == Value(Quantity(12, "m")));

    IngestOptions strict;
    strict.strictness = Strictness::Strict;
    KnowledgeGraph h;
    CHECK(code_of([&] {
              ingest_observations_csv(h, "situation_id,timestamp_start,timestamp_end,attribute,value,unit\n"
                                         "sit:a,2005-08-23,2005-08-24,Speed,3,furlongs/fortnight\n",
                                      strict);
          }) == Errc::UnknownUnit);
}

TEST_CASE("observation fixture with sites") {
    KnowledgeGraph g;
    auto report = ingest_observations_csv_file(g, GC_FIXTURE_DIR "/observations.csv");
    CHECK(report.errors.empty());
    CHECK(report.entities_created == 2);
    auto s = g.get<GeoSituation>(id("sit:gulf-0823"));
    REQUIRE(s);
    CHECK(s->observations.find("CoriolisForce")->value == Value(Categorical("present")));
    auto setting = g.match({std::nullopt, RelationKind::Setting, id("sit:gulf-0823")});
    REQUIRE(setting.size() == 1);
    CHECK(g.region_of(setting[0].key.subject));
    CHECK(g.validate().ok());
}
