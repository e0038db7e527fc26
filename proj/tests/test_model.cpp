#include <doctest.h>

#include "geocausal/error.hpp"
#include "geocausal/model.hpp"

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

} // namespace

TEST_CASE("make_interval") {
    auto katrina = make_interval("2005-08-23T00:00:00Z", "2005-08-31T00:00:00Z");
    CHECK(katrina.end().seconds - katrina.start().seconds == 8 * 86400);
    CHECK(make_interval("2005-08-29T11:10:00Z", "2005-08-29T11:10:00Z").is_instant());
    CHECK(code_of([] { make_interval("2005-09-01", "2005-08-01"); }) == Errc::OrderViolation);
    CHECK(code_of([] { make_interval("2005-13-01", "2005-08-01"); }) == Errc::ParseError);
    CHECK(code_of([] { make_interval("yesterday", "2005-08-01"); }) == Errc::ParseError);
}

TEST_CASE("timestamps") {
    // 2005-08-29 is day 13024 after the epoch
    CHECK(Timestamp::parse("2005-08-29").seconds == 13024LL * 86400);
    CHECK(Timestamp::parse("2005-08-29T06:00:00-05:00") == Timestamp::parse("2005-08-29T11:00:00Z"));
    CHECK(Timestamp::parse("2005-08-29T06:00:00.75Z") == Timestamp::parse("2005-08-29T06:00:00Z"));
    CHECK(Timestamp::from_civil(2005, 8, 29, 11, 10).to_string() == "2005-08-29T11:10:00Z");
    CHECK(Timestamp::parse(Timestamp{-1}.to_string()).seconds == -1);
    CHECK(code_of([] { Timestamp::parse("2005-02-30"); }) == Errc::ParseError);
}

TEST_CASE("durations") {
    CHECK(Duration::parse("6h").seconds == 21600);
    CHECK(Duration::parse("90min").seconds == 5400);
    CHECK(Duration::parse("2 d").seconds == 172800);
    CHECK(Duration::parse("-1h").seconds == -3600);
    CHECK(Duration{86400}.to_string() == "1d");
    CHECK(Duration{5400}.to_string() == "90min");
    CHECK(Duration{61}.to_string() == "61s");
    CHECK(code_of([] { Duration::parse("6 fortnights"); }) == Errc::ParseError);
    for (std::int64_t s : {0LL, 1LL, 59LL, 60LL, 3600LL, 3601LL, 86400LL, 90061LL, -7200LL})
        CHECK(Duration::parse(Duration{s}.to_string()).seconds == s);
}

TEST_CASE("geometry literals") {
    auto p = Geometry::parse("POINT(29.95 -90.07)");
    CHECK(p.is_point());
    CHECK(p.to_string() == "POINT(29.95 -90.07)");
    auto b = Geometry::parse("BBOX(29 -91 31 -89)");
    CHECK(b.bounds() == BBox{29, -91, 31, -89});
    CHECK(Geometry::parse(b.to_string()) == b);
    CHECK(code_of([] { Geometry::bbox(31, -91, 29, -89); }) == Errc::InvalidValue);
    CHECK(code_of([] { Geometry::point(91, 0); }) == Errc::InvalidValue);
    CHECK(code_of([] { Geometry::parse("CIRCLE(1 2 3)"); }) == Errc::ParseError);
}

TEST_CASE("identifiers and kinds") {
    CHECK(EntityId::is_valid("ev:Katrina"));
    CHECK_FALSE(EntityId::is_valid(""));
    CHECK_FALSE(EntityId::is_valid("ev: Katrina"));
    CHECK(code_of([] { EntityId(""); }) == Errc::InvalidValue);
    CHECK(code_of([] { make_event("ev:x", "Heavy Rain"); }) == Errc::InvalidValue);
    CHECK(code_of([] { Categorical("two words"); }) == Errc::InvalidValue);
}

TEST_CASE("measurement sets keep names unique") {
    MeasurementSet set;
    set.add({"WindShear", Quantity(12, "m/s")});
    set.add({"CoriolisForce", Categorical("present")});
    CHECK(set.items().front().attribute == "CoriolisForce");
    CHECK(code_of([&] { set.add({"WindShear", Quantity(3, "kn")}); }) == Errc::InvalidValue);
    CHECK(set.size() == 2);
}

TEST_CASE("compare examples") {
    Value f83 = Quantity(83, "degF");
    Value f82 = Quantity(82, "degF");
    Value k = Quantity(300.928, "K");
    Value present = Categorical("present");
    CHECK(compare(f83, Comparator::Greater, &f82));
    CHECK(compare(k, Comparator::Greater, &f82));
    CHECK(compare(present, Comparator::Present, nullptr));
    CHECK_FALSE(compare(present, Comparator::Absent, nullptr));
    CHECK_FALSE(compare(f82, Comparator::Greater, &f82));
    CHECK(compare(f82, Comparator::GreaterEqual, &f82));

    Value m = Quantity(1, "m");
    CHECK(code_of([&] { compare(f83, Comparator::Less, &m); }) == Errc::DimensionMismatch);
    CHECK(code_of([&] { compare(present, Comparator::Less, &f82); }) == Errc::TypeMismatch);
    CHECK(code_of([&] { compare(f83, Comparator::Present, nullptr); }) == Errc::TypeMismatch);
}

TEST_CASE("equality tolerance is absolute in canonical units") {
    Value a = Quantity(10, "m");
    Value b = Quantity(10 + 5e-10, "m");
    Value c = Quantity(10 + 5e-9, "m");
    CHECK(compare(a, Comparator::Equal, &b));
    CHECK_FALSE(compare(a, Comparator::Less, &b));
    CHECK_FALSE(compare(a, Comparator::Equal, &c));
    CHECK(compare(a, Comparator::Less, &c));
}
