#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geocausal/units.hpp"

namespace geocausal {

// Identifier of a node in the knowledge graph ("ev:Katrina").
// Non-empty, no whitespace or control characters.
class EntityId {
public:
    explicit EntityId(std::string value);

    const std::string& str() const noexcept { return value_; }
    static bool is_valid(std::string_view text);

    friend auto operator<=>(const EntityId&, const EntityId&) = default;
    friend bool operator==(const EntityId&, const EntityId&) = default;

private:
    std::string value_;
};

// UTC instant, second resolution.
struct Timestamp {
    std::int64_t seconds = 0; // since 1970-01-01T00:00:00Z

    // Accepts RFC-3339 ("2005-08-29T11:10:00Z", "...-05:00", fractional
    // seconds are truncated) and bare dates ("2005-08-29", midnight UTC).
    static Timestamp parse(std::string_view text);
    static Timestamp from_civil(int year, int month, int day, int hour = 0, int minute = 0,
                                int second = 0);
    // "YYYY-MM-DDTHH:MM:SSZ"
    std::string to_string() const;

    friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

// Signed span in seconds.
struct Duration {
    std::int64_t seconds = 0;

    // "<n><s|min|h|d>" with optional whitespace between number and unit;
    // the number may be negative (callers decide whether that is allowed).
    static Duration parse(std::string_view text);
    // Largest exact unit: 86400 -> "1d", 5400 -> "90min".
    std::string to_string() const;

    friend auto operator<=>(const Duration&, const Duration&) = default;
};

class TimeInterval {
public:
    // Throws Errc::OrderViolation when start > end.
    TimeInterval(Timestamp start, Timestamp end);

    Timestamp start() const noexcept { return start_; }
    Timestamp end() const noexcept { return end_; }
    bool is_instant() const noexcept { return start_ == end_; }

    friend bool operator==(const TimeInterval&, const TimeInterval&) = default;

private:
    Timestamp start_;
    Timestamp end_;
};

// Parses both endpoints as timestamps (ParseError) and orders them
// (OrderViolation).
TimeInterval make_interval(std::string_view start, std::string_view end);

struct Point {
    double lat;
    double lon;
    friend bool operator==(const Point&, const Point&) = default;
};

struct BBox {
    double min_lat;
    double min_lon;
    double max_lat;
    double max_lon;
    friend bool operator==(const BBox&, const BBox&) = default;
};

// WGS-84 point or axis-aligned box; no antimeridian wrap.
class Geometry {
public:
    // Both throw Errc::InvalidValue on out-of-range or inverted coordinates.
    static Geometry point(double lat, double lon);
    static Geometry bbox(double min_lat, double min_lon, double max_lat, double max_lon);

    bool is_point() const noexcept { return std::holds_alternative<Point>(shape_); }
    const std::variant<Point, BBox>& shape() const noexcept { return shape_; }
    // Points become degenerate boxes.
    BBox bounds() const;

    // "POINT(lat lon)" / "BBOX(minlat minlon maxlat maxlon)"
    std::string to_string() const;
    static Geometry parse(std::string_view literal);

    friend bool operator==(const Geometry&, const Geometry&) = default;

private:
    explicit Geometry(std::variant<Point, BBox> shape) : shape_(shape) {}
    std::variant<Point, BBox> shape_;
};

struct SpatioTemporalRegion {
    EntityId id;
    Geometry geometry;
    TimeInterval interval;

    friend bool operator==(const SpatioTemporalRegion&, const SpatioTemporalRegion&) = default;
};

// A categorical observation value ("present"); a single token without
// whitespace.
class Categorical {
public:
    explicit Categorical(std::string token);
    const std::string& token() const noexcept { return token_; }
    friend bool operator==(const Categorical&, const Categorical&) = default;

private:
    std::string token_;
};

using Value = std::variant<Quantity, Categorical>;

std::string value_to_string(const Value& v);
// A "<number> <unit>" string becomes a Quantity, a bare token a Categorical.
Value parse_value(std::string_view text);

struct Measurement {
    std::string attribute;
    Value value;

    friend bool operator==(const Measurement&, const Measurement&) = default;
};

// Measurements keyed by attribute name, kept sorted, names unique.
class MeasurementSet {
public:
    MeasurementSet() = default;
    // Throws Errc::InvalidValue on a repeated attribute name.
    explicit MeasurementSet(std::vector<Measurement> items);

    void add(Measurement m);
    const Measurement* find(std::string_view attribute) const;
    bool contains(std::string_view attribute) const { return find(attribute) != nullptr; }

    const std::vector<Measurement>& items() const noexcept { return items_; }
    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }

    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

    friend bool operator==(const MeasurementSet&, const MeasurementSet&) = default;

private:
    std::vector<Measurement> items_;
};

struct GeoObject {
    EntityId id;
    std::string kind;
    MeasurementSet attributes;

    friend bool operator==(const GeoObject&, const GeoObject&) = default;
};

struct GeoEvent {
    EntityId id;
    std::string kind;

    friend bool operator==(const GeoEvent&, const GeoEvent&) = default;
};

struct GeoSituation {
    EntityId id;
    TimeInterval holds_during;
    MeasurementSet observations;

    friend bool operator==(const GeoSituation&, const GeoSituation&) = default;
};

// Kind labels are non-empty identifier-like tokens (no whitespace).
bool is_valid_kind(std::string_view kind);
GeoObject make_object(std::string_view id, std::string_view kind, MeasurementSet attributes = {});
GeoEvent make_event(std::string_view id, std::string_view kind);
GeoSituation make_situation(std::string_view id, TimeInterval holds_during,
                            MeasurementSet observations = {});

enum class Comparator { Less, LessEqual, Greater, GreaterEqual, Equal, NotEqual, Present, Absent };

std::string_view comparator_symbol(Comparator c);
bool is_numeric_comparator(Comparator c);

// Absolute tolerance, in canonical units, for quantity equality.
inline constexpr double kEqualityTolerance = 1e-9;

// Numeric comparators and =/!= on quantities compare in canonical units
// (DimensionMismatch across dimensions). =/!= also compare two categorical
// tokens. present/absent test a categorical observation for the literal
// token "present"/"absent" and ignore `rhs`. Anything else is TypeMismatch.
bool compare(const Value& lhs, Comparator op, const Value* rhs);

} // namespace geocausal
