#include "geocausal/model.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "geocausal/error.hpp"

namespace geocausal {

namespace {

bool is_space_or_control(unsigned char c) { return c <= 0x20 || c == 0x7f; }

bool read_digits(std::string_view text, std::size_t pos, std::size_t count, int& out) {
    if (pos + count > text.size()) return false;
    int value = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        char c = text[i];
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
    }
    out = value;
    return true;
}

[[noreturn]] void bad_timestamp(std::string_view text) {
    throw ParseError("malformed timestamp '" + std::string(text) + "'", 0);
}

} // namespace

// EntityId ----------------------------------------------------------------

bool EntityId::is_valid(std::string_view text) {
    if (text.empty()) return false;
    return std::none_of(text.begin(), text.end(),
                        [](char c) { return is_space_or_control(static_cast<unsigned char>(c)); });
}

EntityId::EntityId(std::string value) : value_(std::move(value)) {
    if (!is_valid(value_))
        fail(Errc::InvalidValue, "invalid entity id '" + value_ + "'");
}

// Timestamp ---------------------------------------------------------------

Timestamp Timestamp::from_civil(int year, int month, int day, int hour, int minute, int second) {
    using namespace std::chrono;
    year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                       std::chrono::day{static_cast<unsigned>(day)}};
    if (!ymd.ok() || hour < 0 || hour > 23 || minute < 0 || minute > 59 || second < 0 ||
        second > 60)
        fail(Errc::ParseError, "calendar fields out of range");
    // Leap seconds collapse onto :59.
    if (second == 60) second = 59;
    auto days = sys_days(ymd).time_since_epoch().count();
    return Timestamp{static_cast<std::int64_t>(days) * 86400 + hour * 3600 + minute * 60 + second};
}

Timestamp Timestamp::parse(std::string_view text) {
    int year, month, day;
    if (!read_digits(text, 0, 4, year) || text.size() < 10 || text[4] != '-' ||
        !read_digits(text, 5, 2, month) || text[7] != '-' || !read_digits(text, 8, 2, day))
        bad_timestamp(text);
    int hour = 0, minute = 0, second = 0;
    std::int64_t offset = 0;
    if (text.size() > 10) {
        char sep = text[10];
        if ((sep != 'T' && sep != 't' && sep != ' ') || !read_digits(text, 11, 2, hour) ||
            text.size() < 19 || text[13] != ':' || !read_digits(text, 14, 2, minute) ||
            text[16] != ':' || !read_digits(text, 17, 2, second))
            bad_timestamp(text);
        std::size_t pos = 19;
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            std::size_t digits = 0;
            while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos, ++digits;
            if (digits == 0) bad_timestamp(text);
        }
        if (pos < text.size()) {
            char z = text[pos];
            if ((z == 'Z' || z == 'z') && pos + 1 == text.size()) {
                // UTC
            } else if ((z == '+' || z == '-') && pos + 6 == text.size() && text[pos + 3] == ':') {
                int oh, om;
                if (!read_digits(text, pos + 1, 2, oh) || !read_digits(text, pos + 4, 2, om) ||
                    oh > 23 || om > 59)
                    bad_timestamp(text);
                offset = (oh * 3600 + om * 60) * (z == '+' ? 1 : -1);
            } else {
                bad_timestamp(text);
            }
        }
    }
    try {
        Timestamp t = from_civil(year, month, day, hour, minute, second);
        t.seconds -= offset;
        return t;
    } catch (const Error&) {
        bad_timestamp(text);
    }
}

std::string Timestamp::to_string() const {
    using namespace std::chrono;
    std::int64_t days = seconds >= 0 ? seconds / 86400 : -((-seconds + 86399) / 86400);
    std::int64_t rem = seconds - days * 86400;
    year_month_day ymd{sys_days{std::chrono::days{days}}};
    char buf[32];
    int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", int(ymd.year()),
                          unsigned(ymd.month()), unsigned(ymd.day()), int(rem / 3600),
                          int(rem % 3600 / 60), int(rem % 60));
    return std::string(buf, static_cast<std::size_t>(n));
}

// Duration ----------------------------------------------------------------

Duration Duration::parse(std::string_view text) {
    std::size_t pos = 0;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    std::size_t digits_begin = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == digits_begin)
        throw ParseError("malformed duration '" + std::string(text) + "'", 0);
    std::int64_t n = 0;
    auto res = std::from_chars(text.data() + digits_begin, text.data() + pos, n);
    if (res.ec != std::errc())
        throw ParseError("duration out of range '" + std::string(text) + "'", 0);
    if (text[0] == '-') n = -n;
    while (pos < text.size() && text[pos] == ' ') ++pos;
    std::string_view unit = text.substr(pos);
    std::int64_t factor = 0;
    if (unit == "s") factor = 1;
    else if (unit == "min") factor = 60;
    else if (unit == "h") factor = 3600;
    else if (unit == "d") factor = 86400;
    else
        throw ParseError("duration unit must be one of s, min, h, d in '" + std::string(text) + "'",
                         0);
    return Duration{n * factor};
}

std::string Duration::to_string() const {
    std::int64_t s = seconds;
    if (s != 0 && s % 86400 == 0) return std::to_string(s / 86400) + "d";
    if (s != 0 && s % 3600 == 0) return std::to_string(s / 3600) + "h";
    if (s != 0 && s % 60 == 0) return std::to_string(s / 60) + "min";
    return std::to_string(s) + "s";
}

// TimeInterval ------------------------------------------------------------

TimeInterval::TimeInterval(Timestamp start, Timestamp end) : start_(start), end_(end) {
    if (start > end)
        fail(Errc::OrderViolation,
             "interval start " + start.to_string() + " is after end " + end.to_string());
}

TimeInterval make_interval(std::string_view start, std::string_view end) {
    return TimeInterval(Timestamp::parse(start), Timestamp::parse(end));
}

// Geometry ----------------------------------------------------------------

namespace {

void check_lat_lon(double lat, double lon) {
    if (!std::isfinite(lat) || !std::isfinite(lon) || lat < -90.0 || lat > 90.0 ||
        lon < -180.0 || lon > 180.0)
        fail(Errc::InvalidValue, "coordinate out of range: (" + format_number(lat) + ", " +
                                     format_number(lon) + ")");
}

} // namespace

Geometry Geometry::point(double lat, double lon) {
    check_lat_lon(lat, lon);
    return Geometry(Point{lat, lon});
}

Geometry Geometry::bbox(double min_lat, double min_lon, double max_lat, double max_lon) {
    check_lat_lon(min_lat, min_lon);
    check_lat_lon(max_lat, max_lon);
    if (min_lat > max_lat || min_lon > max_lon)
        fail(Errc::InvalidValue, "bbox minimum exceeds maximum");
    return Geometry(BBox{min_lat, min_lon, max_lat, max_lon});
}

BBox Geometry::bounds() const {
    if (const auto* p = std::get_if<Point>(&shape_)) return BBox{p->lat, p->lon, p->lat, p->lon};
    return std::get<BBox>(shape_);
}

std::string Geometry::to_string() const {
    if (const auto* p = std::get_if<Point>(&shape_))
        return "POINT(" + format_number(p->lat) + " " + format_number(p->lon) + ")";
    const auto& b = std::get<BBox>(shape_);
    return "BBOX(" + format_number(b.min_lat) + " " + format_number(b.min_lon) + " " +
           format_number(b.max_lat) + " " + format_number(b.max_lon) + ")";
}

Geometry Geometry::parse(std::string_view literal) {
    auto open = literal.find('(');
    if (open == std::string_view::npos || literal.empty() || literal.back() != ')')
        throw ParseError("malformed geometry literal '" + std::string(literal) + "'", 0);
    std::string_view tag = literal.substr(0, open);
    std::string_view body = literal.substr(open + 1, literal.size() - open - 2);
    std::vector<double> nums;
    std::size_t pos = 0;
    while (pos < body.size()) {
        while (pos < body.size() && body[pos] == ' ') ++pos;
        std::size_t end = body.find(' ', pos);
        if (end == std::string_view::npos) end = body.size();
        if (end > pos) {
            double v;
            if (!parse_number(body.substr(pos, end - pos), v))
                throw ParseError("malformed coordinate in '" + std::string(literal) + "'", 0);
            nums.push_back(v);
        }
        pos = end;
    }
    if (tag == "POINT" && nums.size() == 2) return point(nums[0], nums[1]);
    if (tag == "BBOX" && nums.size() == 4) return bbox(nums[0], nums[1], nums[2], nums[3]);
    throw ParseError("malformed geometry literal '" + std::string(literal) + "'", 0);
}

// Values ------------------------------------------------------------------

Categorical::Categorical(std::string token) : token_(std::move(token)) {
    if (!EntityId::is_valid(token_) || token_.find('"') != std::string::npos)
        fail(Errc::InvalidValue, "invalid categorical token '" + token_ + "'");
}

std::string value_to_string(const Value& v) {
    if (const auto* q = std::get_if<Quantity>(&v)) return q->to_string();
    return std::get<Categorical>(v).token();
}

Value parse_value(std::string_view text) {
    if (text.find(' ') != std::string_view::npos) return Quantity::parse(text);
    return Categorical(std::string(text));
}

MeasurementSet::MeasurementSet(std::vector<Measurement> items) {
    for (auto& m : items) add(std::move(m));
}

void MeasurementSet::add(Measurement m) {
    if (m.attribute.empty() || !is_valid_kind(m.attribute))
        fail(Errc::InvalidValue, "invalid attribute name '" + m.attribute + "'");
    auto it = std::lower_bound(items_.begin(), items_.end(), m.attribute,
                               [](const Measurement& a, const std::string& name) {
                                   return a.attribute < name;
                               });
    if (it != items_.end() && it->attribute == m.attribute)
        fail(Errc::InvalidValue, "duplicate attribute '" + m.attribute + "'");
    items_.insert(it, std::move(m));
}

const Measurement* MeasurementSet::find(std::string_view attribute) const {
    auto it = std::lower_bound(items_.begin(), items_.end(), attribute,
                               [](const Measurement& a, std::string_view name) {
                                   return a.attribute < name;
                               });
    if (it != items_.end() && it->attribute == attribute) return &*it;
    return nullptr;
}

// Entities ----------------------------------------------------------------

bool is_valid_kind(std::string_view kind) {
    if (kind.empty()) return false;
    return std::none_of(kind.begin(), kind.end(), [](char c) {
        return is_space_or_control(static_cast<unsigned char>(c)) || c == '=' || c == '"';
    });
}

namespace {

void check_kind(std::string_view kind) {
    if (!is_valid_kind(kind)) fail(Errc::InvalidValue, "invalid kind label '" + std::string(kind) + "'");
}

} // namespace

GeoObject make_object(std::string_view id, std::string_view kind, MeasurementSet attributes) {
    check_kind(kind);
    return GeoObject{EntityId(std::string(id)), std::string(kind), std::move(attributes)};
}

GeoEvent make_event(std::string_view id, std::string_view kind) {
    check_kind(kind);
    return GeoEvent{EntityId(std::string(id)), std::string(kind)};
}

GeoSituation make_situation(std::string_view id, TimeInterval holds_during,
                            MeasurementSet observations) {
    return GeoSituation{EntityId(std::string(id)), holds_during, std::move(observations)};
}

// Comparison --------------------------------------------------------------

std::string_view comparator_symbol(Comparator c) {
    switch (c) {
    case Comparator::Less: return "<";
    case Comparator::LessEqual: return "<=";
    case Comparator::Greater: return ">";
    case Comparator::GreaterEqual: return ">=";
    case Comparator::Equal: return "=";
    case Comparator::NotEqual: return "!=";
    case Comparator::Present: return "present";
    case Comparator::Absent: return "absent";
    }
    return "?";
}

bool is_numeric_comparator(Comparator c) {
    return c == Comparator::Less || c == Comparator::LessEqual || c == Comparator::Greater ||
           c == Comparator::GreaterEqual;
}

bool compare(const Value& lhs, Comparator op, const Value* rhs) {
    if (op == Comparator::Present || op == Comparator::Absent) {
        const auto* cat = std::get_if<Categorical>(&lhs);
        if (!cat) fail(Errc::TypeMismatch, "present/absent require a categorical value");
        return cat->token() == (op == Comparator::Present ? "present" : "absent");
    }
    if (!rhs) fail(Errc::TypeMismatch, "comparator needs a right-hand value");

    const auto* lq = std::get_if<Quantity>(&lhs);
    const auto* rq = std::get_if<Quantity>(rhs);
    if (!lq || !rq) {
        const auto* lc = std::get_if<Categorical>(&lhs);
        const auto* rc = std::get_if<Categorical>(rhs);
        if (lc && rc && (op == Comparator::Equal || op == Comparator::NotEqual))
            return (lc->token() == rc->token()) == (op == Comparator::Equal);
        fail(Errc::TypeMismatch, "cannot apply '" + std::string(comparator_symbol(op)) +
                                     "' to a categorical and a numeric value");
    }
    if (lq->dimension() != rq->dimension())
        fail(Errc::DimensionMismatch,
             "cannot compare " + std::string(dimension_name(lq->dimension())) + " with " +
                 std::string(dimension_name(rq->dimension())));

    double diff = lq->canonical() - rq->canonical();
    bool equal = std::fabs(diff) <= kEqualityTolerance;
    switch (op) {
    case Comparator::Less: return !equal && diff < 0;
    case Comparator::LessEqual: return equal || diff < 0;
    case Comparator::Greater: return !equal && diff > 0;
    case Comparator::GreaterEqual: return equal || diff > 0;
    case Comparator::Equal: return equal;
    case Comparator::NotEqual: return !equal;
    default: break;
    }
    fail(Errc::Internal, "unhandled comparator");
}

} // namespace geocausal
