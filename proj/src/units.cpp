#include "geocausal/units.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "geocausal/error.hpp"

namespace geocausal {

namespace {

constexpr double kFahrenheitScale = 5.0 / 9.0;
constexpr double kFahrenheitOffset = 273.15 - 32.0 * 5.0 / 9.0;

const std::array<Unit, 18> kUnits{{
    {"K", Dimension::Temperature, 1.0, 0.0},
    {"degC", Dimension::Temperature, 1.0, 273.15},
    {"degF", Dimension::Temperature, kFahrenheitScale, kFahrenheitOffset},
    {"hPa", Dimension::Pressure, 1.0, 0.0},
    {"mb", Dimension::Pressure, 1.0, 0.0},
    {"Pa", Dimension::Pressure, 0.01, 0.0},
    {"atm", Dimension::Pressure, 1013.25, 0.0},
    {"m/s", Dimension::Speed, 1.0, 0.0},
    {"kn", Dimension::Speed, 1852.0 / 3600.0, 0.0},
    {"mph", Dimension::Speed, 0.44704, 0.0},
    {"km/h", Dimension::Speed, 1.0 / 3.6, 0.0},
    {"m", Dimension::Length, 1.0, 0.0},
    {"km", Dimension::Length, 1000.0, 0.0},
    {"mi", Dimension::Length, 1609.344, 0.0},
    {"1", Dimension::Dimensionless, 1.0, 0.0},
    {"USD", Dimension::Dimensionless, 1.0, 0.0},
    {"count", Dimension::Dimensionless, 1.0, 0.0},
    {"in", Dimension::Length, 0.0254, 0.0},
}};

} // namespace

std::string_view dimension_name(Dimension d) {
    switch (d) {
    case Dimension::Temperature: return "Temperature";
    case Dimension::Pressure: return "Pressure";
    case Dimension::Speed: return "Speed";
    case Dimension::Length: return "Length";
    case Dimension::Dimensionless: return "Dimensionless";
    }
    return "?";
}

std::span<const Unit> unit_registry() { return kUnits; }

const Unit* find_unit(std::string_view symbol) {
    for (const auto& u : kUnits)
        if (u.symbol == symbol) return &u;
    return nullptr;
}

const Unit& unit(std::string_view symbol) {
    if (const Unit* u = find_unit(symbol)) return *u;
    fail(Errc::UnknownUnit, "unknown unit '" + std::string(symbol) + "'");
}

const Unit& canonical_unit(Dimension d) {
    switch (d) {
    case Dimension::Temperature: return kUnits[0];
    case Dimension::Pressure: return kUnits[3];
    case Dimension::Speed: return kUnits[7];
    case Dimension::Length: return kUnits[11];
    case Dimension::Dimensionless: return kUnits[14];
    }
    fail(Errc::Internal, "bad dimension");
}

Quantity::Quantity(double magnitude, const Unit& unit) : magnitude_(magnitude), unit_(&unit) {
    if (!std::isfinite(magnitude))
        fail(Errc::InvalidValue, "quantity magnitude must be finite");
    // Only registry entries are accepted so unit_ never dangles.
    if (find_unit(unit.symbol) != &unit) unit_ = &geocausal::unit(unit.symbol);
}

Quantity::Quantity(double magnitude, std::string_view symbol)
    : Quantity(magnitude, geocausal::unit(symbol)) {}

std::string Quantity::to_string() const {
    return format_number(magnitude_) + " " + std::string(unit_->symbol);
}

Quantity Quantity::parse(std::string_view text) {
    auto space = text.find(' ');
    if (space == std::string_view::npos)
        throw ParseError("expected '<magnitude> <unit>', got '" + std::string(text) + "'", 0);
    double magnitude = 0;
    if (!parse_number(text.substr(0, space), magnitude))
        throw ParseError("malformed magnitude in '" + std::string(text) + "'", 0);
    return Quantity(magnitude, geocausal::unit(text.substr(space + 1)));
}

Quantity convert(const Quantity& q, const Unit& target) {
    if (q.dimension() != target.dimension)
        fail(Errc::DimensionMismatch,
             "cannot convert " + std::string(q.unit().symbol) + " (" +
                 std::string(dimension_name(q.dimension())) + ") to " +
                 std::string(target.symbol) + " (" +
                 std::string(dimension_name(target.dimension)) + ")");
    if (q.unit() == target) return q;
    return Quantity(target.from_canonical(q.canonical()), target);
}

std::string format_number(double value) {
    if (value == 0.0) value = 0.0; // drop the sign of -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

bool parse_number(std::string_view text, double& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = first + text.size();
    if (*first == '+') ++first;
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last && std::isfinite(out);
}

} // namespace geocausal
