#pragma once

#include <span>
#include <string>
#include <string_view>

namespace geocausal {

enum class Dimension { Temperature, Pressure, Speed, Length, Dimensionless };

std::string_view dimension_name(Dimension d);

// A registered unit. `canonical = magnitude * scale + offset`, where the
// canonical units are K, hPa, m/s, m and the plain number "1".
struct Unit {
    std::string_view symbol;
    Dimension dimension;
    double scale;
    double offset;

    double to_canonical(double magnitude) const { return magnitude * scale + offset; }
    double from_canonical(double canonical) const { return (canonical - offset) / scale; }

    friend bool operator==(const Unit& a, const Unit& b) { return a.symbol == b.symbol; }
};

// The fixed registry. Lookup is by exact symbol.
std::span<const Unit> unit_registry();
const Unit* find_unit(std::string_view symbol);
// Throws Errc::UnknownUnit.
const Unit& unit(std::string_view symbol);
const Unit& canonical_unit(Dimension d);

class Quantity {
public:
    // Throws Errc::InvalidValue for NaN or infinite magnitudes.
    Quantity(double magnitude, const Unit& unit);
    Quantity(double magnitude, std::string_view symbol);

    double magnitude() const noexcept { return magnitude_; }
    const Unit& unit() const noexcept { return *unit_; }
    Dimension dimension() const noexcept { return unit_->dimension; }
    double canonical() const { return unit_->to_canonical(magnitude_); }

    // "<magnitude> <symbol>", shortest round-trip decimal.
    std::string to_string() const;
    // Inverse of to_string. Throws ParseError / UnknownUnit.
    static Quantity parse(std::string_view text);

    friend bool operator==(const Quantity& a, const Quantity& b) {
        return a.magnitude_ == b.magnitude_ && *a.unit_ == *b.unit_;
    }

private:
    double magnitude_;
    const Unit* unit_;
};

// Throws Errc::DimensionMismatch.
Quantity convert(const Quantity& q, const Unit& target);

// Shortest decimal that parses back to the same double.
std::string format_number(double value);
// Strict full-string parse; returns false on any trailing garbage.
bool parse_number(std::string_view text, double& out);

} // namespace geocausal
