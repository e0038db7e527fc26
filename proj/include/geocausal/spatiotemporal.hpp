#pragma once

#include <array>
#include <string_view>

#include "geocausal/model.hpp"

namespace geocausal {

// Allen's thirteen interval relations, read as "a <relation> b".
enum class IntervalRelation {
    Before,
    Meets,
    Overlaps,
    Starts,
    During,
    Finishes,
    Equals,
    FinishedBy,
    Contains,
    StartedBy,
    OverlappedBy,
    MetBy,
    After,
};

inline constexpr std::array<IntervalRelation, 13> kAllIntervalRelations{
    IntervalRelation::Before,     IntervalRelation::Meets,        IntervalRelation::Overlaps,
    IntervalRelation::Starts,     IntervalRelation::During,       IntervalRelation::Finishes,
    IntervalRelation::Equals,     IntervalRelation::FinishedBy,   IntervalRelation::Contains,
    IntervalRelation::StartedBy,  IntervalRelation::OverlappedBy, IntervalRelation::MetBy,
    IntervalRelation::After,
};

std::string_view interval_relation_name(IntervalRelation r);
IntervalRelation inverse(IntervalRelation r);

// Instants are classified with the proper-interval endpoint conditions; a
// relation that needs two distinct endpoints on an instant (meets, overlaps)
// never applies to it, so e.g. [5,5] vs [5,9] is Starts, not Meets.
IntervalRelation interval_relation(const TimeInterval& a, const TimeInterval& b);

// a ends no later than b starts: Before or Meets.
bool precedes(const TimeInterval& a, const TimeInterval& b);
// precedes(a, b) and the gap b.start - a.end is at most max_gap.
bool precedes_within(const TimeInterval& a, const TimeInterval& b, Duration max_gap);
// inner lies within outer: During, Starts, Finishes or Equals.
bool temporally_nested(const TimeInterval& inner, const TimeInterval& outer);

// Closed-rectangle intersection; points are degenerate boxes.
bool spatial_overlap(const Geometry& a, const Geometry& b);
// Spatial overlap plus shared duration (touching endpoints do not count).
bool co_occurs(const SpatioTemporalRegion& a, const SpatioTemporalRegion& b);

} // namespace geocausal
