#include "geocausal/spatiotemporal.hpp"

namespace geocausal {

std::string_view interval_relation_name(IntervalRelation r) {
    switch (r) {
    case IntervalRelation::Before: return "before";
    case IntervalRelation::Meets: return "meets";
    case IntervalRelation::Overlaps: return "overlaps";
    case IntervalRelation::Starts: return "starts";
    case IntervalRelation::During: return "during";
    case IntervalRelation::Finishes: return "finishes";
    case IntervalRelation::Equals: return "equals";
    case IntervalRelation::FinishedBy: return "finished-by";
    case IntervalRelation::Contains: return "contains";
    case IntervalRelation::StartedBy: return "started-by";
    case IntervalRelation::OverlappedBy: return "overlapped-by";
    case IntervalRelation::MetBy: return "met-by";
    case IntervalRelation::After: return "after";
    }
    return "?";
}

IntervalRelation inverse(IntervalRelation r) {
    // The enumeration is laid out so that inverses mirror around Equals.
    return static_cast<IntervalRelation>(12 - static_cast<int>(r));
}

IntervalRelation interval_relation(const TimeInterval& a, const TimeInterval& b) {
    const auto as = a.start(), ae = a.end(), bs = b.start(), be = b.end();

    if (as == bs && ae == be) return IntervalRelation::Equals;
    if (ae < bs) return IntervalRelation::Before;
    if (be < as) return IntervalRelation::After;
    if (as == bs) return ae < be ? IntervalRelation::Starts : IntervalRelation::StartedBy;
    if (ae == be) return as > bs ? IntervalRelation::Finishes : IntervalRelation::FinishedBy;
    // From here all four endpoints are pairwise distinct except possibly
    // ae == bs or be == as, and both intervals are proper on that branch.
    if (ae == bs) return IntervalRelation::Meets;
    if (be == as) return IntervalRelation::MetBy;
    if (as < bs) return be < ae ? IntervalRelation::Contains : IntervalRelation::Overlaps;
    return ae < be ? IntervalRelation::During : IntervalRelation::OverlappedBy;
}

bool precedes(const TimeInterval& a, const TimeInterval& b) {
    auto r = interval_relation(a, b);
    return r == IntervalRelation::Before || r == IntervalRelation::Meets;
}

bool precedes_within(const TimeInterval& a, const TimeInterval& b, Duration max_gap) {
    return precedes(a, b) && b.start().seconds - a.end().seconds <= max_gap.seconds;
}

bool temporally_nested(const TimeInterval& inner, const TimeInterval& outer) {
    switch (interval_relation(inner, outer)) {
    case IntervalRelation::During:
    case IntervalRelation::Starts:
    case IntervalRelation::Finishes:
    case IntervalRelation::Equals: return true;
    default: return false;
    }
}

bool spatial_overlap(const Geometry& a, const Geometry& b) {
    BBox x = a.bounds(), y = b.bounds();
    return x.min_lat <= y.max_lat && y.min_lat <= x.max_lat && x.min_lon <= y.max_lon &&
           y.min_lon <= x.max_lon;
}

bool co_occurs(const SpatioTemporalRegion& a, const SpatioTemporalRegion& b) {
    if (!spatial_overlap(a.geometry, b.geometry)) return false;
    switch (interval_relation(a.interval, b.interval)) {
    case IntervalRelation::Before:
    case IntervalRelation::After:
    case IntervalRelation::Meets:
    case IntervalRelation::MetBy: return false;
    default: return true;
    }
}

} // namespace geocausal
