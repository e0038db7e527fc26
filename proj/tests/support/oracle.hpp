#pragma once

// Brute-force reference implementations. Nothing here calls the library's
// interval, overlap, evaluation or inference code; it only reads graph
// contents and unit conversion factors.

#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "geocausal/engine.hpp"
#include "geocausal/graph.hpp"
#include "geocausal/rules.hpp"

namespace gctest {

// Allen relation index in library enum order (Before=0 ... After=12),
// classified directly from endpoint comparisons. Meets/MetBy and
// Overlaps/OverlappedBy need both intervals to be proper.
inline std::vector<int> allen_candidates(long a0, long a1, long b0, long b1) {
    bool pa = a0 < a1, pb = b0 < b1;
    bool holds[13] = {
        a1 < b0,                              // Before
        pa && pb && a1 == b0,                 // Meets
        a0 < b0 && b0 < a1 && a1 < b1,        // Overlaps
        a0 == b0 && a1 < b1,                  // Starts
        b0 < a0 && a1 < b1,                   // During
        a1 == b1 && b0 < a0,                  // Finishes
        a0 == b0 && a1 == b1,                 // Equals
        a1 == b1 && a0 < b0,                  // FinishedBy
        a0 < b0 && b1 < a1,                   // Contains
        a0 == b0 && b1 < a1,                  // StartedBy
        b0 < a0 && a0 < b1 && b1 < a1,        // OverlappedBy
        pa && pb && b1 == a0,                 // MetBy
        b1 < a0,                              // After
    };
    std::vector<int> out;
    for (int i = 0; i < 13; ++i)
        if (holds[i]) out.push_back(i);
    return out;
}

inline int allen_oracle(const geocausal::TimeInterval& a, const geocausal::TimeInterval& b) {
    auto c = allen_candidates(a.start().seconds, a.end().seconds, b.start().seconds, b.end().seconds);
    return c.size() == 1 ? c.front() : -1;
}

inline bool oracle_precedes(const geocausal::TimeInterval& a, const geocausal::TimeInterval& b) {
    int r = allen_oracle(a, b);
    return r == 0 || r == 1;
}

inline bool oracle_co_temporal(const geocausal::TimeInterval& a, const geocausal::TimeInterval& b) {
    int r = allen_oracle(a, b);
    return r != 0 && r != 1 && r != 11 && r != 12;
}

inline bool oracle_overlap(const geocausal::Geometry& a, const geocausal::Geometry& b) {
    auto box = [](const geocausal::Geometry& g) {
        if (const auto* p = std::get_if<geocausal::Point>(&g.shape()))
            return geocausal::BBox{p->lat, p->lon, p->lat, p->lon};
        return std::get<geocausal::BBox>(g.shape());
    };
    auto x = box(a), y = box(b);
    return x.min_lat <= y.max_lat && y.min_lat <= x.max_lat && x.min_lon <= y.max_lon && y.min_lon <= x.max_lon;
}

// 0 = False, 1 = Unknown, 2 = True.
inline int oracle_satisfaction(const geocausal::PreconditionSet& pc, const geocausal::GeoSituation& s) {
    using namespace geocausal;
    bool error = false;
    int agg = 2;
    for (const auto& c : pc.conditions) {
        const Measurement* m = s.observations.find(c.attribute);
        if (!m) {
            agg = std::min(agg, 1);
            continue;
        }
        int outcome = 0;
        const auto* cat = std::get_if<Categorical>(&m->value);
        if (c.comparator == Comparator::Present || c.comparator == Comparator::Absent) {
            if (!cat) {
                error = true;
                continue;
            }
            outcome = cat->token() == (c.comparator == Comparator::Present ? "present" : "absent") ? 2 : 0;
        } else {
            const auto* q = std::get_if<Quantity>(&m->value);
            const auto* t = std::get_if<Quantity>(&*c.threshold);
            if (!q || !t || q->unit().dimension != t->unit().dimension) {
                error = true;
                continue;
            }
            double lhs = q->magnitude() * q->unit().scale + q->unit().offset;
            double rhs = t->magnitude() * t->unit().scale + t->unit().offset;
            bool eq = std::fabs(lhs - rhs) <= 1e-9;
            bool r = false;
            switch (c.comparator) {
            case Comparator::Less: r = !eq && lhs < rhs; break;
            case Comparator::LessEqual: r = eq || lhs < rhs; break;
            case Comparator::Greater: r = !eq && lhs > rhs; break;
            case Comparator::GreaterEqual: r = eq || lhs > rhs; break;
            case Comparator::Equal: r = eq; break;
            case Comparator::NotEqual: r = !eq; break;
            default: break;
            }
            outcome = r ? 2 : 0;
        }
        agg = std::min(agg, outcome);
    }
    return error ? 0 : agg;
}

// Derived triple -> rule id, closed under the four inference rules by
// re-enumerating every rule/entity combination until nothing changes.
inline std::map<geocausal::TripleKey, std::string> oracle_closure(const geocausal::KnowledgeGraph& g,
                                                                 const geocausal::RuleSet& rules,
                                                                 const geocausal::EngineConfig& cfg) {
    using namespace geocausal;
    std::set<TripleKey> facts;
    for (const auto& [k, p] : g.triples()) facts.insert(k);

    std::map<EntityId, const GeoEvent*> events;
    std::map<EntityId, const GeoSituation*> situations;
    for (const auto& [id, e] : g.entities()) {
        if (const auto* ev = std::get_if<GeoEvent>(&e)) events[id] = ev;
        if (const auto* s = std::get_if<GeoSituation>(&e)) situations[id] = s;
    }
    auto region = [&](const EntityId& id) -> std::optional<SpatioTemporalRegion> {
        for (const auto& k : facts)
            if (k.subject == id && k.predicate == RelationKind::SpatioTemporallyPresent)
                if (const auto* r = g.get<SpatioTemporalRegion>(k.object)) return *r;
        return std::nullopt;
    };

    std::map<TripleKey, std::string> derived;
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<TripleKey, std::string> found;
        auto add = [&](TripleKey k, std::string rule) {
            if (!facts.count(k)) found.emplace(std::move(k), std::move(rule));
        };

        for (const auto& [sid, s] : situations)
            for (const auto& pc : rules.preconditions())
                if (oracle_satisfaction(pc, *s) == 2)
                    add({sid, RelationKind::Satisfies, EntityId(pc.id)}, "R-SAT:" + pc.id);

        for (const auto& [sid, s] : situations) {
            for (const auto& pc : rules.preconditions()) {
                if (!facts.count({sid, RelationKind::Satisfies, EntityId(pc.id)})) continue;
                std::vector<EntityId> setting;
                bool mixed = false;
                for (const auto& k : facts)
                    if (k.predicate == RelationKind::Setting && k.object == sid) {
                        setting.push_back(k.subject);
                        mixed = mixed || events.count(k.subject);
                    }
                if (mixed) continue;
                for (const auto& [eid, ev] : events) {
                    if (ev->kind != pc.event_kind) continue;
                    auto re = region(eid);
                    if (!re || !oracle_precedes(s->holds_during, re->interval)) continue;
                    if (re->interval.start().seconds - s->holds_during.end().seconds > cfg.max_gap.seconds) continue;
                    bool spatial = !cfg.require_spatial_overlap;
                    for (const auto& x : setting) {
                        auto rx = region(x);
                        if (rx && oracle_overlap(rx->geometry, re->geometry)) spatial = true;
                    }
                    if (spatial) add({sid, RelationKind::Effects, eid}, "R-EFF:" + pc.id);
                }
            }
        }

        for (const auto& r : rules.cause_rules()) {
            for (const auto& [a, ea] : events) {
                for (const auto& [b, eb] : events) {
                    if (a == b || ea->kind != r.cause_kind || eb->kind != r.effect_kind) continue;
                    auto ra = region(a), rb = region(b);
                    if (!ra || !rb) continue;
                    bool temporal = false;
                    if (r.constraint == CauseConstraint::CoOccurs) {
                        temporal = oracle_co_temporal(ra->interval, rb->interval);
                    } else {
                        temporal = oracle_precedes(ra->interval, rb->interval);
                        if (r.constraint == CauseConstraint::PrecedesWithin)
                            temporal = temporal &&
                                       rb->interval.start().seconds - ra->interval.end().seconds <= r.max_gap.seconds;
                    }
                    if (!temporal) continue;
                    if (cfg.require_spatial_overlap && !oracle_overlap(ra->geometry, rb->geometry)) continue;
                    add({a, RelationKind::Causes, b}, "R-CAU:" + r.id);
                }
            }
        }

        for (const auto& st : facts) {
            if (st.predicate != RelationKind::Setting || !events.count(st.subject)) continue;
            for (const auto& pt : facts)
                if (pt.predicate == RelationKind::ParticipantIn && pt.object == st.subject)
                    add({st.object, RelationKind::Affects, pt.subject}, "R-AFF");
        }

        for (auto& [k, rule] : found) {
            facts.insert(k);
            derived.emplace(k, rule);
            changed = true;
        }
    }
    return derived;
}

} // namespace gctest
