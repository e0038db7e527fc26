#include "geocausal/engine.hpp"

#include <functional>
#include <map>
#include <set>

#include "geocausal/error.hpp"
#include "geocausal/spatiotemporal.hpp"

namespace geocausal {

std::string Diagnostic::to_string() const {
    std::string out = "SKIP " + rule;
    for (const auto& e : entities) out += " " + e;
    return out + " reason=" + reason;
}

namespace {

struct Candidate {
    TripleKey key;
    Provenance provenance;
};

TripleKey present_key(const EntityId& id, const SpatioTemporalRegion& r) {
    return TripleKey{id, RelationKind::SpatioTemporallyPresent, r.id};
}

// One pass over the current graph: every derivable triple plus the reasons
// candidates were skipped.
class Round {
public:
    Round(const KnowledgeGraph& g, const RuleSet& rules, const EngineConfig& cfg)
        : g_(g), rules_(rules), cfg_(cfg) {
        for (const auto& [id, e] : g.entities())
            if (const auto* ev = std::get_if<GeoEvent>(&e)) events_by_kind_[ev->kind].push_back(id);
    }

    void run() {
        satisfies();
        effects();
        causes();
        affects();
    }

    std::vector<Candidate> candidates;
    std::vector<Diagnostic> diagnostics;

private:
    void emit(TripleKey key, std::string rule, std::vector<TripleKey> premises) {
        if (g_.contains(key)) return;
        candidates.push_back(Candidate{std::move(key), Provenance{std::move(rule), std::move(premises)}});
    }

    void skip(std::string_view rule, std::vector<std::string> entities, std::string reason) {
        diagnostics.push_back(Diagnostic{std::string(rule), std::move(entities), std::move(reason)});
    }

    const std::vector<EntityId>& events_of_kind(const std::string& kind) const {
        static const std::vector<EntityId> kNone;
        auto it = events_by_kind_.find(kind);
        return it == events_by_kind_.end() ? kNone : it->second;
    }

    void satisfies() {
        for (const auto& [id, e] : g_.entities()) {
            const auto* s = std::get_if<GeoSituation>(&e);
            if (!s) continue;
            for (const auto& pc : rules_.preconditions()) {
                auto result = evaluate(pc, *s);
                EntityId pc_id(pc.id);
                TripleKey key{id, RelationKind::Satisfies, pc_id};
                if (result.satisfied == Truth::True)
                    emit(key, std::string(kRuleSatisfies) + ":" + pc.id, {});
                else if (result.satisfied == Truth::Unknown)
                    skip(kRuleSatisfies, {id.str(), pc.id}, "unknown-satisfaction");
            }
        }
    }

    void effects() {
        for (const auto& sat : g_.match({std::nullopt, RelationKind::Satisfies, std::nullopt})) {
            const EntityId& sid = sat.key.subject;
            const PreconditionSet* pc = rules_.find_precondition(sat.key.object.str());
            const auto* situation = g_.get<GeoSituation>(sid);
            if (!pc || !situation) continue;

            auto setting = g_.match({std::nullopt, RelationKind::Setting, sid});
            bool mixed = false;
            for (const auto& t : setting)
                if (g_.get<GeoEvent>(t.key.subject)) mixed = true;
            if (mixed) {
                skip(kRuleEffects, {sid.str(), pc->id}, "mixed-setting");
                continue;
            }

            for (const auto& eid : events_of_kind(pc->event_kind)) {
                TripleKey key{sid, RelationKind::Effects, eid};
                if (g_.contains(key)) continue;
                auto re = g_.region_of(eid);
                if (!re || !precedes_within(situation->holds_during, re->interval, cfg_.max_gap)) {
                    skip(kRuleEffects, {sid.str(), eid.str()}, "no-temporal-adjacency");
                    continue;
                }
                std::vector<TripleKey> premises{sat.key};
                for (const auto& t : setting) premises.push_back(t.key);
                if (cfg_.require_spatial_overlap) {
                    bool overlap = false;
                    for (const auto& t : setting) {
                        auto rx = g_.region_of(t.key.subject);
                        if (rx && spatial_overlap(rx->geometry, re->geometry)) {
                            premises.push_back(present_key(t.key.subject, *rx));
                            overlap = true;
                        }
                    }
                    if (!overlap) {
                        skip(kRuleEffects, {sid.str(), eid.str()}, "no-spatial-overlap");
                        continue;
                    }
                }
                premises.push_back(present_key(eid, *re));
                emit(key, std::string(kRuleEffects) + ":" + pc->id, std::move(premises));
            }
        }
    }

    bool temporal_ok(const CauseRule& r, const TimeInterval& a, const TimeInterval& b) const {
        switch (r.constraint) {
        case CauseConstraint::CoOccurs: {
            auto rel = interval_relation(a, b);
            return rel != IntervalRelation::Before && rel != IntervalRelation::After &&
                   rel != IntervalRelation::Meets && rel != IntervalRelation::MetBy;
        }
        case CauseConstraint::Precedes: return precedes(a, b);
        case CauseConstraint::PrecedesWithin: return precedes_within(a, b, r.max_gap);
        }
        return false;
    }

    void causes() {
        for (const auto& r : rules_.cause_rules()) {
            for (const auto& a : events_of_kind(r.cause_kind)) {
                auto ra = g_.region_of(a);
                for (const auto& b : events_of_kind(r.effect_kind)) {
                    if (a == b) continue;
                    TripleKey key{a, RelationKind::Causes, b};
                    if (g_.contains(key)) continue;
                    auto rb = g_.region_of(b);
                    if (!ra || !rb || !temporal_ok(r, ra->interval, rb->interval)) {
                        skip(kRuleCauses, {r.id, a.str(), b.str()}, "no-temporal-adjacency");
                        continue;
                    }
                    if (cfg_.require_spatial_overlap && !spatial_overlap(ra->geometry, rb->geometry)) {
                        skip(kRuleCauses, {r.id, a.str(), b.str()}, "no-spatial-overlap");
                        continue;
                    }
                    emit(key, std::string(kRuleCauses) + ":" + r.id,
                         {present_key(a, *ra), present_key(b, *rb)});
                }
            }
        }
    }

    void affects() {
        for (const auto& setting : g_.match({std::nullopt, RelationKind::Setting, std::nullopt})) {
            const EntityId& eid = setting.key.subject;
            if (!g_.get<GeoEvent>(eid)) continue;
            for (const auto& part : g_.match({std::nullopt, RelationKind::ParticipantIn, eid}))
                emit(TripleKey{setting.key.object, RelationKind::Affects, part.key.subject},
                     std::string(kRuleAffects), {setting.key, part.key});
        }
    }

    const KnowledgeGraph& g_;
    const RuleSet& rules_;
    const EngineConfig& cfg_;
    std::map<std::string, std::vector<EntityId>> events_by_kind_;
};

} // namespace

InferenceResult infer(KnowledgeGraph& g, const RuleSet& rules, const EngineConfig& cfg) {
    if (cfg.max_gap.seconds < 0)
        fail(Errc::ConfigError, "max_gap must not be negative (got " + cfg.max_gap.to_string() + ")");
    if (auto report = g.validate(); !report.ok())
        fail(Errc::ValidationFailure, "graph fails validation: " + report.errors.front());

    for (const auto& pc : rules.preconditions()) {
        EntityId id(pc.id);
        if (const Entity* e = g.find(id)) {
            const auto* ref = std::get_if<PreconditionRef>(e);
            if (!ref || ref->event_kind != pc.event_kind)
                fail(Errc::ValidationFailure,
                     "precondition id '" + pc.id + "' collides with an existing entity");
            continue;
        }
        g.add_entity(PreconditionRef{id, pc.event_kind});
    }

    InferenceResult result;
    while (true) {
        Round round(g, rules, cfg);
        round.run();
        ++result.iterations;
        std::size_t added = 0;
        for (auto& c : round.candidates) {
            if (g.add_derived(c.key, c.provenance)) {
                result.derived.push_back(Triple{c.key, std::move(c.provenance)});
                ++added;
            }
        }
        if (added == 0) {
            result.diagnostics = std::move(round.diagnostics);
            break;
        }
    }
    return result;
}

ProvenanceTree explain(const KnowledgeGraph& g, const TripleKey& key) {
    std::set<TripleKey> path;
    std::function<ProvenanceTree(const TripleKey&)> build = [&](const TripleKey& k) {
        const Provenance& prov = g.provenance(k);
        if (!path.insert(k).second) fail(Errc::Internal, "cyclic provenance at " + k.to_string());
        ProvenanceTree node{Triple{k, prov}, {}};
        for (const auto& p : prov.premises) node.premises.push_back(build(p));
        path.erase(k);
        return node;
    };
    return build(key);
}

std::string render_provenance(const ProvenanceTree& tree) {
    std::string out;
    std::function<void(const ProvenanceTree&, int)> walk = [&](const ProvenanceTree& n, int depth) {
        out.append(static_cast<std::size_t>(depth) * 2, ' ');
        out += n.triple.key.to_string();
        out += n.triple.provenance.derived() ? " [" + n.triple.provenance.rule + "]" : " [asserted]";
        out += '\n';
        for (const auto& p : n.premises) walk(p, depth + 1);
    };
    walk(tree, 0);
    return out;
}

} // namespace geocausal
