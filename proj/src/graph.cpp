#include "geocausal/graph.hpp"

#include <algorithm>
#include <array>

#include "geocausal/error.hpp"
#include "geocausal/spatiotemporal.hpp"

namespace geocausal {

namespace {

constexpr std::array<RelationKind, 10> kRelations{
    RelationKind::PartOf,    RelationKind::SpatioTemporallyPresent,
    RelationKind::ParticipantIn, RelationKind::HasGeometry,
    RelationKind::Time,      RelationKind::Setting,
    RelationKind::Satisfies, RelationKind::Causes,
    RelationKind::Effects,   RelationKind::Affects,
};

constexpr RoleSignature kPartOf[] = {{Role::Event, Role::Event}, {Role::Situation, Role::Situation}};
constexpr RoleSignature kPresent[] = {{Role::Object, Role::Region}, {Role::Event, Role::Region}};
constexpr RoleSignature kParticipant[] = {{Role::Object, Role::Event}};
constexpr RoleSignature kHasGeometry[] = {{Role::Region, Role::Geometry}};
constexpr RoleSignature kTime[] = {{Role::Region, Role::Interval}};
constexpr RoleSignature kSetting[] = {{Role::Object, Role::Situation}, {Role::Event, Role::Situation}};
constexpr RoleSignature kSatisfies[] = {{Role::Situation, Role::Precondition}};
constexpr RoleSignature kCauses[] = {{Role::Event, Role::Event}};
constexpr RoleSignature kEffects[] = {{Role::Situation, Role::Event}};
constexpr RoleSignature kAffects[] = {{Role::Situation, Role::Object}};

} // namespace

std::string_view role_name(Role r) {
    switch (r) {
    case Role::Object: return "object";
    case Role::Event: return "event";
    case Role::Situation: return "situation";
    case Role::Region: return "region";
    case Role::Precondition: return "precondition";
    case Role::Geometry: return "geometry";
    case Role::Interval: return "interval";
    }
    return "?";
}

std::span<const RelationKind> all_relations() { return kRelations; }

std::string_view relation_token(RelationKind r) {
    switch (r) {
    case RelationKind::PartOf: return "part-of";
    case RelationKind::SpatioTemporallyPresent: return "spatio-temporally-present";
    case RelationKind::ParticipantIn: return "participant-in";
    case RelationKind::HasGeometry: return "has-geometry";
    case RelationKind::Time: return "time";
    case RelationKind::Setting: return "setting";
    case RelationKind::Satisfies: return "satisfies";
    case RelationKind::Causes: return "causes";
    case RelationKind::Effects: return "effects";
    case RelationKind::Affects: return "affects";
    }
    return "?";
}

std::string relation_token_list() {
    std::string out;
    for (auto r : kRelations) {
        if (!out.empty()) out += ", ";
        out += relation_token(r);
    }
    return out;
}

RelationKind relation_from_token(std::string_view token) {
    for (auto r : kRelations)
        if (relation_token(r) == token) return r;
    fail(Errc::UnknownRelation,
         "unknown relation '" + std::string(token) + "'; valid: " + relation_token_list());
}

std::span<const RoleSignature> relation_signature(RelationKind r) {
    switch (r) {
    case RelationKind::PartOf: return kPartOf;
    case RelationKind::SpatioTemporallyPresent: return kPresent;
    case RelationKind::ParticipantIn: return kParticipant;
    case RelationKind::HasGeometry: return kHasGeometry;
    case RelationKind::Time: return kTime;
    case RelationKind::Setting: return kSetting;
    case RelationKind::Satisfies: return kSatisfies;
    case RelationKind::Causes: return kCauses;
    case RelationKind::Effects: return kEffects;
    case RelationKind::Affects: return kAffects;
    }
    return {};
}

bool signature_allows(RelationKind r, Role subject, Role object) {
    auto sig = relation_signature(r);
    return std::any_of(sig.begin(), sig.end(), [&](const RoleSignature& s) {
        return s.domain == subject && s.range == object;
    });
}

const EntityId& entity_id(const Entity& e) {
    return std::visit([](const auto& v) -> const EntityId& { return v.id; }, e);
}

Role entity_role(const Entity& e) {
    switch (e.index()) {
    case 0: return Role::Object;
    case 1: return Role::Event;
    case 2: return Role::Situation;
    case 3: return Role::Region;
    default: return Role::Precondition;
    }
}

std::string TripleKey::to_string() const {
    return subject.str() + " " + std::string(relation_token(predicate)) + " " + object.str();
}

std::strong_ordering operator<=>(const TripleKey& a, const TripleKey& b) {
    if (auto c = a.subject <=> b.subject; c != 0) return c;
    if (auto c = relation_token(a.predicate) <=> relation_token(b.predicate); c != 0) return c;
    return a.object <=> b.object;
}

// KnowledgeGraph -----------------------------------------------------------

void KnowledgeGraph::add_entity(Entity e) {
    const EntityId& id = entity_id(e);
    if (entities_.count(id)) fail(Errc::DuplicateId, "duplicate entity id '" + id.str() + "'");
    entities_.emplace(id, std::move(e));
}

const Entity* KnowledgeGraph::find(const EntityId& id) const {
    auto it = entities_.find(id);
    return it == entities_.end() ? nullptr : &it->second;
}

const Entity* KnowledgeGraph::find(std::string_view id) const {
    if (!EntityId::is_valid(id)) return nullptr;
    return find(EntityId(std::string(id)));
}

const Entity& KnowledgeGraph::entity(const EntityId& id) const {
    if (const Entity* e = find(id)) return *e;
    fail(Errc::UnknownEntity, "unknown entity '" + id.str() + "'");
}

void KnowledgeGraph::check_schema(const TripleKey& key) const {
    Role s = entity_role(entity(key.subject));
    Role o = entity_role(entity(key.object));
    if (signature_allows(key.predicate, s, o)) return;
    std::string allowed;
    for (const auto& sig : relation_signature(key.predicate)) {
        if (!allowed.empty()) allowed += " | ";
        allowed += std::string(role_name(sig.domain)) + " -> " + std::string(role_name(sig.range));
    }
    fail(Errc::SchemaViolation, std::string(relation_token(key.predicate)) + "(" +
                                    key.subject.str() + ", " + key.object.str() + "): got " +
                                    std::string(role_name(s)) + " -> " +
                                    std::string(role_name(o)) + ", allowed " + allowed);
}

void KnowledgeGraph::insert(const TripleKey& key, Provenance provenance) {
    triples_.emplace(key, std::move(provenance));
    by_subject_[key.subject].insert(key);
    by_object_[key.object].insert(key);
    by_predicate_[key.predicate].insert(key);
}

bool KnowledgeGraph::assert_triple(const EntityId& subject, RelationKind predicate,
                                   const EntityId& object) {
    TripleKey key{subject, predicate, object};
    check_schema(key);
    if (contains(key)) return false;
    insert(key, Provenance::asserted());
    return true;
}

bool KnowledgeGraph::add_derived(const TripleKey& key, Provenance provenance) {
    if (!provenance.derived()) fail(Errc::Internal, "derived triple without a rule id");
    check_schema(key);
    if (contains(key)) return false;
    for (const auto& p : provenance.premises)
        if (!contains(p))
            fail(Errc::Internal, "premise " + p.to_string() + " of " + key.to_string() +
                                     " is not in the graph");
    insert(key, std::move(provenance));
    return true;
}

const Provenance& KnowledgeGraph::provenance(const TripleKey& key) const {
    auto it = triples_.find(key);
    if (it == triples_.end()) fail(Errc::UnknownTriple, "no such triple: " + key.to_string());
    return it->second;
}

namespace {

bool matches(const TriplePattern& p, const TripleKey& k) {
    return (!p.subject || *p.subject == k.subject) && (!p.predicate || *p.predicate == k.predicate) &&
           (!p.object || *p.object == k.object);
}

} // namespace

std::vector<Triple> KnowledgeGraph::match(const TriplePattern& pattern) const {
    // Pick the smallest bound index, filter the rest.
    const std::set<TripleKey>* candidates = nullptr;
    auto consider = [&](const std::set<TripleKey>* s) {
        if (!candidates || s->size() < candidates->size()) candidates = s;
    };
    static const std::set<TripleKey> kEmpty;
    if (pattern.subject) {
        auto it = by_subject_.find(*pattern.subject);
        consider(it == by_subject_.end() ? &kEmpty : &it->second);
    }
    if (pattern.object) {
        auto it = by_object_.find(*pattern.object);
        consider(it == by_object_.end() ? &kEmpty : &it->second);
    }
    if (pattern.predicate) {
        auto it = by_predicate_.find(*pattern.predicate);
        consider(it == by_predicate_.end() ? &kEmpty : &it->second);
    }
    if (!candidates) return scan(pattern);

    std::vector<Triple> out;
    for (const auto& key : *candidates)
        if (matches(pattern, key)) out.push_back(Triple{key, triples_.at(key)});
    return out;
}

std::vector<Triple> KnowledgeGraph::scan(const TriplePattern& pattern) const {
    std::vector<Triple> out;
    for (const auto& [key, prov] : triples_)
        if (matches(pattern, key)) out.push_back(Triple{key, prov});
    return out;
}

std::optional<SpatioTemporalRegion> KnowledgeGraph::region_of(const EntityId& id) const {
    entity(id);
    auto it = by_subject_.find(id);
    if (it == by_subject_.end()) return std::nullopt;
    for (const auto& key : it->second) {
        if (key.predicate != RelationKind::SpatioTemporallyPresent) continue;
        if (const auto* r = get<SpatioTemporalRegion>(key.object)) return *r;
    }
    return std::nullopt;
}

ValidationReport KnowledgeGraph::validate() const {
    ValidationReport report;

    for (const auto& [key, prov] : triples_) {
        const Entity* s = find(key.subject);
        const Entity* o = find(key.object);
        if (!s || !o) {
            report.errors.push_back("dangling reference in " + key.to_string());
            continue;
        }
        if (!signature_allows(key.predicate, entity_role(*s), entity_role(*o)))
            report.errors.push_back("schema violation: " + key.to_string());
        for (const auto& p : prov.premises)
            if (!contains(p))
                report.errors.push_back("missing premise " + p.to_string() + " of " +
                                        key.to_string());
    }

    // Index/triple-set agreement.
    std::size_t indexed = 0;
    for (const auto& [_, keys] : by_predicate_) {
        indexed += keys.size();
        for (const auto& k : keys)
            if (!contains(k)) report.errors.push_back("stale index entry " + k.to_string());
    }
    if (indexed != triples_.size()) report.errors.push_back("predicate index size mismatch");

    // Derived provenance must be acyclic.
    std::map<TripleKey, int> state; // 1 = on stack, 2 = done
    std::vector<std::pair<const TripleKey*, std::size_t>> stack;
    for (const auto& [root, _] : triples_) {
        if (state[root] == 2) continue;
        stack.push_back({&root, 0});
        state[root] = 1;
        while (!stack.empty()) {
            auto& [key, next] = stack.back();
            const auto& premises = triples_.at(*key).premises;
            if (next < premises.size()) {
                const TripleKey& p = premises[next++];
                int& st = state[p];
                if (st == 1) {
                    report.errors.push_back("cyclic provenance through " + p.to_string());
                } else if (st == 0 && contains(p)) {
                    st = 1;
                    stack.push_back({&triples_.find(p)->first, 0});
                }
            } else {
                state[*key] = 2;
                stack.pop_back();
            }
        }
    }

    for (const auto& [id, e] : entities_) {
        if (!std::holds_alternative<GeoObject>(e) && !std::holds_alternative<GeoEvent>(e)) continue;
        auto it = by_subject_.find(id);
        if (it == by_subject_.end()) continue;
        int regions = 0;
        for (const auto& k : it->second)
            if (k.predicate == RelationKind::SpatioTemporallyPresent) ++regions;
        if (regions > 1)
            report.warnings.push_back(id.str() + " has " + std::to_string(regions) +
                                      " regions; the first is used");
    }

    // Participants should share their event's footprint; real data only
    // overlaps, so this is a warning.
    auto participants = by_predicate_.find(RelationKind::ParticipantIn);
    if (participants != by_predicate_.end()) {
        for (const auto& k : participants->second) {
            auto ro = region_of(k.subject);
            auto re = region_of(k.object);
            if (ro && re && !co_occurs(*ro, *re))
                report.warnings.push_back("participant " + k.subject.str() +
                                          " does not share a region with " + k.object.str());
        }
    }
    return report;
}

} // namespace geocausal
