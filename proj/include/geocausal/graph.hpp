#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geocausal/model.hpp"

namespace geocausal {

// Roles an id can play. Geometry and Interval are value roles: they only
// appear as ranges in the schema table and live inline on region records.
enum class Role { Object, Event, Situation, Region, Precondition, Geometry, Interval };

std::string_view role_name(Role r);

enum class RelationKind {
    PartOf,
    SpatioTemporallyPresent,
    ParticipantIn,
    HasGeometry,
    Time,
    Setting,
    Satisfies,
    Causes,
    Effects,
    Affects,
};

std::span<const RelationKind> all_relations();
// Canonical tokens: "part-of", "spatio-temporally-present", ...
std::string_view relation_token(RelationKind r);
// Throws Errc::UnknownRelation listing the valid tokens.
RelationKind relation_from_token(std::string_view token);
std::string relation_token_list();

// Domain/range pairs permitted for a relation.
struct RoleSignature {
    Role domain;
    Role range;
};
std::span<const RoleSignature> relation_signature(RelationKind r);
bool signature_allows(RelationKind r, Role subject, Role object);

// Registers a precondition-set id so Satisfies edges can point at it; the
// conditions themselves stay in the rule set.
struct PreconditionRef {
    EntityId id;
    std::string event_kind;

    friend bool operator==(const PreconditionRef&, const PreconditionRef&) = default;
};

using Entity = std::variant<GeoObject, GeoEvent, GeoSituation, SpatioTemporalRegion, PreconditionRef>;

const EntityId& entity_id(const Entity& e);
Role entity_role(const Entity& e);

struct TripleKey {
    EntityId subject;
    RelationKind predicate;
    EntityId object;

    std::string to_string() const; // "s predicate o"

    friend bool operator==(const TripleKey&, const TripleKey&) = default;
    // Lexicographic on (subject, predicate token, object).
    friend std::strong_ordering operator<=>(const TripleKey& a, const TripleKey& b);
};

// Empty rule means asserted.
struct Provenance {
    std::string rule;
    std::vector<TripleKey> premises;

    bool derived() const noexcept { return !rule.empty(); }
    static Provenance asserted() { return {}; }

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct Triple {
    TripleKey key;
    Provenance provenance;

    friend bool operator==(const Triple&, const Triple&) = default;
};

struct TriplePattern {
    std::optional<EntityId> subject;
    std::optional<RelationKind> predicate;
    std::optional<EntityId> object;
};

struct ValidationReport {
    std::vector<std::string> errors;
    std::vector<std::string> warnings;

    bool ok() const noexcept { return errors.empty(); }
};

// Typed entity/relation store. Mutation requires exclusive access; const
// member functions are safe to call concurrently on an unchanging graph.
class KnowledgeGraph {
public:
    // Throws Errc::DuplicateId.
    void add_entity(Entity e);

    const Entity* find(const EntityId& id) const;
    const Entity* find(std::string_view id) const;
    // Throws Errc::UnknownEntity.
    const Entity& entity(const EntityId& id) const;
    bool contains(const EntityId& id) const { return find(id) != nullptr; }

    template <class T>
    const T* get(const EntityId& id) const {
        const Entity* e = find(id);
        return e ? std::get_if<T>(e) : nullptr;
    }

    // Asserted edge. Returns false when the triple already existed (its
    // provenance is left untouched). Throws UnknownEntity / SchemaViolation.
    bool assert_triple(const EntityId& subject, RelationKind predicate, const EntityId& object);
    bool assert_triple(const TripleKey& key) {
        return assert_triple(key.subject, key.predicate, key.object);
    }

    // Derived edge; every premise must already be stored. Returns false when
    // the triple already existed.
    bool add_derived(const TripleKey& key, Provenance provenance);

    bool contains(const TripleKey& key) const { return triples_.count(key) != 0; }
    // Throws Errc::UnknownTriple.
    const Provenance& provenance(const TripleKey& key) const;

    // All and only matching triples, ordered by TripleKey.
    std::vector<Triple> match(const TriplePattern& pattern) const;
    // Linear scan; same contract as match.
    std::vector<Triple> scan(const TriplePattern& pattern) const;

    // Follows spatio-temporally-present. Throws UnknownEntity.
    std::optional<SpatioTemporalRegion> region_of(const EntityId& id) const;

    ValidationReport validate() const;

    const std::map<EntityId, Entity>& entities() const noexcept { return entities_; }
    const std::map<TripleKey, Provenance>& triples() const noexcept { return triples_; }
    std::size_t entity_count() const noexcept { return entities_.size(); }
    std::size_t triple_count() const noexcept { return triples_.size(); }

    friend bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b) {
        return a.entities_ == b.entities_ && a.triples_ == b.triples_;
    }

private:
    friend KnowledgeGraph load_graph(std::istream& in);

    void check_schema(const TripleKey& key) const;
    void insert(const TripleKey& key, Provenance provenance);

    std::map<EntityId, Entity> entities_;
    std::map<TripleKey, Provenance> triples_;
    std::map<EntityId, std::set<TripleKey>> by_subject_;
    std::map<EntityId, std::set<TripleKey>> by_object_;
    std::map<RelationKind, std::set<TripleKey>> by_predicate_;
};

// Line-oriented text persistence. `header` lines are written as leading
// '#' comments.
void save_graph(const KnowledgeGraph& g, std::ostream& out,
                std::span<const std::string> header = {});
std::string save_graph(const KnowledgeGraph& g, std::span<const std::string> header = {});
// Throws ParseError (with line) and SchemaViolation / UnknownEntity.
KnowledgeGraph load_graph(std::istream& in);
KnowledgeGraph load_graph(std::string_view text);

void save_graph_file(const KnowledgeGraph& g, const std::string& path,
                     std::span<const std::string> header = {});
KnowledgeGraph load_graph_file(const std::string& path);
// Space separated key=value pairs; quoted values are quantities
// ("WaterLevel=\"12 m\" CoriolisForce=present").
MeasurementSet parse_measurements(std::string_view text);

// Leading '#' comment lines of a graph file, without the '# ' prefix.
std::vector<std::string> read_header_comments(const std::string& path);

} // namespace geocausal
