#include <fstream>
#include <sstream>

#include "geocausal/error.hpp"
#include "geocausal/graph.hpp"

namespace geocausal {

namespace {

void write_measurements(std::ostream& out, const MeasurementSet& set) {
    for (const auto& m : set) {
        out << ' ' << m.attribute << '=';
        if (std::holds_alternative<Quantity>(m.value))
            out << '"' << value_to_string(m.value) << '"';
        else
            out << value_to_string(m.value);
    }
}

struct EntityWriter {
    std::ostream& out;

    void operator()(const GeoObject& o) const {
        out << "ENT " << o.id.str() << " object " << o.kind;
        write_measurements(out, o.attributes);
    }
    void operator()(const GeoEvent& e) const {
        out << "ENT " << e.id.str() << " event " << e.kind;
    }
    void operator()(const GeoSituation& s) const {
        out << "ENT " << s.id.str() << " situation - @holds="
            << s.holds_during.start().to_string() << '/' << s.holds_during.end().to_string();
        write_measurements(out, s.observations);
    }
    void operator()(const SpatioTemporalRegion& r) const {
        out << "REG " << r.id.str() << ' ' << r.geometry.to_string() << ' '
            << r.interval.start().to_string() << ' ' << r.interval.end().to_string();
    }
    void operator()(const PreconditionRef& p) const {
        out << "ENT " << p.id.str() << " precondition " << p.event_kind;
    }
};

// Splits on spaces; double quotes and parentheses group.
std::vector<std::string> split_fields(std::string_view line, int line_no) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    int depth = 0;
    bool have = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
            have = true;
            continue;
        }
        if (!quoted) {
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if ((c == ' ' || c == '\t') && depth == 0) {
                if (have) fields.push_back(std::move(current));
                current.clear();
                have = false;
                continue;
            }
        }
        current += c;
        have = true;
    }
    if (quoted) throw ParseError("unterminated quote", line_no);
    if (depth != 0) throw ParseError("unbalanced parentheses", line_no);
    if (have) fields.push_back(std::move(current));
    return fields;
}

std::pair<std::string, std::string> split_key_value(const std::string& field, int line_no) {
    auto eq = field.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ParseError("expected key=value, got '" + field + "'", line_no);
    return {field.substr(0, eq), field.substr(eq + 1)};
}

MeasurementSet read_measurements(const std::vector<std::string>& fields, std::size_t from,
                                 int line_no) {
    MeasurementSet set;
    for (std::size_t i = from; i < fields.size(); ++i) {
        auto [key, value] = split_key_value(fields[i], line_no);
        set.add(Measurement{key, parse_value(value)});
    }
    return set;
}

Entity read_entity(const std::vector<std::string>& f, int line_no) {
    if (f.size() < 4) throw ParseError("ENT needs <id> <role> <kind>", line_no);
    const std::string& role = f[2];
    if (role == "object") return make_object(f[1], f[3], read_measurements(f, 4, line_no));
    if (role == "event") {
        if (f.size() != 4) throw ParseError("event records take no attributes", line_no);
        return make_event(f[1], f[3]);
    }
    if (role == "situation") {
        if (f.size() < 5) throw ParseError("situation needs @holds=<start>/<end>", line_no);
        auto [key, value] = split_key_value(f[4], line_no);
        auto slash = value.find('/');
        if (key != "@holds" || slash == std::string::npos)
            throw ParseError("situation needs @holds=<start>/<end>", line_no);
        auto interval = make_interval(std::string_view(value).substr(0, slash),
                                      std::string_view(value).substr(slash + 1));
        return make_situation(f[1], interval, read_measurements(f, 5, line_no));
    }
    if (role == "precondition") {
        if (f.size() != 4 || !is_valid_kind(f[3]))
            throw ParseError("precondition needs <id> precondition <event-kind>", line_no);
        return PreconditionRef{EntityId(f[1]), f[3]};
    }
    throw ParseError("unknown role '" + role + "'", line_no);
}

TripleKey read_key(const std::vector<std::string>& f, int line_no) {
    if (f.size() < 4) throw ParseError("expected <subject> <predicate> <object>", line_no);
    try {
        return TripleKey{EntityId(f[1]), relation_from_token(f[2]), EntityId(f[3])};
    } catch (const Error& e) {
        throw ParseError(e.what(), line_no);
    }
}

} // namespace

void save_graph(const KnowledgeGraph& g, std::ostream& out, std::span<const std::string> header) {
    for (const auto& h : header) out << "# " << h << '\n';
    for (const auto& [_, e] : g.entities()) {
        std::visit(EntityWriter{out}, e);
        out << '\n';
    }
    for (const auto& [key, prov] : g.triples()) {
        out << "TRI " << key.to_string();
        if (prov.derived()) {
            out << " DERIVED rule=" << prov.rule << " premises=" << prov.premises.size() << '\n';
            for (const auto& p : prov.premises) out << "PRE " << p.to_string() << '\n';
        } else {
            out << '\n';
        }
    }
}

MeasurementSet parse_measurements(std::string_view text) {
    return read_measurements(split_fields(text, 0), 0, 0);
}

std::string save_graph(const KnowledgeGraph& g, std::span<const std::string> header) {
    std::ostringstream out;
    save_graph(g, out, header);
    return out.str();
}

KnowledgeGraph load_graph(std::istream& in) {
    KnowledgeGraph g;
    struct Pending {
        TripleKey key;
        Provenance prov;
        std::size_t expected_premises;
        int line;
    };
    std::vector<Pending> triples;

    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::string_view line(raw);
        auto first = line.find_first_not_of(" \t");
        if (first == std::string_view::npos || line[first] == '#') continue;

        auto f = split_fields(line, line_no);
        const std::string& tag = f[0];
        try {
            if (tag == "ENT") {
                if (!triples.empty()) throw ParseError("entity record after triples", line_no);
                g.add_entity(read_entity(f, line_no));
            } else if (tag == "REG") {
                if (f.size() != 5) throw ParseError("REG needs <id> <geometry> <start> <end>", line_no);
                if (!triples.empty()) throw ParseError("region record after triples", line_no);
                g.add_entity(SpatioTemporalRegion{EntityId(f[1]), Geometry::parse(f[2]),
                                                  make_interval(f[3], f[4])});
            } else if (tag == "TRI") {
                if (!triples.empty() &&
                    triples.back().prov.premises.size() != triples.back().expected_premises)
                    throw ParseError("missing PRE lines", line_no);
                Pending p{read_key(f, line_no), Provenance::asserted(), 0, line_no};
                if (f.size() > 4) {
                    if (f.size() != 7 || f[4] != "DERIVED")
                        throw ParseError("expected DERIVED rule=<id> premises=<n>", line_no);
                    auto [rk, rule] = split_key_value(f[5], line_no);
                    auto [pk, count] = split_key_value(f[6], line_no);
                    if (rk != "rule" || pk != "premises" || rule.empty() ||
                        count.find_first_not_of("0123456789") != std::string::npos || count.empty())
                        throw ParseError("expected DERIVED rule=<id> premises=<n>", line_no);
                    p.prov.rule = rule;
                    p.expected_premises = std::stoul(count);
                }
                triples.push_back(std::move(p));
            } else if (tag == "PRE") {
                if (triples.empty() || !triples.back().prov.derived() ||
                    triples.back().prov.premises.size() >= triples.back().expected_premises)
                    throw ParseError("unexpected PRE line", line_no);
                if (f.size() != 4) throw ParseError("PRE needs <subject> <predicate> <object>", line_no);
                triples.back().prov.premises.push_back(read_key(f, line_no));
            } else {
                throw ParseError("unknown record type '" + tag + "'", line_no);
            }
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            if (e.code() == Errc::ParseError || e.code() == Errc::InvalidValue ||
                e.code() == Errc::OrderViolation || e.code() == Errc::UnknownUnit)
                throw ParseError(e.what(), line_no);
            throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!triples.empty() && triples.back().prov.premises.size() != triples.back().expected_premises)
        throw ParseError("missing PRE lines at end of document", line_no);

    for (auto& p : triples) {
        try {
            g.check_schema(p.key);
        } catch (const Error& e) {
            throw Error(e.code(), "line " + std::to_string(p.line) + ": " + e.what());
        }
        if (g.contains(p.key))
            throw ParseError("duplicate triple " + p.key.to_string(), p.line);
        g.insert(p.key, std::move(p.prov));
    }
    for (const auto& [key, prov] : g.triples())
        for (const auto& premise : prov.premises)
            if (!g.contains(premise))
                fail(Errc::ValidationFailure,
                     "premise " + premise.to_string() + " of " + key.to_string() + " is missing");
    return g;
}

KnowledgeGraph load_graph(std::string_view text) {
    std::istringstream in{std::string(text)};
    return load_graph(in);
}

void save_graph_file(const KnowledgeGraph& g, const std::string& path,
                     std::span<const std::string> header) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(Errc::IoError, "cannot write '" + path + "'");
    save_graph(g, out, header);
    if (!out) fail(Errc::IoError, "write failed for '" + path + "'");
}

KnowledgeGraph load_graph_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::IoError, "cannot read '" + path + "'");
    return load_graph(in);
}

std::vector<std::string> read_header_comments(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::IoError, "cannot read '" + path + "'");
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind('#', 0) != 0) break;
        std::string body = line.substr(1);
        if (!body.empty() && body[0] == ' ') body.erase(0, 1);
        out.push_back(body);
    }
    return out;
}

} // namespace geocausal
