#include "geocausal/ingest.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "csv.hpp"

namespace geocausal {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::IoError, "cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

std::string upper(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return out;
}

// Header name -> column index, names compared case-insensitively.
class Columns {
public:
    explicit Columns(const csv::Record& header) {
        for (std::size_t i = 0; i < header.fields.size(); ++i) index_[upper(trim(header.fields[i]))] = i;
    }

    void require(std::initializer_list<std::string_view> names) const {
        std::string missing;
        for (auto n : names)
            if (!index_.count(upper(n))) missing += (missing.empty() ? "" : ", ") + std::string(n);
        if (!missing.empty()) fail(Errc::MissingColumn, "missing column(s): " + missing);
    }

    bool has(std::string_view name) const { return index_.count(upper(name)) != 0; }

    std::string get(const csv::Record& r, std::string_view name) const {
        auto it = index_.find(upper(name));
        if (it == index_.end() || it->second >= r.fields.size()) return {};
        return trim(r.fields[it->second]);
    }

private:
    std::map<std::string, std::size_t> index_;
};

// Row-level failure; carries the code reported in the IngestReport.
struct RowError {
    Errc code;
    std::string reason;
};

[[noreturn]] void row_fail(Errc code, std::string reason) { throw RowError{code, std::move(reason)}; }

double parse_coordinate(const std::string& text, const char* column) {
    double v;
    if (!parse_number(text, v)) row_fail(Errc::ParseError, std::string("malformed ") + column);
    return v;
}

struct Envelope {
    bool any = false;
    BBox box{};
    std::optional<TimeInterval> interval;

    void add(const BBox& b) {
        if (!any) {
            box = b;
            any = true;
            return;
        }
        box.min_lat = std::min(box.min_lat, b.min_lat);
        box.min_lon = std::min(box.min_lon, b.min_lon);
        box.max_lat = std::max(box.max_lat, b.max_lat);
        box.max_lon = std::max(box.max_lon, b.max_lon);
    }
    void add(const TimeInterval& t) {
        if (!interval) {
            interval = t;
            return;
        }
        interval = TimeInterval(std::min(interval->start(), t.start()), std::max(interval->end(), t.end()));
    }
    Geometry geometry() const {
        if (box.min_lat == box.max_lat && box.min_lon == box.max_lon)
            return Geometry::point(box.min_lat, box.min_lon);
        return Geometry::bbox(box.min_lat, box.min_lon, box.max_lat, box.max_lon);
    }
};

template <class F>
void run_row(IngestReport& report, Strictness strictness, int line, F&& body) {
    try {
        body();
    } catch (const RowError& e) {
        if (strictness == Strictness::Strict) throw ParseError(e.reason, line, 0, e.code);
        report.errors.push_back(IngestIssue{line, e.code, e.reason});
    } catch (const Error& e) {
        if (strictness == Strictness::Strict) throw ParseError(e.what(), line, 0, e.code());
        report.errors.push_back(IngestIssue{line, e.code(), e.what()});
    }
}

std::string_view strictness_name(Strictness s) { return s == Strictness::Strict ? "strict" : "lenient"; }

} // namespace

// Field parsers ---------------------------------------------------------------

std::string sanitize_event_type(std::string_view raw) {
    std::string out;
    bool word_start = true;
    for (char c : raw) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            out += word_start ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c;
            word_start = false;
        } else {
            word_start = true;
        }
    }
    return out;
}

Timestamp parse_local_timestamp(std::string_view text, std::string_view zone) {
    static const std::map<std::string, int> kOffsets{
        {"UTC", 0},   {"GMT", 0},   {"EST", -5}, {"CST", -6}, {"MST", -7},
        {"PST", -8},  {"EDT", -4},  {"CDT", -5}, {"MDT", -6}, {"PDT", -7},
    };
    std::string z = upper(trim(zone));
    if (auto dash = z.find_first_of("-+"); dash != std::string::npos) z = z.substr(0, dash);
    int offset_hours = 0;
    if (!z.empty()) {
        auto it = kOffsets.find(z);
        if (it == kOffsets.end()) fail(Errc::ParseError, "unknown timezone '" + std::string(zone) + "'");
        offset_hours = it->second;
    }

    std::string t = trim(text);
    Timestamp local;
    static const std::array<std::string_view, 12> kMonths{"JAN", "FEB", "MAR", "APR", "MAY", "JUN",
                                                          "JUL", "AUG", "SEP", "OCT", "NOV", "DEC"};
    // NOAA: DD-MON-YY HH:MM:SS
    if (t.size() == 18 && t[2] == '-' && t[6] == '-' && t[9] == ' ') {
        auto digits = [&](std::size_t pos, std::size_t n) {
            int v = 0;
            for (std::size_t i = pos; i < pos + n; ++i) {
                if (!std::isdigit(static_cast<unsigned char>(t[i])))
                    fail(Errc::ParseError, "malformed timestamp '" + t + "'");
                v = v * 10 + (t[i] - '0');
            }
            return v;
        };
        std::string mon = upper(t.substr(3, 3));
        auto m = std::find(kMonths.begin(), kMonths.end(), mon);
        if (m == kMonths.end() || t[12] != ':' || t[15] != ':')
            fail(Errc::ParseError, "malformed timestamp '" + t + "'");
        int yy = digits(7, 2);
        int year = yy < 50 ? 2000 + yy : 1900 + yy;
        try {
            local = Timestamp::from_civil(year, static_cast<int>(m - kMonths.begin()) + 1, digits(0, 2),
                                          digits(10, 2), digits(13, 2), digits(16, 2));
        } catch (const Error&) {
            fail(Errc::ParseError, "malformed timestamp '" + t + "'");
        }
    } else {
        if (t.find_first_of("Zz+") != std::string::npos || (t.size() > 19 && t[19] == '-'))
            fail(Errc::ParseError, "local timestamp must not carry a zone: '" + t + "'");
        local = Timestamp::parse(t);
    }
    local.seconds -= static_cast<std::int64_t>(offset_hours) * 3600;
    return local;
}

double parse_damage(std::string_view text) {
    std::string t = upper(trim(text));
    if (t.empty()) fail(Errc::ParseError, "empty damage value");
    double factor = 1.0;
    switch (t.back()) {
    case 'K': factor = 1e3; break;
    case 'M': factor = 1e6; break;
    case 'B': factor = 1e9; break;
    default: break;
    }
    if (factor != 1.0) t.pop_back();
    double v;
    if (t.empty()) v = 1.0; // NOAA occasionally writes a bare "K"
    else if (!parse_number(t, v) || v < 0)
        fail(Errc::ParseError, "malformed damage value '" + std::string(text) + "'");
    return v * factor;
}

// Report ----------------------------------------------------------------------

std::string IngestReport::to_text() const {
    std::ostringstream out;
    out << "mode: " << strictness_name(strictness) << '\n'
        << "rows_read: " << rows_read << '\n'
        << "entities_created: " << entities_created << '\n'
        << "episodes_created: " << episodes_created << '\n'
        << "regions_created: " << regions_created << '\n'
        << "objects_created: " << objects_created << '\n'
        << "triples_created: " << triples_created << '\n'
        << "errors: " << errors.size() << '\n';
    for (const auto& e : errors)
        out << "  line " << e.line << ": " << errc_name(e.code) << ": " << e.reason << '\n';
    out << "warnings: " << warnings.size() << '\n';
    for (const auto& w : warnings) out << "  line " << w.line << ": " << w.reason << '\n';
    return out.str();
}

std::string IngestReport::to_json() const {
    nlohmann::ordered_json j;
    j["strictness"] = strictness_name(strictness);
    j["rows_read"] = rows_read;
    j["entities_created"] = entities_created;
    j["episodes_created"] = episodes_created;
    j["regions_created"] = regions_created;
    j["objects_created"] = objects_created;
    j["triples_created"] = triples_created;
    auto issues = [](const std::vector<IngestIssue>& list) {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& i : list)
            arr.push_back({{"line", i.line}, {"code", errc_name(i.code)}, {"reason", i.reason}});
        return arr;
    };
    j["errors"] = issues(errors);
    j["warnings"] = issues(warnings);
    return j.dump(2) + "\n";
}

// Storm events ------------------------------------------------------------------

namespace {

struct StormRow {
    int line;
    std::string episode_id;
    std::string event_id;
    std::string kind;
    TimeInterval interval;
    std::optional<BBox> bounds;
    MeasurementSet impact;
};

const std::set<std::string> kWindMagnitudeTypes{"EG", "ES", "MG", "MS"};

StormRow parse_storm_row(const Columns& cols, const csv::Record& r) {
    auto field = [&](std::string_view name) { return cols.get(r, name); };

    std::string episode = field("EPISODE_ID"), event = field("EVENT_ID");
    if (episode.empty()) row_fail(Errc::ParseError, "empty EPISODE_ID");
    if (event.empty()) row_fail(Errc::ParseError, "empty EVENT_ID");
    if (!EntityId::is_valid(episode) || !EntityId::is_valid(event))
        row_fail(Errc::InvalidValue, "identifiers must not contain whitespace");
    std::string kind = sanitize_event_type(field("EVENT_TYPE"));
    if (kind.empty()) row_fail(Errc::ParseError, "empty EVENT_TYPE");

    std::string zone = field("CZ_TIMEZONE");
    Timestamp begin = parse_local_timestamp(field("BEGIN_DATE_TIME"), zone);
    Timestamp end = parse_local_timestamp(field("END_DATE_TIME"), zone);
    if (begin > end)
        row_fail(Errc::OrderViolation, "END_DATE_TIME " + end.to_string() + " precedes BEGIN_DATE_TIME " +
                                           begin.to_string());

    auto pair = [&](const char* lat_col, const char* lon_col) -> std::optional<Point> {
        std::string lat = field(lat_col), lon = field(lon_col);
        if (lat.empty() && lon.empty()) return std::nullopt;
        if (lat.empty() || lon.empty())
            row_fail(Errc::ParseError, std::string(lat_col) + "/" + lon_col + " must both be set");
        auto g = Geometry::point(parse_coordinate(lat, lat_col), parse_coordinate(lon, lon_col));
        return std::get<Point>(g.shape());
    };
    auto b = pair("BEGIN_LAT", "BEGIN_LON");
    auto e = pair("END_LAT", "END_LON");
    std::optional<BBox> bounds;
    if (b || e) {
        Point p = b ? *b : *e;
        Point q = e ? *e : *b;
        bounds = BBox{std::min(p.lat, q.lat), std::min(p.lon, q.lon), std::max(p.lat, q.lat),
                      std::max(p.lon, q.lon)};
    }

    MeasurementSet impact;
    if (auto d = field("DAMAGE_PROPERTY"); !d.empty())
        impact.add(Measurement{"DamageProperty", Quantity(parse_damage(d), "USD")});
    if (auto d = field("DEATHS_DIRECT"); !d.empty()) {
        double n;
        if (!parse_number(d, n) || n < 0 || n != std::floor(n))
            row_fail(Errc::ParseError, "malformed DEATHS_DIRECT '" + d + "'");
        impact.add(Measurement{"DeathsDirect", Quantity(n, "count")});
    }
    if (auto m = field("MAGNITUDE"); !m.empty()) {
        double v;
        if (!parse_number(m, v)) row_fail(Errc::ParseError, "malformed MAGNITUDE '" + m + "'");
        std::string type = upper(field("MAGNITUDE_TYPE"));
        const char* unit = kWindMagnitudeTypes.count(type) ? "kn" : kind == "Hail" ? "in" : "1";
        impact.add(Measurement{"Magnitude", Quantity(v, unit)});
    }
    return StormRow{r.line, episode, event, kind, TimeInterval(begin, end), bounds, std::move(impact)};
}

} // namespace

IngestReport ingest_storm_csv(KnowledgeGraph& target, std::string_view text, const IngestOptions& opts) {
    IngestReport report;
    report.strictness = opts.strictness;

    auto records = csv::parse(text);
    if (records.empty()) fail(Errc::MissingColumn, "missing header row");
    Columns cols(records.front());
    cols.require({"EPISODE_ID", "EVENT_ID", "EVENT_TYPE", "BEGIN_DATE_TIME", "END_DATE_TIME",
                  "CZ_TIMEZONE", "BEGIN_LAT", "BEGIN_LON", "END_LAT", "END_LON", "DAMAGE_PROPERTY",
                  "DEATHS_DIRECT", "MAGNITUDE", "MAGNITUDE_TYPE"});

    std::vector<StormRow> rows;
    Envelope file_extent;
    for (std::size_t i = 1; i < records.size(); ++i) {
        ++report.rows_read;
        run_row(report, opts.strictness, records[i].line, [&] {
            rows.push_back(parse_storm_row(cols, records[i]));
            if (rows.back().bounds) file_extent.add(*rows.back().bounds);
        });
    }

    Geometry fallback = opts.default_region ? *opts.default_region
                        : file_extent.any   ? file_extent.geometry()
                                            : Geometry::bbox(-90, -180, 90, 180);

    KnowledgeGraph g = target;
    const std::string& p = opts.id_prefix;
    std::map<std::string, Envelope> episodes; // episode id -> children extent
    std::set<std::string> preexisting_episodes;
    std::set<std::string> seen_events;

    for (const auto& row : rows) {
        run_row(report, opts.strictness, row.line, [&] {
            EntityId episode_id("ev:" + p + "episode-" + row.episode_id);
            EntityId event_id("ev:" + p + "event-" + row.event_id);
            EntityId region_id("reg:" + p + "event-" + row.event_id);
            EntityId impact_id("obj:" + p + "impact-" + row.event_id);

            if (!seen_events.insert(row.event_id).second)
                row_fail(Errc::DuplicateId, "EVENT_ID " + row.event_id + " repeated in file");
            for (const auto* id : {&event_id, &region_id, &impact_id})
                if (g.contains(*id)) row_fail(Errc::DuplicateId, "entity '" + id->str() + "' already exists");
            if (!episodes.count(episode_id.str()) &&
                (preexisting_episodes.count(episode_id.str()) || g.contains(episode_id))) {
                preexisting_episodes.insert(episode_id.str());
                row_fail(Errc::DuplicateId, "episode '" + episode_id.str() + "' already exists");
            }

            Geometry geometry = fallback;
            if (row.bounds) {
                Envelope one;
                one.add(*row.bounds);
                geometry = one.geometry();
            } else {
                report.warnings.push_back(IngestIssue{row.line, Errc::InvalidValue,
                                                      "no coordinates; using default region " +
                                                          fallback.to_string()});
            }

            if (!episodes.count(episode_id.str())) {
                g.add_entity(make_event(episode_id.str(), "Episode"));
                ++report.episodes_created;
            }
            auto& extent = episodes[episode_id.str()];
            extent.add(geometry.bounds());
            extent.add(row.interval);

            g.add_entity(make_event(event_id.str(), row.kind));
            g.add_entity(SpatioTemporalRegion{region_id, geometry, row.interval});
            g.assert_triple(event_id, RelationKind::SpatioTemporallyPresent, region_id);
            g.assert_triple(event_id, RelationKind::PartOf, episode_id);
            ++report.entities_created;
            ++report.regions_created;
            report.triples_created += 2;
            if (!row.impact.empty()) {
                g.add_entity(make_object(impact_id.str(), "ImpactRecord", row.impact));
                g.assert_triple(impact_id, RelationKind::ParticipantIn, event_id);
                g.assert_triple(impact_id, RelationKind::SpatioTemporallyPresent, region_id);
                ++report.objects_created;
                report.triples_created += 2;
            }
        });
    }

    for (const auto& [id, extent] : episodes) {
        EntityId episode_id(id);
        EntityId region_id("reg:" + id.substr(3));
        g.add_entity(SpatioTemporalRegion{region_id, extent.geometry(), *extent.interval});
        g.assert_triple(episode_id, RelationKind::SpatioTemporallyPresent, region_id);
        ++report.regions_created;
        ++report.triples_created;
    }

    target = std::move(g);
    return report;
}

IngestReport ingest_storm_csv_file(KnowledgeGraph& g, const std::string& path, const IngestOptions& opts) {
    return ingest_storm_csv(g, read_file(path), opts);
}

// Observations --------------------------------------------------------------------

namespace {

struct PendingSituation {
    int first_line;
    std::vector<TimeInterval> intervals;
    MeasurementSet observations;
    Envelope site;
};

Value parse_observation_value(const std::string& value, const std::string& unit_symbol) {
    if (value.empty()) row_fail(Errc::ParseError, "empty value");
    double magnitude;
    bool numeric = parse_number(value, magnitude);
    if (!unit_symbol.empty()) {
        const Unit* u = find_unit(unit_symbol);
        if (!u) row_fail(Errc::UnknownUnit, "unknown unit '" + unit_symbol + "'");
        if (!numeric) row_fail(Errc::ParseError, "value '" + value + "' is not a number");
        return Quantity(magnitude, *u);
    }
    if (numeric) return Quantity(magnitude, "1");
    return Categorical(value);
}

} // namespace

IngestReport ingest_observations_csv(KnowledgeGraph& target, std::string_view text,
                                     const IngestOptions& opts) {
    IngestReport report;
    report.strictness = opts.strictness;

    auto records = csv::parse(text);
    if (records.empty()) fail(Errc::MissingColumn, "missing header row");
    Columns cols(records.front());
    cols.require({"situation_id", "timestamp_start", "timestamp_end", "attribute", "value", "unit"});
    bool has_coords = cols.has("lat") && cols.has("lon");

    std::vector<std::string> order;
    std::map<std::string, PendingSituation> pending;
    std::set<std::string> rejected; // situation ids that already exist in the graph

    for (std::size_t i = 1; i < records.size(); ++i) {
        const auto& r = records[i];
        ++report.rows_read;
        run_row(report, opts.strictness, r.line, [&] {
            std::string sid = cols.get(r, "situation_id");
            if (!EntityId::is_valid(sid)) row_fail(Errc::InvalidValue, "invalid situation_id '" + sid + "'");
            auto interval = make_interval(cols.get(r, "timestamp_start"), cols.get(r, "timestamp_end"));
            std::string attribute = cols.get(r, "attribute");
            if (!is_valid_kind(attribute)) row_fail(Errc::InvalidValue, "invalid attribute '" + attribute + "'");
            Value value = parse_observation_value(cols.get(r, "value"), cols.get(r, "unit"));
            std::optional<Point> site;
            if (has_coords) {
                std::string lat = cols.get(r, "lat"), lon = cols.get(r, "lon");
                if (!lat.empty() || !lon.empty()) {
                    if (lat.empty() || lon.empty()) row_fail(Errc::ParseError, "lat/lon must both be set");
                    auto g = Geometry::point(parse_coordinate(lat, "lat"), parse_coordinate(lon, "lon"));
                    site = std::get<Point>(g.shape());
                }
            }

            EntityId id(sid);
            if (rejected.count(sid) || (!pending.count(sid) && target.contains(id))) {
                rejected.insert(sid);
                row_fail(Errc::DuplicateId, "entity '" + sid + "' already exists");
            }
            auto [it, fresh] = pending.try_emplace(sid, PendingSituation{r.line, {}, {}, {}});
            auto& s = it->second;
            if (s.observations.contains(attribute))
                row_fail(Errc::InvalidValue, "duplicate attribute '" + attribute + "' for " + sid +
                                                 "; keeping the first");
            if (fresh) order.push_back(sid);
            s.observations.add(Measurement{attribute, std::move(value)});
            s.intervals.push_back(interval);
            if (site) s.site.add(BBox{site->lat, site->lon, site->lat, site->lon});
        });
    }

    KnowledgeGraph g = target;
    for (const auto& sid : order) {
        auto& s = pending.at(sid);
        run_row(report, opts.strictness, s.first_line, [&] {
            Envelope span;
            for (const auto& t : s.intervals) span.add(t);
            EntityId id(sid);
            if (s.site.any)
                for (const auto& extra : {sid + "/site", sid + "/site-region"})
                    if (g.contains(EntityId(extra)))
                        row_fail(Errc::DuplicateId, "entity '" + extra + "' already exists");
            g.add_entity(make_situation(sid, *span.interval, s.observations));
            ++report.entities_created;
            if (s.site.any) {
                EntityId site_id(sid + "/site");
                EntityId region_id(sid + "/site-region");
                g.add_entity(make_object(site_id.str(), "ObservationSite"));
                g.add_entity(SpatioTemporalRegion{region_id, s.site.geometry(), *span.interval});
                g.assert_triple(site_id, RelationKind::Setting, id);
                g.assert_triple(site_id, RelationKind::SpatioTemporallyPresent, region_id);
                ++report.objects_created;
                ++report.regions_created;
                report.triples_created += 2;
            }
        });
    }

    target = std::move(g);
    return report;
}

IngestReport ingest_observations_csv_file(KnowledgeGraph& g, const std::string& path,
                                          const IngestOptions& opts) {
    return ingest_observations_csv(g, read_file(path), opts);
}

} // namespace geocausal
