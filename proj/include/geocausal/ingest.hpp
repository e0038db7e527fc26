#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geocausal/error.hpp"
#include "geocausal/graph.hpp"

namespace geocausal {

enum class Strictness { Strict, Lenient };

struct IngestIssue {
    int line;
    Errc code;
    std::string reason;

    friend bool operator==(const IngestIssue&, const IngestIssue&) = default;
};

struct IngestReport {
    Strictness strictness = Strictness::Lenient;
    std::size_t rows_read = 0;
    // One per accepted data row: row events (storm files) or situations
    // (observation files). Episode parents, regions and companion objects
    // are counted separately.
    std::size_t entities_created = 0;
    std::size_t episodes_created = 0;
    std::size_t regions_created = 0;
    std::size_t objects_created = 0;
    std::size_t triples_created = 0;
    std::vector<IngestIssue> errors;   // rows skipped (lenient mode only)
    std::vector<IngestIssue> warnings; // rows accepted with a fallback

    std::string to_text() const;
    std::string to_json() const;
};

struct IngestOptions {
    Strictness strictness = Strictness::Lenient;
    // Inserted after the "ev:" / "reg:" / "obj:" scheme of generated ids.
    std::string id_prefix;
    // Region for storm rows without coordinates. Defaults to the envelope of
    // every coordinate in the file (the whole globe if there are none).
    std::optional<Geometry> default_region;
};

// NOAA Storm Events bulk CSV. Requires the EPISODE_ID, EVENT_ID, EVENT_TYPE,
// BEGIN_DATE_TIME, END_DATE_TIME, CZ_TIMEZONE, BEGIN_LAT, BEGIN_LON,
// END_LAT, END_LON, DAMAGE_PROPERTY, DEATHS_DIRECT, MAGNITUDE and
// MAGNITUDE_TYPE columns (MissingColumn otherwise). The graph is only
// modified if the call succeeds; in strict mode the first bad row throws
// with its line number and originating error code.
IngestReport ingest_storm_csv(KnowledgeGraph& g, std::string_view text, const IngestOptions& opts = {});
IngestReport ingest_storm_csv_file(KnowledgeGraph& g, const std::string& path,
                                   const IngestOptions& opts = {});

// Observation CSV with columns situation_id, timestamp_start, timestamp_end,
// attribute, value, unit and optional lat, lon. Rows sharing a situation_id
// become one GeoSituation.
IngestReport ingest_observations_csv(KnowledgeGraph& g, std::string_view text,
                                     const IngestOptions& opts = {});
IngestReport ingest_observations_csv_file(KnowledgeGraph& g, const std::string& path,
                                          const IngestOptions& opts = {});

// "Flash Flood" -> "FlashFlood".
std::string sanitize_event_type(std::string_view raw);
// NOAA "29-AUG-05 06:00:00" or ISO "2005-08-29 06:00:00" in the given zone
// (UTC, EST, CST, MST, PST, EDT, CDT, MDT, PDT, optionally with NOAA's
// "-6" style suffix; empty means UTC).
Timestamp parse_local_timestamp(std::string_view text, std::string_view zone);
// "10.00K" -> 10000, "2.5M", "1B", plain numbers; empty string is an error.
double parse_damage(std::string_view text);

} // namespace geocausal
