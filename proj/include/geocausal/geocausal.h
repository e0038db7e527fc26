/*
 * geocausal C API.
 *
 * Opaque handles, integer status codes. Every function that can fail
 * returns gc_status; on failure gc_last_error() holds a message for the
 * calling thread until its next API call. Strings returned through `char**`
 * out-parameters are heap allocated and must be released with gc_free().
 *
 * A gc_graph may be read from several threads at once; any mutating call
 * (add, assert, ingest, infer) needs exclusive access.
 */
#ifndef GEOCAUSAL_H
#define GEOCAUSAL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(GEOCAUSAL_BUILDING_LIBRARY)
#    define GC_API __declspec(dllexport)
#  else
#    define GC_API __declspec(dllimport)
#  endif
#else
#  define GC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gc_status {
    GC_OK = 0,
    GC_ERR_PARSE = 1,
    GC_ERR_ORDER_VIOLATION = 2,
    GC_ERR_DIMENSION_MISMATCH = 3,
    GC_ERR_TYPE_MISMATCH = 4,
    GC_ERR_UNKNOWN_UNIT = 5,
    GC_ERR_INVALID_VALUE = 6,
    GC_ERR_DUPLICATE_ID = 7,
    GC_ERR_UNKNOWN_ENTITY = 8,
    GC_ERR_SCHEMA_VIOLATION = 9,
    GC_ERR_UNKNOWN_TRIPLE = 10,
    GC_ERR_DUPLICATE_RULE_ID = 11,
    GC_ERR_VALIDATION_FAILURE = 12,
    GC_ERR_CONFIG = 13,
    GC_ERR_MISSING_COLUMN = 14,
    GC_ERR_INGEST = 15,
    GC_ERR_PATTERN_PARSE = 16,
    GC_ERR_UNKNOWN_RELATION = 17,
    GC_ERR_NOT_AN_EVENT = 18,
    GC_ERR_IO = 19,
    GC_ERR_INTERNAL = 20,
    GC_ERR_INVALID_ARGUMENT = 21
} gc_status;

typedef enum gc_format { GC_FORMAT_TEXT = 0, GC_FORMAT_DOT = 1, GC_FORMAT_JSON = 2 } gc_format;

typedef struct gc_graph gc_graph;
typedef struct gc_rules gc_rules;

typedef struct gc_engine_config {
    int64_t max_gap_seconds;       /* default 86400 */
    int require_spatial_overlap;   /* default 1 */
} gc_engine_config;

typedef struct gc_ingest_options {
    int strict;            /* 0 = lenient, 1 = strict */
    const char* id_prefix; /* may be NULL */
} gc_ingest_options;

GC_API const char* gc_version(void);
/* Symbolic name of a status ("SchemaViolation"). */
GC_API const char* gc_status_name(gc_status status);
GC_API const char* gc_last_error(void);
GC_API void gc_free(char* text);

/* Graph lifecycle and persistence. */
GC_API gc_status gc_graph_create(gc_graph** out);
GC_API void gc_graph_destroy(gc_graph* graph);
GC_API gc_status gc_graph_load_file(const char* path, gc_graph** out);
GC_API gc_status gc_graph_load_text(const char* text, size_t length, gc_graph** out);
GC_API gc_status gc_graph_import_json(const char* text, size_t length, gc_graph** out);
/* `header` (nullable) is written as a leading '#' comment block, one line per '\n'. */
GC_API gc_status gc_graph_save_file(const gc_graph* graph, const char* path, const char* header);
GC_API gc_status gc_graph_save_text(const gc_graph* graph, char** out);
GC_API size_t gc_graph_entity_count(const gc_graph* graph);
GC_API size_t gc_graph_triple_count(const gc_graph* graph);

/* Entities. Timestamps are RFC-3339; geometry literals POINT(lat lon) or
 * BBOX(minlat minlon maxlat maxlon). `measurements` (nullable) uses the
 * persistence syntax: space separated key=value pairs where a quantity is
 * quoted ("WaterLevel=\"12 m\" CoriolisForce=present"). */
GC_API gc_status gc_graph_add_event(gc_graph* graph, const char* id, const char* kind);
GC_API gc_status gc_graph_add_object(gc_graph* graph, const char* id, const char* kind,
                                     const char* measurements);
GC_API gc_status gc_graph_add_situation(gc_graph* graph, const char* id, const char* start, const char* end,
                                        const char* measurements);
GC_API gc_status gc_graph_add_region(gc_graph* graph, const char* id, const char* geometry, const char* start,
                                     const char* end);
/* Asserts `subject predicate object` with the canonical predicate token
 * ("causes", "part-of", ...). */
GC_API gc_status gc_graph_assert(gc_graph* graph, const char* subject, const char* predicate, const char* object);
/* Validation report as text; *error_count receives the number of errors. */
GC_API gc_status gc_graph_validate(const gc_graph* graph, char** report, size_t* error_count);

/* Queries and exports. */
GC_API gc_status gc_graph_query(const gc_graph* graph, const char* pattern, char** out, size_t* count);
GC_API gc_status gc_graph_export(const gc_graph* graph, gc_format format, char** out);
/* `rules` may be NULL (evidence lines then name the precondition only). */
GC_API gc_status gc_graph_why(const gc_graph* graph, const gc_rules* rules, const char* event, size_t max_depth,
                              gc_format format, char** out);
/* Provenance tree of one triple as indented text. */
GC_API gc_status gc_graph_explain(const gc_graph* graph, const char* subject, const char* predicate,
                                  const char* object, char** out);

/* Rules. */
GC_API gc_status gc_rules_parse(const char* text, size_t length, gc_rules** out);
GC_API gc_status gc_rules_load_file(const char* path, gc_rules** out);
GC_API void gc_rules_destroy(gc_rules* rules);
GC_API gc_status gc_rules_print(const gc_rules* rules, char** out);
GC_API size_t gc_rules_precondition_count(const gc_rules* rules);
GC_API size_t gc_rules_cause_rule_count(const gc_rules* rules);

/* Inference. `rules` may be NULL (empty rule set); `config` may be NULL
 * (defaults). Diagnostics are "SKIP ..." lines. */
GC_API void gc_engine_config_default(gc_engine_config* config);
GC_API gc_status gc_infer(gc_graph* graph, const gc_rules* rules, const gc_engine_config* config,
                          size_t* derived, size_t* iterations, char** diagnostics);

/* Ingestion. `report` receives the text report, `report_json` the JSON
 * report; either may be NULL. */
GC_API gc_status gc_ingest_storm_file(gc_graph* graph, const char* path, const gc_ingest_options* options,
                                      char** report, char** report_json);
GC_API gc_status gc_ingest_observations_file(gc_graph* graph, const char* path,
                                             const gc_ingest_options* options, char** report,
                                             char** report_json);

/* "<n><s|min|h|d>" to seconds; negative values are returned as-is. */
GC_API gc_status gc_parse_duration(const char* text, int64_t* seconds);

#ifdef __cplusplus
}
#endif

#endif /* GEOCAUSAL_H */
