#include "geocausal/geocausal.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "geocausal/engine.hpp"
#include "geocausal/error.hpp"
#include "geocausal/graph.hpp"
#include "geocausal/ingest.hpp"
#include "geocausal/query.hpp"
#include "geocausal/rules.hpp"

struct gc_graph {
    geocausal::KnowledgeGraph graph;
};

struct gc_rules {
    geocausal::RuleSet rules;
};

namespace {

using namespace geocausal;

thread_local std::string t_last_error;

struct InvalidArgument {
    const char* what;
};

void require(const void* p, const char* name) {
    if (!p) throw InvalidArgument{name};
}

template <class F>
gc_status guarded(F&& body) noexcept {
    try {
        t_last_error.clear();
        body();
        return GC_OK;
    } catch (const InvalidArgument& e) {
        t_last_error = std::string("null argument: ") + e.what;
        return GC_ERR_INVALID_ARGUMENT;
    } catch (const Error& e) {
        t_last_error = e.what();
        return static_cast<gc_status>(e.code());
    } catch (const std::bad_alloc&) {
        t_last_error = "out of memory";
        return GC_ERR_INTERNAL;
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return GC_ERR_INTERNAL;
    } catch (...) {
        t_last_error = "unknown failure";
        return GC_ERR_INTERNAL;
    }
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.data(), s.size() + 1);
    return out;
}

void put(char** out, const std::string& s) {
    if (out) *out = dup(s);
}

EntityId id_arg(const char* text, const char* name) {
    require(text, name);
    return EntityId(text);
}

MeasurementSet measurements_arg(const char* text) {
    return text ? parse_measurements(text) : MeasurementSet{};
}

IngestOptions ingest_options(const gc_ingest_options* options) {
    IngestOptions o;
    if (options) {
        o.strictness = options->strict ? Strictness::Strict : Strictness::Lenient;
        if (options->id_prefix) o.id_prefix = options->id_prefix;
    }
    return o;
}

} // namespace

extern "C" {

const char* gc_version(void) { return "0.1.0"; }

const char* gc_status_name(gc_status status) {
    if (status == GC_OK) return "OK";
    if (status == GC_ERR_INVALID_ARGUMENT) return "InvalidArgument";
    if (status < GC_OK || status > GC_ERR_INTERNAL) return "Unknown";
    return errc_name(static_cast<Errc>(status)).data();
}

const char* gc_last_error(void) { return t_last_error.c_str(); }

void gc_free(char* text) { std::free(text); }

gc_status gc_graph_create(gc_graph** out) {
    return guarded([&] {
        require(out, "out");
        *out = new gc_graph{};
    });
}

void gc_graph_destroy(gc_graph* graph) { delete graph; }

gc_status gc_graph_load_file(const char* path, gc_graph** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new gc_graph{load_graph_file(path)};
    });
}

gc_status gc_graph_load_text(const char* text, size_t length, gc_graph** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = new gc_graph{load_graph(std::string_view(text, length))};
    });
}

gc_status gc_graph_import_json(const char* text, size_t length, gc_graph** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = new gc_graph{import_graph_json(std::string_view(text, length))};
    });
}

gc_status gc_graph_save_file(const gc_graph* graph, const char* path, const char* header) {
    return guarded([&] {
        require(graph, "graph");
        require(path, "path");
        std::vector<std::string> lines;
        if (header) {
            std::istringstream in(header);
            for (std::string line; std::getline(in, line);) lines.push_back(line);
        }
        save_graph_file(graph->graph, path, lines);
    });
}

gc_status gc_graph_save_text(const gc_graph* graph, char** out) {
    return guarded([&] {
        require(graph, "graph");
        require(out, "out");
        put(out, save_graph(graph->graph));
    });
}

size_t gc_graph_entity_count(const gc_graph* graph) { return graph ? graph->graph.entity_count() : 0; }

size_t gc_graph_triple_count(const gc_graph* graph) { return graph ? graph->graph.triple_count() : 0; }

gc_status gc_graph_add_event(gc_graph* graph, const char* id, const char* kind) {
    return guarded([&] {
        require(graph, "graph");
        require(id, "id");
        require(kind, "kind");
        graph->graph.add_entity(make_event(id, kind));
    });
}

gc_status gc_graph_add_object(gc_graph* graph, const char* id, const char* kind, const char* measurements) {
    return guarded([&] {
        require(graph, "graph");
        require(id, "id");
        require(kind, "kind");
        graph->graph.add_entity(make_object(id, kind, measurements_arg(measurements)));
    });
}

gc_status gc_graph_add_situation(gc_graph* graph, const char* id, const char* start, const char* end,
                                 const char* measurements) {
    return guarded([&] {
        require(graph, "graph");
        require(id, "id");
        require(start, "start");
        require(end, "end");
        graph->graph.add_entity(make_situation(id, make_interval(start, end), measurements_arg(measurements)));
    });
}

gc_status gc_graph_add_region(gc_graph* graph, const char* id, const char* geometry, const char* start,
                              const char* end) {
    return guarded([&] {
        require(graph, "graph");
        require(geometry, "geometry");
        require(start, "start");
        require(end, "end");
        graph->graph.add_entity(
            SpatioTemporalRegion{id_arg(id, "id"), Geometry::parse(geometry), make_interval(start, end)});
    });
}

gc_status gc_graph_assert(gc_graph* graph, const char* subject, const char* predicate, const char* object) {
    return guarded([&] {
        require(graph, "graph");
        require(predicate, "predicate");
        graph->graph.assert_triple(id_arg(subject, "subject"), relation_from_token(predicate),
                                   id_arg(object, "object"));
    });
}

gc_status gc_graph_validate(const gc_graph* graph, char** report, size_t* error_count) {
    return guarded([&] {
        require(graph, "graph");
        auto r = graph->graph.validate();
        std::string text;
        for (const auto& e : r.errors) text += "error: " + e + "\n";
        for (const auto& w : r.warnings) text += "warning: " + w + "\n";
        if (error_count) *error_count = r.errors.size();
        put(report, text);
    });
}

gc_status gc_graph_query(const gc_graph* graph, const char* pattern, char** out, size_t* count) {
    return guarded([&] {
        require(graph, "graph");
        require(pattern, "pattern");
        auto result = query(graph->graph, pattern);
        if (count) *count = result.size();
        put(out, render_triples(result));
    });
}

gc_status gc_graph_export(const gc_graph* graph, gc_format format, char** out) {
    return guarded([&] {
        require(graph, "graph");
        require(out, "out");
        switch (format) {
        case GC_FORMAT_DOT: put(out, export_graph(graph->graph, ExportFormat::Dot)); break;
        case GC_FORMAT_JSON: put(out, export_graph(graph->graph, ExportFormat::Json)); break;
        case GC_FORMAT_TEXT: put(out, save_graph(graph->graph)); break;
        default: throw InvalidArgument{"format"};
        }
    });
}

gc_status gc_graph_why(const gc_graph* graph, const gc_rules* rules, const char* event, size_t max_depth,
                       gc_format format, char** out) {
    return guarded([&] {
        require(graph, "graph");
        require(out, "out");
        auto ex = why(graph->graph, id_arg(event, "event"), max_depth, rules ? &rules->rules : nullptr);
        switch (format) {
        case GC_FORMAT_TEXT: put(out, render_explanation_text(graph->graph, ex)); break;
        case GC_FORMAT_DOT: put(out, export_explanation(graph->graph, ex, ExportFormat::Dot)); break;
        case GC_FORMAT_JSON: put(out, export_explanation(graph->graph, ex, ExportFormat::Json)); break;
        default: throw InvalidArgument{"format"};
        }
    });
}

gc_status gc_graph_explain(const gc_graph* graph, const char* subject, const char* predicate, const char* object,
                           char** out) {
    return guarded([&] {
        require(graph, "graph");
        require(predicate, "predicate");
        require(out, "out");
        TripleKey key{id_arg(subject, "subject"), relation_from_token(predicate), id_arg(object, "object")};
        put(out, render_provenance(explain(graph->graph, key)));
    });
}

gc_status gc_rules_parse(const char* text, size_t length, gc_rules** out) {
    return guarded([&] {
        require(text, "text");
        require(out, "out");
        *out = new gc_rules{parse_rules(std::string_view(text, length))};
    });
}

gc_status gc_rules_load_file(const char* path, gc_rules** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new gc_rules{load_rules_file(path)};
    });
}

void gc_rules_destroy(gc_rules* rules) { delete rules; }

gc_status gc_rules_print(const gc_rules* rules, char** out) {
    return guarded([&] {
        require(rules, "rules");
        require(out, "out");
        put(out, print_rules(rules->rules));
    });
}

size_t gc_rules_precondition_count(const gc_rules* rules) {
    return rules ? rules->rules.preconditions().size() : 0;
}

size_t gc_rules_cause_rule_count(const gc_rules* rules) { return rules ? rules->rules.cause_rules().size() : 0; }

void gc_engine_config_default(gc_engine_config* config) {
    if (!config) return;
    EngineConfig d;
    config->max_gap_seconds = d.max_gap.seconds;
    config->require_spatial_overlap = d.require_spatial_overlap ? 1 : 0;
}

gc_status gc_infer(gc_graph* graph, const gc_rules* rules, const gc_engine_config* config, size_t* derived,
                   size_t* iterations, char** diagnostics) {
    return guarded([&] {
        require(graph, "graph");
        EngineConfig cfg;
        if (config) {
            cfg.max_gap = Duration{config->max_gap_seconds};
            cfg.require_spatial_overlap = config->require_spatial_overlap != 0;
        }
        static const RuleSet kNoRules;
        auto result = infer(graph->graph, rules ? rules->rules : kNoRules, cfg);
        if (derived) *derived = result.derived.size();
        if (iterations) *iterations = result.iterations;
        if (diagnostics) {
            std::string text;
            for (const auto& d : result.diagnostics) text += d.to_string() + "\n";
            put(diagnostics, text);
        }
    });
}

gc_status gc_ingest_storm_file(gc_graph* graph, const char* path, const gc_ingest_options* options, char** report,
                               char** report_json) {
    return guarded([&] {
        require(graph, "graph");
        require(path, "path");
        auto r = ingest_storm_csv_file(graph->graph, path, ingest_options(options));
        put(report, r.to_text());
        put(report_json, r.to_json());
    });
}

gc_status gc_ingest_observations_file(gc_graph* graph, const char* path, const gc_ingest_options* options,
                                      char** report, char** report_json) {
    return guarded([&] {
        require(graph, "graph");
        require(path, "path");
        auto r = ingest_observations_csv_file(graph->graph, path, ingest_options(options));
        put(report, r.to_text());
        put(report_json, r.to_json());
    });
}

gc_status gc_parse_duration(const char* text, int64_t* seconds) {
    return guarded([&] {
        require(text, "text");
        require(seconds, "seconds");
        *seconds = Duration::parse(text).seconds;
    });
}

} // extern "C"
