// Command-line front end. Talks to the library exclusively through the C API.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geocausal/geocausal.h"

namespace {

namespace fs = std::filesystem;

constexpr const char* kDefaultWorkspace = "geocausal.kg";
constexpr const char* kWorkspaceBanner = "geocausal workspace v1";
constexpr const char* kRulesKey = "rules: ";

// Thrown after a failed API call; carries the exit code.
struct Failure {
    int exit_code;
};

void check(gc_status status) {
    if (status == GC_OK) return;
    std::cerr << "error[" << gc_status_name(status) << "]: " << gc_last_error() << '\n';
    throw Failure{status == GC_ERR_INTERNAL ? 2 : 1};
}

[[noreturn]] void user_error(const std::string& message) {
    std::cerr << "error: " << message << '\n';
    throw Failure{1};
}

struct OwnedText {
    char* ptr = nullptr;
    ~OwnedText() { gc_free(ptr); }
    std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

using GraphPtr = std::unique_ptr<gc_graph, decltype(&gc_graph_destroy)>;
using RulesPtr = std::unique_ptr<gc_rules, decltype(&gc_rules_destroy)>;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) user_error("cannot read '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

class Workspace {
public:
    explicit Workspace(std::string path) : path_(std::move(path)), graph_(nullptr, gc_graph_destroy) {
        gc_graph* g = nullptr;
        if (fs::exists(path_)) {
            check(gc_graph_load_file(path_.c_str(), &g));
            graph_.reset(g);
            read_header();
        } else {
            check(gc_graph_create(&g));
            graph_.reset(g);
        }
    }

    gc_graph* graph() { return graph_.get(); }
    const std::string& rules_path() const { return rules_path_; }
    void set_rules_path(const std::string& p) { rules_path_ = fs::absolute(p).string(); }
    void replace(GraphPtr g) { graph_ = std::move(g); }

    void save() {
        std::string header = kWorkspaceBanner;
        if (!rules_path_.empty()) header += std::string("\n") + kRulesKey + rules_path_;
        check(gc_graph_save_file(graph_.get(), path_.c_str(), header.c_str()));
    }

private:
    void read_header() {
        std::ifstream in(path_);
        for (std::string line; std::getline(in, line) && line.rfind('#', 0) == 0;) {
            auto body = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
            if (body.rfind(kRulesKey, 0) == 0) rules_path_ = body.substr(std::string(kRulesKey).size());
        }
    }

    std::string path_;
    std::string rules_path_;
    GraphPtr graph_;
};

RulesPtr load_rules(const std::string& path) {
    gc_rules* r = nullptr;
    check(gc_rules_load_file(path.c_str(), &r));
    return RulesPtr(r, gc_rules_destroy);
}

gc_format parse_format(const std::string& name) {
    if (name == "text") return GC_FORMAT_TEXT;
    if (name == "dot") return GC_FORMAT_DOT;
    if (name == "json") return GC_FORMAT_JSON;
    user_error("unknown format '" + name + "'");
}

std::string resolve_workspace(const std::string& flag) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("GEOCAUSAL_WORKSPACE"); env && *env) return env;
    return kDefaultWorkspace;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"geocausal: geo-event knowledge graph with causal inference"};
    app.require_subcommand(1);
    std::string workspace_flag;
    app.add_option("--workspace", workspace_flag, "Workspace graph file (overrides GEOCAUSAL_WORKSPACE)");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Load CSV data into the workspace");
    ingest->require_subcommand(1);
    std::string ingest_file, ingest_prefix;
    bool ingest_strict = false, ingest_json = false;
    auto* ingest_storm = ingest->add_subcommand("storm", "NOAA Storm Events CSV");
    auto* ingest_obs = ingest->add_subcommand("obs", "Observation CSV");
    for (auto* sub : {ingest_storm, ingest_obs}) {
        sub->add_option("file", ingest_file, "CSV file")->required();
        sub->add_flag("--strict", ingest_strict, "Abort on the first malformed row");
        sub->add_option("--prefix", ingest_prefix, "Id prefix for generated entities");
        sub->add_flag("--json", ingest_json, "Print the report as JSON");
    }

    // rules
    auto* rules = app.add_subcommand("rules", "Rule files");
    rules->require_subcommand(1);
    std::string rules_file;
    bool rules_print = false;
    auto* rules_check = rules->add_subcommand("check", "Parse and validate a rule file");
    rules_check->add_option("file", rules_file, "Rule file (.gcr)")->required();
    rules_check->add_flag("--print", rules_print, "Print the canonical form");
    auto* rules_use = rules->add_subcommand("use", "Record a rule file in the workspace");
    rules_use->add_option("file", rules_file, "Rule file (.gcr)")->required();

    // infer
    auto* infer = app.add_subcommand("infer", "Derive causal edges to fixpoint");
    std::string max_gap = "24h", infer_rules;
    bool no_spatial = false;
    infer->add_option("--max-gap", max_gap, "Largest situation-to-event gap, e.g. 6h")->allow_extra_args(false);
    infer->add_flag("--no-spatial", no_spatial, "Do not require spatial overlap");
    infer->add_option("--rules", infer_rules, "Rule file (recorded in the workspace)");

    // why
    auto* why = app.add_subcommand("why", "Explain why an event occurred");
    std::string why_event, why_format = "text";
    std::size_t why_depth = 10;
    why->add_option("event", why_event, "Event id")->required();
    why->add_option("--depth", why_depth, "Maximum traversal depth");
    why->add_option("--format", why_format, "text, dot or json")->check(CLI::IsMember({"text", "dot", "json"}));

    // query
    auto* query = app.add_subcommand("query", "Match a triple pattern");
    std::string pattern;
    query->add_option("pattern", pattern, "\"<id|?> <relation|?> <id|?>\"")->required();

    // export
    auto* exp = app.add_subcommand("export", "Export the workspace graph");
    std::string export_format = "json";
    exp->add_option("--format", export_format, "dot or json")->check(CLI::IsMember({"dot", "json"}));

    auto* validate = app.add_subcommand("validate", "Check schema and consistency");

    // Workspace maintenance.
    auto* import = app.add_subcommand("import", "Replace the workspace graph with a graph file (text or JSON)");
    std::string import_file;
    import->add_option("file", import_file, "Graph file")->required();

    auto* assert_cmd = app.add_subcommand("assert", "Assert a triple");
    std::string a_subject, a_predicate, a_object;
    assert_cmd->add_option("subject", a_subject)->required();
    assert_cmd->add_option("predicate", a_predicate)->required();
    assert_cmd->add_option("object", a_object)->required();

    auto* explain = app.add_subcommand("explain", "Provenance tree of a triple");
    std::string e_subject, e_predicate, e_object;
    explain->add_option("subject", e_subject)->required();
    explain->add_option("predicate", e_predicate)->required();
    explain->add_option("object", e_object)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*rules_check) {
            RulesPtr r = load_rules(rules_file);
            if (rules_print) {
                OwnedText text;
                check(gc_rules_print(r.get(), &text.ptr));
                std::cout << text.str();
            } else {
                std::cout << "ok: " << gc_rules_precondition_count(r.get()) << " precondition set(s), "
                          << gc_rules_cause_rule_count(r.get()) << " cause rule(s)\n";
            }
            return 0;
        }

        Workspace ws(resolve_workspace(workspace_flag));

        if (*ingest_storm || *ingest_obs) {
            gc_ingest_options opts{ingest_strict ? 1 : 0, ingest_prefix.c_str()};
            OwnedText report, report_json;
            if (*ingest_storm)
                check(gc_ingest_storm_file(ws.graph(), ingest_file.c_str(), &opts, &report.ptr, &report_json.ptr));
            else
                check(gc_ingest_observations_file(ws.graph(), ingest_file.c_str(), &opts, &report.ptr,
                                                  &report_json.ptr));
            ws.save();
            std::cout << (ingest_json ? report_json.str() : report.str());
        } else if (*rules_use) {
            load_rules(rules_file);
            ws.set_rules_path(rules_file);
            ws.save();
            std::cout << "rules: " << ws.rules_path() << '\n';
        } else if (*infer) {
            gc_engine_config cfg;
            gc_engine_config_default(&cfg);
            std::int64_t gap = 0;
            check(gc_parse_duration(max_gap.c_str(), &gap));
            cfg.max_gap_seconds = gap;
            cfg.require_spatial_overlap = no_spatial ? 0 : 1;
            if (!infer_rules.empty()) ws.set_rules_path(infer_rules);
            RulesPtr r(nullptr, gc_rules_destroy);
            if (!ws.rules_path().empty()) r = load_rules(ws.rules_path());
            std::size_t derived = 0, iterations = 0;
            OwnedText diagnostics;
            check(gc_infer(ws.graph(), r.get(), &cfg, &derived, &iterations, &diagnostics.ptr));
            ws.save();
            std::cout << "derived " << derived << " triple(s) in " << iterations << " iteration(s)\n"
                      << diagnostics.str();
        } else if (*why) {
            RulesPtr r(nullptr, gc_rules_destroy);
            if (!ws.rules_path().empty() && fs::exists(ws.rules_path())) r = load_rules(ws.rules_path());
            OwnedText out;
            check(gc_graph_why(ws.graph(), r.get(), why_event.c_str(), why_depth, parse_format(why_format),
                               &out.ptr));
            std::cout << out.str();
        } else if (*query) {
            OwnedText out;
            check(gc_graph_query(ws.graph(), pattern.c_str(), &out.ptr, nullptr));
            std::cout << out.str();
        } else if (*exp) {
            OwnedText out;
            check(gc_graph_export(ws.graph(), parse_format(export_format), &out.ptr));
            std::cout << out.str();
        } else if (*validate) {
            OwnedText report;
            std::size_t errors = 0;
            check(gc_graph_validate(ws.graph(), &report.ptr, &errors));
            std::cout << report.str() << (errors ? "invalid\n" : "ok\n");
            return errors ? 1 : 0;
        } else if (*import) {
            std::string text = read_file(import_file);
            gc_graph* g = nullptr;
            auto first = text.find_first_not_of(" \t\r\n");
            if (first != std::string::npos && text[first] == '{')
                check(gc_graph_import_json(text.data(), text.size(), &g));
            else
                check(gc_graph_load_text(text.data(), text.size(), &g));
            ws.replace(GraphPtr(g, gc_graph_destroy));
            ws.save();
            std::cout << "imported " << gc_graph_entity_count(ws.graph()) << " entities, "
                      << gc_graph_triple_count(ws.graph()) << " triples\n";
        } else if (*assert_cmd) {
            check(gc_graph_assert(ws.graph(), a_subject.c_str(), a_predicate.c_str(), a_object.c_str()));
            ws.save();
        } else if (*explain) {
            OwnedText out;
            check(gc_graph_explain(ws.graph(), e_subject.c_str(), e_predicate.c_str(), e_object.c_str(), &out.ptr));
            std::cout << out.str();
        }
    } catch (const Failure& f) {
        return f.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error[Internal]: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
