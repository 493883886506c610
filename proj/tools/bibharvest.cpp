// Operator entry point: harvest, extract, report, prompt, fixtures.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime or sink error,
// 4 stopped by the consecutive-error threshold.

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bibharvest/config.hpp"
#include "bibharvest/crawl.hpp"
#include "bibharvest/extract.hpp"
#include "bibharvest/metrics.hpp"
#include "bibharvest/mockcat.hpp"
#include "bibharvest/prompt.hpp"
#include "bibharvest/store.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitErrorThreshold = 4;

std::atomic<bool> g_interrupted{false};

void on_signal(int) { g_interrupted = true; }

void install_signal_handlers() {
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + path);
}

void print_summary(const bibharvest::RunSummary& s) {
    std::cout << "attempted:          " << s.attempted << "\n"
              << "persisted:          " << s.persisted << "\n"
              << "not_found:          " << s.not_found << "\n"
              << "errors:             " << s.errors << "\n"
              << "skipped_null_title: " << s.skipped_null_title << "\n"
              << "started_at:         " << bibharvest::format_iso8601(s.started_at) << "\n"
              << "ended_at:           " << bibharvest::format_iso8601(s.ended_at) << "\n"
              << "stop_reason:        " << bibharvest::to_string(s.stop_reason) << "\n";
}

struct GlobalOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

bibharvest::ToolConfig require_config(const GlobalOptions& g) {
    if (g.config_path.empty())
        throw bibharvest::ConfigError("--config", "this command needs a configuration file");
    return bibharvest::load_tool_config(g.config_path, g.overrides);
}

int cmd_harvest(const GlobalOptions& g, bool resume) {
    bibharvest::ToolConfig cfg = require_config(g);
    cfg.crawl.validate();
    bibharvest::Dataset dataset(cfg.store.dataset_path, cfg.store.run_log_path);

    bibharvest::CrawlConfig crawl = cfg.crawl;
    if (resume) {
        if (auto last = dataset.last_attempted_id()) {
            crawl.start_id = std::max(crawl.start_id, *last + 1);
            if (!g.quiet)
                std::cout << "resuming after id " << *last << "\n";
        }
    }
    if (crawl.start_id > crawl.end_id) {
        std::cout << "nothing to do: run log already covers the id range\n";
        bibharvest::RunSummary done;
        done.started_at = done.ended_at = bibharvest::now_utc();
        print_summary(done);
        return kExitOk;
    }

    install_signal_handlers();
    bibharvest::CrawlHooks hooks;
    hooks.abort = &g_interrupted;
    if (!g.quiet) {
        hooks.on_attempt = [](const bibharvest::RunLogEntry& e) {
            std::cout << e.id << "  " << bibharvest::to_string(e.status)
                      << (e.persisted ? "  persisted" : "") << "\n";
        };
    }
    bibharvest::RunSummary summary =
        bibharvest::run_crawl(crawl, cfg.effective_label_map(), dataset, dataset, hooks);
    print_summary(summary);
    if (summary.sink_error) {
        std::cerr << "error: sink failure: " << *summary.sink_error << "\n";
        return kExitRuntime;
    }
    return summary.stop_reason == bibharvest::StopReason::ErrorThreshold ? kExitErrorThreshold
                                                                         : kExitOk;
}

int cmd_extract(const GlobalOptions& g, const std::string& target) {
    bibharvest::ToolConfig cfg;
    if (!g.config_path.empty()) cfg = bibharvest::load_tool_config(g.config_path, g.overrides);

    std::string html;
    if (target.rfind("http://", 0) == 0 || target.rfind("https://", 0) == 0) {
        auto outcome = bibharvest::fetch(target, cfg.crawl);
        if (outcome.status != bibharvest::FetchStatus::Ok) {
            std::cerr << "error: fetch failed ("
                      << (outcome.http_status ? "HTTP " + std::to_string(*outcome.http_status)
                                              : std::string("no response"))
                      << ")\n";
            return kExitRuntime;
        }
        html = std::move(*outcome.body);
    } else {
        try {
            html = read_file(target);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitRuntime;
        }
    }

    bibharvest::ExtractionResult result;
    try {
        result = bibharvest::extract_record(html, target, cfg.effective_label_map());
    } catch (const bibharvest::UnparseableInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }

    std::cout << "url: " << result.record.url << "\n";
    int printed = 0;
    for (bibharvest::FieldKey key : bibharvest::default_field_set()) {
        const auto& value = bibharvest::field(result.record, key);
        if (!value) continue;
        std::cout << bibharvest::field_name(key) << ": " << *value << "\n";
        ++printed;
    }
    if (printed == 0) std::cout << "no fields extracted\n";
    std::cout << bibharvest::record_to_json(result.record).dump(2) << "\n";
    if (!result.unknown_labels.empty() && !g.quiet) {
        std::cerr << "unknown labels:";
        for (const auto& label : result.unknown_labels) std::cerr << " '" << label << "'";
        std::cerr << "\n";
    }
    return kExitOk;
}

int cmd_report(const GlobalOptions& g, std::string run_log_path, std::string dataset_path,
               const std::string& json_out, const std::string& csv_out) {
    bibharvest::ToolConfig cfg = require_config(g);
    if (run_log_path.empty()) run_log_path = cfg.store.run_log_path;
    if (dataset_path.empty()) dataset_path = cfg.store.dataset_path;

    std::vector<bibharvest::RunLogEntry> log;
    try {
        log = bibharvest::parse_run_log(read_file(run_log_path));
    } catch (const bibharvest::RunLogParseError& e) {
        std::cerr << "error: " << run_log_path << ": " << e.what() << "\n";
        return kExitRuntime;
    }
    auto records = bibharvest::Dataset::load_records(dataset_path);

    auto anomalies = bibharvest::detect_anomalies(log, cfg.effective_gap_threshold(),
                                                  cfg.metrics.annotated_anomalies);
    bibharvest::RunMetrics metrics =
        bibharvest::compute_metrics(log, records, cfg.crawl.pause, anomalies,
                                    cfg.metrics.slow_threshold, cfg.effective_field_set());
    std::cout << bibharvest::render_report(metrics);
    write_file(json_out, bibharvest::metrics_to_json(metrics).dump(2) + "\n");
    if (!g.quiet) std::cout << "\nwrote " << json_out << "\n";
    if (!csv_out.empty()) {
        write_file(csv_out, bibharvest::export_csv(records));
        if (!g.quiet) std::cout << "wrote " << csv_out << "\n";
    }
    return kExitOk;
}

int cmd_prompt(const GlobalOptions& g, const std::string& name_or_path,
               const std::string& out_path) {
    bibharvest::PromptSpec spec;
    if (std::filesystem::exists(name_or_path)) {
        spec = bibharvest::prompt_spec_from_json(nlohmann::json::parse(read_file(name_or_path)));
    } else {
        bibharvest::ToolConfig cfg = require_config(g);
        auto it = cfg.prompt_specs.find(name_or_path);
        if (it == cfg.prompt_specs.end())
            throw bibharvest::ConfigError("prompt_specs." + name_or_path,
                                          "no such prompt spec (and no such file)");
        spec = it->second;
    }
    auto violations = bibharvest::validate_spec(spec);
    if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "invalid prompt spec: " << v << "\n";
        return kExitConfig;
    }
    std::string text = bibharvest::render_prompt(spec);
    if (out_path.empty()) std::cout << text;
    else write_file(out_path, text);
    return kExitOk;
}

int cmd_fixtures(const GlobalOptions& g, const std::string& mode,
                 const std::string& scenario_path, const std::string& out_dir, int port) {
    auto scenario =
        bibharvest::scenario_from_json(nlohmann::json::parse(read_file(scenario_path)));
    if (g.seed) scenario.seed = *g.seed;
    auto [pages, manifest] = bibharvest::generate_pages(scenario);

    if (mode == "generate") {
        bibharvest::write_fixtures(pages, manifest, scenario, out_dir);
        std::cout << "wrote " << pages.size() << " pages and manifest.json to " << out_dir
                  << "\n";
        return kExitOk;
    }
    bibharvest::MockServer server(std::move(pages), scenario, port);
    std::cout << "serving " << manifest.expected_records + manifest.expected_skipped_title
              << " pages at " << server.url_template() << "\n"
              << "press Ctrl-C to stop\n";
    install_signal_handlers();
    while (!g_interrupted.load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bibharvest: bibliographic catalogue harvesting toolkit"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--config", global.config_path, "Path to the JSON configuration file");
    app.add_option("--set", global.overrides,
                   "Override a configuration key by dotted path, e.g. crawl.pause=0")
        ->type_name("KEY=VALUE");
    app.add_option("--seed", global.seed, "Override the scenario seed (fixtures)");
    app.add_flag("--quiet", global.quiet, "Suppress progress output");

    auto* harvest = app.add_subcommand("harvest", "Run the crawl loop and persist records");
    bool resume = false;
    harvest->add_flag("--resume", resume,
                      "Continue after the last attempted id in the existing run log");

    auto* extract =
        app.add_subcommand("extract", "Fetch or read one record page and print its fields");
    std::string extract_target;
    extract->add_option("target", extract_target, "URL or HTML file path")->required();

    auto* report = app.add_subcommand("report", "Compute and render run metrics");
    std::string report_log, report_dataset, report_json = "run_metrics.json", report_csv;
    report->add_option("--run-log", report_log, "Run log path (default: store.run_log_path)");
    report->add_option("--dataset", report_dataset, "Dataset path (default: store.dataset_path)");
    report->add_option("--json-out", report_json, "Machine-readable report path");
    report->add_option("--csv-out", report_csv, "Also export the dataset as CSV to this path");

    auto* prompt = app.add_subcommand("prompt", "Render a structured prompt spec to text");
    std::string prompt_spec, prompt_out;
    prompt->add_option("spec", prompt_spec, "Spec name from the config, or a spec file path")
        ->required();
    prompt->add_option("--out", prompt_out, "Write the prompt to a file instead of stdout");

    auto* fixtures = app.add_subcommand("fixtures", "Generate or serve a synthetic catalogue");
    std::string fixtures_mode, scenario_path, fixtures_out = "fixtures";
    int fixtures_port = 0;
    fixtures->add_option("mode", fixtures_mode, "generate | serve")
        ->check(CLI::IsMember({"generate", "serve"}))
        ->required();
    fixtures->add_option("--scenario", scenario_path, "Scenario JSON path")->required();
    fixtures->add_option("--out", fixtures_out, "Output directory for generate");
    fixtures->add_option("--port", fixtures_port, "Port for serve (default: any free port)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (harvest->parsed()) return cmd_harvest(global, resume);
        if (extract->parsed()) return cmd_extract(global, extract_target);
        if (report->parsed())
            return cmd_report(global, report_log, report_dataset, report_json, report_csv);
        if (prompt->parsed()) return cmd_prompt(global, prompt_spec, prompt_out);
        if (fixtures->parsed())
            return cmd_fixtures(global, fixtures_mode, scenario_path, fixtures_out,
                                fixtures_port);
    } catch (const bibharvest::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const bibharvest::ConfigInvalid& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const bibharvest::InvalidSpec& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
