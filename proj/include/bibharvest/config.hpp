#pragma once

// The operator-facing configuration file: JSON, keys named exactly as the
// domain type fields, durations as integer milliseconds. Command-line
// overrides address keys by dotted path.

#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bibharvest/crawl.hpp"
#include "bibharvest/label_map.hpp"
#include "bibharvest/metrics.hpp"
#include "bibharvest/prompt.hpp"
#include "bibharvest/record.hpp"

namespace bibharvest {

struct ConfigError : std::runtime_error {
    std::string path;  // dotted field path
    ConfigError(std::string field_path, const std::string& what)
        : std::runtime_error(field_path + ": " + what), path(std::move(field_path)) {}
};

struct StoreConfig {
    std::string dataset_path = "harvest.db";
    std::string run_log_path = "run_log.ndjson";
};

struct MetricsConfig {
    std::optional<Millis> gap_threshold;  // absent: derived from the crawl config
    Millis slow_threshold{20000};
    std::vector<FieldKey> field_set;  // empty: the default 12-field set
    std::vector<AnomalyWindow> annotated_anomalies;  // operator-known outage windows
};

struct ToolConfig {
    CrawlConfig crawl;
    std::optional<LabelMap> label_map;
    StoreConfig store;
    MetricsConfig metrics;
    std::map<std::string, PromptSpec> prompt_specs;

    const LabelMap& effective_label_map() const {
        static const LabelMap defaults = LabelMap::default_spanish();
        return label_map ? *label_map : defaults;
    }

    // Normal inter-record gaps are on the order of pause + latency; anything
    // twenty times (pause + timeout) apart is an outage, not traffic.
    Millis effective_gap_threshold() const {
        if (metrics.gap_threshold) return *metrics.gap_threshold;
        return Millis(20 * (crawl.pause.count() + crawl.request_timeout.count()));
    }

    std::span<const FieldKey> effective_field_set() const {
        if (metrics.field_set.empty()) return default_field_set();
        return metrics.field_set;
    }
};

namespace config_detail {

inline long long require_int(const nlohmann::json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
    return j.get<long long>();
}

inline std::string require_string(const nlohmann::json& j, const std::string& path) {
    if (!j.is_string()) throw ConfigError(path, "expected a string");
    return j.get<std::string>();
}

}  // namespace config_detail

inline CrawlConfig crawl_config_from_json(const nlohmann::json& j) {
    using config_detail::require_int;
    using config_detail::require_string;
    CrawlConfig c;
    if (j.contains("url_template")) c.url_template = require_string(j.at("url_template"), "crawl.url_template");
    if (j.contains("start_id")) c.start_id = require_int(j.at("start_id"), "crawl.start_id");
    if (j.contains("end_id")) c.end_id = require_int(j.at("end_id"), "crawl.end_id");
    if (j.contains("pad_width"))
        c.pad_width = static_cast<int>(require_int(j.at("pad_width"), "crawl.pad_width"));
    if (j.contains("pause")) c.pause = Millis(require_int(j.at("pause"), "crawl.pause"));
    if (j.contains("pause_scope")) {
        auto scope = pause_scope_from_string(require_string(j.at("pause_scope"), "crawl.pause_scope"));
        if (!scope)
            throw ConfigError("crawl.pause_scope", "expected 'after_insert' or 'every_request'");
        c.pause_scope = *scope;
    }
    if (j.contains("target_count") && !j.at("target_count").is_null())
        c.target_count = require_int(j.at("target_count"), "crawl.target_count");
    if (j.contains("request_timeout"))
        c.request_timeout = Millis(require_int(j.at("request_timeout"), "crawl.request_timeout"));
    if (j.contains("max_consecutive_errors"))
        c.max_consecutive_errors =
            require_int(j.at("max_consecutive_errors"), "crawl.max_consecutive_errors");
    if (j.contains("follow_redirects")) {
        if (!j.at("follow_redirects").is_boolean())
            throw ConfigError("crawl.follow_redirects", "expected a boolean");
        c.follow_redirects = j.at("follow_redirects").get<bool>();
    }
    if (j.contains("user_agent")) c.user_agent = require_string(j.at("user_agent"), "crawl.user_agent");
    return c;
}

inline LabelMap label_map_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ConfigError("label_map", "expected an array of {alias, field}");
    LabelMap map;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& e = j.at(i);
        const std::string where = "label_map[" + std::to_string(i) + "]";
        if (!e.contains("alias") || !e.contains("field"))
            throw ConfigError(where, "needs alias and field");
        auto key = field_key_from_name(e.at("field").get<std::string>());
        if (!key) throw ConfigError(where + ".field",
                                    "unknown field '" + e.at("field").get<std::string>() + "'");
        try {
            map.add(e.at("alias").get<std::string>(), *key);
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(where + ".alias", ex.what());
        }
    }
    return map;
}

inline ToolConfig tool_config_from_json(const nlohmann::json& j) {
    ToolConfig cfg;
    if (j.contains("crawl")) cfg.crawl = crawl_config_from_json(j.at("crawl"));
    if (j.contains("label_map") && !j.at("label_map").is_null())
        cfg.label_map = label_map_from_json(j.at("label_map"));
    if (j.contains("store")) {
        const auto& s = j.at("store");
        if (s.contains("dataset_path"))
            cfg.store.dataset_path =
                config_detail::require_string(s.at("dataset_path"), "store.dataset_path");
        if (s.contains("run_log_path"))
            cfg.store.run_log_path =
                config_detail::require_string(s.at("run_log_path"), "store.run_log_path");
    }
    if (cfg.store.dataset_path.empty()) throw ConfigError("store.dataset_path", "must not be empty");
    if (cfg.store.run_log_path.empty()) throw ConfigError("store.run_log_path", "must not be empty");
    if (j.contains("metrics")) {
        const auto& m = j.at("metrics");
        if (m.contains("gap_threshold") && !m.at("gap_threshold").is_null())
            cfg.metrics.gap_threshold =
                Millis(config_detail::require_int(m.at("gap_threshold"), "metrics.gap_threshold"));
        if (m.contains("slow_threshold"))
            cfg.metrics.slow_threshold =
                Millis(config_detail::require_int(m.at("slow_threshold"), "metrics.slow_threshold"));
        if (m.contains("field_set")) {
            if (!m.at("field_set").is_array())
                throw ConfigError("metrics.field_set", "expected an array of field names");
            for (const auto& name : m.at("field_set")) {
                auto key = field_key_from_name(name.get<std::string>());
                if (!key)
                    throw ConfigError("metrics.field_set",
                                      "unknown field '" + name.get<std::string>() + "'");
                cfg.metrics.field_set.push_back(*key);
            }
            if (cfg.metrics.field_set.empty())
                throw ConfigError("metrics.field_set", "must not be empty");
        }
        if (m.contains("annotated_anomalies")) {
            for (std::size_t i = 0; i < m.at("annotated_anomalies").size(); ++i) {
                const auto& w = m.at("annotated_anomalies").at(i);
                const std::string where =
                    "metrics.annotated_anomalies[" + std::to_string(i) + "]";
                auto start = parse_iso8601(w.value("start_ts", std::string{}));
                auto end = parse_iso8601(w.value("end_ts", std::string{}));
                if (!start || !end)
                    throw ConfigError(where, "needs ISO-8601 start_ts and end_ts");
                if (*end <= *start) throw ConfigError(where, "end_ts must follow start_ts");
                cfg.metrics.annotated_anomalies.push_back(
                    {*start, *end, *end - *start, AnomalyCause::OperatorAnnotated});
            }
        }
    }
    if (j.contains("prompt_specs")) {
        for (const auto& [name, spec] : j.at("prompt_specs").items()) {
            try {
                cfg.prompt_specs.emplace(name, prompt_spec_from_json(spec));
            } catch (const std::exception& e) {
                throw ConfigError("prompt_specs." + name, e.what());
            }
        }
    }
    return cfg;
}

// "a.b.c=value" edits applied to the raw document before parsing. Values
// parse as JSON when they can, otherwise as plain strings.
inline nlohmann::json apply_overrides(nlohmann::json doc,
                                      std::span<const std::string> overrides) {
    for (const auto& assignment : overrides) {
        std::size_t eq = assignment.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError(assignment, "override must look like key.path=value");
        std::string dotted = assignment.substr(0, eq);
        std::string value = assignment.substr(eq + 1);
        std::string pointer;
        std::size_t start = 0;
        while (start <= dotted.size()) {
            std::size_t dot = dotted.find('.', start);
            std::string part =
                dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
            if (part.empty()) throw ConfigError(dotted, "empty path segment");
            pointer += "/" + part;
            if (dot == std::string::npos) break;
            start = dot + 1;
        }
        nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
        if (parsed.is_discarded()) parsed = value;
        doc[nlohmann::json::json_pointer(pointer)] = parsed;
    }
    return doc;
}

inline ToolConfig load_tool_config(const std::string& path,
                                   std::span<const std::string> overrides = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path, "cannot open configuration file");
    std::ostringstream ss;
    ss << in.rdbuf();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(ss.str());
    } catch (const std::exception& e) {
        throw ConfigError(path, std::string("invalid JSON: ") + e.what());
    }
    doc = apply_overrides(std::move(doc), overrides);
    return tool_config_from_json(doc);
}

}  // namespace bibharvest
