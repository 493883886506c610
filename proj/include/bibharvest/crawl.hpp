#pragma once

// ID-enumerated crawling: format the record number, build the URL, fetch one
// page at a time, classify the outcome, extract, persist, pause. Strictly
// sequential by design; politeness pauses are sleeps at the contract points.

#include <atomic>
#include <chrono>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>

#include <httplib.h>

#include "bibharvest/extract.hpp"
#include "bibharvest/run_log.hpp"
#include "bibharvest/time_util.hpp"

namespace bibharvest {

struct ConfigInvalid : std::runtime_error {
    std::string field;
    ConfigInvalid(std::string field_path, const std::string& what)
        : std::runtime_error(field_path + ": " + what), field(std::move(field_path)) {}
};

struct Overflow : std::runtime_error {
    explicit Overflow(const std::string& what) : std::runtime_error(what) {}
};

struct BadTemplate : std::runtime_error {
    explicit BadTemplate(const std::string& what) : std::runtime_error(what) {}
};

enum class PauseScope { AfterInsert, EveryRequest };

inline std::string_view to_string(PauseScope s) {
    return s == PauseScope::AfterInsert ? "after_insert" : "every_request";
}

inline std::optional<PauseScope> pause_scope_from_string(std::string_view s) {
    if (s == "after_insert") return PauseScope::AfterInsert;
    if (s == "every_request") return PauseScope::EveryRequest;
    return std::nullopt;
}

enum class StopReason { EndIdReached, TargetCountReached, ErrorThreshold, OperatorAbort };

inline std::string_view to_string(StopReason r) {
    switch (r) {
        case StopReason::EndIdReached: return "end_id_reached";
        case StopReason::TargetCountReached: return "target_count_reached";
        case StopReason::ErrorThreshold: return "error_threshold";
        case StopReason::OperatorAbort: return "operator_abort";
    }
    return "operator_abort";
}

inline constexpr std::string_view kNumberPlaceholder = "{number}";

struct CrawlConfig {
    std::string url_template;
    long long start_id = 1;
    long long end_id = 1;
    int pad_width = 10;
    Millis pause{3000};
    PauseScope pause_scope = PauseScope::AfterInsert;
    std::optional<long long> target_count;
    Millis request_timeout{30000};
    long long max_consecutive_errors = 100;
    bool follow_redirects = true;
    std::string user_agent = "bibharvest/0.1";

    void validate() const {
        std::size_t first = url_template.find(kNumberPlaceholder);
        if (first == std::string::npos)
            throw ConfigInvalid("crawl.url_template", "missing {number} placeholder");
        if (url_template.find(kNumberPlaceholder, first + 1) != std::string::npos)
            throw ConfigInvalid("crawl.url_template", "more than one {number} placeholder");
        if (start_id < 0) throw ConfigInvalid("crawl.start_id", "must be non-negative");
        if (end_id < 0) throw ConfigInvalid("crawl.end_id", "must be non-negative");
        if (start_id > end_id) throw ConfigInvalid("crawl.start_id", "exceeds end_id");
        if (pad_width < 1 || pad_width > 18)
            throw ConfigInvalid("crawl.pad_width", "must be between 1 and 18");
        long long limit = 1;
        for (int i = 0; i < pad_width; ++i) limit *= 10;
        if (end_id >= limit)
            throw ConfigInvalid("crawl.end_id", "does not fit in pad_width digits");
        if (pause.count() < 0) throw ConfigInvalid("crawl.pause", "must be non-negative");
        if (request_timeout.count() <= 0)
            throw ConfigInvalid("crawl.request_timeout", "must be positive");
        if (max_consecutive_errors < 1)
            throw ConfigInvalid("crawl.max_consecutive_errors", "must be positive");
        if (target_count && *target_count < 1)
            throw ConfigInvalid("crawl.target_count", "must be positive");
    }
};

// Decimal rendering of n, left-padded with '0' to exactly `width` characters.
inline std::string format_record_number(long long n, int width) {
    if (n < 0) throw Overflow("format_record_number: negative id");
    std::string digits = std::to_string(n);
    if (static_cast<int>(digits.size()) > width)
        throw Overflow("format_record_number: " + digits + " has more than " +
                       std::to_string(width) + " digits");
    return std::string(static_cast<std::size_t>(width) - digits.size(), '0') + digits;
}

inline std::string build_url(std::string_view url_template, std::string_view number) {
    std::size_t first = url_template.find(kNumberPlaceholder);
    if (first == std::string_view::npos)
        throw BadTemplate("url template has no {number} placeholder");
    if (url_template.find(kNumberPlaceholder, first + 1) != std::string_view::npos)
        throw BadTemplate("url template has more than one {number} placeholder");
    std::string out(url_template);
    out.replace(first, kNumberPlaceholder.size(), number);
    return out;
}

struct FetchOutcome {
    long long id = 0;
    std::string url;
    FetchStatus status = FetchStatus::Error;
    std::optional<int> http_status;
    Millis latency{0};
    Timestamp fetched_at{};
    std::optional<std::string> body;  // present iff status == Ok
};

namespace crawl_detail {

// "scheme://host[:port]/path?query" -> {scheme://host:port, /path?query}.
// Returns an empty base for anything that is not an absolute http(s) URL.
inline std::pair<std::string, std::string> split_url(std::string_view url) {
    std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos) return {};
    std::string_view scheme = url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") return {};
    std::size_t authority_start = scheme_end + 3;
    std::size_t path_start = url.find('/', authority_start);
    if (path_start == authority_start) return {};  // empty host
    if (path_start == std::string_view::npos) {
        if (authority_start == url.size()) return {};
        return {std::string(url), "/"};
    }
    return {std::string(url.substr(0, path_start)), std::string(url.substr(path_start))};
}

}  // namespace crawl_detail

// One GET. Never throws: every failure mode is encoded in status == Error
// with http_status absent (transport failure) or set (non-2xx, non-404).
inline FetchOutcome fetch(const std::string& url, const CrawlConfig& config) {
    FetchOutcome out;
    out.url = url;
    const auto started = std::chrono::steady_clock::now();
    auto finish = [&] {
        out.latency = std::chrono::duration_cast<Millis>(std::chrono::steady_clock::now() -
                                                         started);
        out.fetched_at = now_utc();
    };
    auto [base, path] = crawl_detail::split_url(url);
    if (base.empty()) {
        finish();
        return out;
    }
    httplib::Client client(base);
    client.set_follow_location(config.follow_redirects);
    client.set_connection_timeout(config.request_timeout);
    client.set_read_timeout(config.request_timeout);
    client.set_write_timeout(config.request_timeout);
    client.set_default_headers({{"User-Agent", config.user_agent}});
    auto res = client.Get(path);
    finish();
    if (!res) return out;
    out.http_status = res->status;
    if (res->status >= 200 && res->status < 300) {
        out.status = FetchStatus::Ok;
        out.body = std::move(res->body);
    } else if (res->status == 404) {
        out.status = FetchStatus::NotFound;
    }
    return out;
}

struct RunSummary {
    long long attempted = 0;
    long long persisted = 0;
    long long not_found = 0;
    long long errors = 0;
    long long skipped_null_title = 0;
    Timestamp started_at{};
    Timestamp ended_at{};
    StopReason stop_reason = StopReason::EndIdReached;
    std::optional<std::string> sink_error;  // set when a sink failure aborted the run
};

struct CrawlHooks {
    const std::atomic<bool>* abort = nullptr;               // checked between records
    std::function<void(const RunLogEntry&)> on_attempt;     // after the log append
};

// Iterates start_id..end_id in order, one log entry per attempt. 404s are
// normal catalogue gaps: they reset the consecutive-error counter rather
// than feeding it, which keeps the threshold an outage detector.
inline RunSummary run_crawl(const CrawlConfig& config, const LabelMap& map, RecordSink& records,
                            RunLogSink& log, const CrawlHooks& hooks = {}) {
    config.validate();
    RunSummary summary;
    summary.started_at = now_utc();
    long long consecutive_errors = 0;

    for (long long id = config.start_id; id <= config.end_id; ++id) {
        if (hooks.abort && hooks.abort->load()) {
            summary.stop_reason = StopReason::OperatorAbort;
            break;
        }
        const std::string url =
            build_url(config.url_template, format_record_number(id, config.pad_width));
        FetchOutcome outcome = fetch(url, config);
        outcome.id = id;

        RunLogEntry entry;
        entry.ts = outcome.fetched_at;
        entry.id = id;
        entry.url = url;
        entry.status = outcome.status;
        entry.http_status = outcome.http_status;
        entry.latency_ms = outcome.latency.count();

        bool inserted = false;
        bool skipped = false;
        if (outcome.status == FetchStatus::Ok) {
            std::optional<CatalogRecord> record;
            try {
                record = extract_record(*outcome.body, url, map).record;
            } catch (const UnparseableInput&) {
                // a 2xx page with no markup extracts nothing: title-less
            }
            if (record) entry.fields_present = fields_present_count(*record);
            if (record && is_persistable(*record)) {
                try {
                    records.insert(id, *record);
                } catch (const std::exception& e) {
                    summary.sink_error = e.what();
                    summary.stop_reason = StopReason::OperatorAbort;
                    break;
                }
                inserted = true;
                entry.persisted = true;
            } else {
                skipped = true;
            }
        }
        try {
            log.append(entry);
        } catch (const std::exception& e) {
            summary.sink_error = e.what();
            summary.stop_reason = StopReason::OperatorAbort;
            break;
        }

        ++summary.attempted;
        if (inserted) ++summary.persisted;
        else if (skipped) ++summary.skipped_null_title;
        else if (outcome.status == FetchStatus::NotFound) ++summary.not_found;
        else ++summary.errors;
        consecutive_errors = (outcome.status == FetchStatus::Error) ? consecutive_errors + 1 : 0;

        if (hooks.on_attempt) hooks.on_attempt(entry);

        if (config.target_count && summary.persisted >= *config.target_count) {
            summary.stop_reason = StopReason::TargetCountReached;
            break;
        }
        if (consecutive_errors >= config.max_consecutive_errors) {
            summary.stop_reason = StopReason::ErrorThreshold;
            break;
        }
        if (id == config.end_id) break;  // no pause after the final attempt

        if (config.pause.count() > 0 &&
            (config.pause_scope == PauseScope::EveryRequest || inserted))
            std::this_thread::sleep_for(config.pause);
    }
    summary.ended_at = now_utc();
    return summary;
}

}  // namespace bibharvest
