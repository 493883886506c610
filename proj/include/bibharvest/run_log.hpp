#pragma once

// The append-only run log: one entry per fetch attempt, newline-delimited
// JSON on disk, plus the sink interfaces the crawl loop writes through.

#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bibharvest/record.hpp"
#include "bibharvest/time_util.hpp"

namespace bibharvest {

enum class FetchStatus { Ok, NotFound, Error };

inline std::string_view to_string(FetchStatus s) {
    switch (s) {
        case FetchStatus::Ok: return "ok";
        case FetchStatus::NotFound: return "not_found";
        case FetchStatus::Error: return "error";
    }
    return "error";
}

inline std::optional<FetchStatus> fetch_status_from_string(std::string_view s) {
    if (s == "ok") return FetchStatus::Ok;
    if (s == "not_found") return FetchStatus::NotFound;
    if (s == "error") return FetchStatus::Error;
    return std::nullopt;
}

struct RunLogEntry {
    Timestamp ts{};
    long long id = 0;
    std::string url;
    FetchStatus status = FetchStatus::Error;
    std::optional<int> http_status;
    long long latency_ms = 0;
    bool persisted = false;
    int fields_present = 0;

    bool operator==(const RunLogEntry&) const = default;
};

struct DuplicateId : std::runtime_error {
    explicit DuplicateId(long long id)
        : std::runtime_error("duplicate record id " + std::to_string(id)) {}
};

struct NonMonotoneTimestamp : std::runtime_error {
    NonMonotoneTimestamp()
        : std::runtime_error("run log entry timestamp precedes its predecessor") {}
};

struct StorageFailure : std::runtime_error {
    explicit StorageFailure(const std::string& what) : std::runtime_error(what) {}
};

struct RunLogParseError : std::runtime_error {
    std::size_t line;
    RunLogParseError(std::size_t line, const std::string& what)
        : std::runtime_error("run log line " + std::to_string(line) + ": " + what), line(line) {}
};

// Keys in declared field order; http_status is null when absent.
inline nlohmann::ordered_json to_json(const RunLogEntry& e) {
    nlohmann::ordered_json j;
    j["ts"] = format_iso8601(e.ts);
    j["id"] = e.id;
    j["url"] = e.url;
    j["status"] = std::string(to_string(e.status));
    if (e.http_status) j["http_status"] = *e.http_status;
    else j["http_status"] = nullptr;
    j["latency_ms"] = e.latency_ms;
    j["persisted"] = e.persisted;
    j["fields_present"] = e.fields_present;
    return j;
}

inline RunLogEntry run_log_entry_from_json(const nlohmann::json& j) {
    RunLogEntry e;
    auto ts = parse_iso8601(j.at("ts").get<std::string>());
    if (!ts) throw std::runtime_error("bad ts: " + j.at("ts").get<std::string>());
    e.ts = *ts;
    e.id = j.at("id").get<long long>();
    e.url = j.at("url").get<std::string>();
    auto status = fetch_status_from_string(j.at("status").get<std::string>());
    if (!status) throw std::runtime_error("bad status: " + j.at("status").get<std::string>());
    e.status = *status;
    if (j.contains("http_status") && !j.at("http_status").is_null())
        e.http_status = j.at("http_status").get<int>();
    e.latency_ms = j.at("latency_ms").get<long long>();
    e.persisted = j.at("persisted").get<bool>();
    e.fields_present = j.at("fields_present").get<int>();
    return e;
}

inline std::string run_log_line(const RunLogEntry& e) { return to_json(e).dump(); }

// One object per line, UTF-8, LF endings.
inline std::string export_run_log(std::span<const RunLogEntry> entries) {
    std::string out;
    for (const auto& e : entries) {
        out += run_log_line(e);
        out += '\n';
    }
    return out;
}

inline std::vector<RunLogEntry> parse_run_log(std::string_view text) {
    std::vector<RunLogEntry> out;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                               : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        try {
            out.push_back(run_log_entry_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw RunLogParseError(line_no, e.what());
        }
    }
    return out;
}

inline std::optional<long long> last_attempted_id(std::span<const RunLogEntry> entries) {
    if (entries.empty()) return std::nullopt;
    return entries.back().id;
}

// Sinks the crawl loop writes through. Implementations must accept appends
// from a single writer context; they need not be concurrently writable.
struct RecordSink {
    virtual ~RecordSink() = default;
    virtual void insert(long long id, const CatalogRecord& record) = 0;
};

struct RunLogSink {
    virtual ~RunLogSink() = default;
    virtual void append(const RunLogEntry& entry) = 0;
};

// In-memory sinks for tests and pipelines that post-process before persisting.
class MemoryRecordSink : public RecordSink {
public:
    std::vector<std::pair<long long, CatalogRecord>> records;

    void insert(long long id, const CatalogRecord& record) override {
        if (!is_persistable(record))
            throw std::invalid_argument("insert: record without a title is not persistable");
        if (!ids_.insert(id).second) throw DuplicateId(id);
        records.emplace_back(id, record);
    }

private:
    std::set<long long> ids_;
};

class MemoryRunLogSink : public RunLogSink {
public:
    std::vector<RunLogEntry> entries;

    void append(const RunLogEntry& entry) override {
        if (!entries.empty() && entry.ts < entries.back().ts) throw NonMonotoneTimestamp();
        entries.push_back(entry);
    }
};

}  // namespace bibharvest
