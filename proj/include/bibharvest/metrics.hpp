#pragma once

// The performance analysis of a harvest run: durations, efficiencies,
// not-found statistics, id-jump statistics, anomaly windows, completion
// rates. Pure computation over the run log and the stored records.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "bibharvest/record.hpp"
#include "bibharvest/run_log.hpp"
#include "bibharvest/time_util.hpp"

namespace bibharvest {

struct EmptyLog : std::runtime_error {
    explicit EmptyLog(const std::string& what) : std::runtime_error(what) {}
};

struct NotAscending : std::runtime_error {
    explicit NotAscending(const std::string& what) : std::runtime_error(what) {}
};

struct InconsistentInputs : std::runtime_error {
    explicit InconsistentInputs(const std::string& what) : std::runtime_error(what) {}
};

enum class AnomalyCause { DetectedGap, OperatorAnnotated };

inline std::string_view to_string(AnomalyCause c) {
    return c == AnomalyCause::DetectedGap ? "detected_gap" : "operator_annotated";
}

struct AnomalyWindow {
    Timestamp start_ts{};
    Timestamp end_ts{};
    Millis gap{0};
    AnomalyCause cause = AnomalyCause::DetectedGap;
};

// Consecutive log entries whose timestamp gap strictly exceeds the threshold
// become detected windows; operator-annotated windows are merged in by start.
inline std::vector<AnomalyWindow> detect_anomalies(std::span<const RunLogEntry> run_log,
                                                   Millis gap_threshold,
                                                   std::span<const AnomalyWindow> annotated = {}) {
    if (run_log.empty()) throw EmptyLog("detect_anomalies: run log is empty");
    std::vector<AnomalyWindow> out;
    for (std::size_t i = 1; i < run_log.size(); ++i) {
        Millis gap = run_log[i].ts - run_log[i - 1].ts;
        if (gap > gap_threshold)
            out.push_back({run_log[i - 1].ts, run_log[i].ts, gap, AnomalyCause::DetectedGap});
    }
    out.insert(out.end(), annotated.begin(), annotated.end());
    std::stable_sort(out.begin(), out.end(),
                     [](const AnomalyWindow& a, const AnomalyWindow& b) {
                         return a.start_ts < b.start_ts;
                     });
    return out;
}

struct JumpStats {
    long long jump_count = 0;
    std::vector<long long> sizes;  // each >= 2, in sequence order
    long long min_size = 0;        // meaningful only when jump_count > 0
    long long max_size = 0;
    double mean_size = 0.0;
    double std_dev_size = 0.0;  // population sigma
    std::optional<double> records_per_jump;
};

// A jump is a gap >= 2 between consecutive persisted ids.
inline JumpStats jump_stats(std::span<const long long> persisted_ids) {
    JumpStats stats;
    for (std::size_t i = 1; i < persisted_ids.size(); ++i) {
        if (persisted_ids[i] <= persisted_ids[i - 1])
            throw NotAscending("jump_stats: ids must be strictly ascending");
        long long gap = persisted_ids[i] - persisted_ids[i - 1];
        if (gap >= 2) stats.sizes.push_back(gap);
    }
    stats.jump_count = static_cast<long long>(stats.sizes.size());
    if (!stats.sizes.empty()) {
        auto [mn, mx] = std::minmax_element(stats.sizes.begin(), stats.sizes.end());
        stats.min_size = *mn;
        stats.max_size = *mx;
        double sum = 0.0;
        for (long long s : stats.sizes) sum += static_cast<double>(s);
        stats.mean_size = sum / static_cast<double>(stats.sizes.size());
        double sq = 0.0;
        for (long long s : stats.sizes) {
            double d = static_cast<double>(s) - stats.mean_size;
            sq += d * d;
        }
        stats.std_dev_size = std::sqrt(sq / static_cast<double>(stats.sizes.size()));
        stats.records_per_jump = static_cast<double>(persisted_ids.size()) /
                                 static_cast<double>(stats.jump_count);
    }
    return stats;
}

struct RunMetrics {
    long long total_links = 0;
    long long not_found_count = 0;
    double not_found_rate = 0.0;
    long long records_collected = 0;
    Millis total_duration{0};
    Millis anomaly_total{0};
    Millis adjusted_duration{0};
    Millis scheduled_pause_total{0};
    Millis effective_time{0};
    Millis theoretical_ideal{0};
    double extraction_rate_per_min = std::numeric_limits<double>::quiet_NaN();
    double extraction_rate_per_hour = std::numeric_limits<double>::quiet_NaN();
    double effective_efficiency = std::numeric_limits<double>::quiet_NaN();
    double real_efficiency = std::numeric_limits<double>::quiet_NaN();
    double mean_completion_rate = std::numeric_limits<double>::quiet_NaN();
    JumpStats jumps;
    std::vector<AnomalyWindow> anomalies;
    long long slow_insert_count = 0;
};

// The two efficiency quotients from already-aggregated figures. This is the
// path the formula-reproduction checks use: no log is consulted.
struct EfficiencyFigures {
    double theoretical_ideal_s = 0.0;
    double effective_efficiency = std::numeric_limits<double>::quiet_NaN();
    double real_efficiency = std::numeric_limits<double>::quiet_NaN();
};

inline EfficiencyFigures efficiency_from_aggregates(long long records_collected, double pause_s,
                                                    double effective_time_s,
                                                    double adjusted_duration_s) {
    EfficiencyFigures f;
    f.theoretical_ideal_s = static_cast<double>(records_collected) * pause_s;
    if (effective_time_s > 0) f.effective_efficiency = f.theoretical_ideal_s / effective_time_s;
    if (adjusted_duration_s > 0) f.real_efficiency = f.theoretical_ideal_s / adjusted_duration_s;
    return f;
}

inline RunMetrics compute_metrics(std::span<const RunLogEntry> run_log,
                                  std::span<const std::pair<long long, CatalogRecord>> records,
                                  Millis pause, std::span<const AnomalyWindow> anomalies,
                                  Millis slow_threshold,
                                  std::span<const FieldKey> field_set = default_field_set()) {
    if (run_log.empty()) throw EmptyLog("compute_metrics: run log is empty");

    std::vector<long long> persisted_ids;
    for (const auto& e : run_log)
        if (e.persisted) persisted_ids.push_back(e.id);
    if (persisted_ids.size() != records.size())
        throw InconsistentInputs("compute_metrics: " + std::to_string(persisted_ids.size()) +
                                 " persisted log entries vs " + std::to_string(records.size()) +
                                 " stored records");
    for (std::size_t i = 0; i < records.size(); ++i)
        if (records[i].first != persisted_ids[i])
            throw InconsistentInputs("compute_metrics: stored id " +
                                     std::to_string(records[i].first) +
                                     " does not match the persisted log sequence");

    RunMetrics m;
    m.total_links = static_cast<long long>(run_log.size());
    for (const auto& e : run_log) {
        if (e.status == FetchStatus::NotFound) ++m.not_found_count;
        if (e.latency_ms > slow_threshold.count()) ++m.slow_insert_count;
    }
    m.not_found_rate = static_cast<double>(m.not_found_count) / static_cast<double>(m.total_links);
    m.records_collected = static_cast<long long>(records.size());
    m.total_duration = run_log.back().ts - run_log.front().ts;
    for (const auto& w : anomalies) m.anomaly_total += w.gap;
    m.adjusted_duration = m.total_duration - m.anomaly_total;
    m.scheduled_pause_total = Millis(m.records_collected * pause.count());
    m.effective_time = std::max(m.adjusted_duration - m.scheduled_pause_total, Millis(0));
    m.theoretical_ideal = m.scheduled_pause_total;

    // a run that collected nothing has no meaningful rates: everything n/a
    const double effective_s = to_seconds(m.effective_time);
    const double adjusted_s = to_seconds(m.adjusted_duration);
    const double ideal_s = to_seconds(m.theoretical_ideal);
    if (m.records_collected > 0 && effective_s > 0) {
        m.extraction_rate_per_min = static_cast<double>(m.records_collected) / (effective_s / 60.0);
        m.extraction_rate_per_hour = m.extraction_rate_per_min * 60.0;
        m.effective_efficiency = ideal_s / effective_s;
    }
    if (m.records_collected > 0 && adjusted_s > 0) m.real_efficiency = ideal_s / adjusted_s;

    if (!records.empty()) {
        double sum = 0.0;
        for (const auto& [id, r] : records) {
            (void)id;
            sum += completion_rate(r, field_set);
        }
        m.mean_completion_rate = sum / static_cast<double>(records.size());
    }

    m.jumps = jump_stats(persisted_ids);
    m.anomalies.assign(anomalies.begin(), anomalies.end());
    return m;
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string format_percent(double fraction) {
    if (!std::isfinite(fraction)) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f%%", fraction * 100.0);
    return buf;
}

inline std::string format_real(double value, int decimals = 4) {
    if (!std::isfinite(value)) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

// Two-column table; durations as H:MM:SS, rates as percentages.
inline std::string render_report(const RunMetrics& m) {
    std::vector<std::pair<std::string, std::string>> rows;
    auto count = [](long long v) { return std::to_string(v); };
    rows.emplace_back("Total number of links reviewed", count(m.total_links));
    rows.emplace_back("Links returning 404", count(m.not_found_count));
    rows.emplace_back("404 rate", format_percent(m.not_found_rate));
    rows.emplace_back("Total records collected", count(m.records_collected));
    rows.emplace_back("Total duration", format_hms(m.total_duration));
    rows.emplace_back("Service anomalies", count(static_cast<long long>(m.anomalies.size())));
    rows.emplace_back("Total anomaly duration", format_hms(m.anomaly_total));
    rows.emplace_back("Total duration discounting anomalies", format_hms(m.adjusted_duration));
    rows.emplace_back("Total time of scheduled pauses", format_hms(m.scheduled_pause_total));
    rows.emplace_back("Effective scraping time", format_hms(m.effective_time));
    rows.emplace_back("Theoretical ideal time", format_hms(m.theoretical_ideal));
    rows.emplace_back("Extraction rate (records/min)", format_real(m.extraction_rate_per_min, 2));
    rows.emplace_back("Extraction rate (records/hour)",
                      format_real(m.extraction_rate_per_hour, 2));
    rows.emplace_back("Effective efficiency", format_percent(m.effective_efficiency));
    rows.emplace_back("Real efficiency", format_percent(m.real_efficiency));
    rows.emplace_back("Mean completion rate", format_percent(m.mean_completion_rate));
    rows.emplace_back("Record numbering jumps", count(m.jumps.jump_count));
    if (m.jumps.jump_count > 0) {
        rows.emplace_back("Jump size (min / max)",
                          count(m.jumps.min_size) + " / " + count(m.jumps.max_size));
        rows.emplace_back("Jump size (mean)", format_real(m.jumps.mean_size));
        rows.emplace_back("Jump size (std dev)", format_real(m.jumps.std_dev_size));
        rows.emplace_back("Records per jump",
                          format_real(m.jumps.records_per_jump.value_or(
                              std::numeric_limits<double>::quiet_NaN())));
    } else {
        rows.emplace_back("Jump size (min / max)", "n/a");
        rows.emplace_back("Jump size (mean)", "n/a");
        rows.emplace_back("Jump size (std dev)", "n/a");
        rows.emplace_back("Records per jump", "n/a");
    }
    rows.emplace_back("Attempts exceeding slow threshold", count(m.slow_insert_count));

    std::size_t width = 0;
    for (const auto& [k, v] : rows) width = std::max(width, k.size());
    std::string out = "Metric";
    out.append(width - 6 + 2, ' ');
    out += "Value\n";
    for (const auto& [k, v] : rows) {
        out += k;
        out.append(width - k.size() + 2, ' ');
        out += v;
        out += '\n';
    }
    out += "\nNote: jump standard deviation is the population sigma.\n";
    return out;
}

// Machine-readable form: durations in seconds, rates as fractions. NaN
// (undefined on a degenerate run) serializes as null.
inline nlohmann::ordered_json metrics_to_json(const RunMetrics& m) {
    auto rate = [](double value) {
        return std::isfinite(value) ? nlohmann::ordered_json(value)
                                    : nlohmann::ordered_json(nullptr);
    };
    nlohmann::ordered_json j;
    j["total_links"] = m.total_links;
    j["not_found_count"] = m.not_found_count;
    j["not_found_rate"] = m.not_found_rate;
    j["records_collected"] = m.records_collected;
    j["total_duration"] = to_seconds(m.total_duration);
    j["anomaly_total"] = to_seconds(m.anomaly_total);
    j["adjusted_duration"] = to_seconds(m.adjusted_duration);
    j["scheduled_pause_total"] = to_seconds(m.scheduled_pause_total);
    j["effective_time"] = to_seconds(m.effective_time);
    j["theoretical_ideal"] = to_seconds(m.theoretical_ideal);
    j["extraction_rate_per_min"] = rate(m.extraction_rate_per_min);
    j["extraction_rate_per_hour"] = rate(m.extraction_rate_per_hour);
    j["effective_efficiency"] = rate(m.effective_efficiency);
    j["real_efficiency"] = rate(m.real_efficiency);
    j["mean_completion_rate"] = rate(m.mean_completion_rate);
    nlohmann::ordered_json jumps;
    jumps["jump_count"] = m.jumps.jump_count;
    jumps["sizes"] = m.jumps.sizes;
    if (m.jumps.jump_count > 0) {
        jumps["min_size"] = m.jumps.min_size;
        jumps["max_size"] = m.jumps.max_size;
        jumps["mean_size"] = m.jumps.mean_size;
        jumps["std_dev_size"] = m.jumps.std_dev_size;
        jumps["records_per_jump"] = *m.jumps.records_per_jump;
    } else {
        jumps["min_size"] = nullptr;
        jumps["max_size"] = nullptr;
        jumps["mean_size"] = nullptr;
        jumps["std_dev_size"] = nullptr;
        jumps["records_per_jump"] = nullptr;
    }
    j["jumps"] = std::move(jumps);
    nlohmann::ordered_json anomalies = nlohmann::ordered_json::array();
    for (const auto& w : m.anomalies) {
        nlohmann::ordered_json a;
        a["start_ts"] = format_iso8601(w.start_ts);
        a["end_ts"] = format_iso8601(w.end_ts);
        a["gap"] = to_seconds(w.gap);
        a["cause"] = std::string(to_string(w.cause));
        anomalies.push_back(std::move(a));
    }
    j["anomalies"] = std::move(anomalies);
    j["slow_insert_count"] = m.slow_insert_count;
    return j;
}

}  // namespace bibharvest
