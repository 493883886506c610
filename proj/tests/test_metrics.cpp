#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "bibharvest/metrics.hpp"

using namespace bibharvest;

namespace {

RunLogEntry entry_at(Timestamp ts, long long id, FetchStatus status, bool persisted,
                     long long latency_ms = 10, int fields_present = 6) {
    RunLogEntry e;
    e.ts = ts;
    e.id = id;
    e.url = "http://x/" + std::to_string(id) + ".html";
    e.status = status;
    if (status != FetchStatus::Error) e.http_status = status == FetchStatus::Ok ? 200 : 404;
    e.latency_ms = latency_ms;
    e.persisted = persisted;
    e.fields_present = persisted ? fields_present : 0;
    return e;
}

CatalogRecord titled(const std::string& title) {
    CatalogRecord r;
    r.url = "http://x/" + title + ".html";
    r.title = title;
    return r;
}

}  // namespace

TEST_CASE("detect_anomalies finds gaps strictly above the threshold") {
    auto t0 = timestamp_from_unix_ms(1721144877000);
    std::vector<RunLogEntry> log;
    for (int i = 0; i < 10; ++i)
        log.push_back(entry_at(t0 + Millis(i * 3000), i + 1, FetchStatus::Ok, true));
    CHECK(detect_anomalies(log, Millis(60000)).empty());

    // one long outage
    std::vector<RunLogEntry> outage;
    outage.push_back(entry_at(t0, 1, FetchStatus::Ok, true));
    outage.push_back(entry_at(t0 + Millis(3000), 2, FetchStatus::Ok, true));
    outage.push_back(entry_at(t0 + Millis(3000 + 15948000), 3, FetchStatus::Ok, true));
    auto windows = detect_anomalies(outage, Millis(60000));
    REQUIRE(windows.size() == 1);
    CHECK(windows[0].gap == Millis(15948000));  // 4:25:48
    CHECK(windows[0].cause == AnomalyCause::DetectedGap);
    CHECK(windows[0].end_ts - windows[0].start_ts == windows[0].gap);
    CHECK(format_hms(to_seconds(windows[0].gap)) == "4:25:48");

    // 61 s crosses a 60 s threshold, 59 s does not
    std::vector<RunLogEntry> mixed;
    mixed.push_back(entry_at(t0, 1, FetchStatus::Ok, true));
    mixed.push_back(entry_at(t0 + Millis(61000), 2, FetchStatus::Ok, true));
    mixed.push_back(entry_at(t0 + Millis(61000 + 59000), 3, FetchStatus::Ok, true));
    CHECK(detect_anomalies(mixed, Millis(60000)).size() == 1);

    CHECK_THROWS_AS(detect_anomalies({}, Millis(60000)), EmptyLog);
}

TEST_CASE("detect_anomalies merges operator-annotated windows by start time") {
    auto t0 = timestamp_from_unix_ms(1721144877000);
    std::vector<RunLogEntry> log;
    log.push_back(entry_at(t0, 1, FetchStatus::Ok, true));
    log.push_back(entry_at(t0 + Millis(100000), 2, FetchStatus::Ok, true));
    std::vector<AnomalyWindow> annotated{
        {t0 - Millis(5000), t0 - Millis(1000), Millis(4000), AnomalyCause::OperatorAnnotated}};
    auto windows = detect_anomalies(log, Millis(60000), annotated);
    REQUIRE(windows.size() == 2);
    CHECK(windows[0].cause == AnomalyCause::OperatorAnnotated);
    CHECK(windows[1].cause == AnomalyCause::DetectedGap);
}

TEST_CASE("jump_stats on the documented examples") {
    std::vector<long long> contiguous{1, 2, 3, 4};
    auto none = jump_stats(contiguous);
    CHECK(none.jump_count == 0);
    CHECK(none.sizes.empty());
    CHECK_FALSE(none.records_per_jump.has_value());

    std::vector<long long> two{1, 3, 84};
    auto stats = jump_stats(two);
    CHECK(stats.sizes == std::vector<long long>{2, 81});
    CHECK(stats.min_size == 2);
    CHECK(stats.max_size == 81);
    CHECK(stats.mean_size == 41.5);
    CHECK(stats.std_dev_size == 39.5);
    CHECK(stats.records_per_jump == 1.5);

    std::vector<long long> descending{3, 1};
    CHECK_THROWS_AS(jump_stats(descending), NotAscending);
    std::vector<long long> repeated{3, 3};
    CHECK_THROWS_AS(jump_stats(repeated), NotAscending);
}

TEST_CASE("efficiency formulas reproduce the published aggregates") {
    auto figures = efficiency_from_aggregates(55473, 3.0, 60573.0, 227592.0);
    CHECK(figures.theoretical_ideal_s == 166419.0);
    CHECK(figures.effective_efficiency * 100.0 == Catch::Approx(274.74).margin(0.01));
    CHECK(figures.real_efficiency * 100.0 == Catch::Approx(73.12).margin(0.01));
    CHECK(format_percent(figures.effective_efficiency) == "274.74%");
    CHECK(format_percent(figures.real_efficiency) == "73.12%");
}

TEST_CASE("the published 404 share renders as 11.65%") {
    double rate = 7313.0 / 62786.0;
    CHECK(rate * 100.0 == Catch::Approx(11.65).margin(0.01));
    CHECK(format_percent(rate) == "11.65%");
}

TEST_CASE("compute_metrics on a synthetic ten-record run") {
    // 10 persisted records over 60 s wall clock, pause 2 s, no anomalies:
    // ideal = pauses = 20 s, adjusted = 60 s, effective = 40 s
    auto t0 = timestamp_from_unix_ms(1721144877000);
    std::vector<RunLogEntry> log;
    std::vector<std::pair<long long, CatalogRecord>> records;
    for (int i = 0; i < 10; ++i) {
        long long id = i + 1;
        log.push_back(entry_at(t0 + Millis(i * 6667), id, FetchStatus::Ok, true));
        records.emplace_back(id, titled("t" + std::to_string(id)));
    }
    // pin total duration to exactly 60 s
    log.back().ts = t0 + Millis(60000);
    auto m = compute_metrics(log, records, Millis(2000), {}, Millis(20000));
    CHECK(m.total_links == 10);
    CHECK(m.records_collected == 10);
    CHECK(m.total_duration == Millis(60000));
    CHECK(m.adjusted_duration == Millis(60000));
    CHECK(m.scheduled_pause_total == Millis(20000));
    CHECK(m.theoretical_ideal == Millis(20000));
    CHECK(m.effective_time == Millis(40000));
    CHECK(m.effective_efficiency == Catch::Approx(0.5).epsilon(1e-12));
    CHECK(m.real_efficiency == Catch::Approx(20.0 / 60.0).epsilon(1e-12));
    CHECK(m.extraction_rate_per_min == Catch::Approx(15.0).epsilon(1e-12));
    CHECK(m.extraction_rate_per_hour == Catch::Approx(900.0).epsilon(1e-12));
    CHECK(m.jumps.jump_count == 0);
    CHECK(m.slow_insert_count == 0);
    // completion: title only -> 1/12 for every record
    CHECK(m.mean_completion_rate == Catch::Approx(1.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("compute_metrics counts 404s, slow attempts and anomaly windows") {
    auto t0 = timestamp_from_unix_ms(1721144877000);
    std::vector<RunLogEntry> log;
    std::vector<std::pair<long long, CatalogRecord>> records;
    log.push_back(entry_at(t0, 1, FetchStatus::Ok, true));
    records.emplace_back(1, titled("a"));
    log.push_back(entry_at(t0 + Millis(1000), 2, FetchStatus::NotFound, false));
    log.push_back(entry_at(t0 + Millis(2000), 3, FetchStatus::Error, false));
    log.push_back(entry_at(t0 + Millis(103000), 4, FetchStatus::Ok, true, 25000));
    records.emplace_back(4, titled("b"));

    auto anomalies = detect_anomalies(log, Millis(60000));
    REQUIRE(anomalies.size() == 1);
    auto m = compute_metrics(log, records, Millis(0), anomalies, Millis(20000));
    CHECK(m.not_found_count == 1);
    CHECK(m.not_found_rate == 0.25);
    CHECK(m.slow_insert_count == 1);
    CHECK(m.anomaly_total == Millis(101000));
    CHECK(m.adjusted_duration == m.total_duration - m.anomaly_total);
    CHECK(m.jumps.jump_count == 1);
    CHECK(m.jumps.sizes == std::vector<long long>{3});

    // partition: ok + not_found + error == total_links
    long long ok = 0, nf = 0, err = 0;
    for (const auto& e : log) {
        if (e.status == FetchStatus::Ok) ++ok;
        else if (e.status == FetchStatus::NotFound) ++nf;
        else ++err;
    }
    CHECK(ok + nf + err == m.total_links);
}

TEST_CASE("compute_metrics validates its inputs") {
    auto t0 = timestamp_from_unix_ms(1721144877000);
    std::vector<RunLogEntry> log{entry_at(t0, 1, FetchStatus::Ok, true)};
    std::vector<std::pair<long long, CatalogRecord>> none;
    CHECK_THROWS_AS(compute_metrics(log, none, Millis(0), {}, Millis(20000)),
                    InconsistentInputs);
    CHECK_THROWS_AS(compute_metrics({}, none, Millis(0), {}, Millis(20000)), EmptyLog);
    std::vector<std::pair<long long, CatalogRecord>> wrong_id{{9, titled("x")}};
    CHECK_THROWS_AS(compute_metrics(log, wrong_id, Millis(0), {}, Millis(20000)),
                    InconsistentInputs);
}

TEST_CASE("efficiency identity holds over random aggregates") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long long> records(1, 100000);
    std::uniform_real_distribution<double> seconds(1.0, 500000.0);
    for (int i = 0; i < 1000; ++i) {
        long long n = records(rng);
        double pause = seconds(rng) / 1000.0;
        double effective = seconds(rng);
        double adjusted = seconds(rng);
        auto f = efficiency_from_aggregates(n, pause, effective, adjusted);
        CHECK(std::abs(f.effective_efficiency * effective - f.theoretical_ideal_s) <=
              1e-9 * std::max(1.0, f.theoretical_ideal_s));
        CHECK(std::abs(f.real_efficiency * adjusted - f.theoretical_ideal_s) <=
              1e-9 * std::max(1.0, f.theoretical_ideal_s));
    }
}

TEST_CASE("compute_metrics is pure") {
    auto t0 = timestamp_from_unix_ms(1721144877000);
    std::vector<RunLogEntry> log;
    std::vector<std::pair<long long, CatalogRecord>> records;
    for (int i = 0; i < 5; ++i) {
        log.push_back(entry_at(t0 + Millis(i * 1000), i * 3 + 1, FetchStatus::Ok, true));
        records.emplace_back(i * 3 + 1, titled("r" + std::to_string(i)));
    }
    auto a = compute_metrics(log, records, Millis(500), {}, Millis(20000));
    auto b = compute_metrics(log, records, Millis(500), {}, Millis(20000));
    CHECK(metrics_to_json(a) == metrics_to_json(b));
}

TEST_CASE("report renders percentages, durations and the degenerate run") {
    CHECK(format_percent(2.7474) == "274.74%");
    CHECK(format_hms(15948.0) == "4:25:48");
    CHECK(format_hms(242940.0) == "67:29:00");  // hours keep counting past 24

    // zero records collected: rates are n/a, nothing divides by zero
    auto t0 = timestamp_from_unix_ms(1721144877000);
    std::vector<RunLogEntry> log{entry_at(t0, 1, FetchStatus::NotFound, false),
                                 entry_at(t0 + Millis(1000), 2, FetchStatus::NotFound, false)};
    auto m = compute_metrics(log, {}, Millis(3000), {}, Millis(20000));
    auto text = render_report(m);
    CHECK(text.find("n/a") != std::string::npos);
    CHECK(text.find("Metric") == 0);
    auto j = metrics_to_json(m);
    CHECK(j.at("mean_completion_rate").is_null());
    CHECK(j.at("effective_efficiency").is_null());
    CHECK(j.at("jumps").at("records_per_jump").is_null());
}

TEST_CASE("metrics json carries base units") {
    auto t0 = timestamp_from_unix_ms(1721144877000);
    std::vector<RunLogEntry> log;
    std::vector<std::pair<long long, CatalogRecord>> records;
    log.push_back(entry_at(t0, 2, FetchStatus::Ok, true));
    log.push_back(entry_at(t0 + Millis(10000), 5, FetchStatus::Ok, true));
    records.emplace_back(2, titled("a"));
    records.emplace_back(5, titled("b"));
    auto m = compute_metrics(log, records, Millis(1000), {}, Millis(20000));
    auto j = metrics_to_json(m);
    CHECK(j.at("total_duration").get<double>() == 10.0);
    CHECK(j.at("scheduled_pause_total").get<double>() == 2.0);
    CHECK(j.at("jumps").at("jump_count").get<long long>() == 1);
    CHECK(j.at("jumps").at("sizes").at(0).get<long long>() == 3);
    CHECK(j.at("not_found_rate").get<double>() == 0.0);
}
