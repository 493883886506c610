#pragma once

// UTC timestamps with millisecond precision, plus the formatting helpers the
// run log and the report renderer share.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <optional>
#include <string>
#include <string_view>

namespace bibharvest {

using Millis = std::chrono::milliseconds;
using Timestamp = std::chrono::time_point<std::chrono::system_clock, Millis>;

inline Timestamp now_utc() {
    return std::chrono::time_point_cast<Millis>(std::chrono::system_clock::now());
}

inline std::int64_t unix_ms(Timestamp ts) { return ts.time_since_epoch().count(); }

inline Timestamp timestamp_from_unix_ms(std::int64_t ms) { return Timestamp(Millis(ms)); }

inline double to_seconds(Millis d) { return static_cast<double>(d.count()) / 1000.0; }

// 2024-07-16T15:47:57.000Z
inline std::string format_iso8601(Timestamp ts) {
    std::int64_t total = unix_ms(ts);
    std::int64_t secs = total / 1000;
    int ms = static_cast<int>(total % 1000);
    if (ms < 0) {
        ms += 1000;
        secs -= 1;
    }
    std::time_t tt = static_cast<std::time_t>(secs);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                  tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, ms);
    return buf;
}

// Accepts the exporter's form and the same without milliseconds.
inline std::optional<Timestamp> parse_iso8601(std::string_view text) {
    std::string buf(text);
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0, ms = 0;
    char zone = 0;
    int n = std::sscanf(buf.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3d%c", &y, &mo, &d, &h, &mi, &s,
                        &ms, &zone);
    if (n != 8 || zone != 'Z') {
        ms = 0;
        n = std::sscanf(buf.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d%c", &y, &mo, &d, &h, &mi, &s, &zone);
        if (n != 7 || zone != 'Z') return std::nullopt;
    }
    std::tm tm{};
    tm.tm_year = y - 1900;
    tm.tm_mon = mo - 1;
    tm.tm_mday = d;
    tm.tm_hour = h;
    tm.tm_min = mi;
    tm.tm_sec = s;
    std::time_t tt = timegm(&tm);
    if (tt == static_cast<std::time_t>(-1)) return std::nullopt;
    return Timestamp(Millis(static_cast<std::int64_t>(tt) * 1000 + ms));
}

// Durations render as H:MM:SS with unpadded hours: 15948 s -> "4:25:48".
inline std::string format_hms(double seconds) {
    if (!std::isfinite(seconds)) return "n/a";
    long long total = std::llround(seconds);
    const char* sign = "";
    if (total < 0) {
        sign = "-";
        total = -total;
    }
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%s%lld:%02lld:%02lld", sign, total / 3600,
                  (total % 3600) / 60, total % 60);
    return buf;
}

inline std::string format_hms(Millis d) { return format_hms(to_seconds(d)); }

}  // namespace bibharvest
