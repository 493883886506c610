#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace bibharvest {

// Whitespace for normalization purposes: space, tab, newline, carriage return.
inline bool is_collapsible_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

// Trims and collapses every whitespace run to a single space. Idempotent;
// non-whitespace bytes pass through untouched, so UTF-8 content is safe.
inline std::string clean_text(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    bool pending_space = false;
    for (char c : raw) {
        if (is_collapsible_space(c)) {
            if (!out.empty()) pending_space = true;
        } else {
            if (pending_space) {
                out.push_back(' ');
                pending_space = false;
            }
            out.push_back(c);
        }
    }
    return out;
}

// Absent and empty collapse to absent; anything else passes through.
inline std::optional<std::string> handle_null(std::optional<std::string> value) {
    if (!value || value->empty()) return std::nullopt;
    return value;
}

}  // namespace bibharvest
