#pragma once

// Lenient HTML scanning for label-table record pages.
//
// This is deliberately not a general DOM. Record pages are tables whose rows
// pair a marker-classed label cell with a value cell; a single linear pass
// that tolerates unclosed cells and rows recovers everything the extractor
// needs: rows, their cells in document order, each cell's class attribute,
// its concatenated text (entities decoded), and the text of the first
// emphasized element inside it.

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bibharvest {

namespace html_detail {

inline void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp <= 0x7F) {
        out.push_back(static_cast<char>(cp));
    } else if (cp <= 0x7FF) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp <= 0xFFFF) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp <= 0x10FFFF) {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.append("\xEF\xBF\xBD");
    }
}

// Latin-1 letters plus the symbols that turn up in bibliographic pages.
inline const std::unordered_map<std::string_view, std::string_view>& named_entities() {
    static const std::unordered_map<std::string_view, std::string_view> table{
        {"amp", "&"},      {"lt", "<"},       {"gt", ">"},       {"quot", "\""},
        {"apos", "'"},     {"nbsp", " "},
        {"aacute", "á"},   {"eacute", "é"},   {"iacute", "í"},   {"oacute", "ó"},
        {"uacute", "ú"},   {"Aacute", "Á"},   {"Eacute", "É"},   {"Iacute", "Í"},
        {"Oacute", "Ó"},   {"Uacute", "Ú"},   {"ntilde", "ñ"},   {"Ntilde", "Ñ"},
        {"uuml", "ü"},     {"Uuml", "Ü"},     {"ouml", "ö"},     {"Ouml", "Ö"},
        {"auml", "ä"},     {"Auml", "Ä"},     {"euml", "ë"},     {"iuml", "ï"},
        {"agrave", "à"},   {"egrave", "è"},   {"igrave", "ì"},   {"ograve", "ò"},
        {"ugrave", "ù"},   {"acirc", "â"},    {"ecirc", "ê"},    {"icirc", "î"},
        {"ocirc", "ô"},    {"ucirc", "û"},    {"atilde", "ã"},   {"otilde", "õ"},
        {"ccedil", "ç"},   {"Ccedil", "Ç"},   {"ordf", "ª"},     {"ordm", "º"},
        {"laquo", "«"},    {"raquo", "»"},    {"iexcl", "¡"},    {"iquest", "¿"},
        {"middot", "·"},   {"deg", "°"},      {"sect", "§"},     {"para", "¶"},
        {"copy", "©"},     {"reg", "®"},      {"trade", "™"},    {"euro", "€"},
        {"pound", "£"},    {"yen", "¥"},      {"cent", "¢"},     {"times", "×"},
        {"divide", "÷"},   {"plusmn", "±"},   {"sup2", "²"},     {"sup3", "³"},
        {"frac12", "½"},   {"frac14", "¼"},   {"ndash", "–"},    {"mdash", "—"},
        {"lsquo", "‘"},    {"rsquo", "’"},    {"ldquo", "“"},    {"rdquo", "”"},
        {"hellip", "…"},   {"bull", "•"},     {"shy", "­"},
    };
    return table;
}

inline std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

inline bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == ':';
}

inline std::size_t ci_find(std::string_view haystack, std::string_view needle, std::size_t from) {
    if (needle.empty()) return from;
    const std::string lowered = ascii_lower(needle);
    for (std::size_t i = from; i + lowered.size() <= haystack.size(); ++i) {
        bool match = true;
        for (std::size_t k = 0; k < lowered.size(); ++k) {
            char c = haystack[i + k];
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
            if (c != lowered[k]) {
                match = false;
                break;
            }
        }
        if (match) return i;
    }
    return std::string_view::npos;
}

}  // namespace html_detail

// Decodes numeric (&#233; / &#xE9;) and common named (&eacute;) references.
// Unknown or unterminated references are left as written.
inline std::string decode_entities(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        char c = text[i];
        if (c != '&') {
            out.push_back(c);
            ++i;
            continue;
        }
        std::size_t semi = text.find(';', i + 1);
        if (semi == std::string_view::npos || semi == i + 1 || semi - i - 1 > 10) {
            out.push_back(c);
            ++i;
            continue;
        }
        std::string_view body = text.substr(i + 1, semi - i - 1);
        if (body[0] == '#') {
            std::uint32_t cp = 0;
            bool ok = false;
            if (body.size() >= 3 && (body[1] == 'x' || body[1] == 'X')) {
                ok = body.size() > 2;
                for (std::size_t k = 2; k < body.size() && ok; ++k) {
                    char d = body[k];
                    int v;
                    if (d >= '0' && d <= '9') v = d - '0';
                    else if (d >= 'a' && d <= 'f') v = d - 'a' + 10;
                    else if (d >= 'A' && d <= 'F') v = d - 'A' + 10;
                    else { ok = false; break; }
                    cp = cp * 16 + static_cast<std::uint32_t>(v);
                }
            } else if (body.size() >= 2) {
                ok = true;
                for (std::size_t k = 1; k < body.size(); ++k) {
                    char d = body[k];
                    if (d < '0' || d > '9') { ok = false; break; }
                    cp = cp * 10 + static_cast<std::uint32_t>(d - '0');
                }
            }
            if (ok && cp <= 0x10FFFF) {
                html_detail::append_utf8(out, cp);
                i = semi + 1;
                continue;
            }
        } else {
            const auto& table = html_detail::named_entities();
            auto it = table.find(body);
            if (it != table.end()) {
                out.append(it->second);
                i = semi + 1;
                continue;
            }
        }
        out.push_back(c);
        ++i;
    }
    return out;
}

struct HtmlCell {
    std::string class_attr;  // decoded class attribute, possibly empty
    std::string text;        // concatenated descendant text, entities decoded
    std::string emph_text;   // text of the first <strong>/<b>/<em> span
    bool has_emphasis = false;

    bool has_class_token(std::string_view token) const {
        std::size_t i = 0;
        while (i < class_attr.size()) {
            while (i < class_attr.size() && std::isspace(static_cast<unsigned char>(class_attr[i])))
                ++i;
            std::size_t start = i;
            while (i < class_attr.size() && !std::isspace(static_cast<unsigned char>(class_attr[i])))
                ++i;
            if (i > start && std::string_view(class_attr).substr(start, i - start) == token)
                return true;
        }
        return false;
    }
};

struct HtmlRow {
    std::vector<HtmlCell> cells;
};

struct HtmlScan {
    std::vector<HtmlRow> rows;
    std::size_t element_count = 0;  // tags seen; zero means the input is not markup
};

inline HtmlScan scan_table_rows(std::string_view html) {
    HtmlScan scan;
    HtmlRow row;
    HtmlCell cell;
    bool in_row = false;
    bool in_cell = false;
    int emph_depth = 0;
    bool emph_taken = false;  // the first emphasized span of this cell is closed

    auto close_cell = [&] {
        if (!in_cell) return;
        row.cells.push_back(std::move(cell));
        cell = HtmlCell{};
        in_cell = false;
        emph_depth = 0;
        emph_taken = false;
    };
    auto close_row = [&] {
        close_cell();
        if (!in_row) return;
        scan.rows.push_back(std::move(row));
        row = HtmlRow{};
        in_row = false;
    };
    auto flush_text = [&](std::string_view raw) {
        if (!in_cell || raw.empty()) return;
        std::string decoded = decode_entities(raw);
        cell.text += decoded;
        if (emph_depth > 0 && !emph_taken) cell.emph_text += decoded;
    };

    std::size_t i = 0;
    const std::size_t n = html.size();
    while (i < n) {
        std::size_t lt = html.find('<', i);
        if (lt == std::string_view::npos) {
            flush_text(html.substr(i));
            break;
        }
        flush_text(html.substr(i, lt - i));
        if (html.compare(lt, 4, "<!--") == 0) {
            std::size_t end = html.find("-->", lt + 4);
            i = (end == std::string_view::npos) ? n : end + 3;
            continue;
        }
        if (lt + 1 < n && (html[lt + 1] == '!' || html[lt + 1] == '?')) {
            std::size_t end = html.find('>', lt + 1);
            i = (end == std::string_view::npos) ? n : end + 1;
            continue;
        }
        std::size_t p = lt + 1;
        bool closing = false;
        if (p < n && html[p] == '/') {
            closing = true;
            ++p;
        }
        std::size_t name_start = p;
        while (p < n && html_detail::is_name_char(html[p])) ++p;
        if (p == name_start) {
            // stray '<': plain text
            flush_text(html.substr(lt, 1));
            i = lt + 1;
            continue;
        }
        std::string name = html_detail::ascii_lower(html.substr(name_start, p - name_start));

        std::string class_attr;
        bool self_closing = false;
        while (p < n && html[p] != '>') {
            char c = html[p];
            if (c == '/') {
                self_closing = true;
                ++p;
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++p;
                continue;
            }
            std::size_t attr_start = p;
            while (p < n && html[p] != '=' && html[p] != '>' && html[p] != '/' &&
                   !std::isspace(static_cast<unsigned char>(html[p])))
                ++p;
            std::string attr_name = html_detail::ascii_lower(html.substr(attr_start, p - attr_start));
            std::string attr_value;
            while (p < n && std::isspace(static_cast<unsigned char>(html[p]))) ++p;
            if (p < n && html[p] == '=') {
                ++p;
                while (p < n && std::isspace(static_cast<unsigned char>(html[p]))) ++p;
                if (p < n && (html[p] == '"' || html[p] == '\'')) {
                    char quote = html[p];
                    ++p;
                    std::size_t value_start = p;
                    while (p < n && html[p] != quote) ++p;
                    attr_value.assign(html.substr(value_start, p - value_start));
                    if (p < n) ++p;
                } else {
                    std::size_t value_start = p;
                    while (p < n && html[p] != '>' &&
                           !std::isspace(static_cast<unsigned char>(html[p])))
                        ++p;
                    attr_value.assign(html.substr(value_start, p - value_start));
                }
            }
            if (attr_name == "class") class_attr = decode_entities(attr_value);
        }
        if (p < n) ++p;  // '>'
        i = p;
        ++scan.element_count;

        if (!closing && (name == "script" || name == "style")) {
            std::size_t pos = html_detail::ci_find(html, "</" + name, i);
            if (pos == std::string_view::npos) break;
            std::size_t gt = html.find('>', pos);
            i = (gt == std::string_view::npos) ? n : gt + 1;
            ++scan.element_count;
            continue;
        }

        if (name == "tr") {
            close_row();
            if (!closing) in_row = true;
        } else if (name == "td") {
            if (closing) {
                close_cell();
            } else if (in_row) {
                close_cell();
                in_cell = true;
                cell.class_attr = std::move(class_attr);
                if (self_closing) close_cell();
            }
        } else if (name == "table") {
            // rows never span a table boundary
            close_row();
        } else if (name == "strong" || name == "b" || name == "em") {
            if (in_cell && !self_closing) {
                if (!closing) {
                    if (emph_depth == 0 && !emph_taken) cell.has_emphasis = true;
                    ++emph_depth;
                } else if (emph_depth > 0) {
                    --emph_depth;
                    if (emph_depth == 0) emph_taken = true;
                }
            }
        }
        // every other tag is transparent: its text flows into the enclosing cell
    }
    close_row();
    return scan;
}

}  // namespace bibharvest
