#pragma once

// Field extraction from a record page: find rows whose label cell carries the
// label-row marker class and an emphasized label, take the row's second cell
// as the value, normalize both, and map the label through a LabelMap.

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bibharvest/html.hpp"
#include "bibharvest/label_map.hpp"
#include "bibharvest/record.hpp"
#include "bibharvest/text.hpp"

namespace bibharvest {

inline constexpr std::string_view kLabelRowClass = "label-row";

struct UnparseableInput : std::runtime_error {
    explicit UnparseableInput(const std::string& url)
        : std::runtime_error("no HTML structure found in input" +
                             (url.empty() ? std::string{} : " from " + url)) {}
};

struct ExtractionResult {
    CatalogRecord record;
    std::vector<std::string> unknown_labels;  // normalized, in document order
    int matched_rows = 0;                     // rows with a label cell and a value cell
    int duplicate_labels = 0;                 // rows that re-assigned an already-set field
};

// Pure and deterministic. Throws UnparseableInput when the input contains no
// markup at all; a valid document with zero matching rows is not an error.
inline ExtractionResult extract_record(std::string_view html, std::string url,
                                       const LabelMap& map) {
    HtmlScan scan = scan_table_rows(html);
    if (scan.element_count == 0) throw UnparseableInput(url);

    ExtractionResult out;
    out.record.url = std::move(url);
    std::set<FieldKey> assigned;

    for (const HtmlRow& row : scan.rows) {
        std::string label;
        for (const HtmlCell& c : row.cells) {
            if (!c.has_emphasis || !c.has_class_token(kLabelRowClass)) continue;
            label = clean_text(c.emph_text);
            if (!label.empty()) break;
        }
        // Rows lacking a usable label cell or a second (value) cell are skipped.
        if (label.empty() || row.cells.size() < 2) continue;
        ++out.matched_rows;

        auto key = map.find(label);
        if (!key) {
            out.unknown_labels.push_back(std::move(label));
            continue;
        }
        if (!assigned.insert(*key).second) ++out.duplicate_labels;
        // Last occurrence wins; empty values clear the field via handle_null.
        field(out.record, *key) =
            handle_null(std::optional<std::string>(clean_text(row.cells[1].text)));
    }
    return out;
}

}  // namespace bibharvest
