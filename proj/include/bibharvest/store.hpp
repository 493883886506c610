#pragma once

// Persistence: harvested records in an embedded single-file sqlite store
// whose table mirrors the 13-column record schema, and the run log as an
// append-only newline-delimited file. CSV export/import live here too.

#include <array>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <sqlite3.h>

#include "bibharvest/record.hpp"
#include "bibharvest/run_log.hpp"

namespace bibharvest {

// ---------------------------------------------------------------------------
// CSV (RFC 4180: CRLF rows, quoting only where needed)

inline constexpr std::array<std::string_view, 13> kCsvColumns{
    "url",
    "author",
    "title",
    "placeOfPublication",
    "publisher",
    "publicationDate",
    "physicalDescription",
    "otherPhysicalCharacteristics",
    "dimensions",
    "materialType",
    "signature",
    "location",
    "headquarters",
};

inline std::string csv_escape(std::string_view field) {
    bool needs_quoting = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quoting) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

inline std::string export_csv(std::span<const std::pair<long long, CatalogRecord>> records) {
    std::string out;
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
        if (i) out.push_back(',');
        out.append(kCsvColumns[i]);
    }
    out.append("\r\n");
    for (const auto& [id, r] : records) {
        (void)id;
        out.append(csv_escape(r.url));
        for (FieldKey k : default_field_set()) {
            out.push_back(',');
            const auto& v = field(r, k);
            if (v) out.append(csv_escape(*v));
        }
        out.append("\r\n");
    }
    return out;
}

// Full RFC 4180 reader (quotes, embedded separators, CRLF or LF rows).
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string cell;
    bool in_quotes = false;
    bool row_started = false;
    std::size_t i = 0;
    const std::size_t n = text.size();
    auto end_cell = [&] {
        row.push_back(std::move(cell));
        cell.clear();
    };
    auto end_row = [&] {
        end_cell();
        rows.push_back(std::move(row));
        row.clear();
        row_started = false;
    };
    while (i < n) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    cell.push_back('"');
                    i += 2;
                    continue;
                }
                in_quotes = false;
                ++i;
                continue;
            }
            cell.push_back(c);
            ++i;
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                row_started = true;
                ++i;
                break;
            case ',':
                end_cell();
                row_started = true;
                ++i;
                break;
            case '\r':
                if (i + 1 < n && text[i + 1] == '\n') ++i;
                [[fallthrough]];
            case '\n':
                end_row();
                ++i;
                break;
            default:
                cell.push_back(c);
                row_started = true;
                ++i;
                break;
        }
    }
    if (row_started || !cell.empty() || !row.empty()) end_row();
    return rows;
}

// Parses an export_csv stream back into records; the header must be the
// canonical 13 columns. Empty cells become absent fields.
inline std::vector<CatalogRecord> records_from_csv(std::string_view text) {
    auto rows = parse_csv(text);
    if (rows.empty()) throw std::runtime_error("csv: missing header row");
    if (rows.front().size() != kCsvColumns.size())
        throw std::runtime_error("csv: header has wrong column count");
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i)
        if (rows.front()[i] != kCsvColumns[i])
            throw std::runtime_error("csv: unexpected header column '" + rows.front()[i] + "'");
    std::vector<CatalogRecord> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& cols = rows[r];
        if (cols.size() != kCsvColumns.size())
            throw std::runtime_error("csv: row " + std::to_string(r + 1) +
                                     " has wrong column count");
        CatalogRecord rec;
        rec.url = cols[0];
        for (int k = 0; k < kFieldCount; ++k)
            if (!cols[static_cast<std::size_t>(k) + 1].empty())
                field(rec, static_cast<FieldKey>(k)) = cols[static_cast<std::size_t>(k) + 1];
        out.push_back(std::move(rec));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dataset

namespace store_detail {

struct StmtCloser {
    void operator()(sqlite3_stmt* s) const { sqlite3_finalize(s); }
};

inline void exec_or_throw(sqlite3* db, const char* sql) {
    char* err = nullptr;
    if (sqlite3_exec(db, sql, nullptr, nullptr, &err) != SQLITE_OK) {
        std::string what = err ? err : "sqlite error";
        sqlite3_free(err);
        throw StorageFailure(what);
    }
}

}  // namespace store_detail

// Records and run log for one harvest. The sqlite file holds the records;
// the run log is a sibling newline-delimited file. Reopening an existing
// pair resumes appending (timestamp monotonicity spans the reopen).
class Dataset : public RecordSink, public RunLogSink {
public:
    Dataset(const std::string& dataset_path, const std::string& run_log_path)
        : log_path_(run_log_path) {
        if (sqlite3_open(dataset_path.c_str(), &db_) != SQLITE_OK) {
            std::string what = db_ ? sqlite3_errmsg(db_) : "cannot open database";
            sqlite3_close(db_);
            db_ = nullptr;
            throw StorageFailure("open " + dataset_path + ": " + what);
        }
        store_detail::exec_or_throw(db_, "PRAGMA journal_mode=WAL;");
        store_detail::exec_or_throw(db_, "PRAGMA synchronous=NORMAL;");
        std::string ddl = "CREATE TABLE IF NOT EXISTS records (id INTEGER PRIMARY KEY";
        for (auto col : kCsvColumns) {
            ddl += ", ";
            ddl += col;
            ddl += " TEXT";
        }
        ddl += ");";
        store_detail::exec_or_throw(db_, ddl.c_str());

        std::string insert_sql = "INSERT INTO records (id";
        for (auto col : kCsvColumns) {
            insert_sql += ", ";
            insert_sql += col;
        }
        insert_sql += ") VALUES (?";
        for (std::size_t k = 0; k < kCsvColumns.size(); ++k) insert_sql += ", ?";
        insert_sql += ");";
        sqlite3_stmt* stmt = nullptr;
        if (sqlite3_prepare_v2(db_, insert_sql.c_str(), -1, &stmt, nullptr) != SQLITE_OK)
            throw StorageFailure(sqlite3_errmsg(db_));
        insert_stmt_.reset(stmt);

        if (std::filesystem::exists(log_path_)) {
            auto existing = parse_run_log(read_file(log_path_));
            if (!existing.empty()) {
                last_log_ts_ = existing.back().ts;
                last_log_id_ = existing.back().id;
            }
        }
        log_out_.open(log_path_, std::ios::app | std::ios::binary);
        if (!log_out_) throw StorageFailure("open " + log_path_ + " for append");
    }

    ~Dataset() override {
        insert_stmt_.reset();
        if (db_) sqlite3_close(db_);
    }

    Dataset(const Dataset&) = delete;
    Dataset& operator=(const Dataset&) = delete;

    // Caller guarantees is_persistable(record); duplicate ids are rejected.
    void insert_record(long long id, const CatalogRecord& record) {
        if (!is_persistable(record))
            throw std::invalid_argument("insert_record: record without a title");
        sqlite3_stmt* stmt = insert_stmt_.get();
        sqlite3_reset(stmt);
        sqlite3_clear_bindings(stmt);
        sqlite3_bind_int64(stmt, 1, id);
        sqlite3_bind_text(stmt, 2, record.url.c_str(), -1, SQLITE_TRANSIENT);
        int col = 3;
        for (FieldKey k : default_field_set()) {
            const auto& v = field(record, k);
            if (v) sqlite3_bind_text(stmt, col, v->c_str(), -1, SQLITE_TRANSIENT);
            else sqlite3_bind_null(stmt, col);
            ++col;
        }
        int rc = sqlite3_step(stmt);
        if (rc != SQLITE_DONE) {
            if (rc == SQLITE_CONSTRAINT) throw DuplicateId(id);
            throw StorageFailure(sqlite3_errmsg(db_));
        }
    }

    void append_log(const RunLogEntry& entry) {
        if (last_log_ts_ && entry.ts < *last_log_ts_) throw NonMonotoneTimestamp();
        log_out_ << run_log_line(entry) << '\n';
        log_out_.flush();
        if (!log_out_) throw StorageFailure("append to " + log_path_ + " failed");
        last_log_ts_ = entry.ts;
        last_log_id_ = entry.id;
    }

    void insert(long long id, const CatalogRecord& record) override { insert_record(id, record); }
    void append(const RunLogEntry& entry) override { append_log(entry); }

    std::vector<std::pair<long long, CatalogRecord>> records() const {
        return read_records_from(db_);
    }

    std::vector<RunLogEntry> run_log() const {
        if (!std::filesystem::exists(log_path_)) return {};
        return parse_run_log(read_file(log_path_));
    }

    long long record_count() const {
        sqlite3_stmt* stmt = nullptr;
        if (sqlite3_prepare_v2(db_, "SELECT COUNT(*) FROM records;", -1, &stmt, nullptr) !=
            SQLITE_OK)
            throw StorageFailure(sqlite3_errmsg(db_));
        std::unique_ptr<sqlite3_stmt, store_detail::StmtCloser> guard(stmt);
        if (sqlite3_step(stmt) != SQLITE_ROW) throw StorageFailure(sqlite3_errmsg(db_));
        return sqlite3_column_int64(stmt, 0);
    }

    std::optional<long long> last_attempted_id() const { return last_log_id_; }

    std::string export_csv() const {
        auto recs = records();
        return bibharvest::export_csv(recs);
    }

    // The raw log bytes, exactly as appended.
    std::string export_run_log() const {
        if (!std::filesystem::exists(log_path_)) return {};
        return read_file(log_path_);
    }

    // Read-only record load without opening an append context.
    static std::vector<std::pair<long long, CatalogRecord>> load_records(
        const std::string& dataset_path) {
        sqlite3* db = nullptr;
        if (sqlite3_open_v2(dataset_path.c_str(), &db, SQLITE_OPEN_READONLY, nullptr) !=
            SQLITE_OK) {
            std::string what = db ? sqlite3_errmsg(db) : "cannot open database";
            sqlite3_close(db);
            throw StorageFailure("open " + dataset_path + ": " + what);
        }
        auto out = read_records_from(db);
        sqlite3_close(db);
        return out;
    }

private:
    static std::string read_file(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw StorageFailure("read " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    static std::vector<std::pair<long long, CatalogRecord>> read_records_from(sqlite3* db) {
        std::string sql = "SELECT id";
        for (auto col : kCsvColumns) {
            sql += ", ";
            sql += col;
        }
        sql += " FROM records ORDER BY id;";
        sqlite3_stmt* stmt = nullptr;
        if (sqlite3_prepare_v2(db, sql.c_str(), -1, &stmt, nullptr) != SQLITE_OK)
            throw StorageFailure(sqlite3_errmsg(db));
        std::unique_ptr<sqlite3_stmt, store_detail::StmtCloser> guard(stmt);
        std::vector<std::pair<long long, CatalogRecord>> out;
        int rc;
        while ((rc = sqlite3_step(stmt)) == SQLITE_ROW) {
            CatalogRecord r;
            long long id = sqlite3_column_int64(stmt, 0);
            auto text_at = [&](int col) -> std::optional<std::string> {
                if (sqlite3_column_type(stmt, col) == SQLITE_NULL) return std::nullopt;
                return std::string(reinterpret_cast<const char*>(sqlite3_column_text(stmt, col)));
            };
            r.url = text_at(1).value_or("");
            for (int k = 0; k < kFieldCount; ++k)
                field(r, static_cast<FieldKey>(k)) = text_at(k + 2);
            out.emplace_back(id, std::move(r));
        }
        if (rc != SQLITE_DONE) throw StorageFailure(sqlite3_errmsg(db));
        return out;
    }

    sqlite3* db_ = nullptr;
    std::unique_ptr<sqlite3_stmt, store_detail::StmtCloser> insert_stmt_;
    std::string log_path_;
    std::ofstream log_out_;
    std::optional<Timestamp> last_log_ts_;
    std::optional<long long> last_log_id_;
};

}  // namespace bibharvest
