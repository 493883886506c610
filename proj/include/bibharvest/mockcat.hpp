#pragma once

// A synthetic label-table catalogue: seeded page generation with controllable
// 404s, numbering gaps, missing fields and a service-anomaly stall, plus a
// ground-truth manifest for exact end-to-end verification, and a small local
// HTTP server that serves the generated pages.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "bibharvest/crawl.hpp"
#include "bibharvest/extract.hpp"
#include "bibharvest/label_map.hpp"
#include "bibharvest/record.hpp"

namespace bibharvest {

struct InvalidScenario : std::runtime_error {
    explicit InvalidScenario(const std::string& what) : std::runtime_error(what) {}
};

struct PortUnavailable : std::runtime_error {
    explicit PortUnavailable(const std::string& what) : std::runtime_error(what) {}
};

struct LatencyModel {
    Millis base{0};
    Millis jitter{0};  // uniform over [0, jitter]
};

struct AnomalySpec {
    long long after_n_requests = 0;
    Millis stall{0};
};

struct CatalogueScenario {
    std::uint64_t seed = 1;
    long long id_start = 1;
    long long id_end = 100;
    std::set<long long> not_found_ids;
    std::optional<double> not_found_rate;  // sampled on top of the explicit set
    std::set<long long> gap_ids;           // excluded from existence entirely
    std::map<FieldKey, double> field_missing_prob;
    std::set<long long> title_missing_ids;
    LatencyModel latency;
    std::optional<AnomalySpec> anomaly;
    std::string url_prefix = "/edicion/bimo";
    int pad_width = 10;

    void validate() const {
        if (id_start > id_end) throw InvalidScenario("id_start exceeds id_end");
        if (id_start < 0) throw InvalidScenario("id_start must be non-negative");
        if (pad_width < 1 || pad_width > 18)
            throw InvalidScenario("pad_width must be between 1 and 18");
        long long limit = 1;
        for (int i = 0; i < pad_width; ++i) limit *= 10;
        if (id_end >= limit) throw InvalidScenario("id_end does not fit in pad_width digits");
        if (not_found_rate && (*not_found_rate < 0.0 || *not_found_rate > 1.0))
            throw InvalidScenario("not_found_rate must be in [0, 1]");
        for (const auto& [key, p] : field_missing_prob) {
            (void)key;
            if (p < 0.0 || p > 1.0)
                throw InvalidScenario("field_missing_prob values must be in [0, 1]");
        }
        auto in_range = [&](const std::set<long long>& ids) {
            for (long long id : ids)
                if (id < id_start || id > id_end) return false;
            return true;
        };
        if (!in_range(not_found_ids)) throw InvalidScenario("not_found_ids outside the id range");
        if (!in_range(gap_ids)) throw InvalidScenario("gap_ids outside the id range");
        if (anomaly && (anomaly->after_n_requests < 0 || anomaly->stall.count() < 0))
            throw InvalidScenario("anomaly values must be non-negative");
    }
};

enum class IdKind { Exists, NotFound, Gap };

inline std::string_view to_string(IdKind k) {
    switch (k) {
        case IdKind::Exists: return "exists";
        case IdKind::NotFound: return "not_found";
        case IdKind::Gap: return "gap";
    }
    return "gap";
}

struct ManifestEntry {
    long long id = 0;
    IdKind kind = IdKind::Gap;
    CatalogRecord record;  // meaningful when kind == Exists; url is the page path
    bool persistable = false;
    int fields_present = 0;
};

struct Manifest {
    std::vector<ManifestEntry> entries;  // the full id range, ascending
    long long total_ids = 0;
    long long expected_not_found = 0;  // 404 responses a full sweep will see
    long long expected_records = 0;
    long long expected_skipped_title = 0;
    std::vector<long long> persisted_ids;
    double expected_mean_completion_rate = 0.0;
    long long expected_jump_count = 0;
    long long expected_min_jump = 0;
    long long expected_max_jump = 0;
    double expected_mean_jump = 0.0;
    double expected_std_dev_jump = 0.0;
};

namespace mockcat_detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Order-independent per-id stream: regenerating any id alone gives the same
// page, which is what keeps manifests reproducible.
inline std::mt19937_64 id_rng(std::uint64_t seed, long long id, std::uint64_t stream) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(stream) ^
                                      splitmix64(static_cast<std::uint64_t>(id))));
}

inline constexpr std::uint64_t kStreamNotFound = 0xA11CE;
inline constexpr std::uint64_t kStreamPage = 0xB0B;

template <std::size_t N>
inline std::string_view pick(std::mt19937_64& rng, const std::array<std::string_view, N>& pool) {
    return pool[std::uniform_int_distribution<std::size_t>(0, N - 1)(rng)];
}

inline bool coin(std::mt19937_64& rng, double p) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

inline const std::array<std::string_view, 10> kTitleHeads{
    "El \"profundo archivo\"", "La «biblioteca escondida»", "Crónica general del reino",
    "Memorias del cautivo de Argel", "Tratado de música antigua", "Historia de la imprenta",
    "Viaje a las Indias occidentales", "Cartas desde Ávila", "Diccionario geográfico",
    "Romancero de la villa",
};

inline const std::array<std::string_view, 8> kTitleTails{
    "documentos inéditos del archivo municipal", "recopilación de hechos y documentos",
    "edición facsímil anotada", "estudio preliminar y notas críticas",
    "con láminas y grabados de época", "traducción y prólogo del editor",
    "según el manuscrito original", "apéndice documental y colofón",
};

inline const std::array<std::string_view, 12> kPlaces{
    "Madrid", "Barcelona", "Sevilla", "Valencia", "Zaragoza", "León",
    "Cádiz", "Málaga", "A Coruña", "San Sebastián", "Ávila", "Córdoba",
};

inline const std::array<std::string_view, 8> kPublishers{
    "Castro", "Espasa-Calpe", "Imprenta Real", "Aguilar",
    "Cátedra", "Librería de Fernando Fé", "Sucesores de Rivadeneyra", "Tipografía Nacional",
};

inline const std::array<std::string_view, 6> kMaterialTypes{
    "Libro", "Manuscrito", "Partitura", "Mapa", "Folleto", "Grabado",
};

inline const std::array<std::string_view, 5> kOtherPhysical{
    "lám.", "il.", "gráf.", "map.", "retr., lám.",
};

inline const std::array<std::string_view, 6> kLocations{
    "Salón General", "Sala Cervantes", "Depósito Norte", "Hemeroteca", "Sala Goya",
    "Depósito Sur",
};

inline const std::array<std::string_view, 2> kHeadquarters{
    "Sede de Recoletos", "Sede de Alcalá",
};

inline std::string generate_value(std::mt19937_64& rng, FieldKey key) {
    switch (key) {
        case FieldKey::Title: {
            std::string title(pick(rng, kTitleHeads));
            title += " ;";
            title += pick(rng, kTitleTails);
            if (coin(rng, 0.4)) {
                title += " ;";
                title += pick(rng, kTitleTails);
            }
            if (coin(rng, 0.3)) title += " ;";
            return title;
        }
        case FieldKey::PlaceOfPublication: return std::string(pick(rng, kPlaces));
        case FieldKey::Publisher: return std::string(pick(rng, kPublishers));
        case FieldKey::PublicationDate:
            return std::to_string(std::uniform_int_distribution<int>(1490, 1999)(rng));
        case FieldKey::PhysicalDescription:
            return std::to_string(std::uniform_int_distribution<int>(20, 999)(rng)) + " p.";
        case FieldKey::OtherPhysicalCharacteristics:
            return std::string(pick(rng, kOtherPhysical));
        case FieldKey::Dimensions:
            return std::to_string(std::uniform_int_distribution<int>(12, 40)(rng)) + " cm";
        case FieldKey::MaterialType: return std::string(pick(rng, kMaterialTypes));
        case FieldKey::Signature:
            return std::to_string(std::uniform_int_distribution<int>(1, 9)(rng)) + "/" +
                   std::to_string(std::uniform_int_distribution<int>(10000, 99999)(rng));
        case FieldKey::Location: return std::string(pick(rng, kLocations));
        case FieldKey::Headquarters: return std::string(pick(rng, kHeadquarters));
        case FieldKey::Author: return "";  // no label on the page; never rendered
    }
    return "";
}

// Re-inserts whitespace noise that clean_text will collapse away, so the
// extractor has something to normalize.
inline std::string add_whitespace_noise(std::string_view clean, std::mt19937_64& rng) {
    std::string out;
    if (coin(rng, 0.3)) out += "\n      ";
    for (char c : clean) {
        if (c == ' ' && coin(rng, 0.2)) {
            switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
                case 0: out += "  "; break;
                case 1: out += "\n    "; break;
                default: out += " \t"; break;
            }
        } else {
            out.push_back(c);
        }
    }
    if (coin(rng, 0.3)) out += " \n  ";
    return out;
}

// & < > always escape; accented letters and quotes sometimes render as named
// entities so the decoder gets exercised.
inline std::string escape_html(std::string_view text, std::mt19937_64& rng) {
    const bool entity_accents = coin(rng, 0.5);
    const bool entity_quotes = coin(rng, 0.5);
    static const std::map<std::string_view, std::string_view> accents{
        {"á", "&aacute;"}, {"é", "&eacute;"}, {"í", "&iacute;"}, {"ó", "&oacute;"},
        {"ú", "&uacute;"}, {"Á", "&Aacute;"}, {"ñ", "&ntilde;"}, {"«", "&laquo;"},
        {"»", "&raquo;"},
    };
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == '&') { out += "&amp;"; ++i; continue; }
        if (c == '<') { out += "&lt;"; ++i; continue; }
        if (c == '>') { out += "&gt;"; ++i; continue; }
        if (c == '"' && entity_quotes) { out += "&quot;"; ++i; continue; }
        if (entity_accents && (static_cast<unsigned char>(c) & 0x80) != 0) {
            bool replaced = false;
            for (const auto& [utf8, entity] : accents) {
                if (text.compare(i, utf8.size(), utf8) == 0) {
                    out += entity;
                    i += utf8.size();
                    replaced = true;
                    break;
                }
            }
            if (replaced) continue;
        }
        out.push_back(c);
        ++i;
    }
    return out;
}

// Fields that have a label on the page, in the order the catalogue shows them.
inline const std::array<FieldKey, 11>& page_field_order() {
    static const std::array<FieldKey, 11> order{
        FieldKey::Title,
        FieldKey::PlaceOfPublication,
        FieldKey::Publisher,
        FieldKey::PublicationDate,
        FieldKey::PhysicalDescription,
        FieldKey::OtherPhysicalCharacteristics,
        FieldKey::Dimensions,
        FieldKey::MaterialType,
        FieldKey::Signature,
        FieldKey::Location,
        FieldKey::Headquarters,
    };
    return order;
}

inline std::string_view spanish_label(FieldKey key) {
    switch (key) {
        case FieldKey::Title: return "Título";
        case FieldKey::PlaceOfPublication: return "Lugar de publicación";
        case FieldKey::Publisher: return "Editorial";
        case FieldKey::PublicationDate: return "Fecha de publicación";
        case FieldKey::PhysicalDescription: return "Descripción física o extensión";
        case FieldKey::OtherPhysicalCharacteristics: return "Otras características físicas";
        case FieldKey::Dimensions: return "Dimensiones";
        case FieldKey::MaterialType: return "Tipo de material";
        case FieldKey::Signature: return "Signatura";
        case FieldKey::Location: return "Localización";
        case FieldKey::Headquarters: return "Sede";
        case FieldKey::Author: return "";
    }
    return "";
}

inline std::string render_page(const std::string& number, const CatalogRecord& record,
                               std::mt19937_64& rng) {
    std::string h;
    h += "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>Registro ";
    h += number;
    h += "</title>\n</head>\n<body>\n";
    h += "<div class=\"cabecera\"><h1>Cat&aacute;logo bibliogr&aacute;fico</h1></div>\n";
    // unrelated table without the marker class: must not extract
    h += "<table class=\"menu\">\n<tr><td>Inicio</td><td>B&uacute;squeda</td>"
         "<td>Ayuda</td></tr>\n</table>\n";
    h += "<!-- ficha del registro -->\n<table class=\"ficha\">\n";
    for (FieldKey key : page_field_order()) {
        const auto& value = field(record, key);
        if (!value) continue;
        h += "<tr><td class=\"label-row\"><strong>";
        h += escape_html(spanish_label(key), rng);
        h += "</strong></td> <td>";
        h += escape_html(add_whitespace_noise(*value, rng), rng);
        h += "</td></tr>\n";
    }
    if (coin(rng, 0.3)) {
        // a labelled row the default map does not know
        h += "<tr><td class=\"label-row\"><strong>Procedencia</strong></td>"
             " <td>Donaci&oacute;n particular</td></tr>\n";
    }
    h += "</table>\n";
    // footer row with emphasis but without the marker class: must not extract
    h += "<table class=\"pie\">\n<tr><td class=\"nota\"><strong>Aviso</strong></td>"
         "<td>Uso para investigaci&oacute;n</td></tr>\n</table>\n";
    h += "</body>\n</html>\n";
    return h;
}

}  // namespace mockcat_detail

// Deterministic under (scenario, seed): regenerating yields byte-identical
// pages and an identical manifest.
inline std::pair<std::map<long long, std::string>, Manifest> generate_pages(
    const CatalogueScenario& scenario) {
    scenario.validate();
    using namespace mockcat_detail;

    std::set<long long> not_found = scenario.not_found_ids;
    if (scenario.not_found_rate && *scenario.not_found_rate > 0.0) {
        for (long long id = scenario.id_start; id <= scenario.id_end; ++id) {
            auto rng = id_rng(scenario.seed, id, kStreamNotFound);
            if (coin(rng, *scenario.not_found_rate) && scenario.gap_ids.count(id) == 0)
                not_found.insert(id);
        }
    }

    std::map<long long, std::string> pages;
    Manifest manifest;
    manifest.total_ids = scenario.id_end - scenario.id_start + 1;

    double completion_sum = 0.0;
    for (long long id = scenario.id_start; id <= scenario.id_end; ++id) {
        ManifestEntry entry;
        entry.id = id;
        if (scenario.gap_ids.count(id)) {
            entry.kind = IdKind::Gap;
            manifest.entries.push_back(std::move(entry));
            continue;
        }
        if (not_found.count(id)) {
            entry.kind = IdKind::NotFound;
            manifest.entries.push_back(std::move(entry));
            continue;
        }
        entry.kind = IdKind::Exists;
        auto rng = id_rng(scenario.seed, id, kStreamPage);
        const std::string number = format_record_number(id, scenario.pad_width);
        CatalogRecord record;
        record.url = scenario.url_prefix + number + ".html";
        for (FieldKey key : page_field_order()) {
            double p = 0.0;
            auto it = scenario.field_missing_prob.find(key);
            if (it != scenario.field_missing_prob.end()) p = it->second;
            bool missing = coin(rng, p);
            if (key == FieldKey::Title && scenario.title_missing_ids.count(id)) missing = true;
            if (!missing) field(record, key) = generate_value(rng, key);
        }
        pages[id] = render_page(number, record, rng);
        entry.fields_present = fields_present_count(record);
        entry.persistable = is_persistable(record);
        entry.record = record;
        if (entry.persistable) {
            manifest.persisted_ids.push_back(id);
            completion_sum += completion_rate(record, default_field_set());
            ++manifest.expected_records;
        } else {
            ++manifest.expected_skipped_title;
        }
        manifest.entries.push_back(std::move(entry));
    }
    manifest.expected_not_found =
        manifest.total_ids - manifest.expected_records - manifest.expected_skipped_title;
    manifest.expected_mean_completion_rate =
        manifest.expected_records > 0
            ? completion_sum / static_cast<double>(manifest.expected_records)
            : 0.0;

    // jump expectations from a plain pairwise scan over the persisted ids
    std::vector<long long> jump_sizes;
    for (std::size_t i = 1; i < manifest.persisted_ids.size(); ++i) {
        long long gap = manifest.persisted_ids[i] - manifest.persisted_ids[i - 1];
        if (gap >= 2) jump_sizes.push_back(gap);
    }
    manifest.expected_jump_count = static_cast<long long>(jump_sizes.size());
    if (!jump_sizes.empty()) {
        manifest.expected_min_jump = *std::min_element(jump_sizes.begin(), jump_sizes.end());
        manifest.expected_max_jump = *std::max_element(jump_sizes.begin(), jump_sizes.end());
        double sum = 0.0;
        for (long long s : jump_sizes) sum += static_cast<double>(s);
        manifest.expected_mean_jump = sum / static_cast<double>(jump_sizes.size());
        double sq = 0.0;
        for (long long s : jump_sizes) {
            double d = static_cast<double>(s) - manifest.expected_mean_jump;
            sq += d * d;
        }
        manifest.expected_std_dev_jump = std::sqrt(sq / static_cast<double>(jump_sizes.size()));
    }
    return {std::move(pages), std::move(manifest)};
}

// ---------------------------------------------------------------------------
// Serving

// Serves GET {url_prefix}{number}.html for generated ids, 404 elsewhere,
// with the scenario's latency model. The request after `after_n_requests`
// opens a one-shot stall window: responses inside it wait for the window to
// close, which delays exactly one response of a sequential client.
class MockServer {
public:
    MockServer(std::map<long long, std::string> pages, CatalogueScenario scenario, int port = 0)
        : pages_(std::move(pages)),
          scenario_(std::move(scenario)),
          jitter_rng_(mockcat_detail::splitmix64(scenario_.seed ^ 0x5E4BEULL)) {
        for (const auto& [id, body] : pages_) {
            paths_[scenario_.url_prefix + format_record_number(id, scenario_.pad_width) +
                   ".html"] = &body;
        }
        server_.new_task_queue = [] { return new httplib::ThreadPool(1); };
        server_.Get(".*", [this](const httplib::Request& req, httplib::Response& res) {
            handle(req, res);
        });
        int bound = port == 0 ? server_.bind_to_any_port("127.0.0.1")
                              : (server_.bind_to_port("127.0.0.1", port) ? port : -1);
        if (bound <= 0)
            throw PortUnavailable("cannot bind 127.0.0.1:" +
                                  (port == 0 ? std::string("any") : std::to_string(port)));
        port_ = bound;
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~MockServer() { stop(); }

    MockServer(const MockServer&) = delete;
    MockServer& operator=(const MockServer&) = delete;

    void stop() {
        if (thread_.joinable()) {
            server_.stop();
            thread_.join();
        }
    }

    int port() const { return port_; }
    long long requests_served() const { return requests_.load(); }
    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_); }
    std::string url_template() const {
        return base_url() + scenario_.url_prefix + "{number}.html";
    }

private:
    void handle(const httplib::Request& req, httplib::Response& res) {
        const long long count = ++requests_;
        if (scenario_.anomaly && count == scenario_.anomaly->after_n_requests + 1) {
            stall_until_ = std::chrono::steady_clock::now() + scenario_.anomaly->stall;
            stalled_ = true;
        }
        if (stalled_) {
            auto now = std::chrono::steady_clock::now();
            if (now < stall_until_) std::this_thread::sleep_until(stall_until_);
        }
        Millis delay = scenario_.latency.base;
        if (scenario_.latency.jitter.count() > 0)
            delay += Millis(std::uniform_int_distribution<long long>(
                0, scenario_.latency.jitter.count())(jitter_rng_));
        if (delay.count() > 0) std::this_thread::sleep_for(delay);

        auto it = paths_.find(req.path);
        if (it == paths_.end()) {
            res.status = 404;
            res.set_content("<html><body><h1>404</h1></body></html>",
                            "text/html; charset=utf-8");
            return;
        }
        res.set_content(*it->second, "text/html; charset=utf-8");
    }

    std::map<long long, std::string> pages_;
    CatalogueScenario scenario_;
    std::map<std::string, const std::string*> paths_;
    httplib::Server server_;
    std::thread thread_;
    std::atomic<long long> requests_{0};
    bool stalled_ = false;  // worker-thread only (pool of one)
    std::chrono::steady_clock::time_point stall_until_{};
    std::mt19937_64 jitter_rng_;
    int port_ = -1;
};

// ---------------------------------------------------------------------------
// Fixture materialization and scenario/manifest JSON

inline nlohmann::ordered_json manifest_to_json(const Manifest& m) {
    nlohmann::ordered_json j;
    j["total_ids"] = m.total_ids;
    j["expected_not_found"] = m.expected_not_found;
    j["expected_records"] = m.expected_records;
    j["expected_skipped_title"] = m.expected_skipped_title;
    j["persisted_ids"] = m.persisted_ids;
    j["expected_mean_completion_rate"] = m.expected_mean_completion_rate;
    j["expected_jump_count"] = m.expected_jump_count;
    j["expected_min_jump"] = m.expected_min_jump;
    j["expected_max_jump"] = m.expected_max_jump;
    j["expected_mean_jump"] = m.expected_mean_jump;
    j["expected_std_dev_jump"] = m.expected_std_dev_jump;
    nlohmann::ordered_json entries = nlohmann::ordered_json::array();
    for (const auto& e : m.entries) {
        nlohmann::ordered_json je;
        je["id"] = e.id;
        je["kind"] = std::string(to_string(e.kind));
        if (e.kind == IdKind::Exists) {
            je["persistable"] = e.persistable;
            je["fields_present"] = e.fields_present;
            je["record"] = record_to_json(e.record);
        }
        entries.push_back(std::move(je));
    }
    j["entries"] = std::move(entries);
    return j;
}

// Writes one {number}.html per existing id plus manifest.json.
inline void write_fixtures(const std::map<long long, std::string>& pages, const Manifest& manifest,
                           const CatalogueScenario& scenario,
                           const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    for (const auto& [id, body] : pages) {
        std::ofstream out(directory /
                              (format_record_number(id, scenario.pad_width) + ".html"),
                          std::ios::binary);
        out << body;
        if (!out) throw StorageFailure("write fixture page for id " + std::to_string(id));
    }
    std::ofstream mout(directory / "manifest.json", std::ios::binary);
    mout << manifest_to_json(manifest).dump(2) << '\n';
    if (!mout) throw StorageFailure("write manifest.json");
}

inline CatalogueScenario scenario_from_json(const nlohmann::json& j) {
    CatalogueScenario sc;
    sc.seed = j.value("seed", sc.seed);
    sc.id_start = j.value("id_start", sc.id_start);
    sc.id_end = j.value("id_end", sc.id_end);
    if (j.contains("not_found_ids"))
        for (const auto& v : j.at("not_found_ids")) sc.not_found_ids.insert(v.get<long long>());
    if (j.contains("not_found_rate") && !j.at("not_found_rate").is_null())
        sc.not_found_rate = j.at("not_found_rate").get<double>();
    if (j.contains("gap_ids"))
        for (const auto& v : j.at("gap_ids")) sc.gap_ids.insert(v.get<long long>());
    if (j.contains("field_missing_prob")) {
        for (const auto& [name, p] : j.at("field_missing_prob").items()) {
            auto key = field_key_from_name(name);
            if (!key) throw InvalidScenario("field_missing_prob: unknown field '" + name + "'");
            sc.field_missing_prob[*key] = p.get<double>();
        }
    }
    if (j.contains("title_missing_ids"))
        for (const auto& v : j.at("title_missing_ids"))
            sc.title_missing_ids.insert(v.get<long long>());
    if (j.contains("latency")) {
        sc.latency.base = Millis(j.at("latency").value("base", 0LL));
        sc.latency.jitter = Millis(j.at("latency").value("jitter", 0LL));
    }
    if (j.contains("anomaly") && !j.at("anomaly").is_null()) {
        AnomalySpec a;
        a.after_n_requests = j.at("anomaly").value("after_n_requests", 0LL);
        a.stall = Millis(j.at("anomaly").value("stall", 0LL));
        sc.anomaly = a;
    }
    sc.url_prefix = j.value("url_prefix", sc.url_prefix);
    sc.pad_width = j.value("pad_width", sc.pad_width);
    return sc;
}

}  // namespace bibharvest
