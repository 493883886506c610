#pragma once

// The bibliographic record schema: url plus twelve metadata columns. Member
// names deliberately mirror the canonical column names used by the CSV and
// JSON surfaces.

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "bibharvest/text.hpp"

namespace bibharvest {

enum class FieldKey {
    Author,
    Title,
    PlaceOfPublication,
    Publisher,
    PublicationDate,
    PhysicalDescription,
    OtherPhysicalCharacteristics,
    Dimensions,
    MaterialType,
    Signature,
    Location,
    Headquarters,
};

inline constexpr int kFieldCount = 12;

inline constexpr std::array<std::string_view, kFieldCount> kFieldNames{
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

inline std::string_view field_name(FieldKey key) {
    return kFieldNames[static_cast<int>(key)];
}

inline std::optional<FieldKey> field_key_from_name(std::string_view name) {
    for (int i = 0; i < kFieldCount; ++i)
        if (kFieldNames[i] == name) return static_cast<FieldKey>(i);
    return std::nullopt;
}

struct CatalogRecord {
    std::string url;
    std::optional<std::string> author;
    std::optional<std::string> title;
    std::optional<std::string> placeOfPublication;
    std::optional<std::string> publisher;
    std::optional<std::string> publicationDate;
    std::optional<std::string> physicalDescription;
    std::optional<std::string> otherPhysicalCharacteristics;
    std::optional<std::string> dimensions;
    std::optional<std::string> materialType;
    std::optional<std::string> signature;
    std::optional<std::string> location;
    std::optional<std::string> headquarters;

    bool operator==(const CatalogRecord&) const = default;
};

inline std::optional<std::string>& field(CatalogRecord& r, FieldKey key) {
    switch (key) {
        case FieldKey::Author: return r.author;
        case FieldKey::Title: return r.title;
        case FieldKey::PlaceOfPublication: return r.placeOfPublication;
        case FieldKey::Publisher: return r.publisher;
        case FieldKey::PublicationDate: return r.publicationDate;
        case FieldKey::PhysicalDescription: return r.physicalDescription;
        case FieldKey::OtherPhysicalCharacteristics: return r.otherPhysicalCharacteristics;
        case FieldKey::Dimensions: return r.dimensions;
        case FieldKey::MaterialType: return r.materialType;
        case FieldKey::Signature: return r.signature;
        case FieldKey::Location: return r.location;
        case FieldKey::Headquarters: return r.headquarters;
    }
    throw std::logic_error("field: bad FieldKey");
}

inline const std::optional<std::string>& field(const CatalogRecord& r, FieldKey key) {
    return field(const_cast<CatalogRecord&>(r), key);
}

// The twelve metadata keys in schema order.
inline std::span<const FieldKey> default_field_set() {
    static constexpr std::array<FieldKey, kFieldCount> keys{
        FieldKey::Author,
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
    return keys;
}

struct EmptyFieldSet : std::invalid_argument {
    EmptyFieldSet() : std::invalid_argument("completion_rate: field_set is empty") {}
};

// A record is worth persisting iff it has a title.
inline bool is_persistable(const CatalogRecord& r) {
    return handle_null(r.title).has_value();
}

inline int fields_present_count(const CatalogRecord& r,
                                std::span<const FieldKey> field_set = default_field_set()) {
    int present = 0;
    for (FieldKey k : field_set)
        if (handle_null(field(r, k))) ++present;
    return present;
}

inline double completion_rate(const CatalogRecord& r, std::span<const FieldKey> field_set) {
    if (field_set.empty()) throw EmptyFieldSet();
    return static_cast<double>(fields_present_count(r, field_set)) /
           static_cast<double>(field_set.size());
}

// JSON form: url plus the populated metadata fields, in schema order.
inline nlohmann::ordered_json record_to_json(const CatalogRecord& r) {
    nlohmann::ordered_json j;
    j["url"] = r.url;
    for (FieldKey k : default_field_set()) {
        const auto& v = field(r, k);
        if (v) j[std::string(field_name(k))] = *v;
    }
    return j;
}

inline CatalogRecord record_from_json(const nlohmann::json& j) {
    CatalogRecord r;
    r.url = j.value("url", std::string{});
    for (FieldKey k : default_field_set()) {
        auto it = j.find(field_name(k));
        if (it != j.end() && it->is_string()) field(r, k) = it->get<std::string>();
    }
    return r;
}

}  // namespace bibharvest
