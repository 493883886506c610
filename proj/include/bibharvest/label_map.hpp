#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

#include "bibharvest/record.hpp"
#include "bibharvest/text.hpp"

namespace bibharvest {

// Maps display labels, as they appear in record pages, to canonical fields.
// Aliases are compared after clean_text normalization only; case and accents
// must match exactly. Several aliases may target the same field (bilingual
// catalogues), but one alias never targets two fields.
class LabelMap {
public:
    void add(std::string_view alias, FieldKey key) {
        std::string normalized = clean_text(alias);
        if (normalized.empty()) throw std::invalid_argument("LabelMap: empty alias");
        auto [it, inserted] = entries_.emplace(std::move(normalized), key);
        if (!inserted && it->second != key)
            throw std::invalid_argument("LabelMap: alias '" + it->first +
                                        "' already mapped to a different field");
    }

    std::optional<FieldKey> find(std::string_view normalized_alias) const {
        auto it = entries_.find(std::string(normalized_alias));
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const { return entries_.size(); }

    const std::unordered_map<std::string, FieldKey>& entries() const { return entries_; }

    // The Spanish labels used by the datos.bne.es record pages. There is no
    // label for author; the catalogue presents it outside the detail table.
    static LabelMap default_spanish() {
        LabelMap m;
        m.add("Título", FieldKey::Title);
        m.add("Lugar de publicación", FieldKey::PlaceOfPublication);
        m.add("Editorial", FieldKey::Publisher);
        m.add("Fecha de publicación", FieldKey::PublicationDate);
        m.add("Descripción física o extensión", FieldKey::PhysicalDescription);
        m.add("Otras características físicas", FieldKey::OtherPhysicalCharacteristics);
        m.add("Dimensiones", FieldKey::Dimensions);
        m.add("Tipo de material", FieldKey::MaterialType);
        m.add("Signatura", FieldKey::Signature);
        m.add("Localización", FieldKey::Location);
        m.add("Sede", FieldKey::Headquarters);
        return m;
    }

private:
    std::unordered_map<std::string, FieldKey> entries_;
};

}  // namespace bibharvest
