#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "bibharvest/record.hpp"

using namespace bibharvest;

namespace {

CatalogRecord fig_record() {
    CatalogRecord r;
    r.url = "https://datos.bne.es/edicion/bimo0001291967.html";
    r.title =
        "El \"profundo Isaac\" ;documentos inéditos del archivo de Isaac Peral y Caballero "
        ";recopilación de hechos y documentos efectuada por su hijo Antonio ;";
    r.placeOfPublication = "Madrid";
    r.publisher = "Castro";
    r.publicationDate = "1934";
    r.physicalDescription = "334 p.";
    r.otherPhysicalCharacteristics = "lám.";
    r.dimensions = "22 cm";
    r.signature = "3/95043";
    r.location = "Salón General";
    r.headquarters = "Sede de Recoletos";
    return r;
}

}  // namespace

TEST_CASE("is_persistable needs a title") {
    CHECK(is_persistable(fig_record()));
    CHECK_FALSE(is_persistable(CatalogRecord{}));
    CatalogRecord only_publisher;
    only_publisher.publisher = "Castro";
    CHECK_FALSE(is_persistable(only_publisher));
    CatalogRecord empty_title;
    empty_title.title = "";
    CHECK_FALSE(is_persistable(empty_title));
}

TEST_CASE("completion_rate over the default field set") {
    CatalogRecord full;
    for (FieldKey k : default_field_set()) field(full, k) = "x";
    CHECK(completion_rate(full, default_field_set()) == 1.0);

    CHECK(completion_rate(CatalogRecord{}, default_field_set()) == 0.0);

    // ten of twelve fields present (author and materialType absent)
    CHECK(completion_rate(fig_record(), default_field_set()) ==
          Catch::Approx(10.0 / 12.0).epsilon(1e-12));

    CHECK_THROWS_AS(completion_rate(full, std::span<const FieldKey>{}), EmptyFieldSet);
}

TEST_CASE("is_persistable equals completion over the title alone") {
    const FieldKey title_only[] = {FieldKey::Title};
    std::vector<CatalogRecord> samples{fig_record(), CatalogRecord{}};
    CatalogRecord empty_title;
    empty_title.title = "";
    samples.push_back(empty_title);
    for (const auto& r : samples)
        CHECK(is_persistable(r) == (completion_rate(r, title_only) == 1.0));
}

TEST_CASE("disjoint-union completion rate is a weighted mean of the part rates") {
    // enumerate all disjoint subset pairs of a 6-key universe
    const std::vector<FieldKey> universe{FieldKey::Title,    FieldKey::Publisher,
                                         FieldKey::Location, FieldKey::Author,
                                         FieldKey::Dimensions, FieldKey::MaterialType};
    CatalogRecord r = fig_record();
    const unsigned all = 1u << universe.size();
    for (unsigned s1 = 1; s1 < all; ++s1) {
        for (unsigned s2 = 1; s2 < all; ++s2) {
            if ((s1 & s2) != 0) continue;
            std::vector<FieldKey> a, b, u;
            for (std::size_t bit = 0; bit < universe.size(); ++bit) {
                if (s1 & (1u << bit)) a.push_back(universe[bit]);
                if (s2 & (1u << bit)) b.push_back(universe[bit]);
                if ((s1 | s2) & (1u << bit)) u.push_back(universe[bit]);
            }
            double ra = completion_rate(r, a);
            double rb = completion_rate(r, b);
            double ru = completion_rate(r, u);
            double weighted = (ra * static_cast<double>(a.size()) +
                               rb * static_cast<double>(b.size())) /
                              static_cast<double>(u.size());
            CHECK(ru == Catch::Approx(weighted).margin(1e-12));
            CHECK(ru >= std::min(ra, rb) - 1e-12);
            CHECK(ru <= std::max(ra, rb) + 1e-12);
        }
    }
}

TEST_CASE("field name round-trip") {
    for (FieldKey k : default_field_set()) CHECK(field_key_from_name(field_name(k)) == k);
    CHECK_FALSE(field_key_from_name("no_such_field").has_value());
}

TEST_CASE("record json keeps only populated fields") {
    auto j = record_to_json(fig_record());
    CHECK(j.contains("url"));
    CHECK(j.contains("publisher"));
    CHECK_FALSE(j.contains("author"));
    CHECK(record_from_json(j) == fig_record());
}
