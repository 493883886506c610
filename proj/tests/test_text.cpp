#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <string>

#include "bibharvest/text.hpp"

using bibharvest::clean_text;
using bibharvest::handle_null;

TEST_CASE("clean_text trims and collapses whitespace runs") {
    CHECK(clean_text("  334  p. ") == "334 p.");
    CHECK(clean_text("El  \"profundo\nIsaac\"") == "El \"profundo Isaac\"");
    CHECK(clean_text("") == "");
    CHECK(clean_text(" \t\r\n ") == "");
    CHECK(clean_text("a\r\nb") == "a b");
    // accents are bytes like any other
    CHECK(clean_text("  Salón   General\t") == "Salón General");
}

TEST_CASE("clean_text properties") {
    std::mt19937_64 rng(42);
    const std::string alphabet = "ab \"c;\t\né\n\r  x ";
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
    std::uniform_int_distribution<int> length(0, 60);
    for (int iteration = 0; iteration < 2000; ++iteration) {
        std::string raw;
        int n = length(rng);
        for (int i = 0; i < n; ++i) raw.push_back(alphabet[pick(rng)]);
        std::string cleaned = clean_text(raw);
        // idempotence
        CHECK(clean_text(cleaned) == cleaned);
        // no leading/trailing whitespace, no runs
        if (!cleaned.empty()) {
            CHECK_FALSE(bibharvest::is_collapsible_space(cleaned.front()));
            CHECK_FALSE(bibharvest::is_collapsible_space(cleaned.back()));
        }
        for (std::size_t i = 1; i < cleaned.size(); ++i)
            CHECK_FALSE((bibharvest::is_collapsible_space(cleaned[i - 1]) &&
                         bibharvest::is_collapsible_space(cleaned[i])));
    }
}

TEST_CASE("handle_null") {
    CHECK_FALSE(handle_null(std::optional<std::string>{""}).has_value());
    CHECK_FALSE(handle_null(std::nullopt).has_value());
    CHECK(handle_null(std::optional<std::string>{"Madrid"}) == "Madrid");
}
