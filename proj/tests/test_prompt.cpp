#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bibharvest/prompt.hpp"

using namespace bibharvest;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PromptSpec load_fixture(const std::string& name) {
    return prompt_spec_from_json(
        nlohmann::json::parse(read_file(std::string(BIBHARVEST_TEST_DATA_DIR) + "/" + name)));
}

const std::vector<std::string> kCanonicalHeaders{
    "**Role**", "**Context and purpose**", "**Inputs and constraints**",
    "**Input and output examples**", "**Detailed steps**"};

std::vector<std::size_t> header_positions(const std::string& text) {
    std::vector<std::size_t> positions;
    for (const auto& header : kCanonicalHeaders) positions.push_back(text.find(header));
    return positions;
}

PromptSpec minimal_spec() {
    PromptSpec spec;
    spec.role.domains = {"\"Testing\""};
    spec.context.problem = "Say hello.";
    spec.steps = {"Print hello."};
    return spec;
}

}  // namespace

TEST_CASE("validate_spec reports one violation per broken invariant") {
    CHECK(validate_spec(load_fixture("scraper_codegen_prompt.json")).empty());

    PromptSpec no_steps = minimal_spec();
    no_steps.steps.clear();
    auto violations = validate_spec(no_steps);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("steps") != std::string::npos);

    PromptSpec broken = minimal_spec();
    broken.steps.clear();
    broken.context.problem.clear();
    violations = validate_spec(broken);
    CHECK(violations.size() == 2);

    PromptSpec empty_constraint = minimal_spec();
    empty_constraint.constraints.push_back({"", ConstraintModality::Mandatory});
    violations = validate_spec(empty_constraint);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].find("constraints[0]") != std::string::npos);
}

TEST_CASE("five-section render carries the canonical headers in order") {
    auto spec = load_fixture("scraper_codegen_prompt.json");
    auto text = render_prompt(spec);
    auto positions = header_positions(text);
    for (std::size_t i = 0; i < positions.size(); ++i) {
        INFO("header " << kCanonicalHeaders[i]);
        CHECK(positions[i] != std::string::npos);
        if (i > 0) CHECK(positions[i] > positions[i - 1]);
    }
    // every mandatory constraint appears verbatim
    for (const auto& c : spec.constraints)
        if (c.modality == ConstraintModality::Mandatory)
            CHECK(text.find(c.text) != std::string::npos);
    // the optional constraint is qualified
    CHECK(text.find("# optionally you may need to use the function \"preg_match\"") !=
          std::string::npos);
    // role sentence assembled from the verbatim fields
    CHECK(text.find("You are a researcher in the area of \"Software Development\" and "
                    "\"Documentation Sciences\".") != std::string::npos);
    CHECK(text.find("Your expertise is in \"web-scraping\" and \"PHP language\", as well as in "
                    "the functions \"cURL\" and \"file_get_contents\".") != std::string::npos);
}

TEST_CASE("four-section render omits exactly the examples section") {
    auto spec = load_fixture("loop_extension_prompt.json");
    REQUIRE_FALSE(spec.io_examples.has_value());
    auto text = render_prompt(spec);
    CHECK(text.find("**Input and output examples**") == std::string::npos);
    auto positions = header_positions(text);
    CHECK(positions[0] != std::string::npos);
    CHECK(positions[1] != std::string::npos);
    CHECK(positions[2] != std::string::npos);
    CHECK(positions[4] != std::string::npos);
    for (const auto& c : spec.constraints) CHECK(text.find(c.text) != std::string::npos);
}

TEST_CASE("omitting io_examples deletes exactly that span") {
    auto with_examples = load_fixture("scraper_codegen_prompt.json");
    auto without_examples = with_examples;
    without_examples.io_examples.reset();
    auto full = render_prompt(with_examples);
    auto cut = render_prompt(without_examples);
    auto start = full.find("**Input and output examples**");
    REQUIRE(start != std::string::npos);
    auto end = full.find("**Detailed steps**");
    REQUIRE(end != std::string::npos);
    CHECK(cut == full.substr(0, start) + full.substr(end));
}

TEST_CASE("rendering is deterministic and ends each section with a blank line") {
    auto spec = minimal_spec();
    auto a = render_prompt(spec);
    auto b = render_prompt(spec);
    CHECK(a == b);
    CHECK(a.find("**Role**\nYou are a researcher in the area of \"Testing\".\n\n") == 0);
    CHECK(a.find("**Detailed steps**\n1. Print hello.\n\n") != std::string::npos);
    // no expertise sentence when the list is empty
    CHECK(a.find("Your expertise") == std::string::npos);
    // three sections only
    CHECK(a.find("**Inputs and constraints**") == std::string::npos);
    CHECK(a.find("**Input and output examples**") == std::string::npos);
}

TEST_CASE("render matches the golden corpus byte for byte") {
    for (const std::string name : {"scraper_codegen_prompt", "loop_extension_prompt"}) {
        auto text = render_prompt(load_fixture(name + ".json"));
        auto golden = read_file(std::string(BIBHARVEST_GOLDEN_DIR) + "/" + name + ".txt");
        INFO("golden file " << name);
        CHECK(text == golden);
    }
}

TEST_CASE("invalid specs do not render") {
    PromptSpec broken = minimal_spec();
    broken.steps.clear();
    CHECK_THROWS_AS(render_prompt(broken), InvalidSpec);
}

TEST_CASE("placeholder expansion") {
    std::map<std::string, std::vector<std::string>> bindings{{"XXXX", {"title"}}};
    CHECK(expand_placeholders("name of the metadata is XXXX", bindings) ==
          "name of the metadata is title");

    bindings["XXXX"] = {"title", "publisher"};
    CHECK(expand_placeholders("extract XXXX now", bindings) == "extract (title, publisher) now");

    CHECK_THROWS_AS(expand_placeholders("unbound YYYY here", bindings), UnboundPlaceholder);
    try {
        expand_placeholders("unbound YYYY here", bindings);
    } catch (const UnboundPlaceholder& e) {
        CHECK(e.name == "YYYY");
    }

    // shorter same-letter runs and mixed uppercase words are ordinary text
    CHECK(expand_placeholders("XXX HTTP XyXy", bindings) == "XXX HTTP XyXy");
    // maximal runs are matched whole: XXXXX is its own token
    CHECK_THROWS_AS(expand_placeholders("XXXXX", bindings), UnboundPlaceholder);
    // multiple placeholders, repeated
    bindings["ZZZZ"] = {"42"};
    bindings["XXXX"] = {"title"};
    CHECK(expand_placeholders("XXXX=ZZZZ; XXXX!", bindings) == "title=42; title!");
}

TEST_CASE("the in-and-around-strong placeholder pattern expands like the source prompt") {
    std::map<std::string, std::vector<std::string>> bindings{
        {"XXXX",
         {"title", "place of publication", "publisher", "publication date",
          "physical description or extent", "other physical characteristics", "dimensions",
          "type of material", "call number", "location", "institution"}}};
    auto expanded = expand_placeholders("where XXXX in <strong>XXXX</strong> is the name",
                                        bindings);
    CHECK(expanded.find("(title, place of publication, publisher") != std::string::npos);
    CHECK(expanded.find("<strong>(title") != std::string::npos);
}
