#pragma once

// Deterministic renderer for the five-section structured prompt: Role,
// Context and purpose, Inputs and constraints, Input and output examples,
// Detailed steps. Spec fields pass through verbatim (any quoting of key
// terms is the spec author's business); the renderer only supplies the
// section scaffolding.

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace bibharvest {

enum class ConstraintModality { Mandatory, Optional };

struct PromptConstraint {
    std::string text;
    ConstraintModality modality = ConstraintModality::Mandatory;
};

struct PromptIoExample {
    std::string input;
    std::string output;
};

struct PromptRole {
    std::vector<std::string> domains;
    std::vector<std::string> expertise;
};

struct PromptContext {
    std::string problem;
    std::string environment;
    std::optional<std::string> level_of_detail;
};

struct PromptSpec {
    PromptRole role;
    PromptContext context;
    std::vector<PromptConstraint> constraints;
    std::optional<std::vector<PromptIoExample>> io_examples;
    std::vector<std::string> steps;
};

struct InvalidSpec : std::runtime_error {
    explicit InvalidSpec(const std::string& what) : std::runtime_error(what) {}
};

struct UnboundPlaceholder : std::runtime_error {
    std::string name;
    explicit UnboundPlaceholder(std::string placeholder)
        : std::runtime_error("unbound placeholder " + placeholder),
          name(std::move(placeholder)) {}
};

// Empty iff the spec invariants hold; one violation per failure, each naming
// the offending field.
inline std::vector<std::string> validate_spec(const PromptSpec& spec) {
    std::vector<std::string> violations;
    if (spec.role.domains.empty()) violations.push_back("role.domains: must not be empty");
    if (spec.context.problem.empty()) violations.push_back("context.problem: must not be empty");
    for (std::size_t i = 0; i < spec.constraints.size(); ++i)
        if (spec.constraints[i].text.empty())
            violations.push_back("constraints[" + std::to_string(i) + "].text: must not be empty");
    if (spec.steps.empty()) violations.push_back("steps: must not be empty");
    return violations;
}

namespace prompt_detail {

// "a" | "a and b" | "a, b and c"
inline std::string enumerate_phrases(std::span<const std::string> items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += (i + 1 == items.size()) ? " and " : ", ";
        out += items[i];
    }
    return out;
}

}  // namespace prompt_detail

// Byte-deterministic. Each section renders as a self-contained block
// (header, body, blank line), so omitting a section deletes exactly its
// span and leaves the rest of the output untouched.
inline std::string render_prompt(const PromptSpec& spec) {
    auto violations = validate_spec(spec);
    if (!violations.empty()) {
        std::string what = "invalid prompt spec:";
        for (const auto& v : violations) what += " " + v + ";";
        throw InvalidSpec(what);
    }

    std::string out;

    out += "**Role**\n";
    out += "You are a researcher in the area of " +
           prompt_detail::enumerate_phrases(spec.role.domains) + ".";
    if (!spec.role.expertise.empty())
        out += " Your expertise is in " + prompt_detail::enumerate_phrases(spec.role.expertise) +
               ".";
    out += "\n\n";

    out += "**Context and purpose**\n";
    out += "# *Problem* " + spec.context.problem + "\n";
    if (!spec.context.environment.empty())
        out += "# *Development environment* " + spec.context.environment + "\n";
    if (spec.context.level_of_detail)
        out += "# *Level of detail* " + *spec.context.level_of_detail + "\n";
    out += "\n";

    if (!spec.constraints.empty()) {
        out += "**Inputs and constraints**\n";
        for (const auto& c : spec.constraints) {
            out += "# ";
            if (c.modality == ConstraintModality::Optional) out += "optionally ";
            out += c.text + "\n";
        }
        out += "\n";
    }

    if (spec.io_examples && !spec.io_examples->empty()) {
        out += "**Input and output examples**\n";
        for (const auto& ex : *spec.io_examples) {
            out += "# Input example\n" + ex.input + "\n";
            out += "# Output example\n" + ex.output + "\n";
        }
        out += "\n";
    }

    out += "**Detailed steps**\n";
    for (std::size_t i = 0; i < spec.steps.size(); ++i)
        out += std::to_string(i + 1) + ". " + spec.steps[i] + "\n";
    out += "\n";

    return out;
}

// Replaces XXXX-style placeholders: a placeholder is a maximal run of four
// or more of the same uppercase letter. Multi-valued bindings render as a
// parenthesized, comma-separated enumeration.
inline std::string expand_placeholders(
    std::string_view text, const std::map<std::string, std::vector<std::string>>& bindings) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        char c = text[i];
        if (c >= 'A' && c <= 'Z') {
            std::size_t j = i + 1;
            while (j < n && text[j] == c) ++j;
            if (j - i >= 4) {
                std::string token(text.substr(i, j - i));
                auto it = bindings.find(token);
                if (it == bindings.end()) throw UnboundPlaceholder(token);
                const auto& values = it->second;
                if (values.size() == 1) {
                    out += values[0];
                } else if (values.size() > 1) {
                    out += "(";
                    for (std::size_t k = 0; k < values.size(); ++k) {
                        if (k) out += ", ";
                        out += values[k];
                    }
                    out += ")";
                }
                i = j;
                continue;
            }
            out.append(text.substr(i, j - i));
            i = j;
            continue;
        }
        out.push_back(c);
        ++i;
    }
    return out;
}

// ---------------------------------------------------------------------------
// JSON form (shared with the CLI configuration file)

inline PromptSpec prompt_spec_from_json(const nlohmann::json& j) {
    PromptSpec spec;
    if (j.contains("role")) {
        const auto& role = j.at("role");
        if (role.contains("domains"))
            spec.role.domains = role.at("domains").get<std::vector<std::string>>();
        if (role.contains("expertise"))
            spec.role.expertise = role.at("expertise").get<std::vector<std::string>>();
    }
    if (j.contains("context")) {
        const auto& ctx = j.at("context");
        spec.context.problem = ctx.value("problem", std::string{});
        spec.context.environment = ctx.value("environment", std::string{});
        if (ctx.contains("level_of_detail") && !ctx.at("level_of_detail").is_null())
            spec.context.level_of_detail = ctx.at("level_of_detail").get<std::string>();
    }
    if (j.contains("constraints")) {
        for (const auto& c : j.at("constraints")) {
            PromptConstraint pc;
            pc.text = c.value("text", std::string{});
            std::string modality = c.value("modality", std::string{"mandatory"});
            if (modality == "optional") pc.modality = ConstraintModality::Optional;
            else if (modality != "mandatory")
                throw std::runtime_error("constraints[].modality: unknown value '" + modality +
                                         "'");
            spec.constraints.push_back(std::move(pc));
        }
    }
    if (j.contains("io_examples") && !j.at("io_examples").is_null()) {
        std::vector<PromptIoExample> examples;
        for (const auto& e : j.at("io_examples"))
            examples.push_back({e.value("input", std::string{}), e.value("output", std::string{})});
        spec.io_examples = std::move(examples);
    }
    if (j.contains("steps")) spec.steps = j.at("steps").get<std::vector<std::string>>();
    return spec;
}

}  // namespace bibharvest
