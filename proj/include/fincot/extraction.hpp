#pragma once

#include <optional>
#include <string>

#include "fincot/domain.hpp"

namespace fincot::extraction {

enum class ExtractionMethod { Tagged, FallbackPattern, None };

std::string_view to_string(ExtractionMethod method);
std::optional<ExtractionMethod> method_from_string(std::string_view text);

struct Sections {
    std::optional<std::string> thinking;
    std::optional<std::string> output;
};

// Inner text of the first well-formed <thinking>..</thinking> and
// <output>..</output> pairs. Tags are flat delimiters; unclosed or absent
// tags yield absent fields.
Sections extract_sections(const std::string& content);

struct ExtractedAnswer {
    std::optional<AnswerLetter> letter;
    ExtractionMethod method = ExtractionMethod::None;
    std::optional<std::string> thinking;
    std::optional<std::string> output_block;
};

// Two-stage answer extraction: strict tagged parse inside the output block,
// then a pattern fallback over the full content, else none.
ExtractedAnswer extract_answer(const std::string& content);

}  // namespace fincot::extraction
