#include "fincot/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

#include "fincot/util.hpp"

namespace fincot::extraction {

namespace {

std::optional<std::string> inner_text(const std::string& content, std::string_view open,
                                      std::string_view close) {
    auto begin = content.find(open);
    if (begin == std::string::npos) return std::nullopt;
    begin += open.size();
    auto end = content.find(close, begin);
    if (end == std::string::npos) return std::nullopt;
    return content.substr(begin, end - begin);
}

bool is_sep(char c) {
    switch (c) {
    case ' ': case '\t': case '\r': case '\n':
    case ':': case '"': case '\'': case '[': case '(': case '*':
        return true;
    default:
        return false;
    }
}

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// Binds an answer letter right after `pos`, skipping separator decoration.
// The letter must sit on a word boundary so "Apples" never binds as A.
std::optional<AnswerLetter> bind_letter(std::string_view text, std::size_t pos) {
    while (pos < text.size() && is_sep(text[pos])) ++pos;
    if (pos >= text.size()) return std::nullopt;
    auto letter = answer_from_char(text[pos]);
    if (!letter) return std::nullopt;
    if (pos + 1 < text.size() && is_word_char(text[pos + 1])) return std::nullopt;
    return letter;
}

bool iequals_at(std::string_view text, std::size_t pos, std::string_view needle) {
    if (pos + needle.size() > text.size()) return false;
    for (std::size_t i = 0; i < needle.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(text[pos + i])) != needle[i]) return false;
    }
    return true;
}

struct FallbackMatch {
    std::size_t position;
    AnswerLetter letter;
};

void scan_keyword_matches(std::string_view text, std::string_view keyword, bool require_colon,
                          std::vector<FallbackMatch>& matches) {
    for (std::size_t pos = 0; pos + keyword.size() <= text.size(); ++pos) {
        if (!iequals_at(text, pos, keyword)) continue;
        std::size_t after = pos + keyword.size();
        if (require_colon) {
            std::size_t p = after;
            while (p < text.size() && (text[p] == ' ' || text[p] == '"' || text[p] == '\'' ||
                                       text[p] == '*')) {
                ++p;
            }
            if (p >= text.size() || text[p] != ':') continue;
            after = p + 1;
        }
        if (auto letter = bind_letter(text, after)) {
            matches.push_back({pos, *letter});
        }
    }
}

std::optional<AnswerLetter> final_line_letter(const std::string& content) {
    auto lines = util::split_lines(content);
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
        std::string_view line = util::trim(*it);
        if (line.empty()) continue;
        // strip decoration from both ends, e.g. "**B**", "(C)", "A."
        auto deco = [](char c) {
            return c == '.' || c == ')' || c == '(' || c == '*' || c == '"' || c == '\'' ||
                   c == '[' || c == ']' || c == ':';
        };
        while (!line.empty() && deco(line.front())) line.remove_prefix(1);
        while (!line.empty() && deco(line.back())) line.remove_suffix(1);
        if (line.size() != 1) return std::nullopt;
        return answer_from_char(line[0]);
    }
    return std::nullopt;
}

}  // namespace

std::string_view to_string(ExtractionMethod method) {
    switch (method) {
    case ExtractionMethod::Tagged: return "tagged";
    case ExtractionMethod::FallbackPattern: return "fallback_pattern";
    default: return "none";
    }
}

std::optional<ExtractionMethod> method_from_string(std::string_view text) {
    if (text == "tagged") return ExtractionMethod::Tagged;
    if (text == "fallback_pattern") return ExtractionMethod::FallbackPattern;
    if (text == "none") return ExtractionMethod::None;
    return std::nullopt;
}

Sections extract_sections(const std::string& content) {
    Sections sections;
    sections.thinking = inner_text(content, "<thinking>", "</thinking>");
    sections.output = inner_text(content, "<output>", "</output>");
    return sections;
}

ExtractedAnswer extract_answer(const std::string& content) {
    ExtractedAnswer result;
    Sections sections = extract_sections(content);
    result.thinking = sections.thinking;
    result.output_block = sections.output;

    // Stage 1: strict tagged parse. The letter bound to the last `"answer"`
    // key inside the output block wins; the block's closing restatement is
    // the final answer by construction.
    if (sections.output) {
        const std::string& block = *sections.output;
        std::optional<AnswerLetter> bound;
        const std::string key = "\"answer\"";
        for (std::size_t pos = block.find(key); pos != std::string::npos;
             pos = block.find(key, pos + 1)) {
            if (auto letter = bind_letter(block, pos + key.size())) bound = letter;
        }
        if (bound) {
            result.letter = bound;
            result.method = ExtractionMethod::Tagged;
            return result;
        }
    }

    // Stage 2: pattern fallback over the full content; last occurrence wins.
    std::vector<FallbackMatch> matches;
    scan_keyword_matches(content, "answer is", /*require_colon=*/false, matches);
    scan_keyword_matches(content, "answer", /*require_colon=*/true, matches);
    std::optional<FallbackMatch> best;
    for (const auto& m : matches) {
        if (!best || m.position >= best->position) best = m;
    }
    if (auto letter = final_line_letter(content)) {
        best = FallbackMatch{content.size(), *letter};  // end of content: always last
    }
    if (best) {
        result.letter = best->letter;
        result.method = ExtractionMethod::FallbackPattern;
        return result;
    }

    result.method = ExtractionMethod::None;
    return result;
}

}  // namespace fincot::extraction
