#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>

#include "fincot/extraction.hpp"
#include "fincot/inference.hpp"
#include "fincot/util.hpp"

using namespace fincot;
using extraction::ExtractionMethod;

TEST_CASE("sections: well-formed pair") {
    auto s = extraction::extract_sections("<thinking>x</thinking><output>y</output>");
    REQUIRE(s.thinking.has_value());
    REQUIRE(s.output.has_value());
    CHECK(*s.thinking == "x");
    CHECK(*s.output == "y");
}

TEST_CASE("sections: output only") {
    auto s = extraction::extract_sections("<output>y</output>");
    CHECK_FALSE(s.thinking.has_value());
    REQUIRE(s.output.has_value());
    CHECK(*s.output == "y");
}

TEST_CASE("sections: unclosed tags yield absent fields") {
    auto s = extraction::extract_sections("<thinking>x");
    CHECK_FALSE(s.thinking.has_value());
    CHECK_FALSE(s.output.has_value());
}

TEST_CASE("sections: flat delimiters, first pair wins") {
    auto s = extraction::extract_sections(
        "<output>first</output> trailing <output>second</output>");
    CHECK(*s.output == "first");
}

TEST_CASE("tagged extraction basics") {
    auto a = extraction::extract_answer("<output>\n\"answer\": B\n</output>");
    CHECK(a.letter == AnswerLetter::B);
    CHECK(a.method == ExtractionMethod::Tagged);

    auto b = extraction::extract_answer(
        "<output>\n\"sector\": Economics,\n\"question\": GDP,\n\"answer\": C\n</output>");
    CHECK(b.letter == AnswerLetter::C);
    CHECK(b.method == ExtractionMethod::Tagged);
}

TEST_CASE("fallback pattern catches untagged answers") {
    auto a = extraction::extract_answer("...therefore the answer is A.");
    CHECK(a.letter == AnswerLetter::A);
    CHECK(a.method == ExtractionMethod::FallbackPattern);
}

TEST_CASE("tagged extraction never reads outside the output block") {
    auto a = extraction::extract_answer(
        "<thinking>\"answer\": A</thinking><output>no key here</output>\n\"answer\": C");
    // stage 1 finds no key inside the block; stage 2 falls back on the trailing key
    CHECK(a.method == ExtractionMethod::FallbackPattern);
    CHECK(a.letter == AnswerLetter::C);
}

TEST_CASE("method none scores as no letter") {
    auto a = extraction::extract_answer("nothing to see");
    CHECK(a.method == ExtractionMethod::None);
    CHECK_FALSE(a.letter.has_value());
}

TEST_CASE("determinism: identical content, identical extraction") {
    std::string content = "<output>\n\"answer\": [B]\n</output>";
    auto first = extraction::extract_answer(content);
    auto second = extraction::extract_answer(content);
    CHECK(first.letter == second.letter);
    CHECK(first.method == second.method);
}

TEST_CASE("mock response renders extract back to every gold letter") {
    for (auto gold : {AnswerLetter::A, AnswerLetter::B, AnswerLetter::C}) {
        auto extracted = extraction::extract_answer(inference::render_tagged_response(gold));
        CHECK(extracted.letter == gold);
        CHECK(extracted.method == ExtractionMethod::Tagged);
    }
}

TEST_CASE("fixture corpus: full recall, zero wrong letters, methods match") {
    namespace fs = std::filesystem;
    std::size_t total = 0;
    for (const auto& entry : fs::directory_iterator("fixtures/extraction")) {
        if (entry.path().extension() != ".expected") continue;
        ++total;
        auto stem = entry.path().parent_path() / entry.path().stem();
        std::string content = util::read_file(stem.string() + ".txt");
        auto annotation = util::split(std::string(util::trim(util::read_file(entry.path().string()))), ' ');
        REQUIRE(annotation.size() == 2);

        CAPTURE(stem.string());
        auto extracted = extraction::extract_answer(content);
        auto expected_method = extraction::method_from_string(annotation[1]);
        REQUIRE(expected_method.has_value());
        CHECK(extracted.method == *expected_method);
        if (annotation[0] == "-") {
            CHECK_FALSE(extracted.letter.has_value());
        } else {
            REQUIRE(extracted.letter.has_value());
            CHECK(to_char(*extracted.letter) == annotation[0][0]);
        }
    }
    CHECK(total >= 50);
}
