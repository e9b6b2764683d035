#include "fincot/dataset.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "fincot/util.hpp"

namespace fincot::cli {

namespace {

using json = nlohmann::json;

std::string field_as_string(const json& value) {
    if (value.is_string()) return value.get<std::string>();
    return value.dump();
}

}  // namespace

SchemaError::SchemaError(std::size_t line, const std::string& detail)
    : DatasetError("dataset line " + std::to_string(line) + ": " + detail), line_(line) {}

AnswerNotInOptions::AnswerNotInOptions(std::size_t line, const std::string& answer)
    : DatasetError("dataset line " + std::to_string(line) + ": answer '" + answer +
                   "' is neither a letter nor one of the options") {}

std::vector<prompting::McqItem> ingest_dataset(const std::string& path) {
    std::vector<prompting::McqItem> items;
    auto lines = util::split_lines(util::read_file(path));
    std::size_t line_no = 0;
    for (const auto& raw : lines) {
        ++line_no;
        if (util::trim(raw).empty()) continue;

        json j;
        try {
            j = json::parse(raw);
        } catch (const json::parse_error& e) {
            throw SchemaError(line_no, std::string("invalid JSON: ") + e.what());
        }

        std::string question;
        for (const char* key : {"question", "query", "text"}) {
            if (j.contains(key)) { question = field_as_string(j[key]); break; }
        }
        if (question.empty()) throw SchemaError(line_no, "missing question/query/text field");

        std::vector<std::string> options;
        if (j.contains("choices") && j["choices"].is_array()) {
            for (const auto& opt : j["choices"]) options.push_back(field_as_string(opt));
        } else if (j.contains("options") && j["options"].is_array()) {
            for (const auto& opt : j["options"]) options.push_back(field_as_string(opt));
        } else if (j.contains("A") && j.contains("B") && j.contains("C")) {
            options = {field_as_string(j["A"]), field_as_string(j["B"]), field_as_string(j["C"])};
        }
        if (options.size() != 3) {
            throw SchemaError(line_no, "expected exactly three options (choices/options array or A/B/C keys)");
        }

        std::string answer;
        if (j.contains("answer")) answer = field_as_string(j["answer"]);
        else if (j.contains("gold")) answer = field_as_string(j["gold"]);
        else throw SchemaError(line_no, "missing answer/gold field");

        prompting::McqItem item;
        std::string trimmed = std::string(util::trim(answer));
        bool resolved = false;
        if (trimmed.size() == 1) {
            if (auto letter = answer_from_char(trimmed[0])) {
                item.gold = *letter;
                resolved = true;
            }
        }
        if (!resolved) {
            // resolve option text to its letter by exact match
            for (std::size_t i = 0; i < options.size(); ++i) {
                if (options[i] == answer) {
                    item.gold = static_cast<AnswerLetter>(i);
                    resolved = true;
                    break;
                }
            }
        }
        if (!resolved) throw AnswerNotInOptions(line_no, answer);

        if (j.contains("id")) item.id = field_as_string(j["id"]);
        else {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "q%04zu", line_no);
            item.id = buf;
        }

        if (j.contains("domain")) {
            auto code = domain_from_string(j["domain"].get<std::string>());
            if (!code) throw SchemaError(line_no, "unknown domain code '" + j["domain"].get<std::string>() + "'");
            item.domain = code;
        }

        item.question = question + "\nA. " + options[0] + "\nB. " + options[1] + "\nC. " + options[2];
        items.push_back(std::move(item));
    }
    return items;
}

}  // namespace fincot::cli
