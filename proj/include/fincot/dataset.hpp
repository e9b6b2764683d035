#pragma once

#include <string>
#include <vector>

#include "fincot/prompting.hpp"

namespace fincot::cli {

class DatasetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class SchemaError : public DatasetError {
  public:
    SchemaError(std::size_t line, const std::string& detail);
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

class AnswerNotInOptions : public DatasetError {
  public:
    AnswerNotInOptions(std::size_t line, const std::string& answer);
};

// JSONL ingestion with a tolerant field adapter: question under
// question/query/text, options as a choices/options array or A/B/C keys,
// answer as a letter or as option text. Options are folded into the question
// as "A. ..." lines.
std::vector<prompting::McqItem> ingest_dataset(const std::string& path);

}  // namespace fincot::cli
