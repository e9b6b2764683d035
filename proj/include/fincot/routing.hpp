#pragma once

#include <map>
#include <string>
#include <vector>

#include "fincot/domain.hpp"
#include "fincot/inference.hpp"
#include "fincot/prompting.hpp"

namespace fincot::routing {

class RoutingError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class UnrecognizedCode : public RoutingError {
  public:
    explicit UnrecognizedCode(const std::string& raw);
};

class ClassificationFailed : public RoutingError {
  public:
    ClassificationFailed(const std::string& item_id, const std::string& last_reply);
};

// Strict parse: trims whitespace and trailing punctuation, then requires an
// exact (case-sensitive) match against the ten category codes.
DomainCode parse_domain_code(const std::string& raw);

// Sends the verbatim classification instruction plus the question; one
// guarded retry on an unrecognized reply.
DomainCode classify_domain(const prompting::McqItem& item, inference::ChatClient& classifier,
                           const prompting::PromptTemplates& templates);

enum class LabelSource { Classifier, File, Manual };

std::string_view to_string(LabelSource source);

struct DomainLabelCache {
    std::map<std::string, DomainCode> entries;  // item id -> domain
    LabelSource source = LabelSource::Classifier;

    static DomainLabelCache load(const std::string& path);  // missing file = empty cache
};

struct LabelReport {
    std::size_t classified = 0;  // new classifier calls that succeeded
    std::size_t cached = 0;      // items already present
    std::vector<std::string> failed_ids;
};

// Classifies only unlabeled items and appends them to the cache file
// (JSONL, line-atomic). Idempotent: a second run issues zero calls.
LabelReport label_dataset(const std::vector<prompting::McqItem>& items,
                          inference::ChatClient& classifier,
                          const prompting::PromptTemplates& templates,
                          const std::string& cache_path, DomainLabelCache& cache);

// Deterministic keyword classifier for tests and offline runs; scores each
// category by keyword hits taken from the classification prompt's bullet
// descriptions and replies with the winning category code.
class RuleBasedClassifierMock : public inference::ChatClient {
  public:
    inference::ModelResponse complete(const std::string& system, const std::string& user,
                                      const inference::GenerationParams& params) override;
};

}  // namespace fincot::routing
