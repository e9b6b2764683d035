#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fincot/domain.hpp"
#include "fincot/extraction.hpp"
#include "fincot/inference.hpp"
#include "fincot/prompting.hpp"

namespace fincot::evaluation {

// Domain bucket key for items without a resolved domain label.
inline constexpr std::string_view kUnlabeledBucket = "Unlabeled";

struct ItemResult {
    std::string id;
    std::optional<DomainCode> domain;
    AnswerLetter gold = AnswerLetter::A;
    std::optional<AnswerLetter> predicted;
    bool correct = false;
    extraction::ExtractionMethod method = extraction::ExtractionMethod::None;
    long input_tokens = 0;
    long output_tokens = 0;
    std::string strategy;  // strategy id
    std::string model;

    std::string domain_bucket() const {
        return domain ? std::string(to_string(*domain)) : std::string(kUnlabeledBucket);
    }
};

struct DomainStat {
    std::size_t n = 0;
    double accuracy_pct = 0.0;
};

struct RunSummary {
    std::string model;
    std::string strategy;
    std::size_t n = 0;
    double accuracy_pct = 0.0;
    std::map<std::string, DomainStat> per_domain;  // keyed by code string or "Unlabeled"
    double avg_input_k = 0.0;
    double avg_output_k = 0.0;
};

enum class DeltaDirection { Up, Down, Flat };

struct DeltaSummary {
    RunSummary baseline;
    RunSummary comparison;
    double delta_pp = 0.0;
    DeltaDirection direction = DeltaDirection::Flat;
};

class EvaluationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class EmptyRun : public EvaluationError {
  public:
    EmptyRun() : EvaluationError("cannot aggregate an empty result set") {}
};

class MismatchedRuns : public EvaluationError {
  public:
    using EvaluationError::EvaluationError;
};

ItemResult score_item(const prompting::McqItem& item, const extraction::ExtractedAnswer& extracted,
                      const inference::ModelResponse& response, const std::string& strategy_id,
                      const std::string& model);

RunSummary aggregate(std::span<const ItemResult> results);

DeltaSummary compare_to_baseline(const RunSummary& run, const RunSummary& baseline);

// JSONL persistence for per-item results.
std::string item_result_to_json(const ItemResult& result);
ItemResult item_result_from_json(const std::string& line);
void write_results_jsonl(const std::string& path, std::span<const ItemResult> results);
std::vector<ItemResult> read_results_jsonl(const std::string& path);

std::string summary_to_csv(const RunSummary& summary);

}  // namespace fincot::evaluation
