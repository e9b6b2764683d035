#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fincot/blueprint.hpp"
#include "fincot/evaluation.hpp"
#include "fincot/inference.hpp"
#include "fincot/prompting.hpp"
#include "fincot/routing.hpp"

namespace fincot::cli {

struct RunConfig {
    std::string dataset_path;
    std::string blueprint_dir = "blueprints";
    std::string template_dir = "templates";
    std::optional<std::string> label_cache_path;
    std::vector<prompting::PromptStrategy> strategies;
    inference::GenerationParams params;
    int parallel = 4;
    std::string output_dir = "runs";
};

struct ResponseCacheRecord {
    std::string item_id;
    std::string strategy;
    std::string model;
    std::string content;
    long input_tokens = 0;
    long output_tokens = 0;
    inference::UsageSource usage_source = inference::UsageSource::Approximate;
    long latency_ms = 0;
    std::string timestamp;
};

// Append-only JSONL keyed by (item id, strategy, model); last write wins on
// duplicate keys at read time, so a torn tail line never corrupts history.
class ResponseCache {
  public:
    explicit ResponseCache(std::string path);

    void load();
    const ResponseCacheRecord* find(const std::string& item_id, const std::string& strategy,
                                    const std::string& model) const;
    void append(const ResponseCacheRecord& record);  // serialized, line-atomic
    std::size_t size() const { return records_.size(); }

  private:
    std::string path_;
    std::map<std::string, ResponseCacheRecord> records_;
};

struct FailureRecord {
    std::string item_id;
    std::string strategy;
    std::string error;
};

struct RunArtifacts {
    std::map<std::string, evaluation::RunSummary> summaries;  // by strategy id
    std::vector<FailureRecord> failures;
    std::size_t new_requests = 0;   // requests actually sent this invocation
    std::size_t cache_hits = 0;
    std::string run_dir;            // <output_dir>/<model token>
};

// Full pipeline over every (strategy, item): assemble -> complete -> extract
// -> score. Raw responses hit the cache before scoring; re-invocation skips
// cached triples. Item failures are recorded, never silently dropped.
RunArtifacts run(const RunConfig& config, inference::ChatClient& client);

std::string sanitize_path_token(std::string_view raw);

}  // namespace fincot::cli
