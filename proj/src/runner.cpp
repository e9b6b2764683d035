#include "fincot/runner.hpp"

#include <atomic>
#include <cctype>
#include <chrono>
#include <ctime>
#include <filesystem>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "fincot/dataset.hpp"
#include "fincot/extraction.hpp"
#include "fincot/util.hpp"

namespace fincot::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string cache_key(const std::string& item_id, const std::string& strategy,
                      const std::string& model) {
    return item_id + "\x1f" + strategy + "\x1f" + model;
}

std::string utc_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::string sanitize_path_token(std::string_view raw) {
    std::string out;
    for (char c : raw) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.') {
            out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else {
            out += '_';
        }
    }
    return out.empty() ? "model" : out;
}

ResponseCache::ResponseCache(std::string path) : path_(std::move(path)) {}

void ResponseCache::load() {
    records_.clear();
    if (!fs::exists(path_)) return;
    for (const auto& line : util::split_lines(util::read_file(path_))) {
        if (util::trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error&) {
            continue;  // torn tail line from an interrupted write
        }
        ResponseCacheRecord rec;
        rec.item_id = j.value("id", "");
        rec.strategy = j.value("strategy", "");
        rec.model = j.value("model", "");
        rec.content = j.value("content", "");
        rec.input_tokens = j.value("input_tokens", 0L);
        rec.output_tokens = j.value("output_tokens", 0L);
        rec.usage_source = j.value("usage_source", "approximate") == "provider"
                               ? inference::UsageSource::Provider
                               : inference::UsageSource::Approximate;
        rec.latency_ms = j.value("latency_ms", 0L);
        rec.timestamp = j.value("timestamp", "");
        if (rec.item_id.empty() || rec.strategy.empty()) continue;
        records_[cache_key(rec.item_id, rec.strategy, rec.model)] = rec;  // last write wins
    }
}

const ResponseCacheRecord* ResponseCache::find(const std::string& item_id,
                                               const std::string& strategy,
                                               const std::string& model) const {
    auto it = records_.find(cache_key(item_id, strategy, model));
    return it == records_.end() ? nullptr : &it->second;
}

void ResponseCache::append(const ResponseCacheRecord& rec) {
    json j = {
        {"id", rec.item_id},
        {"strategy", rec.strategy},
        {"model", rec.model},
        {"content", rec.content},
        {"input_tokens", rec.input_tokens},
        {"output_tokens", rec.output_tokens},
        {"usage_source",
         rec.usage_source == inference::UsageSource::Provider ? "provider" : "approximate"},
        {"latency_ms", rec.latency_ms},
        {"timestamp", rec.timestamp},
    };
    util::append_line(path_, j.dump());
    records_[cache_key(rec.item_id, rec.strategy, rec.model)] = rec;
}

RunArtifacts run(const RunConfig& config, inference::ChatClient& client) {
    if (config.strategies.empty()) {
        throw DatasetError("run config needs at least one strategy");
    }

    auto items = ingest_dataset(config.dataset_path);
    auto registry = blueprint::load_registry(config.blueprint_dir);
    auto templates = prompting::PromptTemplates::load(config.template_dir);

    if (config.label_cache_path) {
        auto labels = routing::DomainLabelCache::load(*config.label_cache_path);
        for (auto& item : items) {
            auto it = labels.entries.find(item.id);
            if (it != labels.entries.end()) item.domain = it->second;
        }
    }

    RunArtifacts artifacts;
    const std::string model_token = sanitize_path_token(config.params.model);
    artifacts.run_dir = config.output_dir + "/" + model_token;
    fs::create_directories(artifacts.run_dir);

    ResponseCache cache(artifacts.run_dir + "/responses.jsonl");
    cache.load();

    std::mutex cache_mutex;
    std::mutex failure_mutex;
    std::atomic<std::size_t> new_requests{0};
    std::atomic<std::size_t> cache_hits{0};

    for (const auto& strategy : config.strategies) {
        const std::string strategy_id = strategy.id();

        struct Slot {
            std::optional<ResponseCacheRecord> record;
            std::optional<std::string> error;
        };
        std::vector<Slot> slots(items.size());

        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= items.size()) break;
                const auto& item = items[i];
                if (const auto* hit = cache.find(item.id, strategy_id, config.params.model)) {
                    slots[i].record = *hit;
                    cache_hits.fetch_add(1);
                    continue;
                }
                try {
                    auto prompt = prompting::assemble_prompt(strategy, item, registry, templates);
                    auto response = client.complete(prompt.system, prompt.user, config.params);
                    new_requests.fetch_add(1);
                    ResponseCacheRecord rec;
                    rec.item_id = item.id;
                    rec.strategy = strategy_id;
                    rec.model = config.params.model;
                    rec.content = std::move(response.content);
                    rec.input_tokens = response.input_tokens;
                    rec.output_tokens = response.output_tokens;
                    rec.usage_source = response.usage_source;
                    rec.latency_ms = response.latency_ms;
                    rec.timestamp = utc_timestamp();
                    {
                        std::scoped_lock lock(cache_mutex);
                        cache.append(rec);
                    }
                    slots[i].record = std::move(rec);
                } catch (const std::exception& e) {
                    slots[i].error = e.what();
                }
            }
        };

        const int thread_count = std::max(1, std::min<int>(config.parallel,
                                                           static_cast<int>(items.size())));
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(thread_count));
        for (int t = 0; t < thread_count; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();

        // Score in dataset order once the strategy pass completes.
        std::vector<evaluation::ItemResult> results;
        results.reserve(items.size());
        for (std::size_t i = 0; i < items.size(); ++i) {
            const auto& item = items[i];
            if (slots[i].error) {
                std::scoped_lock lock(failure_mutex);
                artifacts.failures.push_back({item.id, strategy_id, *slots[i].error});
                continue;
            }
            const auto& rec = *slots[i].record;
            inference::ModelResponse response;
            response.content = rec.content;
            response.input_tokens = rec.input_tokens;
            response.output_tokens = rec.output_tokens;
            response.usage_source = rec.usage_source;
            auto extracted = extraction::extract_answer(response.content);
            results.push_back(evaluation::score_item(item, extracted, response, strategy_id,
                                                     config.params.model));
        }

        if (!results.empty()) {
            evaluation::write_results_jsonl(artifacts.run_dir + "/" + strategy_id + ".jsonl",
                                            results);
            auto summary = evaluation::aggregate(results);
            util::write_file(artifacts.run_dir + "/" + strategy_id + "_summary.csv",
                             evaluation::summary_to_csv(summary));
            artifacts.summaries.emplace(strategy_id, std::move(summary));
        }
    }

    if (!artifacts.failures.empty()) {
        std::string manifest;
        for (const auto& f : artifacts.failures) {
            json j = {{"id", f.item_id}, {"strategy", f.strategy}, {"error", f.error}};
            manifest += j.dump();
            manifest += '\n';
        }
        util::write_file(artifacts.run_dir + "/failures.jsonl", manifest);
    }

    artifacts.new_requests = new_requests.load();
    artifacts.cache_hits = cache_hits.load();
    return artifacts;
}

}  // namespace fincot::cli
