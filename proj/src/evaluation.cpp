#include "fincot/evaluation.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "fincot/util.hpp"

namespace fincot::evaluation {

namespace {
using json = nlohmann::json;
}

ItemResult score_item(const prompting::McqItem& item, const extraction::ExtractedAnswer& extracted,
                      const inference::ModelResponse& response, const std::string& strategy_id,
                      const std::string& model) {
    ItemResult result;
    result.id = item.id;
    result.domain = item.domain;
    result.gold = item.gold;
    result.predicted = extracted.letter;
    result.correct = extracted.letter.has_value() && *extracted.letter == item.gold;
    result.method = extracted.method;
    result.input_tokens = response.input_tokens;
    result.output_tokens = response.output_tokens;
    result.strategy = strategy_id;
    result.model = model;
    return result;
}

RunSummary aggregate(std::span<const ItemResult> results) {
    if (results.empty()) throw EmptyRun();

    RunSummary summary;
    summary.model = results.front().model;
    summary.strategy = results.front().strategy;
    summary.n = results.size();

    std::size_t correct = 0;
    long input_total = 0;
    long output_total = 0;
    std::map<std::string, std::pair<std::size_t, std::size_t>> domain_counts;  // n, correct
    for (const auto& r : results) {
        if (r.model != summary.model || r.strategy != summary.strategy) {
            throw MismatchedRuns("aggregate requires a single (model, strategy) result set");
        }
        correct += r.correct ? 1 : 0;
        input_total += r.input_tokens;
        output_total += r.output_tokens;
        auto& [dn, dc] = domain_counts[r.domain_bucket()];
        ++dn;
        dc += r.correct ? 1 : 0;
    }

    summary.accuracy_pct = 100.0 * static_cast<double>(correct) / static_cast<double>(summary.n);
    for (const auto& [bucket, counts] : domain_counts) {
        summary.per_domain[bucket] = {
            counts.first,
            100.0 * static_cast<double>(counts.second) / static_cast<double>(counts.first)};
    }
    summary.avg_input_k =
        static_cast<double>(input_total) / static_cast<double>(summary.n) / 1000.0;
    summary.avg_output_k =
        static_cast<double>(output_total) / static_cast<double>(summary.n) / 1000.0;
    return summary;
}

DeltaSummary compare_to_baseline(const RunSummary& run, const RunSummary& baseline) {
    if (run.n != baseline.n) {
        throw MismatchedRuns("baseline and comparison cover different item counts (" +
                             std::to_string(baseline.n) + " vs " + std::to_string(run.n) + ")");
    }
    DeltaSummary delta;
    delta.baseline = baseline;
    delta.comparison = run;
    delta.delta_pp = run.accuracy_pct - baseline.accuracy_pct;
    if (delta.delta_pp > 0) delta.direction = DeltaDirection::Up;
    else if (delta.delta_pp < 0) delta.direction = DeltaDirection::Down;
    else delta.direction = DeltaDirection::Flat;
    return delta;
}

std::string item_result_to_json(const ItemResult& r) {
    json j = {
        {"id", r.id},
        {"gold", std::string(1, to_char(r.gold))},
        {"correct", r.correct},
        {"method", std::string(extraction::to_string(r.method))},
        {"input_tokens", r.input_tokens},
        {"output_tokens", r.output_tokens},
        {"strategy", r.strategy},
        {"model", r.model},
    };
    if (r.domain) j["domain"] = std::string(to_string(*r.domain));
    if (r.predicted) j["predicted"] = std::string(1, to_char(*r.predicted));
    return j.dump();
}

ItemResult item_result_from_json(const std::string& line) {
    json j = json::parse(line);
    ItemResult r;
    r.id = j.at("id").get<std::string>();
    if (j.contains("domain")) {
        r.domain = domain_from_string(j["domain"].get<std::string>());
        if (!r.domain) throw EvaluationError("unknown domain in result line: " + line);
    }
    std::string gold = j.at("gold").get<std::string>();
    auto gold_letter = gold.size() == 1 ? answer_from_char(gold[0]) : std::nullopt;
    if (!gold_letter) throw EvaluationError("bad gold letter in result line: " + line);
    r.gold = *gold_letter;
    if (j.contains("predicted")) {
        std::string pred = j["predicted"].get<std::string>();
        auto letter = pred.size() == 1 ? answer_from_char(pred[0]) : std::nullopt;
        if (!letter) throw EvaluationError("bad predicted letter in result line: " + line);
        r.predicted = letter;
    }
    r.correct = j.at("correct").get<bool>();
    auto method = extraction::method_from_string(j.at("method").get<std::string>());
    if (!method) throw EvaluationError("bad extraction method in result line: " + line);
    r.method = *method;
    r.input_tokens = j.at("input_tokens").get<long>();
    r.output_tokens = j.at("output_tokens").get<long>();
    r.strategy = j.at("strategy").get<std::string>();
    r.model = j.at("model").get<std::string>();
    return r;
}

void write_results_jsonl(const std::string& path, std::span<const ItemResult> results) {
    std::string out;
    for (const auto& r : results) {
        out += item_result_to_json(r);
        out += '\n';
    }
    util::write_file(path, out);
}

std::vector<ItemResult> read_results_jsonl(const std::string& path) {
    std::vector<ItemResult> results;
    for (const auto& line : util::split_lines(util::read_file(path))) {
        if (util::trim(line).empty()) continue;
        results.push_back(item_result_from_json(line));
    }
    return results;
}

std::string summary_to_csv(const RunSummary& s) {
    std::string out = "model,strategy,domain,n,accuracy_pct,avg_input_k,avg_output_k\n";
    out += util::csv_row({s.model, s.strategy, "Overall", std::to_string(s.n),
                          util::format_fixed(s.accuracy_pct, 2), util::format_fixed(s.avg_input_k, 2),
                          util::format_fixed(s.avg_output_k, 2)});
    out += '\n';
    for (const auto& [bucket, stat] : s.per_domain) {
        out += util::csv_row({s.model, s.strategy, bucket, std::to_string(stat.n),
                              util::format_fixed(stat.accuracy_pct, 2), "", ""});
        out += '\n';
    }
    return out;
}

}  // namespace fincot::evaluation
