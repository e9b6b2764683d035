#include "fincot/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>

#include "fincot/prompting.hpp"
#include "fincot/util.hpp"

namespace fincot::cli {

namespace {

namespace fs = std::filesystem;

// Canonical strategy ordering for tables.
int strategy_rank(const std::string& id) {
    static const std::vector<std::string> order = {
        "sp", "ust_cot", "st_cot", "fincot_all", "fincot_routed",
        "fincot_economics", "fincot_fixed_income", "fincot_quant_meth",
        "fincot_equity_invest", "fincot_port_manage", "fincot_derivatives",
        "fincot_fin_reporting", "fincot_alter_invest", "fincot_corp_issuers",
    };
    auto it = std::find(order.begin(), order.end(), id);
    if (it != order.end()) return static_cast<int>(it - order.begin());
    return static_cast<int>(order.size());
}

struct StrategyData {
    evaluation::RunSummary summary;
    std::vector<evaluation::ItemResult> results;
};

using ModelData = std::map<std::string, StrategyData>;  // strategy id -> data

std::vector<std::string> ordered_strategies(const ModelData& data) {
    std::vector<std::string> ids;
    for (const auto& [id, _] : data) ids.push_back(id);
    std::sort(ids.begin(), ids.end(), [](const std::string& a, const std::string& b) {
        int ra = strategy_rank(a);
        int rb = strategy_rank(b);
        return ra != rb ? ra < rb : a < b;
    });
    return ids;
}

}  // namespace

MissingBaseline::MissingBaseline(const std::string& model, const std::string& strategy)
    : std::runtime_error("no '" + strategy + "' run found for model '" + model +
                         "' to use as baseline") {}

std::string format_accuracy_cell(double accuracy_pct, std::optional<double> delta_pp) {
    std::string cell = util::format_fixed(accuracy_pct, 2);
    if (!delta_pp) return cell;
    // render the delta at display precision; a delta that rounds to 0.00 is flat
    std::string magnitude = util::format_fixed(std::abs(*delta_pp), 2);
    if (magnitude == "0.00") return cell;
    cell += *delta_pp > 0 ? " (↑" : " (↓";
    cell += magnitude;
    cell += ")";
    return cell;
}

ReportFiles build_report(const std::vector<std::string>& run_dirs, const ReportOptions& options) {
    std::map<std::string, ModelData> models;

    for (const auto& dir : run_dirs) {
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (!entry.is_regular_file() || entry.path().extension() != ".jsonl") continue;
            const std::string stem = entry.path().stem().string();
            if (stem == "responses" || stem == "failures") continue;
            if (!prompting::PromptStrategy::from_id(stem)) continue;
            auto results = evaluation::read_results_jsonl(entry.path().string());
            if (results.empty()) continue;
            StrategyData data;
            data.summary = evaluation::aggregate(results);
            data.results = std::move(results);
            models[data.summary.model].emplace(stem, std::move(data));
        }
    }
    if (models.empty()) {
        throw std::runtime_error("no completed runs found in the given directories");
    }

    std::string md = "# Evaluation Report\n";
    std::string csv =
        "model,strategy,n,accuracy_pct,delta_pp,direction,avg_input_k,avg_output_k,"
        "boot_delta_pp,ci_low_pp,ci_high_pp,p_value,significant\n";

    for (const auto& [model, data] : models) {
        auto base_it = data.find(options.baseline_strategy);
        if (base_it == data.end()) throw MissingBaseline(model, options.baseline_strategy);
        const auto& baseline = base_it->second.summary;

        auto ids = ordered_strategies(data);
        bool multi = data.size() > 1;

        // best accuracy for bold marking
        double best_acc = 0.0;
        for (const auto& id : ids) best_acc = std::max(best_acc, data.at(id).summary.accuracy_pct);

        md += "\n## Accuracy (%) — " + model + "\n\n";
        md += "| Strategy | Accuracy |\n| --- | --- |\n";
        for (const auto& id : ids) {
            const auto& summary = data.at(id).summary;
            std::optional<double> delta;
            if (multi && id != options.baseline_strategy) {
                delta = evaluation::compare_to_baseline(summary, baseline).delta_pp;
            }
            std::string cell = format_accuracy_cell(summary.accuracy_pct, delta);
            if (multi && summary.accuracy_pct == best_acc) cell = "**" + cell + "**";
            md += "| " + id + " | " + cell + " |\n";
        }

        // per-domain accuracy table (Unlabeled bucket excluded)
        std::set<std::string> domains;
        for (const auto& id : ids) {
            for (const auto& [bucket, _] : data.at(id).summary.per_domain) {
                if (bucket != evaluation::kUnlabeledBucket) domains.insert(bucket);
            }
        }
        if (!domains.empty()) {
            md += "\n## Per-domain accuracy (%) — " + model + "\n\n";
            md += "| Domain |";
            for (const auto& id : ids) md += " " + id + " |";
            md += "\n| --- |";
            for (std::size_t i = 0; i < ids.size(); ++i) md += " --- |";
            md += "\n";
            for (const auto& domain : domains) {
                md += "| " + domain + " |";
                for (const auto& id : ids) {
                    const auto& per_domain = data.at(id).summary.per_domain;
                    auto it = per_domain.find(domain);
                    md += it == per_domain.end()
                              ? " - |"
                              : " " + util::format_fixed(it->second.accuracy_pct, 2) + " |";
                }
                md += "\n";
            }
        }

        md += "\n## Average tokens (k) — " + model + "\n\n";
        md += "| Strategy | Input | Output |\n| --- | --- | --- |\n";
        for (const auto& id : ids) {
            const auto& summary = data.at(id).summary;
            md += "| " + id + " | " + util::format_fixed(summary.avg_input_k, 2) + " | " +
                  util::format_fixed(summary.avg_output_k, 2) + " |\n";
        }

        std::map<std::string, stats::BootstrapResult> boot;
        if (options.bootstrap) {
            md += "\n## Paired bootstrap vs " + options.baseline_strategy + " — " + model +
                  "\n\n";
            md += "| Comparison | Δ (pp) | 95% CI (pp) | p-value | Significant |\n";
            md += "| --- | --- | --- | --- | --- |\n";
            for (const auto& id : ids) {
                if (id == options.baseline_strategy) continue;
                auto [a, b] = stats::paired_correctness(data.at(id).results,
                                                        base_it->second.results);
                auto result = stats::paired_bootstrap(a, b, *options.bootstrap);
                md += "| " + id + " | " + util::format_fixed(result.delta_pp, 2) + " | [" +
                      util::format_fixed(result.ci_low_pp, 2) + ", " +
                      util::format_fixed(result.ci_high_pp, 2) + "] | " +
                      util::format_fixed(result.p_value, 4) + " | " +
                      (result.significant ? "yes" : "no") + " |\n";
                boot.emplace(id, result);
            }
        }

        for (const auto& id : ids) {
            const auto& summary = data.at(id).summary;
            std::string delta_field;
            std::string direction_field;
            if (id != options.baseline_strategy) {
                auto delta = evaluation::compare_to_baseline(summary, baseline);
                delta_field = util::format_fixed(delta.delta_pp, 2);
                direction_field = delta.direction == evaluation::DeltaDirection::Up     ? "up"
                                  : delta.direction == evaluation::DeltaDirection::Down ? "down"
                                                                                        : "flat";
            }
            std::vector<std::string> row = {
                model,
                id,
                std::to_string(summary.n),
                util::format_fixed(summary.accuracy_pct, 2),
                delta_field,
                direction_field,
                util::format_fixed(summary.avg_input_k, 2),
                util::format_fixed(summary.avg_output_k, 2),
            };
            auto bit = boot.find(id);
            if (bit != boot.end()) {
                row.push_back(util::format_fixed(bit->second.delta_pp, 2));
                row.push_back(util::format_fixed(bit->second.ci_low_pp, 2));
                row.push_back(util::format_fixed(bit->second.ci_high_pp, 2));
                row.push_back(util::format_fixed(bit->second.p_value, 4));
                row.push_back(bit->second.significant ? "yes" : "no");
            } else {
                row.insert(row.end(), 5, "");
            }
            csv += util::csv_row(row);
            csv += '\n';
        }
    }

    return {std::move(md), std::move(csv)};
}

}  // namespace fincot::cli
