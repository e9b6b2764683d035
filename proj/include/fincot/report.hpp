#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fincot/evaluation.hpp"
#include "fincot/stats.hpp"

namespace fincot::cli {

class MissingBaseline : public std::runtime_error {
  public:
    explicit MissingBaseline(const std::string& model, const std::string& strategy);
};

struct ReportOptions {
    std::string baseline_strategy = "sp";
    std::optional<stats::BootstrapConfig> bootstrap;  // adds significance columns
};

struct ReportFiles {
    std::string markdown;
    std::string csv;
};

// Accuracy cell in the table convention: value with an up/down delta versus
// the baseline, e.g. "80.52 (↑17.34)"; flat comparisons render plain.
std::string format_accuracy_cell(double accuracy_pct, std::optional<double> delta_pp);

// Builds markdown + CSV tables from completed run directories (one
// <strategy>.jsonl per strategy). Deterministic: identical artifacts give
// byte-identical reports.
ReportFiles build_report(const std::vector<std::string>& run_dirs, const ReportOptions& options);

}  // namespace fincot::cli
