#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fincot/evaluation.hpp"

namespace fincot::stats {

struct BootstrapConfig {
    int resamples = 10000;  // B
    std::uint64_t seed = 0;
    double ci_level = 0.95;
    // The default two-sided p is NOT clamped at 1: identical runs report
    // p = 2.0000. Set clamp_p for conventional reporting.
    bool clamp_p = false;
};

struct BootstrapResult {
    double delta_pp = 0.0;    // 100 * (mean(a) - mean(b))
    double ci_low_pp = 0.0;
    double ci_high_pp = 0.0;
    double p_value = 0.0;
    bool significant = false;  // p < 0.05
};

class StatsError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class LengthMismatch : public StatsError {
  public:
    LengthMismatch(std::size_t a, std::size_t b);
};

class EmptyInput : public StatsError {
  public:
    EmptyInput() : StatsError("paired bootstrap needs at least one observation") {}
};

class DomainSetMismatch : public StatsError {
  public:
    using StatsError::StatsError;
};

// Paired bootstrap over per-item correctness differences d_i = a_i - b_i:
// B index resamples with replacement, percentile CI (linear interpolation),
// p = 2 * min(frac(mean* <= 0), frac(mean* >= 0)). Bit-identical for a fixed
// seed; each resample draws from its own precomputed substream, so chunked
// parallel evaluation cannot change the result.
BootstrapResult paired_bootstrap(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                                 const BootstrapConfig& config);

// Linear-interpolation percentile of a sample (q in [0,1]); sorts a copy.
double percentile(std::vector<double> values, double q);

struct DomainImprovement {
    double proportion = 0.0;    // share of domains improving by >= threshold
    double mean_gain_pp = 0.0;  // mean per-domain accuracy gain
};

DomainImprovement domain_improvement_metrics(const evaluation::RunSummary& run,
                                             const evaluation::RunSummary& baseline,
                                             double threshold_pp = 1.0);

// Pairs two result sets by item id (order of `a`); returns binary correctness
// vectors. Throws LengthMismatch / StatsError when the id sets differ.
std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>> paired_correctness(
    std::span<const evaluation::ItemResult> a, std::span<const evaluation::ItemResult> b);

}  // namespace fincot::stats
