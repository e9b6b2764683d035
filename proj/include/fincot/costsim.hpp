#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fincot::costsim {

// Average input/output tokens for one (prompt, model) pair, in thousands.
struct TokenProfile {
    double input_k = 0.0;   // I
    double output_k = 0.0;  // O
};

// Provider prices per MTok. Cached-read pricing may exist without a write
// price (read-only caching); effective_input_price needs both.
struct PricingModel {
    std::string name;
    double price_in = 0.0;
    double price_out = 0.0;
    std::optional<double> cache_read;
    std::optional<double> cache_write;
};

struct EfficiencyPoint {
    double r = 0.0;
    double cost_baseline = 0.0;
    double cost_candidate = 0.0;
    double efficiency = 0.0;
};

class CostError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class DegenerateCandidate : public CostError {
  public:
    DegenerateCandidate() : CostError("candidate profile has zero cost") {}
};

class MissingCachePrices : public CostError {
  public:
    MissingCachePrices() : CostError("pricing model has no cache read/write prices") {}
};

// Cost in input-token dollars: I + r * O.
double cost(const TokenProfile& profile, double r);

double efficiency(const TokenProfile& baseline, const TokenProfile& candidate, double r);

// Break-even ratio r* = (I_candidate - I_baseline) / (O_baseline - O_candidate).
// Absent when output profiles are equal (ranking is then r-independent).
// Negative values mean one profile is cheaper at every r >= 0.
std::optional<double> break_even(const TokenProfile& baseline, const TokenProfile& candidate);

// Effective input price under prompt caching amortized over K reuses:
// p_read + p_write / K.
double effective_input_price(const PricingModel& pm, int reuse_count);

// Price-ratio grid for a provider: the no-cache ratio price_out/price_in,
// one ratio per K when both cache prices exist, and the read-only limit
// price_out/cache_read when a cached-read price exists. Sorted ascending.
std::vector<double> ratio_grid(const PricingModel& pm, const std::vector<int>& reuse_counts);

std::vector<EfficiencyPoint> efficiency_curve(const TokenProfile& baseline,
                                              const TokenProfile& candidate,
                                              const std::vector<double>& r_grid);

// Token-table fixture: profiles keyed by (strategy id, model id).
class TokenTable {
  public:
    static TokenTable from_csv(const std::string& path);

    std::optional<TokenProfile> find(const std::string& strategy, const std::string& model) const;
    std::vector<std::string> models() const;
    std::vector<std::string> strategies() const;

    // Mean profile across all models carrying this strategy.
    std::optional<TokenProfile> pooled(const std::string& strategy) const;

  private:
    std::map<std::pair<std::string, std::string>, TokenProfile> entries_;
};

// Named pricing profiles from a `[name]` sectioned key=value config file.
std::map<std::string, PricingModel> load_pricing(const std::string& path);

}  // namespace fincot::costsim
