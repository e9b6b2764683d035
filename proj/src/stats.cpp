#include "fincot/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fincot/util.hpp"

namespace fincot::stats {

LengthMismatch::LengthMismatch(std::size_t a, std::size_t b)
    : StatsError("paired vectors differ in length: " + std::to_string(a) + " vs " +
                 std::to_string(b)) {}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw EmptyInput();
    std::sort(values.begin(), values.end());
    if (values.size() == 1) return values.front();
    double pos = q * static_cast<double>(values.size() - 1);
    auto lo = static_cast<std::size_t>(std::floor(pos));
    auto hi = std::min(lo + 1, values.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return values[lo] + frac * (values[hi] - values[lo]);
}

BootstrapResult paired_bootstrap(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                                 const BootstrapConfig& config) {
    if (a.size() != b.size()) throw LengthMismatch(a.size(), b.size());
    if (a.empty()) throw EmptyInput();
    if (config.resamples < 1) throw StatsError("resample count must be >= 1");
    if (config.ci_level <= 0.0 || config.ci_level >= 1.0) {
        throw StatsError("ci_level must be in (0, 1)");
    }

    const std::size_t n = a.size();
    std::vector<int> diffs(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i] > 1 || b[i] > 1) throw StatsError("correctness vectors must be binary");
        diffs[i] = static_cast<int>(a[i]) - static_cast<int>(b[i]);
    }

    double observed = 0.0;
    for (int d : diffs) observed += d;
    observed /= static_cast<double>(n);

    // One substream seed per resample, drawn sequentially from a master
    // stream; chunked workers consuming these seeds reproduce the
    // sequential result exactly.
    const auto B = static_cast<std::size_t>(config.resamples);
    util::SplitMix64 master(config.seed);
    std::vector<std::uint64_t> stream_seeds(B);
    for (auto& s : stream_seeds) s = master.next();

    std::vector<double> means(B);
    std::size_t count_le0 = 0;
    std::size_t count_ge0 = 0;
    for (std::size_t r = 0; r < B; ++r) {
        util::SplitMix64 rng(stream_seeds[r]);
        long sum = 0;
        for (std::size_t j = 0; j < n; ++j) {
            sum += diffs[rng.next_below(n)];
        }
        double mean = static_cast<double>(sum) / static_cast<double>(n);
        means[r] = mean;
        if (mean <= 0.0) ++count_le0;
        if (mean >= 0.0) ++count_ge0;
    }

    double q_low = (1.0 - config.ci_level) / 2.0;
    BootstrapResult result;
    result.delta_pp = 100.0 * observed;
    result.ci_low_pp = 100.0 * percentile(means, q_low);
    result.ci_high_pp = 100.0 * percentile(std::move(means), 1.0 - q_low);

    double frac_le0 = static_cast<double>(count_le0) / static_cast<double>(B);
    double frac_ge0 = static_cast<double>(count_ge0) / static_cast<double>(B);
    result.p_value = 2.0 * std::min(frac_le0, frac_ge0);
    if (config.clamp_p) result.p_value = std::min(result.p_value, 1.0);
    result.significant = result.p_value < 0.05;
    return result;
}

DomainImprovement domain_improvement_metrics(const evaluation::RunSummary& run,
                                             const evaluation::RunSummary& baseline,
                                             double threshold_pp) {
    std::map<std::string, double> run_acc;
    std::map<std::string, double> base_acc;
    for (const auto& [bucket, stat] : run.per_domain) {
        if (bucket != evaluation::kUnlabeledBucket) run_acc[bucket] = stat.accuracy_pct;
    }
    for (const auto& [bucket, stat] : baseline.per_domain) {
        if (bucket != evaluation::kUnlabeledBucket) base_acc[bucket] = stat.accuracy_pct;
    }
    if (run_acc.empty()) throw StatsError("no labeled domains to compare");
    if (run_acc.size() != base_acc.size() ||
        !std::equal(run_acc.begin(), run_acc.end(), base_acc.begin(),
                    [](const auto& x, const auto& y) { return x.first == y.first; })) {
        throw DomainSetMismatch("run and baseline cover different domain sets");
    }

    DomainImprovement out;
    std::size_t improving = 0;
    double total_gain = 0.0;
    for (const auto& [bucket, acc] : run_acc) {
        double gain = acc - base_acc.at(bucket);
        total_gain += gain;
        if (gain >= threshold_pp) ++improving;
    }
    out.proportion = static_cast<double>(improving) / static_cast<double>(run_acc.size());
    out.mean_gain_pp = total_gain / static_cast<double>(run_acc.size());
    return out;
}

std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>> paired_correctness(
    std::span<const evaluation::ItemResult> a, std::span<const evaluation::ItemResult> b) {
    if (a.size() != b.size()) throw LengthMismatch(a.size(), b.size());
    std::map<std::string, bool> b_by_id;
    for (const auto& r : b) {
        if (!b_by_id.emplace(r.id, r.correct).second) {
            throw StatsError("duplicate item id in results: " + r.id);
        }
    }
    std::vector<std::uint8_t> va;
    std::vector<std::uint8_t> vb;
    va.reserve(a.size());
    vb.reserve(a.size());
    for (const auto& r : a) {
        auto it = b_by_id.find(r.id);
        if (it == b_by_id.end()) {
            throw StatsError("item '" + r.id + "' is missing from the paired run");
        }
        va.push_back(r.correct ? 1 : 0);
        vb.push_back(it->second ? 1 : 0);
    }
    return {std::move(va), std::move(vb)};
}

}  // namespace fincot::stats
