#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "fincot/stats.hpp"
#include "fincot/util.hpp"

using namespace fincot;
using stats::BootstrapConfig;

namespace {

using Vec = std::vector<std::uint8_t>;

struct ExactResult {
    double p_value;
    double ci_low;   // fraction units
    double ci_high;
};

// Exhaustive oracle for n <= 6: enumerates every resample multiset as a
// composition (c_1..c_n), sum c_i = n, weighted by the multinomial
// probability n!/(prod c_i!) / n^n. CI endpoints use the discrete
// inverse CDF (smallest value with CDF >= q).
ExactResult exact_bootstrap(const Vec& a, const Vec& b) {
    const std::size_t n = a.size();
    REQUIRE(n <= 6);
    std::vector<int> diffs(n);
    for (std::size_t i = 0; i < n; ++i) diffs[i] = int(a[i]) - int(b[i]);

    static const double factorial[] = {1, 1, 2, 6, 24, 120, 720};
    std::map<double, double> dist;  // mean -> probability
    std::vector<int> counts(n, 0);

    auto emit = [&]() {
        double weight = factorial[n];
        long sum = 0;
        for (std::size_t i = 0; i < n; ++i) {
            weight /= factorial[counts[i]];
            sum += static_cast<long>(counts[i]) * diffs[i];
        }
        weight /= std::pow(static_cast<double>(n), static_cast<double>(n));
        dist[static_cast<double>(sum) / static_cast<double>(n)] += weight;
    };

    // enumerate compositions of n into n nonnegative parts
    std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int remaining) {
        if (idx == n - 1) {
            counts[idx] = remaining;
            emit();
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            counts[idx] = c;
            rec(idx + 1, remaining - c);
        }
    };
    rec(0, static_cast<int>(n));

    double p_le0 = 0.0;
    double p_ge0 = 0.0;
    for (const auto& [mean, prob] : dist) {
        if (mean <= 0.0) p_le0 += prob;
        if (mean >= 0.0) p_ge0 += prob;
    }

    auto inv_cdf = [&](double q) {
        double cum = 0.0;
        for (const auto& [mean, prob] : dist) {
            cum += prob;
            if (cum >= q) return mean;
        }
        return dist.rbegin()->first;
    };

    return {2.0 * std::min(p_le0, p_ge0), inv_cdf(0.025), inv_cdf(0.975)};
}

}  // namespace

TEST_CASE("identical vectors give delta 0, CI [0,0], p = 2.0000") {
    Vec a = {1, 0, 1, 1, 0, 1, 0, 0};
    auto result = stats::paired_bootstrap(a, a, {.resamples = 10000, .seed = 42});
    CHECK(result.delta_pp == 0.0);
    CHECK(result.ci_low_pp == 0.0);
    CHECK(result.ci_high_pp == 0.0);
    CHECK(result.p_value == 2.0);
    CHECK(util::format_fixed(result.p_value, 4) == "2.0000");
    CHECK_FALSE(result.significant);
}

TEST_CASE("clamped convention caps p at 1") {
    Vec a = {1, 0, 1};
    auto result = stats::paired_bootstrap(a, a, {.resamples = 1000, .seed = 1, .clamp_p = true});
    CHECK(result.p_value == 1.0);
}

TEST_CASE("degenerate separation: all ones vs all zeros") {
    Vec a(100, 1);
    Vec b(100, 0);
    auto result = stats::paired_bootstrap(a, b, {.resamples = 10000, .seed = 7});
    CHECK(result.delta_pp == doctest::Approx(100.0));
    CHECK(result.ci_low_pp == doctest::Approx(100.0));
    CHECK(result.ci_high_pp == doctest::Approx(100.0));
    CHECK(result.p_value == 0.0);
    CHECK(result.significant);
}

TEST_CASE("small-n results match the exhaustive enumeration oracle") {
    struct Pair {
        Vec a, b;
    };
    std::vector<Pair> pairs = {
        {{1, 1, 0, 1, 0}, {1, 0, 0, 0, 0}},        // the canonical n=5 case
        {{1, 0, 1, 0, 1, 1}, {0, 1, 1, 0, 0, 1}},  // mixed-sign diffs, n=6
        {{0, 0, 1, 1}, {1, 1, 1, 0}},              // net-negative diffs, n=4
        {{1, 1, 1}, {0, 0, 0}},                    // all-positive diffs, n=3
    };
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        CAPTURE(i);
        auto exact = exact_bootstrap(pairs[i].a, pairs[i].b);
        auto boot = stats::paired_bootstrap(pairs[i].a, pairs[i].b,
                                            {.resamples = 10000, .seed = 1234});
        CHECK(std::abs(boot.p_value - exact.p_value) <= 0.02);
        CHECK(std::abs(boot.ci_low_pp / 100.0 - exact.ci_low) <= 0.02);
        CHECK(std::abs(boot.ci_high_pp / 100.0 - exact.ci_high) <= 0.02);
    }
}

TEST_CASE("fixed seeds give bit-identical results") {
    Vec a = {1, 0, 0, 1, 1, 0, 1, 1, 1, 0};
    Vec b = {0, 1, 0, 1, 0, 0, 1, 0, 1, 1};
    BootstrapConfig cfg{.resamples = 5000, .seed = 777};
    auto first = stats::paired_bootstrap(a, b, cfg);
    auto second = stats::paired_bootstrap(a, b, cfg);
    CHECK(first.delta_pp == second.delta_pp);
    CHECK(first.ci_low_pp == second.ci_low_pp);
    CHECK(first.ci_high_pp == second.ci_high_pp);
    CHECK(first.p_value == second.p_value);

    auto reseeded = stats::paired_bootstrap(a, b, {.resamples = 5000, .seed = 778});
    bool identical = reseeded.ci_low_pp == first.ci_low_pp &&
                     reseeded.ci_high_pp == first.ci_high_pp &&
                     reseeded.p_value == first.p_value;
    CHECK_FALSE(identical);
}

TEST_CASE("swapping the vectors negates delta and mirrors the CI exactly") {
    util::SplitMix64 rng(2025);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 20 + rng.next_below(200);
        Vec a(n);
        Vec b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.next_below(4) != 0;
            b[i] = rng.next_below(2) != 0;
        }
        BootstrapConfig cfg{.resamples = 2000, .seed = rng.next()};
        auto fwd = stats::paired_bootstrap(a, b, cfg);
        auto rev = stats::paired_bootstrap(b, a, cfg);
        CHECK(fwd.delta_pp == -rev.delta_pp);
        // mirrored CI agrees up to interpolation rounding
        CHECK(fwd.ci_low_pp == doctest::Approx(-rev.ci_high_pp).epsilon(1e-12));
        CHECK(fwd.ci_high_pp == doctest::Approx(-rev.ci_low_pp).epsilon(1e-12));
        CHECK(fwd.p_value == rev.p_value);
    }
}

TEST_CASE("sign coherence: positive delta with CI excluding zero is significant") {
    util::SplitMix64 rng(31);
    const int B = 10000;
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 50 + rng.next_below(300);
        Vec a(n);
        Vec b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = rng.next_below(10) < 7;
            b[i] = rng.next_below(10) < 4;
        }
        auto result = stats::paired_bootstrap(a, b, {.resamples = B, .seed = rng.next()});
        if (result.delta_pp > 0 && result.ci_low_pp > 0.0) {
            CHECK(result.p_value < 0.05 + 2.0 / B + 1e-12);
        }
    }
}

TEST_CASE("input validation") {
    Vec a = {1, 0};
    Vec b = {1};
    CHECK_THROWS_AS(stats::paired_bootstrap(a, b, {}), stats::LengthMismatch);
    CHECK_THROWS_AS(stats::paired_bootstrap({}, {}, {}), stats::EmptyInput);
    Vec bad = {2, 0};
    CHECK_THROWS_AS(stats::paired_bootstrap(bad, a, {}), stats::StatsError);
}

TEST_CASE("coverage smoke test: CI covers a known effect at roughly 95%") {
    // The full 1000-trial calibration runs in the acceptance suite; this is a
    // faster sanity check with loose bounds.
    const int trials = 300;
    const double p_a = 0.65;
    const double p_b = 0.55;
    int covered = 0;
    util::SplitMix64 rng(555);
    for (int t = 0; t < trials; ++t) {
        const std::size_t n = 500;
        Vec a(n);
        Vec b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = (rng.next() >> 11) * 0x1.0p-53 < p_a;
            b[i] = (rng.next() >> 11) * 0x1.0p-53 < p_b;
        }
        auto result = stats::paired_bootstrap(a, b, {.resamples = 1000, .seed = rng.next()});
        double true_effect_pp = 100.0 * (p_a - p_b);
        if (result.ci_low_pp <= true_effect_pp && true_effect_pp <= result.ci_high_pp) ++covered;
    }
    double coverage = 100.0 * covered / trials;
    CHECK(coverage >= 90.0);
    CHECK(coverage <= 99.0);
}

namespace {

evaluation::RunSummary summary_with_domains(const std::vector<double>& accuracies) {
    evaluation::RunSummary s;
    s.model = "m";
    s.strategy = "x";
    s.n = accuracies.size();
    for (std::size_t i = 0; i < accuracies.size(); ++i) {
        s.per_domain[std::string(to_string(kAllDomains[i]))] = {10, accuracies[i]};
    }
    return s;
}

}  // namespace

TEST_CASE("domain improvement metrics") {
    std::vector<double> base(10, 60.0);
    auto baseline = summary_with_domains(base);

    SUBCASE("identical runs improve nothing") {
        auto metrics = stats::domain_improvement_metrics(baseline, baseline);
        CHECK(metrics.proportion == 0.0);
        CHECK(metrics.mean_gain_pp == 0.0);
    }

    SUBCASE("uniform +2pp improves every domain") {
        std::vector<double> up(10, 62.0);
        auto metrics = stats::domain_improvement_metrics(summary_with_domains(up), baseline);
        CHECK(metrics.proportion == 1.0);
        CHECK(metrics.mean_gain_pp == doctest::Approx(2.0));
    }

    SUBCASE("hand-computed mixed gains") {
        std::vector<double> gains = {2, 2, 2, 0.5, -1, 0, 0, 0, 0, 0};
        std::vector<double> run;
        for (double g : gains) run.push_back(60.0 + g);
        auto metrics = stats::domain_improvement_metrics(summary_with_domains(run), baseline);
        CHECK(metrics.proportion == doctest::Approx(0.3));
        CHECK(metrics.mean_gain_pp == doctest::Approx(0.55));
    }

    SUBCASE("mismatched domain sets are rejected") {
        auto partial = summary_with_domains({60, 60, 60});
        CHECK_THROWS_AS(stats::domain_improvement_metrics(partial, baseline),
                        stats::DomainSetMismatch);
    }
}

TEST_CASE("paired_correctness joins result sets by id") {
    std::vector<evaluation::ItemResult> a(3);
    std::vector<evaluation::ItemResult> b(3);
    for (int i = 0; i < 3; ++i) {
        a[i].id = "q" + std::to_string(i);
        a[i].correct = i != 1;
        b[2 - i].id = "q" + std::to_string(i);  // reversed order
        b[2 - i].correct = i == 1;
    }
    auto [va, vb] = stats::paired_correctness(a, b);
    CHECK(va == Vec{1, 0, 1});
    CHECK(vb == Vec{0, 1, 0});

    b[0].id = "other";
    CHECK_THROWS_AS(stats::paired_correctness(a, b), stats::StatsError);
}
