#include "fincot/costsim.hpp"

#include <algorithm>
#include <set>

#include "fincot/util.hpp"

namespace fincot::costsim {

double cost(const TokenProfile& profile, double r) {
    if (r < 0) throw CostError("price ratio must be >= 0");
    return profile.input_k + r * profile.output_k;
}

double efficiency(const TokenProfile& baseline, const TokenProfile& candidate, double r) {
    double candidate_cost = cost(candidate, r);
    if (candidate_cost <= 0.0) throw DegenerateCandidate();
    return cost(baseline, r) / candidate_cost;
}

std::optional<double> break_even(const TokenProfile& baseline, const TokenProfile& candidate) {
    double output_gap = baseline.output_k - candidate.output_k;
    if (output_gap == 0.0) return std::nullopt;
    return (candidate.input_k - baseline.input_k) / output_gap;
}

double effective_input_price(const PricingModel& pm, int reuse_count) {
    if (reuse_count < 1) throw CostError("reuse count K must be >= 1");
    if (!pm.cache_read || !pm.cache_write) throw MissingCachePrices();
    return *pm.cache_read + *pm.cache_write / static_cast<double>(reuse_count);
}

std::vector<double> ratio_grid(const PricingModel& pm, const std::vector<int>& reuse_counts) {
    if (pm.price_in <= 0.0) throw CostError("pricing model needs a positive input price");
    std::vector<double> grid;
    grid.push_back(pm.price_out / pm.price_in);
    if (pm.cache_read && pm.cache_write) {
        for (int k : reuse_counts) {
            grid.push_back(pm.price_out / effective_input_price(pm, k));
        }
    }
    if (pm.cache_read) {
        if (*pm.cache_read <= 0.0) throw CostError("cached read price must be positive");
        grid.push_back(pm.price_out / *pm.cache_read);  // read-only limit (K -> inf)
    }
    std::sort(grid.begin(), grid.end());
    return grid;
}

std::vector<EfficiencyPoint> efficiency_curve(const TokenProfile& baseline,
                                              const TokenProfile& candidate,
                                              const std::vector<double>& r_grid) {
    if (r_grid.empty()) throw CostError("efficiency curve needs a nonempty r grid");
    if (!std::is_sorted(r_grid.begin(), r_grid.end())) {
        throw CostError("efficiency curve needs a sorted r grid");
    }
    std::vector<EfficiencyPoint> points;
    points.reserve(r_grid.size());
    for (double r : r_grid) {
        EfficiencyPoint p;
        p.r = r;
        p.cost_baseline = cost(baseline, r);
        p.cost_candidate = cost(candidate, r);
        if (p.cost_candidate <= 0.0) throw DegenerateCandidate();
        p.efficiency = p.cost_baseline / p.cost_candidate;
        points.push_back(p);
    }
    return points;
}

TokenTable TokenTable::from_csv(const std::string& path) {
    TokenTable table;
    auto lines = util::split_lines(util::read_file(path));
    if (lines.empty()) throw CostError("token table is empty: " + path);
    // header: metric,strategy,model,tokens_k
    std::map<std::pair<std::string, std::string>, double> inputs;
    std::map<std::pair<std::string, std::string>, double> outputs;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (util::trim(lines[i]).empty()) continue;
        auto fields = util::split(lines[i], ',');
        if (fields.size() != 4) {
            throw CostError("bad token table row " + std::to_string(i + 1) + " in " + path);
        }
        auto key = std::make_pair(fields[1], fields[2]);
        double value = std::stod(fields[3]);
        if (fields[0] == "input") inputs[key] = value;
        else if (fields[0] == "output") outputs[key] = value;
        else throw CostError("unknown metric '" + fields[0] + "' in " + path);
    }
    for (const auto& [key, input_k] : inputs) {
        auto it = outputs.find(key);
        if (it == outputs.end()) {
            throw CostError("token table misses output row for " + key.first + "/" + key.second);
        }
        table.entries_[key] = {input_k, it->second};
    }
    return table;
}

std::optional<TokenProfile> TokenTable::find(const std::string& strategy,
                                             const std::string& model) const {
    auto it = entries_.find({strategy, model});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> TokenTable::models() const {
    std::set<std::string> seen;
    for (const auto& [key, _] : entries_) seen.insert(key.second);
    return {seen.begin(), seen.end()};
}

std::vector<std::string> TokenTable::strategies() const {
    std::vector<std::string> out;
    std::set<std::string> seen;
    for (const auto& [key, _] : entries_) {
        if (seen.insert(key.first).second) out.push_back(key.first);
    }
    return out;
}

std::optional<TokenProfile> TokenTable::pooled(const std::string& strategy) const {
    double input_sum = 0.0;
    double output_sum = 0.0;
    std::size_t count = 0;
    for (const auto& [key, profile] : entries_) {
        if (key.first != strategy) continue;
        input_sum += profile.input_k;
        output_sum += profile.output_k;
        ++count;
    }
    if (count == 0) return std::nullopt;
    auto denom = static_cast<double>(count);
    return TokenProfile{input_sum / denom, output_sum / denom};
}

std::map<std::string, PricingModel> load_pricing(const std::string& path) {
    std::map<std::string, PricingModel> profiles;
    PricingModel* current = nullptr;
    auto lines = util::split_lines(util::read_file(path));
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = util::trim(lines[i]);
        if (line.empty() || line.front() == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw CostError("bad section header in " + path);
            std::string name(util::trim(line.substr(1, line.size() - 2)));
            auto [it, inserted] = profiles.try_emplace(name);
            if (!inserted) throw CostError("duplicate pricing profile '" + name + "'");
            it->second.name = name;
            current = &it->second;
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos || current == nullptr) {
            throw CostError("bad pricing line " + std::to_string(i + 1) + " in " + path);
        }
        std::string key(util::trim(line.substr(0, eq)));
        double value = std::stod(std::string(util::trim(line.substr(eq + 1))));
        if (value < 0) throw CostError("negative price for '" + key + "' in " + path);
        if (key == "price_in") current->price_in = value;
        else if (key == "price_out") current->price_out = value;
        else if (key == "cache_read") current->cache_read = value;
        else if (key == "cache_write") current->cache_write = value;
        else throw CostError("unknown pricing key '" + key + "' in " + path);
    }
    return profiles;
}

}  // namespace fincot::costsim
