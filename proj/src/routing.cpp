#include "fincot/routing.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "fincot/util.hpp"

namespace fincot::routing {

namespace {

using json = nlohmann::json;

// Keyword lists follow the classification prompt's own bullet descriptions.
struct KeywordRule {
    DomainCode code;
    std::vector<std::string_view> keywords;
};

const std::array<KeywordRule, 10>& keyword_rules() {
    static const std::array<KeywordRule, 10> rules = {{
        {DomainCode::Ethics,
         {"code of ethics", "professional conduct", "integrity", "ethical", "ethics",
          "client interests"}},
        {DomainCode::QuantMeth,
         {"statistical", "probability", "hypothesis test", "time value of money", "regression",
          "financial mathematics"}},
        {DomainCode::Economics,
         {"supply", "demand", "market structure", "gdp", "monetary policy", "economic cycle",
          "inflation", "microeconomic", "macroeconomic"}},
        {DomainCode::FinReporting,
         {"financial statement", "accounting standard", "ratio analysis", "balance sheet",
          "income statement", "cash flow"}},
        {DomainCode::CorpIssuers,
         {"capital structure", "dividend policy", "corporate governance", "merger",
          "acquisition", "capital budgeting"}},
        {DomainCode::EquityInvest,
         {"stock valuation", "equity market", "company analysis", "market efficiency",
          "equity portfolio", "stock", "equity"}},
        {DomainCode::FixedIncome,
         {"bond", "yield curve", "duration", "credit analysis", "fixed income", "convexity",
          "coupon"}},
        {DomainCode::Derivatives,
         {"option", "futures", "forward", "swap", "hedging", "derivative pricing", "derivative"}},
        {DomainCode::AlterInvest,
         {"real estate", "private equity", "hedge fund", "commodit", "structured product",
          "crypto"}},
        {DomainCode::PortManage,
         {"asset allocation", "portfolio construction", "rebalancing", "performance measurement",
          "portfolio", "client objectives"}},
    }};
    return rules;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

UnrecognizedCode::UnrecognizedCode(const std::string& raw)
    : RoutingError("unrecognized domain code: '" + raw + "'") {}

ClassificationFailed::ClassificationFailed(const std::string& item_id,
                                           const std::string& last_reply)
    : RoutingError("classification failed for item '" + item_id + "'; last reply: '" + last_reply +
                   "'") {}

DomainCode parse_domain_code(const std::string& raw) {
    std::string_view text = util::trim(raw);
    // Trailing sentence punctuation is noise, but a terminal '.' may belong to
    // the code itself ("Port.Manage."), so strip only what never ends a code.
    while (!text.empty() && (text.back() == ',' || text.back() == ';' || text.back() == ':' ||
                             text.back() == '!' || text.back() == '?')) {
        text.remove_suffix(1);
    }
    if (auto code = domain_from_string(text)) return *code;
    // A bare '.' after a dot-free code ("Ethics.") is also trailing noise.
    if (!text.empty() && text.back() == '.') {
        if (auto code = domain_from_string(text.substr(0, text.size() - 1))) return *code;
    }
    throw UnrecognizedCode(std::string(util::trim(raw)));
}

DomainCode classify_domain(const prompting::McqItem& item, inference::ChatClient& classifier,
                           const prompting::PromptTemplates& templates) {
    inference::GenerationParams params;
    params.temperature = 0.0;  // determinism preferred for routing
    params.model = "classifier";

    auto reply = classifier.complete(templates.classification_prompt(), item.question, params);
    try {
        return parse_domain_code(reply.content);
    } catch (const UnrecognizedCode&) {
        // one guarded retry with a stricter instruction suffix
    }
    auto retry = classifier.complete(templates.classification_prompt(),
                                     item.question + "\n\nRespond with only the category code.",
                                     params);
    try {
        return parse_domain_code(retry.content);
    } catch (const UnrecognizedCode&) {
        throw ClassificationFailed(item.id, std::string(util::trim(retry.content)));
    }
}

std::string_view to_string(LabelSource source) {
    switch (source) {
    case LabelSource::Classifier: return "classifier";
    case LabelSource::File: return "file";
    default: return "manual";
    }
}

DomainLabelCache DomainLabelCache::load(const std::string& path) {
    DomainLabelCache cache;
    if (!std::filesystem::exists(path)) return cache;
    for (const auto& line : util::split_lines(util::read_file(path))) {
        if (util::trim(line).empty()) continue;
        json j = json::parse(line);
        auto code = domain_from_string(j.at("domain").get<std::string>());
        if (!code) throw RoutingError("bad domain in label cache line: " + line);
        // last write wins on duplicate ids
        cache.entries[j.at("id").get<std::string>()] = *code;
    }
    return cache;
}

LabelReport label_dataset(const std::vector<prompting::McqItem>& items,
                          inference::ChatClient& classifier,
                          const prompting::PromptTemplates& templates,
                          const std::string& cache_path, DomainLabelCache& cache) {
    LabelReport report;
    for (const auto& item : items) {
        if (cache.entries.contains(item.id)) {
            ++report.cached;
            continue;
        }
        DomainCode code;
        try {
            code = classify_domain(item, classifier, templates);
        } catch (const std::exception&) {
            report.failed_ids.push_back(item.id);
            continue;
        }
        json j = {{"id", item.id},
                  {"domain", std::string(to_string(code))},
                  {"source", std::string(to_string(LabelSource::Classifier))}};
        util::append_line(cache_path, j.dump());
        cache.entries[item.id] = code;
        ++report.classified;
    }
    return report;
}

inference::ModelResponse RuleBasedClassifierMock::complete(const std::string& system,
                                                           const std::string& user,
                                                           const inference::GenerationParams&) {
    std::string haystack = to_lower(user);
    DomainCode best = DomainCode::Ethics;
    std::size_t best_hits = 0;
    for (const auto& rule : keyword_rules()) {
        std::size_t hits = 0;
        for (auto keyword : rule.keywords) {
            for (std::size_t pos = haystack.find(keyword); pos != std::string::npos;
                 pos = haystack.find(keyword, pos + 1)) {
                ++hits;
            }
        }
        if (hits > best_hits) {  // ties keep the earlier (prompt-order) category
            best_hits = hits;
            best = rule.code;
        }
    }
    inference::ModelResponse resp;
    resp.content = std::string(to_string(best));
    resp.input_tokens = inference::approximate_token_count(system) +
                        inference::approximate_token_count(user);
    resp.output_tokens = inference::approximate_token_count(resp.content);
    resp.usage_source = inference::UsageSource::Approximate;
    return resp;
}

}  // namespace fincot::routing
