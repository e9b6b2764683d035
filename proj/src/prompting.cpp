#include "fincot/prompting.hpp"

#include "fincot/util.hpp"

namespace fincot::prompting {

namespace {

constexpr std::string_view kHintPlaceholder = "{{HINT}}";

std::string replace_placeholder(const std::string& tmpl, const std::string& hint) {
    auto pos = tmpl.find(kHintPlaceholder);
    if (pos == std::string::npos) {
        throw PromptError("FinCoT template is missing the {{HINT}} placeholder");
    }
    std::string out = tmpl;
    out.replace(pos, kHintPlaceholder.size(), hint);
    return out;
}

}  // namespace

std::string PromptStrategy::id() const {
    switch (kind) {
    case StrategyKind::SP: return "sp";
    case StrategyKind::UST_CoT: return "ust_cot";
    case StrategyKind::ST_CoT: return "st_cot";
    case StrategyKind::FinCoT: break;
    }
    const FinCotMode& mode = fincot_mode.value();
    switch (mode.kind) {
    case FinCotModeKind::AllBlueprints: return "fincot_all";
    case FinCotModeKind::Routed: return "fincot_routed";
    case FinCotModeKind::SingleDomain:
        return "fincot_" + std::string(domain_token(mode.domain.value()));
    }
    return "fincot_all";
}

std::optional<PromptStrategy> PromptStrategy::from_id(std::string_view id) {
    if (id == "sp") return sp();
    if (id == "ust_cot") return ust_cot();
    if (id == "st_cot") return st_cot();
    if (id == "fincot" || id == "fincot_all") return fincot(FinCotMode::all());
    if (id == "fincot_routed") return fincot(FinCotMode::routed());
    if (util::starts_with(id, "fincot_")) {
        auto code = domain_from_token(id.substr(7));
        if (code && *code != DomainCode::Ethics) return fincot(FinCotMode::single(*code));
    }
    return std::nullopt;
}

MissingDomainLabel::MissingDomainLabel(const std::string& item_id)
    : PromptError("item '" + item_id + "' has no domain label; routed FinCoT needs one") {}

UnknownDomain::UnknownDomain(DomainCode code)
    : PromptError("no blueprint registered for domain '" + std::string(to_string(code)) + "'") {}

PromptTemplates PromptTemplates::load(const std::string& dir) {
    PromptTemplates t;
    t.sp_ = util::read_file(dir + "/sp.txt");
    t.ust_cot_ = util::read_file(dir + "/ust_cot.txt");
    t.st_cot_ = util::read_file(dir + "/st_cot.txt");
    t.fincot_ = util::read_file(dir + "/fincot.txt");
    t.classify_ = util::read_file(dir + "/classify_domain.txt");
    return t;
}

const std::string& PromptTemplates::golden_template(StrategyKind kind) const {
    switch (kind) {
    case StrategyKind::SP: return sp_;
    case StrategyKind::UST_CoT: return ust_cot_;
    case StrategyKind::ST_CoT: return st_cot_;
    case StrategyKind::FinCoT: return fincot_;
    }
    throw PromptError("unknown strategy kind");
}

AssembledPrompt assemble_prompt(const PromptStrategy& strategy, const McqItem& item,
                                const blueprint::BlueprintRegistry& registry,
                                const PromptTemplates& templates) {
    AssembledPrompt prompt;
    prompt.strategy = strategy;
    prompt.user = item.question;

    if (strategy.kind != StrategyKind::FinCoT) {
        prompt.system = templates.golden_template(strategy.kind);
        return prompt;
    }

    const FinCotMode& mode = strategy.fincot_mode.value();
    switch (mode.kind) {
    case FinCotModeKind::AllBlueprints: {
        std::string hint;
        for (const blueprint::Blueprint* bp : registry.in_fixed_order()) {
            if (!hint.empty()) hint += "\n\n";
            hint += blueprint::render_hint(*bp);
            prompt.hint_domains.push_back(bp->domain);
        }
        prompt.system = replace_placeholder(templates.golden_template(StrategyKind::FinCoT), hint);
        return prompt;
    }
    case FinCotModeKind::SingleDomain: {
        DomainCode code = mode.domain.value();
        const blueprint::Blueprint* bp = registry.find(code);
        if (!bp) throw UnknownDomain(code);
        prompt.hint_domains.push_back(code);
        prompt.system = replace_placeholder(templates.golden_template(StrategyKind::FinCoT),
                                            blueprint::render_hint(*bp));
        return prompt;
    }
    case FinCotModeKind::Routed: {
        if (!item.domain) throw MissingDomainLabel(item.id);
        if (*item.domain == DomainCode::Ethics) {
            // No Ethics blueprint exists; routed prompts fall back to plain ST-CoT.
            prompt.system = templates.golden_template(StrategyKind::ST_CoT);
            return prompt;
        }
        const blueprint::Blueprint* bp = registry.find(*item.domain);
        if (!bp) throw UnknownDomain(*item.domain);
        prompt.hint_domains.push_back(*item.domain);
        prompt.system = replace_placeholder(templates.golden_template(StrategyKind::FinCoT),
                                            blueprint::render_hint(*bp));
        return prompt;
    }
    }
    throw PromptError("unreachable");
}

}  // namespace fincot::prompting
