#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fincot/blueprint.hpp"
#include "fincot/domain.hpp"

namespace fincot::prompting {

enum class StrategyKind { SP, UST_CoT, ST_CoT, FinCoT };

enum class FinCotModeKind { AllBlueprints, SingleDomain, Routed };

struct FinCotMode {
    FinCotModeKind kind = FinCotModeKind::AllBlueprints;
    std::optional<DomainCode> domain;  // set iff kind == SingleDomain

    static FinCotMode all() { return {FinCotModeKind::AllBlueprints, std::nullopt}; }
    static FinCotMode single(DomainCode code) { return {FinCotModeKind::SingleDomain, code}; }
    static FinCotMode routed() { return {FinCotModeKind::Routed, std::nullopt}; }

    bool operator==(const FinCotMode&) const = default;
};

struct PromptStrategy {
    StrategyKind kind = StrategyKind::SP;
    std::optional<FinCotMode> fincot_mode;  // present exactly when kind == FinCoT

    static PromptStrategy sp() { return {StrategyKind::SP, std::nullopt}; }
    static PromptStrategy ust_cot() { return {StrategyKind::UST_CoT, std::nullopt}; }
    static PromptStrategy st_cot() { return {StrategyKind::ST_CoT, std::nullopt}; }
    static PromptStrategy fincot(FinCotMode mode) { return {StrategyKind::FinCoT, mode}; }

    // Stable identifier used for run directories, cache keys, and CLI values,
    // e.g. "sp", "fincot_all", "fincot_economics", "fincot_routed".
    std::string id() const;
    static std::optional<PromptStrategy> from_id(std::string_view id);

    bool operator==(const PromptStrategy&) const = default;
};

// One CFA-style multiple-choice question. `question` carries the stem with the
// A/B/C options already formatted in.
struct McqItem {
    std::string id;
    std::string question;
    AnswerLetter gold = AnswerLetter::A;
    std::optional<DomainCode> domain;
};

struct AssembledPrompt {
    std::string system;
    std::string user;
    PromptStrategy strategy;
    std::vector<DomainCode> hint_domains;  // empty unless FinCoT
};

class PromptError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class MissingDomainLabel : public PromptError {
  public:
    explicit MissingDomainLabel(const std::string& item_id);
};

class UnknownDomain : public PromptError {
  public:
    explicit UnknownDomain(DomainCode code);
};

// Golden prompt templates loaded from disk; byte-faithful, immutable.
class PromptTemplates {
  public:
    static PromptTemplates load(const std::string& dir = "templates");

    // Returns the stored verbatim template. The FinCoT template contains the
    // literal `{{HINT}}` placeholder.
    const std::string& golden_template(StrategyKind kind) const;

    const std::string& classification_prompt() const { return classify_; }

  private:
    std::string sp_, ust_cot_, st_cot_, fincot_, classify_;
};

AssembledPrompt assemble_prompt(const PromptStrategy& strategy, const McqItem& item,
                                const blueprint::BlueprintRegistry& registry,
                                const PromptTemplates& templates);

}  // namespace fincot::prompting
