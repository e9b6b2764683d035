#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fincot {

// The ten CFA topic categories used for routing. String forms match the
// classification prompt's category codes verbatim.
enum class DomainCode {
    Ethics,
    QuantMeth,
    Economics,
    FinReporting,
    CorpIssuers,
    EquityInvest,
    FixedIncome,
    Derivatives,
    AlterInvest,
    PortManage,
};

inline constexpr std::array<DomainCode, 10> kAllDomains = {
    DomainCode::Ethics,       DomainCode::QuantMeth,   DomainCode::Economics,
    DomainCode::FinReporting, DomainCode::CorpIssuers, DomainCode::EquityInvest,
    DomainCode::FixedIncome,  DomainCode::Derivatives, DomainCode::AlterInvest,
    DomainCode::PortManage,
};

// The nine blueprinted domains (all codes except Ethics), in the fixed
// concatenation order used for all-blueprints prompts.
inline constexpr std::array<DomainCode, 9> kBlueprintDomains = {
    DomainCode::Economics,   DomainCode::FixedIncome,  DomainCode::QuantMeth,
    DomainCode::EquityInvest, DomainCode::PortManage,  DomainCode::Derivatives,
    DomainCode::FinReporting, DomainCode::AlterInvest, DomainCode::CorpIssuers,
};

std::string_view to_string(DomainCode code);

// Filesystem/identifier-safe token for a code, e.g. "Quant.Meth." -> "quant_meth".
std::string_view domain_token(DomainCode code);

std::optional<DomainCode> domain_from_string(std::string_view text);
std::optional<DomainCode> domain_from_token(std::string_view token);

enum class AnswerLetter { A, B, C };

inline char to_char(AnswerLetter letter) {
    switch (letter) {
    case AnswerLetter::A: return 'A';
    case AnswerLetter::B: return 'B';
    default: return 'C';
    }
}

inline std::optional<AnswerLetter> answer_from_char(char c) {
    switch (c) {
    case 'A': return AnswerLetter::A;
    case 'B': return AnswerLetter::B;
    case 'C': return AnswerLetter::C;
    default: return std::nullopt;
    }
}

}  // namespace fincot
