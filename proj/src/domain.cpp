#include "fincot/domain.hpp"

namespace fincot {

namespace {

struct DomainNames {
    DomainCode code;
    std::string_view text;
    std::string_view token;
};

constexpr std::array<DomainNames, 10> kNames = {{
    {DomainCode::Ethics, "Ethics", "ethics"},
    {DomainCode::QuantMeth, "Quant.Meth.", "quant_meth"},
    {DomainCode::Economics, "Economics", "economics"},
    {DomainCode::FinReporting, "Fin.Reporting", "fin_reporting"},
    {DomainCode::CorpIssuers, "Corp.Issuers", "corp_issuers"},
    {DomainCode::EquityInvest, "EquityInvest.", "equity_invest"},
    {DomainCode::FixedIncome, "FixedIncome", "fixed_income"},
    {DomainCode::Derivatives, "Derivatives", "derivatives"},
    {DomainCode::AlterInvest, "Alter.Invest.", "alter_invest"},
    {DomainCode::PortManage, "Port.Manage.", "port_manage"},
}};

}  // namespace

std::string_view to_string(DomainCode code) {
    for (const auto& n : kNames) {
        if (n.code == code) return n.text;
    }
    throw std::logic_error("unknown DomainCode");
}

std::string_view domain_token(DomainCode code) {
    for (const auto& n : kNames) {
        if (n.code == code) return n.token;
    }
    throw std::logic_error("unknown DomainCode");
}

std::optional<DomainCode> domain_from_string(std::string_view text) {
    for (const auto& n : kNames) {
        if (n.text == text) return n.code;
    }
    return std::nullopt;
}

std::optional<DomainCode> domain_from_token(std::string_view token) {
    for (const auto& n : kNames) {
        if (n.token == token) return n.code;
    }
    return std::nullopt;
}

}  // namespace fincot
