#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dmv {

enum class ErrorKind {
    ZeroPolynomial,
    PrecisionExhausted,
    Singular,
    NotContained,
    BudgetExceeded,
    NotSaturated,
    QuotientInsufficient,
    ReducibleDefiningPolynomial,
    MultipleInfinitePlaces,
    UnsupportedShape,
    UnsupportedRamifiedPrime,
    UnsupportedOrder,
    NotMaximalAtPrime,
    TowerNotSupported,
    GenusZero,
    InapplicableDegree,
    NotNormal,
    NotFound,
    UnsupportedField,
    MalformedInput,
    InvalidArgument,
};

inline constexpr std::string_view to_string(ErrorKind k) noexcept {
    switch (k) {
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::NotContained: return "NotContained";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NotSaturated: return "NotSaturated";
    case ErrorKind::QuotientInsufficient: return "QuotientInsufficient";
    case ErrorKind::ReducibleDefiningPolynomial: return "ReducibleDefiningPolynomial";
    case ErrorKind::MultipleInfinitePlaces: return "MultipleInfinitePlaces";
    case ErrorKind::UnsupportedShape: return "UnsupportedShape";
    case ErrorKind::UnsupportedRamifiedPrime: return "UnsupportedRamifiedPrime";
    case ErrorKind::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorKind::NotMaximalAtPrime: return "NotMaximalAtPrime";
    case ErrorKind::TowerNotSupported: return "TowerNotSupported";
    case ErrorKind::GenusZero: return "GenusZero";
    case ErrorKind::InapplicableDegree: return "InapplicableDegree";
    case ErrorKind::NotNormal: return "NotNormal";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::UnsupportedField: return "UnsupportedField";
    case ErrorKind::MalformedInput: return "MalformedInput";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) fail(kind, what);
}

} // namespace dmv
