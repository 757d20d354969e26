#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace halfline {

enum class ErrorCode {
    // matkernel
    NotPositiveDefinite,
    NotHermitian,
    NotUnitary,
    // boundary
    SelfadjointnessViolated,
    RankDeficient,
    DimensionMismatch,
    SingularTransform,
    // potential
    NotSelfadjoint,
    BadGrid,
    NegativeCoordinate,
    QuadratureFailure,
    // jost / scattering
    IntegratorFailure,
    ToleranceNotMet,
    SingularJost,
    ExtrapolationDivergence,
    SingularJ0,
    // spectrum
    MultiplicityMismatch,
    RefinementStall,
    PhaseStepTooLarge,
    EigenvalueNotPlusMinusOne,
    BetaMatchFailure,
    UnsettledTail,
    NotDirichlet,
    // cli
    InvalidArgument,
    ParseError,
};

/// Coarse classification used to pick a process exit status.
enum class ErrorKind { Validation, Numerical, Parse };

constexpr std::string_view to_string(ErrorCode c) noexcept {
    switch (c) {
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::SelfadjointnessViolated: return "SelfadjointnessViolated";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularTransform: return "SingularTransform";
    case ErrorCode::NotSelfadjoint: return "NotSelfadjoint";
    case ErrorCode::BadGrid: return "BadGrid";
    case ErrorCode::NegativeCoordinate: return "NegativeCoordinate";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::IntegratorFailure: return "IntegratorFailure";
    case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorCode::SingularJost: return "SingularJost";
    case ErrorCode::ExtrapolationDivergence: return "ExtrapolationDivergence";
    case ErrorCode::SingularJ0: return "SingularJ0";
    case ErrorCode::MultiplicityMismatch: return "MultiplicityMismatch";
    case ErrorCode::RefinementStall: return "RefinementStall";
    case ErrorCode::PhaseStepTooLarge: return "PhaseStepTooLarge";
    case ErrorCode::EigenvalueNotPlusMinusOne: return "EigenvalueNotPlusMinusOne";
    case ErrorCode::BetaMatchFailure: return "BetaMatchFailure";
    case ErrorCode::UnsettledTail: return "UnsettledTail";
    case ErrorCode::NotDirichlet: return "NotDirichlet";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

constexpr ErrorKind kind_of(ErrorCode c) noexcept {
    switch (c) {
    case ErrorCode::SelfadjointnessViolated:
    case ErrorCode::RankDeficient:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NotSelfadjoint:
    case ErrorCode::BadGrid:
    case ErrorCode::NegativeCoordinate:
    case ErrorCode::NotDirichlet:
    case ErrorCode::InvalidArgument:
        return ErrorKind::Validation;
    case ErrorCode::ParseError:
        return ErrorKind::Parse;
    default:
        return ErrorKind::Numerical;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    ErrorKind kind() const noexcept { return kind_of(code_); }

private:
    ErrorCode code_;
};

} // namespace halfline
