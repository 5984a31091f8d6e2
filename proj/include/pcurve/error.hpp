#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pcurve {

enum class ErrorCode {
    NonFinite,
    NonRegular,
    QuadratureFailure,
    NotMultipleOf2Pi,
    ResolutionTooCoarse,
    NotALoop,
    NoCrossingFound,
    NotSimple,
    GeneralPositionFailed,
    PipelineMismatch,
    HypothesisViolated,
    LoopNotSimple,
    GenerationFailed,
    PreconditionViolated,
    InvalidInput,
};

inline std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NonRegular: return "NonRegular";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::NotMultipleOf2Pi: return "NotMultipleOf2Pi";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::NotALoop: return "NotALoop";
    case ErrorCode::NoCrossingFound: return "NoCrossingFound";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::GeneralPositionFailed: return "GeneralPositionFailed";
    case ErrorCode::PipelineMismatch: return "PipelineMismatch";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::LoopNotSimple: return "LoopNotSimple";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::InvalidInput: return "InvalidInput";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it onto an exit status.
class CurveError : public std::runtime_error {
public:
    CurveError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace pcurve
