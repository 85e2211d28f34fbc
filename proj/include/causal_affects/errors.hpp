#pragma once

#include <stdexcept>
#include <string>

namespace causal_affects {

enum class ErrorCode {
    InvalidInput,
    UnknownNode,
    InconsistentModel,
    UnsupportedCyclicStochastic,
    IllFormedRelation,
    RelationNotPresent,
    InconsistentFlags,
    UnflaggedRelation,
    RuleShapeMismatch,
    CycleDetected,
    CapExceeded,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

}  // namespace causal_affects
