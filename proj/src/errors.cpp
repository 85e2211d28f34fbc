#include "causal_affects/errors.hpp"

namespace causal_affects {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::UnknownNode: return "UnknownNode";
        case ErrorCode::InconsistentModel: return "InconsistentModel";
        case ErrorCode::UnsupportedCyclicStochastic: return "UnsupportedCyclicStochastic";
        case ErrorCode::IllFormedRelation: return "IllFormedRelation";
        case ErrorCode::RelationNotPresent: return "RelationNotPresent";
        case ErrorCode::InconsistentFlags: return "InconsistentFlags";
        case ErrorCode::UnflaggedRelation: return "UnflaggedRelation";
        case ErrorCode::RuleShapeMismatch: return "RuleShapeMismatch";
        case ErrorCode::CycleDetected: return "CycleDetected";
        case ErrorCode::CapExceeded: return "CapExceeded";
    }
    return "Unknown";
}

}  // namespace causal_affects
