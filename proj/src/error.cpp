#include "fogfed/error.hpp"

namespace fogfed {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::IncompatibleDistributions: return "incompatible-distributions";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidComparison: return "invalid-comparison";
    case ErrorCode::IncompleteProfile: return "incomplete-profile";
    case ErrorCode::NotADag: return "not-a-dag";
    case ErrorCode::NotPartitionable: return "not-partitionable";
    case ErrorCode::MissingProfile: return "missing-profile";
    case ErrorCode::InvalidId: return "invalid-id";
    case ErrorCode::MissingData: return "missing-data";
    case ErrorCode::Config: return "config";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Io: return "io";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

} // namespace fogfed
