#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fogfed {

enum class ErrorCode {
    InvalidParameter,
    IncompatibleDistributions,
    InvalidArgument,
    InvalidComparison,
    IncompleteProfile,
    NotADag,
    NotPartitionable,
    MissingProfile,
    InvalidId,
    MissingData,
    Config,
    Parse,
    Io,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that
/// callers (and tests) can distinguish error classes without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);

    ErrorCode code() const noexcept { return code_; }
    /// Message without the code prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

} // namespace fogfed
