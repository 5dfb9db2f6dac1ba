#pragma once

#include <stdexcept>
#include <string>

namespace cmbp {

enum class ErrorCode {
    InvalidArgument,
    DegeneratePair,
    RootFindFailure,
    OutOfValidRange,
    BadDistance,
    SupportViolation,
    LatticeMismatch,
    FormatError,
    IoError,
};

/// All recoverable failures in the library are reported through this type;
/// the code survives the trip through the C boundary.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string msg)
        : std::runtime_error(std::move(msg)), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg)
{
    throw Error(code, msg);
}

}  // namespace cmbp
