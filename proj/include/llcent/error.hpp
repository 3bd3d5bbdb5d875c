#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace llcent {

enum class ErrorCode {
    DivisionByZero,
    FieldMismatch,
    NotPrime,
    AmbientMismatch,
    NotContained,
    ProfileMismatch,
    NonConstantProfile,
    InvalidOperator,
    InvalidSubspace,
    InvalidPattern,
    NotAnInverse,
    InvarianceFailure,
    EngineDisagreement,
    NotDiscreteProfile,
    InfiniteField,
    EngineInvariant,
    ParseError,
    ValidationError,
    PreconditionFailed,
};

std::string_view error_code_name(ErrorCode code);

/// Every failure raised by the library carries one of the codes above; the
/// CLI maps them onto exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

/// Internal consistency checks that must never fire; a failure is an engine bug.
inline void ensure(bool condition, const char* what) {
    if (!condition) {
        throw Error(ErrorCode::EngineInvariant, what);
    }
}

}  // namespace llcent
