#pragma once

#include <stdexcept>
#include <string>

namespace dyncover {

enum class ErrorCode {
    DeleteMissing,
    OutOfRange,
    KindMismatch,
    ParseError,
    TooLarge,
    WeightOutOfRange,
    ConfigError,
};

const char* error_name(ErrorCode c);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg, int line = 0)
        : std::runtime_error(std::string(error_name(code)) + ": " + msg), code_(code), line_(line) {}

    ErrorCode code() const { return code_; }
    // Source line for ParseError, 0 otherwise.
    int line() const { return line_; }

private:
    ErrorCode code_;
    int line_;
};

}  // namespace dyncover
