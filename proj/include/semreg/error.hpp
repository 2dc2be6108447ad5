#pragma once

#include <stdexcept>
#include <string>

namespace semreg {

// Error categories; values match the semreg_status codes of the C API and
// the CLI exit codes.
enum class ErrorCode {
    io = 1,
    parse = 2,
    invalid = 3,
    diverged = 4,
    internal = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& msg) {
    throw Error(code, msg);
}

}  // namespace semreg
