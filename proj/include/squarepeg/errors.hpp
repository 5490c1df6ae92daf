#pragma once

#include <stdexcept>
#include <string>

namespace squarepeg {

/// Coarse classification of failures; the CLI maps these onto exit codes.
enum class ErrorKind {
    InvalidInput,        // malformed or invariant-violating input (exit 1)
    NonGeneric,          // genericity hypothesis fails (exit 2)
    PreconditionFailed,  // documented precondition violated by the caller (exit 2)
    Unsupported,         // input outside the supported instances (exit 1)
    ContractBreach,      // internal postcondition failed (exit 3)
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline int exit_code(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidInput:
    case ErrorKind::Unsupported:
        return 1;
    case ErrorKind::NonGeneric:
    case ErrorKind::PreconditionFailed:
        return 2;
    case ErrorKind::ContractBreach:
        return 3;
    }
    return 3;
}

}  // namespace squarepeg
