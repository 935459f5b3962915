#pragma once

#include <stdexcept>
#include <string>

namespace pathcond {

enum class ErrorKind {
    MalformedTable,
    EmptySignature,
    NoPositiveArityOperation,
    IdempotenceError,
    ArityMismatch,
    ElementOutOfRange,
    BadToken,
    EmptyPath,
    UnknownName,
    BadSize,
    NotLayered,
    NotIdempotent,
    CapExceeded,
    UnboundVariable,
    NoWalk,
    ParseError,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::MalformedTable: return "MalformedTable";
        case ErrorKind::EmptySignature: return "EmptySignature";
        case ErrorKind::NoPositiveArityOperation: return "NoPositiveArityOperation";
        case ErrorKind::IdempotenceError: return "IdempotenceError";
        case ErrorKind::ArityMismatch: return "ArityMismatch";
        case ErrorKind::ElementOutOfRange: return "ElementOutOfRange";
        case ErrorKind::BadToken: return "BadToken";
        case ErrorKind::EmptyPath: return "EmptyPath";
        case ErrorKind::UnknownName: return "UnknownName";
        case ErrorKind::BadSize: return "BadSize";
        case ErrorKind::NotLayered: return "NotLayered";
        case ErrorKind::NotIdempotent: return "NotIdempotent";
        case ErrorKind::CapExceeded: return "CapExceeded";
        case ErrorKind::UnboundVariable: return "UnboundVariable";
        case ErrorKind::NoWalk: return "NoWalk";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "UnknownError";
}

/// All library failures throw this; kind() discriminates for callers that
/// map errors to exit codes or retry policies.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace pathcond
