#pragma once

#include <stdexcept>
#include <string>

namespace hnpers {

/// Failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
    usage,       // dimension mismatch, bad arguments, caller bugs
    parse,       // malformed input documents
    validation,  // inputs that parse but violate a domain invariant
    budget,      // enumeration caps exceeded
    refinement,  // a grid is not fine enough for the requested discretisation
    invariant    // an internal postcondition failed
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
        case ErrorKind::usage: return "usage";
        case ErrorKind::parse: return "parse";
        case ErrorKind::validation: return "validation";
        case ErrorKind::budget: return "budget";
        case ErrorKind::refinement: return "refinement";
        case ErrorKind::invariant: return "invariant";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::usage, what);
}

}  // namespace hnpers
