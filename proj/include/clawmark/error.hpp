#ifndef CLAWMARK_ERROR_HPP
#define CLAWMARK_ERROR_HPP

#include <stdexcept>
#include <string>

namespace clawmark {

enum class ErrorKind {
    Structural,        // mismatched shapes, incompatible operands
    Capacity,          // an enumeration exceeded its configured cap
    Parse,             // malformed text or JSON input
    Validation,        // well-formed input violating a domain invariant
    InvalidMove,       // move construction precondition failed
    InapplicableMove,  // move cannot be applied to the given table
    Precondition,      // caller-supplied precondition does not hold
    ProgressFailure,   // a search or normalization could not make progress
    Internal,          // invariant violation that signals a bug
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
          kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

}  // namespace clawmark

#endif
