#pragma once

#include <stdexcept>
#include <string>

namespace mqc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bad arguments to an operation (qubit out of range, arity mismatch, ...).
struct InputError : Error {
    using Error::Error;
};

/// Malformed circuit/graph/program text.
struct ParseError : Error {
    ParseError(const std::string& msg, int line_no = 0)
        : Error(line_no > 0 ? "line " + std::to_string(line_no) + ": " + msg : msg), line(line_no) {}
    int line;
};

/// An emitted observable is not a member of the requested observable set.
struct LegalityError : Error {
    using Error::Error;
};

/// Enumeration or retry limits exceeded.
struct ResourceError : Error {
    using Error::Error;
};

/// A forced measurement outcome has (analytically) zero probability.
struct ImpossibleBranch : Error {
    using Error::Error;
};

}  // namespace mqc
