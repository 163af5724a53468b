// Error types shared by all qfsim modules.
//
// Three families, matching the CLI exit codes:
//   UsageError      -> exit 1 (bad arguments, malformed input files)
//   DomainError     -> exit 2 (gauge rejected, range exceeded, hierarchy violated)
//   NumericalError  -> exit 3 (non-convergence, precision loss)
#pragma once

#include <stdexcept>
#include <string>

namespace qfsim {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const noexcept { return 2; }
    virtual const char* kind() const noexcept { return "error"; }
};

class UsageError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 1; }
    const char* kind() const noexcept override { return "usage"; }
};

class DomainError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 2; }
    const char* kind() const noexcept override { return "domain"; }
};

/// Query outside the range a prime table or counting method supports.
class LimitExceeded : public DomainError {
public:
    LimitExceeded(const std::string& what, unsigned long long requested, unsigned long long limit)
        : DomainError(what), requested_(requested), limit_(limit) {}
    unsigned long long requested() const noexcept { return requested_; }
    unsigned long long limit() const noexcept { return limit_; }
    const char* kind() const noexcept override { return "limit_exceeded"; }

private:
    unsigned long long requested_;
    unsigned long long limit_;
};

class NumericalError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
    const char* kind() const noexcept override { return "numerical"; }
};

} // namespace qfsim
