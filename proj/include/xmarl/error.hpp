#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace xmarl {

// Base class for every error the library reports on bad input or
// unsatisfiable requests. Internal invariant violations use assert().
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Domain definition or concrete record does not match the feature schema.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Caller violated an operation's precondition (empty input, bad counts, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Malformed, truncated, or version-mismatched file.
class FormatError : public Error {
public:
    using Error::Error;
};

class KnowledgeGapError : public Error {
public:
    using Error::Error;
};

class UnknownStateError : public Error {
public:
    using Error::Error;
};

class PhraseMapError : public Error {
public:
    using Error::Error;
};

class UnreachableGoalError : public Error {
public:
    UnreachableGoalError(const std::string& what, std::size_t frontier)
        : Error(what), frontier_(frontier) {}
    std::size_t frontier() const { return frontier_; }

private:
    std::size_t frontier_;
};

// ones and zeros passed to the minimizer share minterms.
class ConflictError : public Error {
public:
    ConflictError(const std::string& what, std::vector<std::uint64_t> offenders)
        : Error(what), offenders_(std::move(offenders)) {}
    const std::vector<std::uint64_t>& offenders() const { return offenders_; }

private:
    std::vector<std::uint64_t> offenders_;
};

// Boolean problem has more variables than the minimizer accepts.
class SizeLimitError : public Error {
public:
    SizeLimitError(const std::string& what, std::size_t variables, std::size_t limit)
        : Error(what), variables_(variables), limit_(limit) {}
    std::size_t variables() const { return variables_; }
    std::size_t limit() const { return limit_; }

private:
    std::size_t variables_;
    std::size_t limit_;
};

struct MinimizeProgress {
    std::size_t ones_expanded = 0;
    std::size_t ones_total = 0;
    std::size_t primes_found = 0;
};

class TimeoutError : public Error {
public:
    TimeoutError(const std::string& what, MinimizeProgress progress)
        : Error(what), progress_(progress) {}
    const MinimizeProgress& progress() const { return progress_; }

private:
    MinimizeProgress progress_;
};

}  // namespace xmarl
