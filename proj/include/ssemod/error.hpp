#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ssemod {

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed edge-list, partition or profile text.
class ParseError : public Error
{
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// An operation was called outside its domain (empty set, non-regular graph, ...).
class PreconditionError : public Error
{
public:
    using Error::Error;
};

/// Exhaustive or enumerative search would exceed its configured budget.
class BudgetExceeded : public Error
{
public:
    using Error::Error;
};

/// A solver ran to completion without finding a set meeting its contract.
class SolverFailure : public Error
{
public:
    using Error::Error;
};

} // namespace ssemod
