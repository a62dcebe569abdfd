#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slr {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A moment or polynomial operation would exceed the total-degree cap.
// Moment computation is exact or refused; there is no silent truncation.
class DegreeOverflowError : public Error {
public:
    explicit DegreeOverflowError(const std::string& what) : Error(what) {}
};

// A polynomial references a source symbol that is not declared.
class UnknownSourceError : public Error {
public:
    explicit UnknownSourceError(const std::string& symbol)
        : Error("undeclared source symbol: " + symbol), symbol_(symbol) {}

    const std::string& symbol() const { return symbol_; }

private:
    std::string symbol_;
};

// The regressor set is not essentially linearly independent: the Gram
// matrix E[X X^T] failed its positive-definite factorization. Carries the
// index of the offending pivot.
class NotLinearlyIndependentError : public Error {
public:
    NotLinearlyIndependentError(std::size_t pivot_index, double pivot_value)
        : Error("regressor set is not essentially linearly independent "
                "(Gram pivot " + std::to_string(pivot_index) +
                " = " + std::to_string(pivot_value) + " below tolerance)"),
          pivot_index_(pivot_index),
          pivot_value_(pivot_value) {}

    std::size_t pivot_index() const { return pivot_index_; }
    double pivot_value() const { return pivot_value_; }

private:
    std::size_t pivot_index_;
    double pivot_value_;
};

// An operation's stated precondition does not hold (e.g. the variables
// handed to a family constructor are not pairwise orthogonal).
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error(what) {}
};

// classify() was called on a vector that is not a member of the model.
class MembershipError : public Error {
public:
    explicit MembershipError(const std::string& what) : Error(what) {}
};

// A model specification file could not be parsed; the message carries
// the offending field or location.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

}  // namespace slr
