#pragma once

#include <stdexcept>
#include <string>

namespace lnagell {

/// Caller violated a documented precondition.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A rigorous comparison stayed undecided up to the precision cap.
class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configured search or enumeration limit was exceeded.
class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lnagell
