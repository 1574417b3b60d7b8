#pragma once

#include <stdexcept>
#include <string>

namespace snrlab {

/// A tuning formula was evaluated outside the range where it is defined.
class RegimeMismatch : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// An exact search would exceed its configured work budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A linear system required by an estimator is singular.
class SingularSystem : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace snrlab

namespace snrlab {

/// Input file does not follow the expected schema. what() names the line.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace snrlab
