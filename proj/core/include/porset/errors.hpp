#pragma once

#include <stdexcept>
#include <string>

namespace porset {

/// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violated a documented precondition (bad point, wrong level, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// A query or scan left the region in which the truncated construction is exact.
class WindowError : public Error {
public:
    using Error::Error;
};

/// Line/segment counts or scan scales exceeded the configured budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

class DepthCapError : public Error {
public:
    using Error::Error;
};

/// Malformed or unsupported serialized data.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace porset
