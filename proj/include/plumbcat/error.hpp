#pragma once

#include <stdexcept>
#include <string>

namespace plumbcat {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user input: malformed files, precondition failures on supplied data.
struct InputError : Error {
  using Error::Error;
};

struct Singular : Error {
  Singular() : Error("matrix is singular") {}
};

struct NotSymmetric : Error {
  NotSymmetric() : Error("matrix is not symmetric") {}
};

// An internal identity failed; the computation must not continue.
struct InvariantViolation : Error {
  using Error::Error;
};

}  // namespace plumbcat
