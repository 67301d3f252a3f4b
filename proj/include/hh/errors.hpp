#pragma once

#include <stdexcept>
#include <string>

namespace hh {

// Input outside the mathematical domain of an operation (bad argument,
// pole, non-integrable exponent). The CLI maps it to exit code 2.
class domain_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// A numerical kernel could not reach its tolerance or produced a
// non-finite value. The CLI maps it to exit code 3.
class numerical_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace hh
