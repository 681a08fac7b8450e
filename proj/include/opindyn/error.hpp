#pragma once

#include <stdexcept>
#include <string>

namespace opindyn {

// Invalid parameters or arguments supplied by the caller.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical computation could not be carried out to the required accuracy.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace opindyn
