#ifndef MIFB_ERRORS_HPP_
#define MIFB_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace mifb {

// Non-finite values, failed iterations, and the like.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by post-processing routines fed too few samples.
class insufficient_data_error : public std::runtime_error {
 public:
  explicit insufficient_data_error(const std::string& what)
      : std::runtime_error(what) {}
};

// Parameters fail the descent-margin test (delta <= 0) and no override was given.
class inadmissible_error : public std::runtime_error {
 public:
  explicit inadmissible_error(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace mifb

#endif  // MIFB_ERRORS_HPP_
