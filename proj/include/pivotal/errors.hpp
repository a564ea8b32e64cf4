//
// Project     : pivotal
// Module      : errors
// Description : exception types shared across the library
//

#ifndef PIVOTAL_ERRORS_HPP
#define PIVOTAL_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pivotal {

// Incompatible shapes, index ranges or sequence lengths.
class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Zero pivot in a triangular or LU solve; carries the offending index.
class SingularError : public std::runtime_error {
 public:
  SingularError(const std::string& what, std::size_t index)
      : std::runtime_error(what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

// Invalid parameter value (nonpositive shape parameter, empty input, bad grid).
class ParameterError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense factorization breakdown (matrix not positive definite).
class FactorizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed matrix / point / permutation files; message carries the position.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pivotal

#endif  // PIVOTAL_ERRORS_HPP
