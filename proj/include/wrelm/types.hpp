#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wrelm {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Error taxonomy mirrors the CLI exit codes: validation 2, numeric 3, I/O 4.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown by Scaler::fit when a column has zero spread between its
// saturation percentiles (lo == hi would divide by zero on apply).
class DegenerateColumnError : public ValidationError {
 public:
  DegenerateColumnError(Index column, const std::string& what)
      : ValidationError(what), column_(column) {}
  Index column() const { return column_; }

 private:
  Index column_;
};

}  // namespace wrelm
