#ifndef MADM_TYPES_HPP_
#define MADM_TYPES_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace madm {

using Vector = Eigen::VectorXd;
// One row per agent (or per edge); rows are contiguous.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid graph, dimension mismatch, out-of-range parameter.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// NaN/Inf in an iterate, or a numerical primitive that cannot proceed.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace madm

#endif  // MADM_TYPES_HPP_
