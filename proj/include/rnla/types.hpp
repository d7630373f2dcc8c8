#pragma once

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>

namespace rnla {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Machine precision mu = 2^-52; Lanczos breakdown tests use mu * sqrt(n).
inline constexpr double kMachineEps = 2.220446049250313e-16;

struct DimMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidDims : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NotPositiveDefinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotPsd : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotOrthonormal : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InsufficientSamples : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InvalidOrder : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct FunctionDomain : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateDistribution : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularSketch : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ZeroMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Disconnected : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InconsistentRhs : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct RankTooLarge : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrix-free operator. Both actions must be supplied; adjoint consistency
// <adjoint_apply(u), v> = <u, apply(v)> is checked in the test suite.
struct LinearOperator {
  Index rows = 0;
  Index cols = 0;
  std::function<Vector(const Vector&)> apply;
  std::function<Vector(const Vector&)> adjoint_apply;

  static LinearOperator from_dense(const Matrix& A) {
    auto M = std::make_shared<Matrix>(A);
    LinearOperator op;
    op.rows = M->rows();
    op.cols = M->cols();
    op.apply = [M](const Vector& x) -> Vector { return (*M) * x; };
    op.adjoint_apply = [M](const Vector& y) -> Vector {
      return M->transpose() * y;
    };
    return op;
  }

  // Dense materialization by applying to the standard basis; test oracle.
  Matrix materialize() const {
    Matrix A(rows, cols);
    Vector e = Vector::Zero(cols);
    for (Index j = 0; j < cols; ++j) {
      e(j) = 1.0;
      A.col(j) = apply(e);
      e(j) = 0.0;
    }
    return A;
  }
};

}  // namespace rnla
