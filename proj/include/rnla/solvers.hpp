#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rnla/sketch.hpp"
#include "rnla/types.hpp"

namespace rnla {

struct LsSolution {
  Vector x;
  double residual_norm = 0.0;  // ||A x - b||, recomputed independently
  int iterations = 0;
  std::string method;
  bool converged = true;  // false = stagnation / iteration budget reached
};

// LSQR (Golub-Kahan bidiagonalization) with an optional upper-triangular
// right preconditioner R: iterates on A R^{-1} and maps back. Stops when
// ||A^T(Ax-b)|| / (||A|| ||Ax-b|| + ||A^T b||) <= tol.
LsSolution lsqr(const LinearOperator& A, const Vector& b,
                const Matrix* right_precond, double tol, int max_iter);

// Sketch-and-solve: QR solve of the d x n compressed problem; the bordered
// matrix [A b] is sketched with a single operator.
LsSolution sketch_solve_ls(const Matrix& A, const Vector& b, Index d,
                           SketchKind kind, std::uint64_t seed);

// Iterative sketching: x <- x + ((S A)^T (S A))^{-1} A^T (b - A x) with a
// fresh embedding each iteration.
LsSolution iterative_sketch_ls(const Matrix& A, const Vector& b, Index d,
                               int n_iter, std::uint64_t seed);

// Sketch-and-precondition: LSQR right-preconditioned by the R factor of the
// sketched QR, warm-started from the sketch-and-solve solution.
LsSolution sketch_precondition_ls(const Matrix& A, const Vector& b, Index d,
                                  double tol, std::uint64_t seed);

enum class KaczmarzMode { Rows, Block };

// Randomized Kaczmarz with squared-row-norm sampling; Block mode performs the
// sketch-and-project step with a fresh Gaussian row-mixing sketch of l rows.
LsSolution randomized_kaczmarz(const Matrix& A, const Vector& b, int n_iter,
                               KaczmarzMode mode, Index block_l,
                               std::uint64_t seed);

// PCG on a positive-definite operator preconditioned by the rank-k Nystrom
// deflation M^{-1} = alpha U D^{-1} U^T + (I - U U^T) with alpha = D(k,k).
LsSolution nystrom_pcg(const LinearOperator& A, const Vector& b, Index k,
                       Index l, double tol, int max_iter, std::uint64_t seed);

// Unpreconditioned CG iteration count oracle used by tests and benchmarks.
LsSolution cg(const LinearOperator& A, const Vector& b, double tol,
              int max_iter);

}  // namespace rnla
