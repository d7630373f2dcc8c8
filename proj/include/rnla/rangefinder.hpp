#pragma once

#include <cstdint>
#include <optional>

#include "rnla/sketch.hpp"
#include "rnla/types.hpp"

namespace rnla {

struct RangeBasis {
  Matrix Q;  // orthonormal columns; may have fewer than requested on rank
             // deficiency (truncation, never padding)
  std::uint64_t seed = 0;
  int power = 0;
  bool max_rank_reached = false;
  bool norm_bound_violated = false;  // Chebyshev recursion norm check
};

// Basic rangefinder: orthonormal basis of B * Omega with an n x l test matrix
// of the requested kind (unit-variance scaling).
RangeBasis rangefinder(const Matrix& B, Index l, SketchKind kind,
                       std::uint64_t seed);
RangeBasis rangefinder(const LinearOperator& B, Index l, std::uint64_t seed);

// Subspace iteration on (B B^T)^q B Omega with a QR stabilization after every
// application of B or B^T; q = 0 is the basic rangefinder.
RangeBasis power_rangefinder(const Matrix& B, Index l, int q,
                             std::uint64_t seed);

enum class KrylovBasisKind { Monomial, Lanczos, Chebyshev };

// Basis of the block Krylov space span{B w, (B B^T) B w, ...} with (q+1)*l
// columns before rank truncation. All three bases span the same subspace in
// exact arithmetic. Chebyshev needs nu >= ||B||; when absent it is estimated
// by the randomized power method times 1.1.
RangeBasis krylov_rangefinder(const Matrix& B, Index l, int q,
                              KrylovBasisKind basis, std::optional<double> nu,
                              std::uint64_t seed);

// Incremental rangefinder with statistical Frobenius-norm stopping; the
// incoming block doubles as the error probe.
RangeBasis adaptive_rangefinder(const LinearOperator& A, double tau, Index b,
                                std::uint64_t seed);

struct QbFactorization {
  Matrix Q;
  Matrix B;
  bool max_rank_reached = false;
};

// Incremental rangefinder with explicit updating; the exit criterion
// ||A - QB||_F <= tau is deterministic.
QbFactorization adaptive_rangefinder_qb(const Matrix& A, double tau, Index b,
                                        std::uint64_t seed);

// B^T (I - P_{BX}) B: the squared rangefinder error as a Schur complement.
Matrix schur_error_sq(const Matrix& B, const Matrix& X);

}  // namespace rnla
