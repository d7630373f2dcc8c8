#pragma once

#include <cstdint>
#include <vector>

#include "rnla/types.hpp"

namespace rnla {

struct UrvFactorization {
  Matrix U;  // m x n orthonormal
  Matrix R;  // n x n upper triangular
  Matrix V;  // n x n orthogonal
  int q = 0;
};

// Rank-revealing URV through randomized power iteration on A^T A. For q >= 2
// the power products are reorthonormalized after every application of A and
// A^T. Requires m >= n; callers transpose otherwise.
UrvFactorization power_urv(const Matrix& A, int q, std::uint64_t seed);

struct CpqrFactorization {
  Matrix Q;                 // m x min(m,n)
  Matrix R;                 // min(m,n) x n
  std::vector<Index> perm;  // A(:, perm) = Q R
  Index rank = 0;           // steps actually performed
};

// Classical Householder CPQR with greedy column pivoting (largest residual
// column norm, ties to lowest index). Column norms are recomputed after each
// reflector. max_steps < 0 factors to completion; columns whose residual
// falls below rel_tol * (first pivot norm) stop the elimination.
CpqrFactorization classical_cpqr(const Matrix& A, Index max_steps = -1,
                                 double rel_tol = 0.0);

// Blocked randomized CPQR: per panel, pivots are chosen by running b steps of
// classical CPQR on a (b+p) x trailing sketch of the trailing block. The
// identity_omega hook replaces the sketch with the trailing block itself and
// must reproduce classical pivoting exactly.
CpqrFactorization randomized_cpqr(const Matrix& A, Index b, Index p,
                                  std::uint64_t seed,
                                  bool identity_omega = false);

}  // namespace rnla
