#pragma once

#include "rnla/types.hpp"

namespace rnla {

struct QrEcon {
  Matrix Q;  // m x min(m,n), orthonormal columns
  Matrix R;  // min(m,n) x n, upper triangular
};

struct SvdEcon {
  Matrix U;
  Vector sigma;  // descending, nonnegative
  Matrix V;
};

struct SymEig {
  Vector values;   // ascending (Eigen convention)
  Matrix vectors;  // orthonormal columns
};

// Householder economy QR. Rank-deficient input still returns a valid
// factorization (Q spans at least range(A)).
QrEcon qr_econ(const Matrix& A);

SvdEcon svd_econ(const Matrix& A);

// Eigendecomposition of the symmetric tridiagonal with diagonal alpha and
// off-diagonal beta (beta has length alpha.size() - 1).
SymEig eig_sym_tridiag(const Vector& alpha, const Vector& beta);

// Lower-triangular Cholesky factor, C C^T = A. Throws NotPositiveDefinite
// when a nonpositive pivot is hit; callers like Nystrom use that signal.
Matrix cholesky(const Matrix& A);

// ---- small helpers shared across the library ----

double spectral_norm(const Matrix& A);

// Orthonormal basis of range(Y); trailing columns with pivoted-QR diagonal
// below rel_tol * |R_11| are dropped, never padded.
Matrix orth_trunc(const Matrix& Y, double rel_tol = 1e-12);

// Least-squares solve through Householder QR (pseudoinverse action with a
// column-norm-relative rank cutoff).
Matrix pinv_solve(const Matrix& A, const Matrix& B, double rel_tol = 1e-10);

// Moore-Penrose pseudoinverse of a symmetric psd matrix via eigendecomposition.
Matrix psd_pinv(const Matrix& A, double rel_tol = 1e-12);

}  // namespace rnla
