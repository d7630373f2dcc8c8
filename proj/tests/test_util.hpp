#pragma once

#include <doctest.h>

#include "rnla/dense.hpp"
#include "rnla/rng.hpp"
#include "rnla/types.hpp"

namespace rnla::test {

inline double rel_spec_err(const Matrix& A, const Matrix& B) {
  const double scale = spectral_norm(A);
  return spectral_norm(A - B) / (scale > 0 ? scale : 1.0);
}

inline Matrix random_orthonormal(Index m, Index k, std::uint64_t seed) {
  RandomStream rng(seed, 5);
  return qr_econ(rng.gaussian_matrix(m, k)).Q;
}

// Spectral-norm distance between the projectors onto range(A) and range(B).
inline double projector_gap(const Matrix& A, const Matrix& B) {
  Matrix Pa = A * A.transpose();
  Matrix Pb = B * B.transpose();
  return spectral_norm(Pa - Pb);
}

// range(A) contains range(B): ||(I - P_A) B|| small.
inline double containment_gap(const Matrix& A, const Matrix& B) {
  return spectral_norm(B - A * (A.transpose() * B));
}

}  // namespace rnla::test
