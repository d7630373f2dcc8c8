#pragma once

#include <cstdint>
#include <string>

#include "rnla/laplacian.hpp"
#include "rnla/types.hpp"

namespace rnla {

// Spectrum grammar shared by the CLI and the benchmark harness:
//   "decay:r"    sigma_j = r^j
//   "poly:p"     sigma_j = j^-p
//   "plateau:k"  k ones followed by a small flat tail (1e-2)
Vector parse_spectrum(const std::string& spec, Index n);

// A = U diag(sigma) V^T with seeded Haar factors.
Matrix matrix_with_spectrum(Index m, Index n, const Vector& sigma,
                            std::uint64_t seed);

// Symmetric psd A = Q diag(lambda) Q^T.
Matrix psd_with_eigenvalues(const Vector& lambda, std::uint64_t seed);

// Erdos-Renyi G(n, p) with weights in [0.5, 1.5], plus a random spanning
// tree so the result is always connected.
WeightedMultigraph random_connected_graph(Index n, double edge_prob,
                                          std::uint64_t seed);

}  // namespace rnla
