#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rnla/types.hpp"

namespace rnla {

struct GraphEdge {
  Index u = 0;
  Index v = 0;
  double w = 1.0;
};

// Edge-list weighted multigraph. Repeated (u,v) pairs are genuine multiedges.
class WeightedMultigraph {
 public:
  WeightedMultigraph(Index n, std::vector<GraphEdge> edges);

  Index vertex_count() const { return n_; }
  const std::vector<GraphEdge>& edges() const { return edges_; }
  double total_weight() const;
  bool connected() const;

  // "u v w" per line, or MatrixMarket coordinate symmetric (upper triangle).
  static WeightedMultigraph from_file(const std::string& path);

 private:
  Index n_;
  std::vector<GraphEdge> edges_;
};

// Dense Laplacian at desk scale (symmetric, zero row sums, psd).
Matrix laplacian_matrix(const WeightedMultigraph& G);
LinearOperator laplacian_operator(const WeightedMultigraph& G);

// Per-edge effective resistances through the dense pseudoinverse (O(n^3)).
Vector effective_resistances(const WeightedMultigraph& G);

// Spectral sparsification: k multiedges sampled with probability proportional
// to w_e * resistance_e; unbiased for L_G.
WeightedMultigraph sparsify(const WeightedMultigraph& G, Index k,
                            std::uint64_t seed);
Index sparsifier_sample_count(Index n, double eps);  // ceil(3 eps^-2 n log 2n)

// Morally lower-triangular approximate Cholesky factor: column i is a scaled
// column of the partially eliminated Laplacian, and C(pi,:) is lower
// triangular.
struct ApproxCholesky {
  Index n = 0;
  std::vector<std::vector<std::pair<Index, double>>> columns;
  std::vector<Index> pi;  // pi[i] = vertex eliminated at step i
  std::size_t nnz = 0;

  Matrix dense() const;  // test oracle

  // (C C^T)^+ y via two triangular solves with constant-component deflation.
  Vector solve_normal(const Vector& y) const;
};

ApproxCholesky sparse_cholesky(const WeightedMultigraph& G, std::uint64_t seed,
                               std::optional<int> split_override = {});

struct LaplacianSolve {
  Vector x;
  int iterations = 0;
  double error_bound = 0.0;  // certified ||x - x*||_L / ||x*||_L bound
};

// PCG on L x = f preconditioned by SparseCholesky; stops once the certified
// L-seminorm relative error is below eps.
LaplacianSolve laplacian_solve(const WeightedMultigraph& G, const Vector& f,
                               double eps, std::uint64_t seed,
                               std::optional<int> split_override = {});

}  // namespace rnla
