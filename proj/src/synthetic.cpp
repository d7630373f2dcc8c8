#include "rnla/synthetic.hpp"

#include <cmath>

#include "rnla/dense.hpp"
#include "rnla/rng.hpp"

namespace rnla {

Vector parse_spectrum(const std::string& spec, Index n) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  const std::string arg =
      colon == std::string::npos ? "" : spec.substr(colon + 1);
  Vector sigma(n);
  if (name == "decay") {
    const double r = arg.empty() ? 0.5 : std::stod(arg);
    for (Index j = 0; j < n; ++j)
      sigma(j) = std::pow(r, static_cast<double>(j + 1));
  } else if (name == "poly") {
    const double p = arg.empty() ? 2.0 : std::stod(arg);
    for (Index j = 0; j < n; ++j)
      sigma(j) = std::pow(static_cast<double>(j + 1), -p);
  } else if (name == "plateau") {
    const Index k = arg.empty() ? n / 10 : static_cast<Index>(std::stol(arg));
    for (Index j = 0; j < n; ++j) sigma(j) = (j < k) ? 1.0 : 1e-2;
  } else {
    throw InvalidDims("unknown spectrum spec: " + spec);
  }
  return sigma;
}

Matrix matrix_with_spectrum(Index m, Index n, const Vector& sigma,
                            std::uint64_t seed) {
  const Index c = std::min(m, n);
  if (sigma.size() != c) throw DimMismatch("matrix_with_spectrum: sigma size");
  RandomStream rng(seed, 11);
  Matrix U = qr_econ(rng.gaussian_matrix(m, c)).Q;
  Matrix V = qr_econ(rng.gaussian_matrix(n, c)).Q;
  return U * sigma.asDiagonal() * V.transpose();
}

Matrix psd_with_eigenvalues(const Vector& lambda, std::uint64_t seed) {
  const Index n = lambda.size();
  RandomStream rng(seed, 13);
  Matrix Q = qr_econ(rng.gaussian_matrix(n, n)).Q;
  return Q * lambda.asDiagonal() * Q.transpose();
}

WeightedMultigraph random_connected_graph(Index n, double edge_prob,
                                          std::uint64_t seed) {
  RandomStream rng(seed, 17);
  std::vector<GraphEdge> edges;
  // Random spanning tree: attach each vertex to a random earlier one.
  for (Index v = 1; v < n; ++v) {
    const auto u = static_cast<Index>(rng.integer(static_cast<std::uint64_t>(v)));
    edges.push_back(GraphEdge{u, v, 0.5 + rng.uniform()});
  }
  for (Index u = 0; u < n; ++u)
    for (Index v = u + 1; v < n; ++v)
      if (rng.uniform() < edge_prob)
        edges.push_back(GraphEdge{u, v, 0.5 + rng.uniform()});
  return WeightedMultigraph(n, std::move(edges));
}

}  // namespace rnla
