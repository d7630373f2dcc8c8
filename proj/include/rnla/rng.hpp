#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rnla/types.hpp"

namespace rnla {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace detail

// Seeded random stream. All stochastic routines in the library draw from a
// stream derived from (seed, stream_id), so a fixed seed gives bit-identical
// realizations within one build regardless of what else has been sampled.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : gen_(detail::splitmix64(seed ^ detail::splitmix64(stream_id))) {}

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; implementation-defined distributions
  // from <random> are avoided so the stream is stable across toolchains.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  double rademacher() { return (gen_() >> 63) ? 1.0 : -1.0; }

  // Uniform integer in [0, bound) without modulo bias.
  std::uint64_t integer(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % bound;
  }

  Vector gaussian_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = gaussian();
    return v;
  }

  Matrix gaussian_matrix(Index r, Index c) {
    Matrix M(r, c);
    // Column-major fill order fixes the realization.
    for (Index j = 0; j < c; ++j)
      for (Index i = 0; i < r; ++i) M(i, j) = gaussian();
    return M;
  }

  Vector rademacher_vector(Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = rademacher();
    return v;
  }

  // Uniform on the scaled sphere sqrt(n) * S^{n-1}.
  Vector sphere_vector(Index n) {
    Vector g;
    double nrm = 0.0;
    do {
      g = gaussian_vector(n);
      nrm = g.norm();
    } while (nrm == 0.0);
    return g * (std::sqrt(static_cast<double>(n)) / nrm);
  }

  std::vector<Index> permutation(Index n) {
    std::vector<Index> p(n);
    for (Index i = 0; i < n; ++i) p[i] = i;
    for (Index i = n - 1; i > 0; --i) {
      Index j = static_cast<Index>(integer(static_cast<std::uint64_t>(i) + 1));
      std::swap(p[i], p[j]);
    }
    return p;
  }

  // First d entries of a random permutation of {0,...,n-1}.
  std::vector<Index> sample_without_replacement(Index n, Index d) {
    std::vector<Index> p(n);
    for (Index i = 0; i < n; ++i) p[i] = i;
    for (Index i = 0; i < d; ++i) {
      Index j = i + static_cast<Index>(
                        integer(static_cast<std::uint64_t>(n - i)));
      std::swap(p[i], p[j]);
    }
    p.resize(d);
    return p;
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// O(1) sampling from a fixed discrete distribution (Walker alias method).
class AliasTable {
 public:
  explicit AliasTable(const std::vector<double>& weights);
  std::size_t sample(RandomStream& rng) const;
  std::size_t size() const { return prob_.size(); }

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

}  // namespace rnla
