#include "rnla/rng.hpp"

#include <numeric>

namespace rnla {

AliasTable::AliasTable(const std::vector<double>& weights) {
  const std::size_t n = weights.size();
  if (n == 0) throw DegenerateDistribution("AliasTable: empty support");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw DegenerateDistribution("AliasTable: negative weight");
    total += w;
  }
  if (total <= 0.0) throw DegenerateDistribution("AliasTable: zero mass");

  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i)
    scaled[i] = weights[i] * static_cast<double>(n) / total;

  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i)
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));

  while (!small.empty() && !large.empty()) {
    std::uint32_t s = small.back();
    small.pop_back();
    std::uint32_t l = large.back();
    large.pop_back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  for (std::uint32_t l : large) prob_[l] = 1.0;
  for (std::uint32_t s : small) prob_[s] = 1.0;
}

std::size_t AliasTable::sample(RandomStream& rng) const {
  const std::size_t i = rng.integer(prob_.size());
  return rng.uniform() < prob_[i] ? i : alias_[i];
}

}  // namespace rnla
