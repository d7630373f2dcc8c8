#include "rnla/laplacian.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "rnla/dense.hpp"
#include "rnla/rng.hpp"

namespace rnla {

WeightedMultigraph::WeightedMultigraph(Index n, std::vector<GraphEdge> edges)
    : n_(n), edges_(std::move(edges)) {
  if (n < 0) throw InvalidDims("multigraph: negative vertex count");
  for (const GraphEdge& e : edges_) {
    if (e.u == e.v) throw InvalidDims("multigraph: self loop");
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw InvalidDims("multigraph: vertex index out of range");
    if (!(e.w > 0.0)) throw InvalidDims("multigraph: nonpositive weight");
  }
}

double WeightedMultigraph::total_weight() const {
  double t = 0.0;
  for (const GraphEdge& e : edges_) t += e.w;
  return t;
}

bool WeightedMultigraph::connected() const {
  if (n_ <= 1) return true;
  std::vector<std::vector<Index>> adj(static_cast<std::size_t>(n_));
  for (const GraphEdge& e : edges_) {
    adj[static_cast<std::size_t>(e.u)].push_back(e.v);
    adj[static_cast<std::size_t>(e.v)].push_back(e.u);
  }
  std::vector<char> seen(static_cast<std::size_t>(n_), 0);
  std::vector<Index> stack{0};
  seen[0] = 1;
  Index count = 1;
  while (!stack.empty()) {
    Index u = stack.back();
    stack.pop_back();
    for (Index v : adj[static_cast<std::size_t>(u)])
      if (!seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = 1;
        ++count;
        stack.push_back(v);
      }
  }
  return count == n_;
}

WeightedMultigraph WeightedMultigraph::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open graph file: " + path);
  std::string line;
  std::vector<GraphEdge> edges;
  Index n = 0;
  bool matrix_market = false;
  bool header_read = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '%') {
      matrix_market = true;
      continue;
    }
    std::istringstream ls(line);
    if (matrix_market && !header_read) {
      Index rows, cols;
      long long nnz;
      ls >> rows >> cols >> nnz;
      n = std::max(rows, cols);
      header_read = true;
      continue;
    }
    long long u, v;
    double w = 1.0;
    ls >> u >> v;
    if (!(ls >> w)) w = 1.0;
    if (matrix_market) {
      // 1-based coordinate format; diagonal entries are ignored, off-diagonal
      // values store -w for a Laplacian or w for an adjacency; use |w|.
      --u;
      --v;
      if (u == v) continue;
      w = std::abs(w);
    }
    edges.push_back(GraphEdge{static_cast<Index>(u), static_cast<Index>(v), w});
    n = std::max({n, static_cast<Index>(u) + 1, static_cast<Index>(v) + 1});
  }
  return WeightedMultigraph(n, std::move(edges));
}

Matrix laplacian_matrix(const WeightedMultigraph& G) {
  const Index n = G.vertex_count();
  Matrix L = Matrix::Zero(n, n);
  for (const GraphEdge& e : G.edges()) {
    L(e.u, e.u) += e.w;
    L(e.v, e.v) += e.w;
    L(e.u, e.v) -= e.w;
    L(e.v, e.u) -= e.w;
  }
  return L;
}

LinearOperator laplacian_operator(const WeightedMultigraph& G) {
  auto edges = std::make_shared<std::vector<GraphEdge>>(G.edges());
  const Index n = G.vertex_count();
  LinearOperator op;
  op.rows = n;
  op.cols = n;
  op.apply = [edges, n](const Vector& x) -> Vector {
    Vector y = Vector::Zero(n);
    for (const GraphEdge& e : *edges) {
      const double d = e.w * (x(e.u) - x(e.v));
      y(e.u) += d;
      y(e.v) -= d;
    }
    return y;
  };
  op.adjoint_apply = op.apply;
  return op;
}

Vector effective_resistances(const WeightedMultigraph& G) {
  if (!G.connected()) throw Disconnected("effective_resistances");
  Matrix Lpinv = psd_pinv(laplacian_matrix(G));
  const auto& edges = G.edges();
  Vector rho(static_cast<Index>(edges.size()));
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const GraphEdge& e = edges[i];
    rho(static_cast<Index>(i)) =
        Lpinv(e.u, e.u) + Lpinv(e.v, e.v) - 2.0 * Lpinv(e.u, e.v);
  }
  return rho;
}

Index sparsifier_sample_count(Index n, double eps) {
  if (eps <= 0.0 || eps >= 1.0)
    throw InvalidDims("sparsifier_sample_count: eps in (0,1)");
  return static_cast<Index>(std::ceil(
      3.0 / (eps * eps) * static_cast<double>(n) *
      std::log(2.0 * static_cast<double>(n))));
}

WeightedMultigraph sparsify(const WeightedMultigraph& G, Index k,
                            std::uint64_t seed) {
  if (!G.connected()) throw Disconnected("sparsify");
  if (k < 1) throw InvalidDims("sparsify: k >= 1 required");
  Vector rho = effective_resistances(G);
  const auto& edges = G.edges();
  std::vector<double> p(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i)
    p[i] = std::max(edges[i].w * rho(static_cast<Index>(i)), 0.0);
  const double mass = std::accumulate(p.begin(), p.end(), 0.0);
  AliasTable table(p);
  RandomStream rng(seed, 0);
  std::vector<GraphEdge> sampled;
  sampled.reserve(static_cast<std::size_t>(k));
  for (Index t = 0; t < k; ++t) {
    const std::size_t i = table.sample(rng);
    const double pi = p[i] / mass;
    sampled.push_back(GraphEdge{edges[i].u, edges[i].v,
                                edges[i].w / (pi * static_cast<double>(k))});
  }
  return WeightedMultigraph(G.vertex_count(), std::move(sampled));
}

namespace {

// Live multigraph during elimination: edge pool plus per-vertex lists of
// edge ids, compacted lazily.
struct EliminationGraph {
  struct Edge {
    Index u, v;
    double w;
    bool alive;
  };
  std::vector<Edge> pool;
  std::vector<std::vector<std::size_t>> incident;

  explicit EliminationGraph(Index n)
      : incident(static_cast<std::size_t>(n)) {}

  void add_edge(Index u, Index v, double w) {
    pool.push_back(Edge{u, v, w, true});
    incident[static_cast<std::size_t>(u)].push_back(pool.size() - 1);
    incident[static_cast<std::size_t>(v)].push_back(pool.size() - 1);
  }

  // Alive edge ids incident to u, compacting the stored list.
  std::vector<std::size_t> star(Index u) {
    auto& list = incident[static_cast<std::size_t>(u)];
    std::vector<std::size_t> out;
    out.reserve(list.size());
    for (std::size_t id : list)
      if (pool[id].alive) out.push_back(id);
    list = out;
    return out;
  }
};

}  // namespace

Matrix ApproxCholesky::dense() const {
  Matrix C = Matrix::Zero(n, static_cast<Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (const auto& [row, val] : columns[j]) C(row, static_cast<Index>(j)) = val;
  return C;
}

Vector ApproxCholesky::solve_normal(const Vector& y) const {
  // Solve (C C^T) u = y for mean-zero y; C(pi,:) is lower triangular, and
  // the constant component is deflated on the way in and out.
  const auto steps = static_cast<Index>(columns.size());
  Vector rhs = y;
  rhs.array() -= rhs.mean();

  // Forward solve C z = rhs over columns in elimination order. Column j has
  // its diagonal at row pi[j].
  Vector z = Vector::Zero(steps);
  Vector work = rhs;
  for (Index j = 0; j < steps; ++j) {
    const Index dj = pi[static_cast<std::size_t>(j)];
    double diag = 0.0;
    for (const auto& [row, val] : columns[static_cast<std::size_t>(j)])
      if (row == dj) {
        diag = val;
        break;
      }
    if (std::abs(diag) < 1e-300) {
      z(j) = 0.0;  // dead column; consistent by deflation
      continue;
    }
    z(j) = work(dj) / diag;
    for (const auto& [row, val] : columns[static_cast<std::size_t>(j)])
      work(row) -= val * z(j);
  }

  // Back solve C^T u = z; unknown u has one entry per vertex.
  Vector u = Vector::Zero(n);
  for (Index j = steps - 1; j >= 0; --j) {
    const Index dj = pi[static_cast<std::size_t>(j)];
    double diag = 0.0, acc = z(j);
    for (const auto& [row, val] : columns[static_cast<std::size_t>(j)]) {
      if (row == dj)
        diag = val;
      else
        acc -= val * u(row);
    }
    u(dj) = (std::abs(diag) < 1e-300) ? 0.0 : acc / diag;
  }
  u.array() -= u.mean();
  return u;
}

ApproxCholesky sparse_cholesky(const WeightedMultigraph& G, std::uint64_t seed,
                               std::optional<int> split_override) {
  if (!G.connected()) throw Disconnected("sparse_cholesky");
  const Index n = G.vertex_count();
  if (n < 2) throw InvalidDims("sparse_cholesky: need n >= 2");

  // Preprocessing: split every multiedge into R parallel copies.
  const double en = M_E * static_cast<double>(n);
  int R = split_override.value_or(static_cast<int>(
      std::ceil(64.0 * std::log(en) * std::log(en))));
  R = std::max(R, 1);

  EliminationGraph g(n);
  g.pool.reserve(G.edges().size() * static_cast<std::size_t>(R));
  for (const GraphEdge& e : G.edges())
    for (int r = 0; r < R; ++r) g.add_edge(e.u, e.v, e.w / R);

  RandomStream rng(seed, 0);
  ApproxCholesky out;
  out.n = n;
  out.columns.resize(static_cast<std::size_t>(n));
  out.pi.resize(static_cast<std::size_t>(n));

  std::vector<Index> remaining(static_cast<std::size_t>(n));
  std::iota(remaining.begin(), remaining.end(), 0);

  for (Index step = 0; step < n; ++step) {
    // Uniformly random vertex among those not yet eliminated.
    const std::size_t pick = rng.integer(remaining.size());
    const Index u = remaining[pick];
    remaining[pick] = remaining.back();
    remaining.pop_back();
    out.pi[static_cast<std::size_t>(step)] = u;

    std::vector<std::size_t> star = g.star(u);
    double wu = 0.0;
    for (std::size_t id : star) wu += g.pool[id].w;

    auto& col = out.columns[static_cast<std::size_t>(step)];
    if (wu <= 0.0 || star.empty()) {
      // Isolated by earlier eliminations: zero column.
      continue;
    }

    // Column of the current Laplacian, scaled by 1/sqrt(diagonal).
    const double sq = std::sqrt(wu);
    std::unordered_map<Index, double> neighbor_weight;
    for (std::size_t id : star) {
      const auto& e = g.pool[id];
      const Index v = (e.u == u) ? e.v : e.u;
      neighbor_weight[v] += e.w;
    }
    col.emplace_back(u, sq);
    for (const auto& [v, w] : neighbor_weight) col.emplace_back(v, -w / sq);
    out.nnz += col.size();

    // Sample the clique replacing the star: deg(u) new multiedges, first
    // endpoint weight-proportional, second uniform.
    const std::size_t d = star.size();
    std::vector<double> weights(d);
    for (std::size_t t = 0; t < d; ++t) weights[t] = g.pool[star[t]].w;
    AliasTable by_weight(weights);
    for (std::size_t id : star) g.pool[id].alive = false;
    for (std::size_t t = 0; t < d; ++t) {
      const auto& e1 = g.pool[star[by_weight.sample(rng)]];
      const auto& e2 = g.pool[star[rng.integer(d)]];
      const Index v1 = (e1.u == u) ? e1.v : e1.u;
      const Index v2 = (e2.u == u) ? e2.v : e2.u;
      if (v1 == v2) continue;
      g.add_edge(v1, v2, e1.w * e2.w / (e1.w + e2.w));
    }
  }
  return out;
}

LaplacianSolve laplacian_solve(const WeightedMultigraph& G, const Vector& f,
                               double eps, std::uint64_t seed,
                               std::optional<int> split_override) {
  const Index n = G.vertex_count();
  if (f.size() != n) throw DimMismatch("laplacian_solve: rhs length");
  if (!G.connected()) throw Disconnected("laplacian_solve");
  if (std::abs(f.sum()) > 1e-10 * std::max(f.norm(), 1e-300))
    throw InconsistentRhs("laplacian_solve: 1^T f != 0");
  if (eps <= 0.0) throw InvalidDims("laplacian_solve: eps > 0 required");

  LaplacianSolve out;
  if (f.norm() == 0.0) {
    out.x = Vector::Zero(n);
    return out;
  }

  ApproxCholesky C = sparse_cholesky(G, seed, split_override);
  LinearOperator L = laplacian_operator(G);
  auto apply_minv = [&](const Vector& v) { return C.solve_normal(v); };

  // Certified stopping needs two-sided pencil bounds a L <= C C^T <= b L.
  // The factorization guarantees [0.5, 1.5] with high probability; the rule
  // assumes a widened band so that small-n fluctuations cannot cause a
  // premature stop, at a cost of well under one extra PCG iteration.
  const double a = 0.35, b = 1.7;

  // PCG with the certified energy-norm rule:
  //   ||x_j - x*||_L^2 <= (1/a) <r_j, M^{-1} r_j>,
  //   ||x*||_L^2 >= (1/b) <f, M^{-1} f>.
  Vector x = Vector::Zero(n);
  Vector r = f;
  Vector z = apply_minv(r);
  double rz = r.dot(z);
  const double target = eps * eps * (a / b) * rz;
  Vector p = z;
  int it = 0;
  const int max_iter = 200 + static_cast<int>(n);
  while (it < max_iter && rz > target) {
    Vector Ap = L.apply(p);
    const double step = rz / p.dot(Ap);
    x += step * p;
    r -= step * Ap;
    z = apply_minv(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
    ++it;
  }
  x.array() -= x.mean();
  out.x = std::move(x);
  out.iterations = it;
  out.error_bound = std::sqrt(std::max(rz, 0.0) / a) /
                    std::max(std::sqrt(f.dot(apply_minv(f)) / b), 1e-300);
  return out;
}

}  // namespace rnla
