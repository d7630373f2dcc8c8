#include "rnla/lowrank.hpp"

#include <cmath>

#include "rnla/dense.hpp"
#include "rnla/fullrank.hpp"
#include "rnla/rangefinder.hpp"
#include "rnla/rng.hpp"

#include <nlohmann/json.hpp>

namespace rnla {

namespace {

// Truncation rank under the policy: keep at most k modes, drop anything
// below 1e-12 * sigma_1.
Index truncation_rank(const Vector& sigma, Index k) {
  Index r = std::min<Index>(k, sigma.size());
  if (sigma.size() == 0) return 0;
  const double floor_val = 1e-12 * sigma(0);
  while (r > 0 && sigma(r - 1) < floor_val) --r;
  return r;
}

}  // namespace

SvdFactors rsvd(const Matrix& B, Index k, Index p, int q, std::uint64_t seed) {
  if (k < 1 || k + p > std::min(B.rows(), B.cols()))
    throw InvalidDims("rsvd: need 1 <= k and k + p <= min(m,n)");
  RangeBasis rb = power_rangefinder(B, k + p, q, seed);
  Matrix C = rb.Q.transpose() * B;
  SvdEcon svd = svd_econ(C);
  const Index r = truncation_rank(svd.sigma, k);
  SvdFactors out;
  out.U = rb.Q * svd.U.leftCols(r);
  out.sigma = svd.sigma.head(r);
  out.V = svd.V.leftCols(r);
  return out;
}

namespace {

// Row ID of Y: Y ~ X * Y(rows,:), built from a k-step CPQR of Y^T.
RowId row_id_of(const Matrix& Y, Index k) {
  const Index m = Y.rows();
  CpqrFactorization f = classical_cpqr(Y.transpose(), k, 1e-12);
  const Index r = f.rank;
  RowId out;
  out.rows.assign(f.perm.begin(), f.perm.begin() + r);
  // T = S11^{-1} S12 maps skeleton rows onto the remaining rows.
  Matrix S11 = f.R.topLeftCorner(r, r);
  Matrix S12 = f.R.topRows(r).rightCols(m - r);
  Matrix T = S11.triangularView<Eigen::Upper>().solve(S12);
  out.X = Matrix::Zero(m, r);
  for (Index i = 0; i < r; ++i) out.X(f.perm[i], i) = 1.0;
  for (Index j = 0; j < m - r; ++j)
    out.X.row(f.perm[r + j]) = T.col(j).transpose();
  return out;
}

}  // namespace

RowId randomized_id_row(const Matrix& A, Index k, Index p, std::uint64_t seed) {
  if (k < 1 || k + p > std::min(A.rows(), A.cols()))
    throw InvalidDims("randomized_id: need 1 <= k and k + p <= min(m,n)");
  RandomStream rng(seed, 0);
  Matrix Omega = rng.gaussian_matrix(A.cols(), k + p);
  Matrix Y = A * Omega;  // columns span the column space of A
  return row_id_of(Y, k);
}

ColId randomized_id_col(const Matrix& A, Index k, Index p, std::uint64_t seed) {
  if (k < 1 || k + p > std::min(A.rows(), A.cols()))
    throw InvalidDims("randomized_id: need 1 <= k and k + p <= min(m,n)");
  RandomStream rng(seed, 0);
  Matrix Omega = rng.gaussian_matrix(A.rows(), k + p);
  Matrix W = Omega.transpose() * A;  // rows span the row space of A
  RowId rid = row_id_of(W.transpose(), k);
  ColId out;
  out.cols = std::move(rid.rows);
  out.Z = rid.X.transpose();
  return out;
}

TwoSidedId two_sided_id(const Matrix& A, Index k, Index p, std::uint64_t seed) {
  TwoSidedId out;
  if (A.rows() >= A.cols()) {
    ColId cid = randomized_id_col(A, k, p, seed);
    out.cols = cid.cols;
    out.Z = cid.Z;
    Matrix C(A.rows(), static_cast<Index>(out.cols.size()));
    for (std::size_t j = 0; j < out.cols.size(); ++j)
      C.col(static_cast<Index>(j)) = A.col(out.cols[j]);
    RowId rid = row_id_of(C, static_cast<Index>(out.cols.size()));
    out.rows = rid.rows;
    out.X = rid.X;
  } else {
    RowId rid = randomized_id_row(A, k, p, seed);
    out.rows = rid.rows;
    out.X = rid.X;
    Matrix R(static_cast<Index>(out.rows.size()), A.cols());
    for (std::size_t i = 0; i < out.rows.size(); ++i)
      R.row(static_cast<Index>(i)) = A.row(out.rows[i]);
    RowId cid = row_id_of(R.transpose(), static_cast<Index>(out.rows.size()));
    out.cols = cid.rows;
    out.Z = cid.X.transpose();
  }
  const auto kr = static_cast<Index>(out.rows.size());
  const auto kc = static_cast<Index>(out.cols.size());
  out.skeleton.resize(kr, kc);
  for (Index i = 0; i < kr; ++i)
    for (Index j = 0; j < kc; ++j)
      out.skeleton(i, j) = A(out.rows[static_cast<std::size_t>(i)],
                             out.cols[static_cast<std::size_t>(j)]);
  return out;
}

CurFactors cur(const Matrix& A, Index k, Index p, std::uint64_t seed) {
  TwoSidedId id = two_sided_id(A, k, p, seed);
  CurFactors out;
  out.rows = id.rows;
  out.cols = id.cols;
  Matrix C(A.rows(), static_cast<Index>(out.cols.size()));
  for (std::size_t j = 0; j < out.cols.size(); ++j)
    C.col(static_cast<Index>(j)) = A.col(out.cols[j]);
  Matrix R(static_cast<Index>(out.rows.size()), A.cols());
  for (std::size_t i = 0; i < out.rows.size(); ++i)
    R.row(static_cast<Index>(i)) = A.row(out.rows[i]);
  // U = C^+ A R^+ via two QR least-squares solves, never explicit inverses.
  Matrix W = pinv_solve(C, A, 1e-10);              // k x n
  out.U = pinv_solve(R.transpose(), W.transpose(), 1e-10).transpose();
  return out;
}

NystromFactors nystrom(const LinearOperator& A, Index k, Index l,
                       std::uint64_t seed) {
  const Index n = A.rows;
  if (A.rows != A.cols) throw DimMismatch("nystrom: operator not square");
  if (!(1 <= k && k < l && l <= n))
    throw InvalidDims("nystrom: need 1 <= k < l <= n");
  {
    // Symmetry probe on a few random pairs.
    RandomStream rng(seed, 7);
    for (int t = 0; t < 3; ++t) {
      Vector u = rng.gaussian_vector(n), v = rng.gaussian_vector(n);
      Vector Au = A.apply(u), Av = A.apply(v);
      const double scale =
          std::max({Au.norm() * v.norm(), Av.norm() * u.norm(), 1e-300});
      if (std::abs(u.dot(Av) - Au.dot(v)) > 1e-8 * scale)
        throw NotPsd("nystrom: operator fails the symmetry probe");
    }
  }
  RandomStream rng(seed, 0);
  Matrix Omega = rng.gaussian_matrix(n, l);
  Matrix Y(n, l);
  for (Index j = 0; j < l; ++j) Y.col(j) = A.apply(Omega.col(j));

  double nu = std::sqrt(static_cast<double>(n)) *
              (std::nextafter(spectral_norm(Y),
                              std::numeric_limits<double>::infinity()) -
               spectral_norm(Y));
  if (nu == 0.0) nu = std::numeric_limits<double>::denorm_min();

  for (int attempt = 0;; ++attempt) {
    Matrix Yv = Y + nu * Omega;
    Matrix M = Omega.transpose() * Yv;
    M = 0.5 * (M + M.transpose());
    Matrix L;
    try {
      L = cholesky(M);
    } catch (const NotPositiveDefinite&) {
      if (attempt >= 1) throw NotPsd("nystrom: shifted Gram not PD");
      nu *= 10.0;
      continue;
    }
    Matrix B = L.triangularView<Eigen::Lower>()
                   .solve(Yv.transpose())
                   .transpose();  // B = Yv L^{-T}
    SvdEcon svd = svd_econ(B);
    NystromFactors out;
    const Index r = std::min(k, svd.sigma.size());
    out.U = svd.U.leftCols(r);
    out.lambda = (svd.sigma.head(r).array().square() - nu).max(0.0).matrix();
    return out;
  }
}

StreamSketch::StreamSketch(Index m, Index n, Index l, Index s,
                           std::uint64_t seed, SketchKind kind)
    : m_(m),
      n_(n),
      l_(l),
      s_(s),
      seed_(seed),
      kind_(kind),
      upsilon_(SketchOperator::make(kind, l, m, detail::splitmix64(seed) + 1)),
      omega_(SketchOperator::make(kind, l, n, detail::splitmix64(seed) + 2)),
      phi_(SketchOperator::make(kind, s, m, detail::splitmix64(seed) + 3)),
      psi_(SketchOperator::make(kind, s, n, detail::splitmix64(seed) + 4)),
      X_(Matrix::Zero(n, l)),
      Y_(Matrix::Zero(m, l)),
      Z_(Matrix::Zero(s, s)) {
  if (m < 1 || n < 1 || l < 1) throw InvalidDims("StreamSketch: bad dims");
  if (s < l) throw InvalidDims("StreamSketch: s >= l required");
}

void StreamSketch::update(const Matrix& H, double scale) {
  if (H.rows() != m_ || H.cols() != n_)
    throw DimMismatch("StreamSketch::update: shape mismatch");
  X_.noalias() += scale * apply_sketch(upsilon_, H, Side::Left).transpose();
  Y_ += scale * apply_sketch(omega_, H, Side::Right, /*adjoint=*/true);
  Z_ += scale * apply_sketch(psi_, apply_sketch(phi_, H, Side::Left),
                             Side::Right, /*adjoint=*/true);
}

void StreamSketch::update_rank_one(const Vector& u, const Vector& v,
                                   double scale) {
  if (u.size() != m_ || v.size() != n_)
    throw DimMismatch("StreamSketch::update_rank_one: length mismatch");
  X_.noalias() += scale * v * upsilon_.apply(u).transpose();
  Y_.noalias() += scale * u * omega_.apply(v).transpose();
  Z_.noalias() += scale * phi_.apply(u) * psi_.apply(v).transpose();
}

SvdFactors StreamSketch::finalize(Index k, CoreEstimate core) const {
  if (k > l_) throw RankTooLarge("StreamSketch::finalize: k > l");
  Matrix P = orth_trunc(X_);
  Matrix Q = orth_trunc(Y_);
  Matrix C;
  if (core == CoreEstimate::ThreeSketch) {
    Matrix PhiQ = apply_sketch(phi_, Q, Side::Left);    // s x rank(Q)
    Matrix PsiP = apply_sketch(psi_, P, Side::Left);    // s x rank(P)
    Matrix W = pinv_solve(PhiQ, Z_, 1e-10);             // rank(Q) x s
    C = pinv_solve(PsiP, W.transpose(), 1e-10).transpose();
  } else {
    Matrix OmP = apply_sketch(omega_, P, Side::Left);   // l x rank(P)
    Matrix QtY = Q.transpose() * Y_;                    // rank(Q) x l
    C = pinv_solve(OmP, QtY.transpose(), 1e-10).transpose();
  }
  Eigen::BDCSVD<Matrix> svd(C, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Index r = std::min<Index>(k, svd.singularValues().size());
  SvdFactors out;
  out.U = Q * svd.matrixU().leftCols(r);
  out.sigma = svd.singularValues().head(r);
  out.V = P * svd.matrixV().leftCols(r);
  return out;
}

void StreamSketch::merge(const StreamSketch& other) {
  if (m_ != other.m_ || n_ != other.n_ || l_ != other.l_ || s_ != other.s_ ||
      seed_ != other.seed_ || kind_ != other.kind_)
    throw DimMismatch("StreamSketch::merge: incompatible sketches");
  X_ += other.X_;
  Y_ += other.Y_;
  Z_ += other.Z_;
}

namespace {

nlohmann::json matrix_to_json(const Matrix& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Index j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const Index r = static_cast<Index>(j.size());
  const Index c = r ? static_cast<Index>(j.at(0).size()) : 0;
  Matrix M(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index k = 0; k < c; ++k) M(i, k) = j.at(i).at(k).get<double>();
  return M;
}

}  // namespace

std::string StreamSketch::to_json() const {
  nlohmann::json j;
  j["m"] = m_;
  j["n"] = n_;
  j["l"] = l_;
  j["s"] = s_;
  j["seed"] = seed_;
  j["kind"] = static_cast<int>(kind_);
  j["X"] = matrix_to_json(X_);
  j["Y"] = matrix_to_json(Y_);
  j["Z"] = matrix_to_json(Z_);
  return j.dump();
}

StreamSketch StreamSketch::from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  StreamSketch sk(j.at("m").get<Index>(), j.at("n").get<Index>(),
                  j.at("l").get<Index>(), j.at("s").get<Index>(),
                  j.at("seed").get<std::uint64_t>(),
                  static_cast<SketchKind>(j.at("kind").get<int>()));
  sk.X_ = matrix_from_json(j.at("X"));
  sk.Y_ = matrix_from_json(j.at("Y"));
  sk.Z_ = matrix_from_json(j.at("Z"));
  return sk;
}

}  // namespace rnla
