#include "rnla/sketch.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

#include "rnla/dense.hpp"
#include "rnla/rng.hpp"

namespace rnla {

namespace {

std::mutex& fftw_plan_mutex() {
  static std::mutex m;
  return m;
}

// Orthonormal trigonometric transform of a contiguous buffer, in place.
// adjoint applies the transpose (DHT is symmetric; DCT2^T = DCT3).
void trig_transform(SrttTransform kind, double* x, Index n, bool adjoint) {
  const auto nn = static_cast<int>(n);
  fftw_r2r_kind k;
  if (kind == SrttTransform::Dht) {
    k = FFTW_DHT;
  } else {
    k = adjoint ? FFTW_REDFT01 : FFTW_REDFT10;
  }

  if (kind == SrttTransform::Dct2 && adjoint) {
    // Pre-scale so REDFT01 realizes the orthonormal DCT2 transpose.
    const double s0 = std::sqrt(1.0 / static_cast<double>(n));
    const double sk = std::sqrt(2.0 / static_cast<double>(n)) / 2.0;
    x[0] *= s0;
    for (Index i = 1; i < n; ++i) x[i] *= sk;
  }

  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    plan = fftw_plan_r2r_1d(nn, x, x, k, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex());
    fftw_destroy_plan(plan);
  }

  if (kind == SrttTransform::Dht) {
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (Index i = 0; i < n; ++i) x[i] *= s;
  } else if (!adjoint) {
    // REDFT10 returns 2 * sum x_j cos(pi (j+1/2) k / n).
    const double s0 = std::sqrt(1.0 / static_cast<double>(n)) / 2.0;
    const double sk = std::sqrt(2.0 / static_cast<double>(n)) / 2.0;
    x[0] *= s0;
    for (Index i = 1; i < n; ++i) x[i] *= sk;
  }
}

// Dense orthonormal transform matrix, used only by materialize().
Matrix trig_matrix(SrttTransform kind, Index n) {
  Matrix F(n, n);
  const double nd = static_cast<double>(n);
  if (kind == SrttTransform::Dht) {
    for (Index k = 0; k < n; ++k)
      for (Index j = 0; j < n; ++j) {
        double t = 2.0 * M_PI * static_cast<double>(j) * static_cast<double>(k) / nd;
        F(k, j) = (std::cos(t) + std::sin(t)) / std::sqrt(nd);
      }
  } else {
    for (Index k = 0; k < n; ++k) {
      double sk = (k == 0) ? std::sqrt(1.0 / nd) : std::sqrt(2.0 / nd);
      for (Index j = 0; j < n; ++j)
        F(k, j) = sk * std::cos(M_PI * (2.0 * static_cast<double>(j) + 1.0) *
                                static_cast<double>(k) / (2.0 * nd));
    }
  }
  return F;
}

}  // namespace

struct SketchOperator::Impl {
  // Gaussian / PartialIsometry: fully materialized (no fast path exists).
  Matrix dense;

  // SparseSign: per column, zeta (row, value) pairs.
  int zeta = 0;
  std::vector<Index> ss_rows;
  std::vector<double> ss_vals;

  // Srtt: S = scale * R * F * E * Pi.
  SrttTransform transform = SrttTransform::Dht;
  Vector srtt_signs;
  std::vector<Index> srtt_perm;
  std::vector<Index> srtt_rows;
  double srtt_scale = 1.0;

  // TensorKR
  std::vector<Matrix> factors;
  double tkr_scale = 1.0;

  // CoordSample
  std::vector<Index> cs_idx;
  Vector cs_probs;
  double cs_scale = 1.0;
};

SketchOperator SketchOperator::make(SketchKind kind, Index d, Index n,
                                    std::uint64_t seed, Scaling scaling,
                                    SketchOptions opts) {
  if (d < 1 || n < 1) throw InvalidDims("make_sketch: dims must be positive");
  SketchOperator S;
  S.kind_ = kind;
  S.d_ = d;
  S.n_ = n;
  S.seed_ = seed;
  S.scaling_ = scaling;
  auto impl = std::make_shared<Impl>();
  const double unit = (scaling == Scaling::UnitVariance)
                          ? std::sqrt(static_cast<double>(d))
                          : 1.0;

  switch (kind) {
    case SketchKind::Gaussian: {
      RandomStream rng(seed, 0);
      impl->dense =
          rng.gaussian_matrix(d, n) * (unit / std::sqrt(static_cast<double>(d)));
      break;
    }
    case SketchKind::PartialIsometry: {
      RandomStream rng(seed, 0);
      if (d <= n) {
        // Orthonormal rows spanning the co-range of a Gaussian map, with the
        // sign-of-diagonal correction so the factor is Haar-consistent.
        Matrix G = rng.gaussian_matrix(n, d);
        QrEcon qr = qr_econ(G);
        for (Index j = 0; j < d; ++j)
          if (qr.R(j, j) < 0.0) qr.Q.col(j) *= -1.0;
        impl->dense = qr.Q.transpose() *
                      (unit * std::sqrt(static_cast<double>(n) /
                                        static_cast<double>(d)));
      } else {
        Matrix G = rng.gaussian_matrix(d, n);
        QrEcon qr = qr_econ(G);
        for (Index j = 0; j < n; ++j)
          if (qr.R(j, j) < 0.0) qr.Q.col(j) *= -1.0;
        impl->dense = qr.Q * unit;
      }
      break;
    }
    case SketchKind::SparseSign: {
      int zeta = opts.sparse_nnz;
      if (zeta == 8) zeta = static_cast<int>(std::min<Index>(d, 8));
      if (zeta < 2 || zeta > d)
        throw InvalidDims("make_sketch: SparseSign needs 2 <= zeta <= d");
      impl->zeta = zeta;
      impl->ss_rows.reserve(static_cast<std::size_t>(zeta) * n);
      impl->ss_vals.reserve(static_cast<std::size_t>(zeta) * n);
      RandomStream rng(seed, 0);
      const double v = unit / std::sqrt(static_cast<double>(zeta));
      for (Index j = 0; j < n; ++j) {
        auto rows = rng.sample_without_replacement(d, zeta);
        for (Index r : rows) {
          impl->ss_rows.push_back(r);
          impl->ss_vals.push_back(rng.rademacher() * v);
        }
      }
      break;
    }
    case SketchKind::Srtt: {
      if (d > n) throw InvalidDims("make_sketch: Srtt needs d <= n");
      impl->transform = opts.transform;
      RandomStream sign_rng(seed, 1);
      impl->srtt_signs = sign_rng.rademacher_vector(n);
      RandomStream perm_rng(seed, 2);
      impl->srtt_perm = perm_rng.permutation(n);
      RandomStream row_rng(seed, 3);
      impl->srtt_rows = row_rng.sample_without_replacement(n, d);
      impl->srtt_scale =
          unit * std::sqrt(static_cast<double>(n) / static_cast<double>(d));
      break;
    }
    case SketchKind::TensorKR: {
      if (opts.tensor_dims.empty())
        throw InvalidDims("make_sketch: TensorKR needs factor dims");
      Index prod = 1;
      for (Index m : opts.tensor_dims) {
        if (m < 1) throw InvalidDims("make_sketch: TensorKR factor dim < 1");
        prod *= m;
      }
      if (prod != n)
        throw InvalidDims("make_sketch: TensorKR dims must multiply to n");
      RandomStream rng(seed, 0);
      for (Index m : opts.tensor_dims)
        impl->factors.push_back(rng.gaussian_matrix(d, m));
      impl->tkr_scale = unit / std::sqrt(static_cast<double>(d));
      break;
    }
    case SketchKind::CoordSample: {
      Vector p;
      if (opts.coord_mode == CoordMode::Uniform) {
        p = Vector::Constant(n, 1.0 / static_cast<double>(n));
      } else {
        p = opts.coord_probs;
        if (p.size() != n)
          throw InvalidDims("make_sketch: CoordSample probability length");
        if (std::abs(p.sum() - 1.0) > 1e-12)
          throw DegenerateDistribution(
              "make_sketch: probabilities must sum to 1");
      }
      std::vector<double> w(p.data(), p.data() + p.size());
      AliasTable table(w);
      RandomStream rng(seed, 0);
      impl->cs_idx.resize(d);
      for (Index j = 0; j < d; ++j)
        impl->cs_idx[j] = static_cast<Index>(table.sample(rng));
      impl->cs_probs = p;
      impl->cs_scale = unit / std::sqrt(static_cast<double>(d));
      break;
    }
  }
  S.impl_ = std::move(impl);
  return S;
}

Vector SketchOperator::apply(const Vector& x) const {
  if (x.size() != n_) throw DimMismatch("sketch apply: length mismatch");
  const Impl& im = *impl_;
  switch (kind_) {
    case SketchKind::Gaussian:
    case SketchKind::PartialIsometry:
      return im.dense * x;
    case SketchKind::SparseSign: {
      Vector y = Vector::Zero(d_);
      std::size_t t = 0;
      for (Index j = 0; j < n_; ++j)
        for (int c = 0; c < im.zeta; ++c, ++t)
          y(im.ss_rows[t]) += im.ss_vals[t] * x(j);
      return y;
    }
    case SketchKind::Srtt: {
      Vector z(n_);
      for (Index i = 0; i < n_; ++i)
        z(i) = im.srtt_signs(i) * x(im.srtt_perm[i]);
      trig_transform(im.transform, z.data(), n_, /*adjoint=*/false);
      Vector y(d_);
      for (Index j = 0; j < d_; ++j) y(j) = im.srtt_scale * z(im.srtt_rows[j]);
      return y;
    }
    case SketchKind::TensorKR: {
      // Contract one factor at a time over a (d x remaining) workspace.
      const Index m0 = im.factors[0].cols();
      Index q = n_ / m0;
      Matrix W(d_, q);
      // x viewed as (m0 x q) row-major: x(j0 * q + r).
      for (Index r = 0; r < q; ++r) {
        Vector col(m0);
        for (Index j0 = 0; j0 < m0; ++j0) col(j0) = x(j0 * q + r);
        W.col(r) = im.factors[0] * col;
      }
      for (std::size_t t = 1; t < im.factors.size(); ++t) {
        const Matrix& F = im.factors[t];
        const Index mt = F.cols();
        const Index q2 = q / mt;
        Matrix W2(d_, q2);
        for (Index i = 0; i < d_; ++i)
          for (Index r = 0; r < q2; ++r) {
            double acc = 0.0;
            for (Index j = 0; j < mt; ++j) acc += F(i, j) * W(i, j * q2 + r);
            W2(i, r) = acc;
          }
        W = std::move(W2);
        q = q2;
      }
      return W.col(0) * im.tkr_scale;
    }
    case SketchKind::CoordSample: {
      Vector y(d_);
      for (Index j = 0; j < d_; ++j) {
        const Index i = im.cs_idx[j];
        y(j) = im.cs_scale * x(i) / std::sqrt(im.cs_probs(i));
      }
      return y;
    }
  }
  throw std::logic_error("unreachable");
}

Vector SketchOperator::apply_adjoint(const Vector& y) const {
  if (y.size() != d_) throw DimMismatch("sketch apply_adjoint: length mismatch");
  const Impl& im = *impl_;
  switch (kind_) {
    case SketchKind::Gaussian:
    case SketchKind::PartialIsometry:
      return im.dense.transpose() * y;
    case SketchKind::SparseSign: {
      Vector x = Vector::Zero(n_);
      std::size_t t = 0;
      for (Index j = 0; j < n_; ++j)
        for (int c = 0; c < im.zeta; ++c, ++t)
          x(j) += im.ss_vals[t] * y(im.ss_rows[t]);
      return x;
    }
    case SketchKind::Srtt: {
      Vector z = Vector::Zero(n_);
      for (Index j = 0; j < d_; ++j)
        z(im.srtt_rows[j]) = im.srtt_scale * y(j);
      trig_transform(im.transform, z.data(), n_, /*adjoint=*/true);
      Vector x(n_);
      for (Index i = 0; i < n_; ++i)
        x(im.srtt_perm[i]) = im.srtt_signs(i) * z(i);
      return x;
    }
    case SketchKind::TensorKR: {
      // Expand factor by factor, then sum the d rank-one rows.
      Matrix W = y;  // d x 1
      Index q = 1;
      for (std::size_t t = im.factors.size(); t-- > 0;) {
        const Matrix& F = im.factors[t];
        const Index mt = F.cols();
        Matrix W2(d_, mt * q);
        for (Index i = 0; i < d_; ++i)
          for (Index j = 0; j < mt; ++j)
            for (Index r = 0; r < q; ++r)
              W2(i, j * q + r) = F(i, j) * W(i, r);
        W = std::move(W2);
        q *= mt;
      }
      return W.colwise().sum().transpose() * im.tkr_scale;
    }
    case SketchKind::CoordSample: {
      Vector x = Vector::Zero(n_);
      for (Index j = 0; j < d_; ++j) {
        const Index i = im.cs_idx[j];
        x(i) += im.cs_scale * y(j) / std::sqrt(im.cs_probs(i));
      }
      return x;
    }
  }
  throw std::logic_error("unreachable");
}

Matrix SketchOperator::materialize() const {
  const Impl& im = *impl_;
  switch (kind_) {
    case SketchKind::Gaussian:
    case SketchKind::PartialIsometry:
      return im.dense;
    case SketchKind::SparseSign: {
      Matrix S = Matrix::Zero(d_, n_);
      std::size_t t = 0;
      for (Index j = 0; j < n_; ++j)
        for (int c = 0; c < im.zeta; ++c, ++t)
          S(im.ss_rows[t], j) += im.ss_vals[t];
      return S;
    }
    case SketchKind::Srtt: {
      Matrix F = trig_matrix(im.transform, n_);
      Matrix EP = Matrix::Zero(n_, n_);
      for (Index i = 0; i < n_; ++i)
        EP(i, im.srtt_perm[i]) = im.srtt_signs(i);
      Matrix FE = F * EP;
      Matrix S(d_, n_);
      for (Index j = 0; j < d_; ++j)
        S.row(j) = im.srtt_scale * FE.row(im.srtt_rows[j]);
      return S;
    }
    case SketchKind::TensorKR: {
      // Brute-force Khatri-Rao rows.
      Matrix S = Matrix::Ones(d_, 1);
      for (const Matrix& F : im.factors) {
        Matrix S2(d_, S.cols() * F.cols());
        for (Index i = 0; i < d_; ++i)
          for (Index j = 0; j < F.cols(); ++j)
            for (Index r = 0; r < S.cols(); ++r)
              S2(i, j * S.cols() + r) = F(i, j) * S(i, r);
        S = std::move(S2);
      }
      return S * im.tkr_scale;
    }
    case SketchKind::CoordSample: {
      Matrix S = Matrix::Zero(d_, n_);
      for (Index j = 0; j < d_; ++j) {
        const Index i = im.cs_idx[j];
        S(j, i) = im.cs_scale / std::sqrt(im.cs_probs(i));
      }
      return S;
    }
  }
  throw std::logic_error("unreachable");
}

Matrix apply_sketch(const SketchOperator& S, const Matrix& A, Side side,
                    bool adjoint) {
  const Index in = adjoint ? S.rows() : S.cols();
  const Index out = adjoint ? S.cols() : S.rows();
  auto apply_vec = [&](const Vector& v) {
    return adjoint ? S.apply_adjoint(v) : S.apply(v);
  };
  if (side == Side::Left) {
    if (A.rows() != in) throw DimMismatch("apply_sketch: row mismatch");
    Matrix Y(out, A.cols());
    for (Index j = 0; j < A.cols(); ++j) Y.col(j) = apply_vec(A.col(j));
    return Y;
  }
  if (A.cols() != out) throw DimMismatch("apply_sketch: column mismatch");
  Matrix Y(A.rows(), in);
  // A * op(S) = (op(S)^T A^T)^T, one adjoint application per row of A.
  auto apply_other = [&](const Vector& v) {
    return adjoint ? S.apply(v) : S.apply_adjoint(v);
  };
  for (Index i = 0; i < A.rows(); ++i)
    Y.row(i) = apply_other(A.row(i).transpose()).transpose();
  return Y;
}

LeverageScores leverage_scores(const Matrix& U) {
  const Index k = U.cols();
  if (k == 0) throw InvalidDims("leverage_scores: empty basis");
  Matrix G = U.transpose() * U;
  if ((G - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() > 1e-10)
    throw NotOrthonormal("leverage_scores: basis is not orthonormal");
  LeverageScores out;
  out.probabilities = U.rowwise().squaredNorm() / static_cast<double>(k);
  return out;
}

Matrix approx_matmul(const Matrix& B, const Matrix& C, int k, MatmulMode mode,
                     std::uint64_t seed) {
  if (B.cols() != C.rows()) throw DimMismatch("approx_matmul: inner dims");
  if (k < 1) throw InvalidDims("approx_matmul: k must be >= 1");
  const Index I = B.cols();
  std::vector<double> p(static_cast<std::size_t>(I));
  if (mode == MatmulMode::Uniform) {
    std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(I));
  } else {
    const double total = B.squaredNorm() + C.squaredNorm();
    if (total <= 0.0)
      throw DegenerateDistribution("approx_matmul: zero factors");
    for (Index i = 0; i < I; ++i)
      p[static_cast<std::size_t>(i)] =
          (B.col(i).squaredNorm() + C.row(i).squaredNorm()) / total;
  }
  AliasTable table(p);
  RandomStream rng(seed, 0);
  Matrix X = Matrix::Zero(B.rows(), C.cols());
  for (int t = 0; t < k; ++t) {
    const auto i = static_cast<Index>(table.sample(rng));
    const double pi = p[static_cast<std::size_t>(i)];
    if (pi <= 0.0) continue;  // zero-probability atoms are never drawn
    X.noalias() += (B.col(i) * C.row(i)) / pi;
  }
  return X / static_cast<double>(k);
}

}  // namespace rnla
