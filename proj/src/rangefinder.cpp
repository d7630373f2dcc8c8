#include "rnla/rangefinder.hpp"

#include <cmath>

#include "rnla/dense.hpp"
#include "rnla/estimate.hpp"
#include "rnla/rng.hpp"

namespace rnla {

namespace {

Matrix draw_test_matrix(SketchKind kind, Index n, Index l, std::uint64_t seed) {
  // Test matrices live on the right of B, so they are the transpose of an
  // l x n sketch operator; rangefinder theory assumes unit-variance entries.
  SketchOperator S =
      SketchOperator::make(kind, l, n, seed, Scaling::UnitVariance);
  return S.materialize().transpose();
}

}  // namespace

RangeBasis rangefinder(const Matrix& B, Index l, SketchKind kind,
                       std::uint64_t seed) {
  if (l < 1 || l > std::min(B.rows(), B.cols()))
    throw InvalidDims("rangefinder: need 1 <= l <= min(m,n)");
  Matrix Omega = draw_test_matrix(kind, B.cols(), l, seed);
  RangeBasis out;
  out.Q = orth_trunc(B * Omega);
  out.seed = seed;
  return out;
}

RangeBasis rangefinder(const LinearOperator& B, Index l, std::uint64_t seed) {
  if (l < 1 || l > std::min(B.rows, B.cols))
    throw InvalidDims("rangefinder: need 1 <= l <= min(m,n)");
  RandomStream rng(seed, 0);
  Matrix Y(B.rows, l);
  for (Index j = 0; j < l; ++j)
    Y.col(j) = B.apply(rng.gaussian_vector(B.cols));
  RangeBasis out;
  out.Q = orth_trunc(Y);
  out.seed = seed;
  return out;
}

RangeBasis power_rangefinder(const Matrix& B, Index l, int q,
                             std::uint64_t seed) {
  if (l < 1 || l > std::min(B.rows(), B.cols()))
    throw InvalidDims("power_rangefinder: need 1 <= l <= min(m,n)");
  if (q < 0) throw InvalidDims("power_rangefinder: q >= 0 required");
  Matrix Omega = draw_test_matrix(SketchKind::Gaussian, B.cols(), l, seed);
  Matrix Y = orth_trunc(B * Omega);
  for (int i = 0; i < q; ++i) {
    Matrix Z = orth_trunc(B.transpose() * Y);
    Y = orth_trunc(B * Z);
  }
  RangeBasis out;
  out.Q = std::move(Y);
  out.seed = seed;
  out.power = q;
  return out;
}

RangeBasis krylov_rangefinder(const Matrix& B, Index l, int q,
                              KrylovBasisKind basis, std::optional<double> nu,
                              std::uint64_t seed) {
  if (l < 1 || l > std::min(B.rows(), B.cols()))
    throw InvalidDims("krylov_rangefinder: need 1 <= l <= min(m,n)");
  if (q < 1) throw InvalidDims("krylov_rangefinder: q >= 1 required");
  const Index m = B.rows();
  Matrix Omega = draw_test_matrix(SketchKind::Gaussian, B.cols(), l, seed);

  RangeBasis out;
  out.seed = seed;
  out.power = q;

  Matrix blocks(m, (q + 1) * l);
  switch (basis) {
    case KrylovBasisKind::Monomial: {
      Matrix Y = qr_econ(B * Omega).Q;
      blocks.leftCols(l) = Y;
      for (int i = 1; i <= q; ++i) {
        Y = qr_econ(Y).Q;
        Y = B * (B.transpose() * Y);
        blocks.middleCols(i * l, l) = Y;
      }
      break;
    }
    case KrylovBasisKind::Lanczos: {
      // Block Lanczos bidiagonalization; the left blocks P_i span the
      // same space as the monomial blocks.
      Matrix Q0 = qr_econ(Omega).Q;
      QrEcon w = qr_econ(B * Q0);
      Matrix P_prev = w.Q;
      Matrix R_odd = w.R;
      blocks.leftCols(l) = P_prev;
      std::vector<Matrix> Qs{Q0}, Ps{P_prev};
      for (int i = 1; i <= q; ++i) {
        Matrix Z = B.transpose() * P_prev - Qs.back() * R_odd.transpose();
        for (int pass = 0; pass < 2; ++pass)
          for (const Matrix& Qj : Qs) Z -= Qj * (Qj.transpose() * Z);
        QrEcon zq = qr_econ(Z);
        Matrix Qi = zq.Q;
        Matrix W = B * Qi - P_prev * zq.R.transpose();
        for (int pass = 0; pass < 2; ++pass)
          for (const Matrix& Pj : Ps) W -= Pj * (Pj.transpose() * W);
        QrEcon wq = qr_econ(W);
        blocks.middleCols(i * l, l) = wq.Q;
        Qs.push_back(Qi);
        Ps.push_back(wq.Q);
        P_prev = wq.Q;
        R_odd = wq.R;
      }
      break;
    }
    case KrylovBasisKind::Chebyshev: {
      double bound = nu.value_or(-1.0);
      if (bound <= 0.0) {
        Matrix G = B * B.transpose();
        PowerEigResult pe =
            power_max_eig(LinearOperator::from_dense(G), 20, 0.0, seed ^ 0x9e3779b9ULL);
        bound = 1.1 * std::sqrt(std::max(pe.xi, 0.0));
      }
      // Chebyshev polynomials in B B^T on [0, nu^2] applied to qr(B Omega).
      const double nu2 = bound * bound;
      Matrix Y0 = qr_econ(B * Omega).Q;
      blocks.leftCols(l) = Y0;
      Matrix W = B * (B.transpose() * Y0);
      // Detect ||B|| exceeding the bound by more than 1% (warn, not abort).
      if (spectral_norm(W) > 1.01 * 1.01 * nu2) out.norm_bound_violated = true;
      if (q >= 1) {
        Matrix Y1 = (2.0 / nu2) * W - Y0;
        blocks.middleCols(l, l) = Y1;
        Matrix Ym2 = Y0, Ym1 = Y1;
        for (int i = 2; i <= q; ++i) {
          Matrix Yi = (4.0 / nu2) * (B * (B.transpose() * Ym1)) - 2.0 * Ym1 - Ym2;
          blocks.middleCols(i * l, l) = Yi;
          Ym2 = std::move(Ym1);
          Ym1 = std::move(Yi);
        }
      }
      break;
    }
  }
  out.Q = orth_trunc(blocks);
  return out;
}

RangeBasis adaptive_rangefinder(const LinearOperator& A, double tau, Index b,
                                std::uint64_t seed) {
  if (tau <= 0.0) throw InvalidDims("adaptive_rangefinder: tau > 0 required");
  if (b < 1) throw InvalidDims("adaptive_rangefinder: b >= 1 required");
  const Index max_rank = std::min(A.rows, A.cols);
  RandomStream rng(seed, 0);
  auto sample_block = [&]() {
    Matrix Y(A.rows, b);
    for (Index j = 0; j < b; ++j)
      Y.col(j) = A.apply(rng.gaussian_vector(A.cols));
    return Y;
  };
  // Frobenius-type posterior estimate ||(I-QQ^T)A||_F ~ ||Y||_F / sqrt(b).
  auto norm_est = [&](const Matrix& Y) {
    return Y.norm() / std::sqrt(static_cast<double>(b));
  };

  RangeBasis out;
  out.seed = seed;
  // The first block is always kept; each later block serves as the error
  // probe for the basis accumulated so far and is kept only when the
  // tolerance has not been met.
  Matrix Y = sample_block();
  Matrix Q = orth_trunc(Y);
  while (Q.cols() < max_rank) {
    Y = sample_block();
    Y -= Q * (Q.transpose() * Y);
    if (norm_est(Y) <= tau) break;
    Matrix Q_new = orth_trunc(Y);
    if (Q_new.cols() == 0) break;
    Matrix grown(A.rows, Q.cols() + Q_new.cols());
    grown << Q, Q_new;
    Q = std::move(grown);
  }
  if (Q.cols() >= max_rank) out.max_rank_reached = true;
  out.Q = std::move(Q);
  return out;
}

QbFactorization adaptive_rangefinder_qb(const Matrix& A, double tau, Index b,
                                        std::uint64_t seed) {
  if (tau <= 0.0) throw InvalidDims("adaptive_rangefinder_qb: tau > 0");
  if (b < 1) throw InvalidDims("adaptive_rangefinder_qb: b >= 1");
  const Index max_rank = std::min(A.rows(), A.cols());
  RandomStream rng(seed, 0);
  Matrix work = A;  // caller's matrix is never mutated
  QbFactorization out;
  out.Q = Matrix(A.rows(), 0);
  out.B = Matrix(0, A.cols());
  while (work.norm() > tau) {
    if (out.Q.cols() >= max_rank) {
      out.max_rank_reached = true;
      break;
    }
    Matrix Omega = rng.gaussian_matrix(A.cols(), b);
    Matrix Qi = orth_trunc(work * Omega);
    if (Qi.cols() == 0) break;  // residual numerically dead in this block
    Matrix Bi = Qi.transpose() * work;
    work -= Qi * Bi;
    Matrix q_grown(A.rows(), out.Q.cols() + Qi.cols());
    q_grown << out.Q, Qi;
    out.Q = std::move(q_grown);
    Matrix b_grown(out.B.rows() + Bi.rows(), A.cols());
    b_grown << out.B, Bi;
    out.B = std::move(b_grown);
  }
  return out;
}

Matrix schur_error_sq(const Matrix& B, const Matrix& X) {
  if (X.rows() != B.cols()) throw DimMismatch("schur_error_sq: dims");
  Matrix Y = B * X;
  Matrix Q = orth_trunc(Y);
  Matrix E = B - Q * (Q.transpose() * B);
  Matrix S = E.transpose() * E;
  return 0.5 * (S + S.transpose());
}

}  // namespace rnla
