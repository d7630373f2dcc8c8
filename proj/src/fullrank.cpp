#include "rnla/fullrank.hpp"

#include <cmath>

#include "rnla/dense.hpp"
#include "rnla/rng.hpp"

namespace rnla {

namespace {

struct Reflector {
  Index offset;  // first row the reflector acts on
  Vector v;      // unnormalized Householder vector, length m - offset
  double vtv;    // v^T v
};

// Householder vector for x; afterwards H x = beta * e1 with
// H = I - (2 / v^T v) v v^T. Zero x yields a no-op reflector.
Reflector make_reflector(const Vector& x, Index offset) {
  Reflector h;
  h.offset = offset;
  h.v = x;
  const double sigma = x.norm();
  if (sigma == 0.0) {
    h.vtv = 0.0;
    return h;
  }
  const double beta = (x(0) >= 0.0) ? -sigma : sigma;
  h.v(0) -= beta;
  h.vtv = h.v.squaredNorm();
  return h;
}

void apply_reflector_left(const Reflector& h, Eigen::Ref<Matrix> W) {
  if (h.vtv == 0.0) return;
  Eigen::RowVectorXd w = (2.0 / h.vtv) * (h.v.transpose() * W);
  W.noalias() -= h.v * w;
}

Matrix accumulate_q(const std::vector<Reflector>& hs, Index m, Index cols) {
  Matrix Q = Matrix::Identity(m, cols);
  for (auto it = hs.rbegin(); it != hs.rend(); ++it)
    apply_reflector_left(*it, Q.bottomRows(m - it->offset));
  return Q;
}

// Pivot = column of largest residual norm, ties to the lowest index.
Index pick_pivot(const Matrix& work, Index step, Index first, Index last) {
  Index best = first;
  double best_norm = work.col(first).tail(work.rows() - step).norm();
  for (Index j = first + 1; j < last; ++j) {
    const double nj = work.col(j).tail(work.rows() - step).norm();
    if (nj > best_norm) {
      best_norm = nj;
      best = j;
    }
  }
  return best;
}

}  // namespace

CpqrFactorization classical_cpqr(const Matrix& A, Index max_steps,
                                 double rel_tol) {
  const Index m = A.rows(), n = A.cols(), c = std::min(m, n);
  Index steps = (max_steps < 0) ? c : std::min(max_steps, c);
  Matrix work = A;
  std::vector<Index> perm(n);
  for (Index j = 0; j < n; ++j) perm[j] = j;
  std::vector<Reflector> hs;
  double first_norm = -1.0;
  Index r = 0;
  for (Index j = 0; j < steps; ++j) {
    const Index piv = pick_pivot(work, j, j, n);
    const double piv_norm = work.col(piv).tail(m - j).norm();
    if (first_norm < 0.0) first_norm = piv_norm;
    if (rel_tol > 0.0 && piv_norm <= rel_tol * first_norm) break;
    work.col(j).swap(work.col(piv));
    std::swap(perm[j], perm[piv]);
    Reflector h = make_reflector(work.col(j).tail(m - j), j);
    apply_reflector_left(h, work.bottomRightCorner(m - j, n - j));
    hs.push_back(std::move(h));
    ++r;
  }
  CpqrFactorization out;
  out.rank = r;
  out.perm = std::move(perm);
  out.Q = accumulate_q(hs, m, c);
  out.R = work.topRows(c).triangularView<Eigen::Upper>();
  return out;
}

CpqrFactorization randomized_cpqr(const Matrix& A, Index b, Index p,
                                  std::uint64_t seed, bool identity_omega) {
  const Index m = A.rows(), n = A.cols(), c = std::min(m, n);
  if (b < 1 || b > n) throw InvalidDims("randomized_cpqr: need 1 <= b <= n");
  if (p < 0) throw InvalidDims("randomized_cpqr: p >= 0 required");
  Matrix work = A;
  std::vector<Index> perm(n);
  for (Index j = 0; j < n; ++j) perm[j] = j;
  std::vector<Reflector> hs;
  RandomStream rng(seed, 0);

  for (Index j0 = 0; j0 < c;) {
    const Index bp = std::min(b, c - j0);
    const Index mrem = m - j0, nrem = n - j0;

    // Pivot selection on a sketched copy of the trailing block.
    Matrix Y;
    if (identity_omega) {
      Y = work.bottomRightCorner(mrem, nrem);
    } else {
      Matrix Omega = rng.gaussian_matrix(std::min(bp + p, mrem), mrem);
      Y = Omega * work.bottomRightCorner(mrem, nrem);
    }
    CpqrFactorization panel_sel = classical_cpqr(Y, bp, 0.0);

    // Move the chosen columns to the front of the trailing block, in pick
    // order; track where trailing columns currently live.
    std::vector<Index> pos(nrem);
    for (Index t = 0; t < nrem; ++t) pos[panel_sel.perm[t]] = t;
    for (Index t = 0; t < bp; ++t) {
      const Index want = panel_sel.perm[t];  // trailing-local original id
      Index cur = pos[want];
      if (cur != t) {
        // Find the original id sitting at slot t to keep the map exact.
        Index other = 0;
        for (Index g = 0; g < nrem; ++g)
          if (pos[g] == t) {
            other = g;
            break;
          }
        work.col(j0 + t).swap(work.col(j0 + cur));
        std::swap(perm[j0 + t], perm[j0 + cur]);
        std::swap(pos[want], pos[other]);
      }
    }

    // Householder panel factorization with pivoting inside the panel.
    for (Index t = 0; t < bp; ++t) {
      const Index j = j0 + t;
      const Index piv = pick_pivot(work, j, j, j0 + bp);
      work.col(j).swap(work.col(piv));
      std::swap(perm[j], perm[piv]);
      Reflector h = make_reflector(work.col(j).tail(m - j), j);
      apply_reflector_left(h, work.bottomRightCorner(m - j, n - j));
      hs.push_back(std::move(h));
    }
    j0 += bp;
  }

  CpqrFactorization out;
  out.rank = c;
  out.perm = std::move(perm);
  out.Q = accumulate_q(hs, m, c);
  out.R = work.topRows(c).triangularView<Eigen::Upper>();
  return out;
}

UrvFactorization power_urv(const Matrix& A, int q, std::uint64_t seed) {
  const Index m = A.rows(), n = A.cols();
  if (m < n) throw InvalidDims("power_urv: requires m >= n (transpose input)");
  if (q < 0) throw InvalidDims("power_urv: q >= 0 required");
  RandomStream rng(seed, 0);
  Matrix Z = rng.gaussian_matrix(n, n);
  const bool reorth = q >= 2;
  for (int i = 0; i < q; ++i) {
    Matrix T = A * Z;
    if (reorth) T = qr_econ(T).Q;
    Z = A.transpose() * T;
    if (reorth) Z = qr_econ(Z).Q;
  }
  UrvFactorization out;
  out.q = q;
  out.V = qr_econ(Z).Q;
  QrEcon ur = qr_econ(A * out.V);
  out.U = std::move(ur.Q);
  out.R = std::move(ur.R);
  return out;
}

}  // namespace rnla
