#include "rnla/solvers.hpp"

#include <cmath>

#include "rnla/dense.hpp"
#include "rnla/lowrank.hpp"
#include "rnla/rng.hpp"

namespace rnla {

namespace {

double residual_norm_of(const LinearOperator& A, const Vector& x,
                        const Vector& b) {
  return (A.apply(x) - b).norm();
}

// Draw the transpose of a d x m sketch as a dense matrix (isotropic scaling;
// the least-squares pipelines only use applications from the left).
Matrix sketch_rows(SketchKind kind, Index d, Index m, std::uint64_t seed) {
  return SketchOperator::make(kind, d, m, seed, Scaling::Isotropic)
      .materialize();
}

}  // namespace

LsSolution lsqr(const LinearOperator& A, const Vector& b,
                const Matrix* right_precond, double tol, int max_iter) {
  if (b.size() != A.rows) throw DimMismatch("lsqr: rhs length");
  if (tol <= 0.0) throw InvalidDims("lsqr: tol > 0 required");
  const Index n = A.cols;

  // Operator for A R^{-1} when preconditioned.
  auto apply = [&](const Vector& y) -> Vector {
    if (!right_precond) return A.apply(y);
    Vector t =
        right_precond->triangularView<Eigen::Upper>().solve(y);
    return A.apply(t);
  };
  auto apply_adj = [&](const Vector& u) -> Vector {
    Vector t = A.adjoint_apply(u);
    if (!right_precond)
      return t;
    return right_precond->transpose()
        .triangularView<Eigen::Lower>()
        .solve(t);
  };
  auto unmap = [&](const Vector& y) -> Vector {
    if (!right_precond) return y;
    return right_precond->triangularView<Eigen::Upper>().solve(y);
  };

  LsSolution out;
  out.method = "lsqr";

  Vector u = b;
  double beta = u.norm();
  Vector y = Vector::Zero(n);
  const double atb_norm = A.adjoint_apply(b).norm();
  if (beta == 0.0) {
    out.x = Vector::Zero(n);
    out.residual_norm = 0.0;
    return out;
  }
  u /= beta;
  Vector v = apply_adj(u);
  double alpha = v.norm();
  if (alpha == 0.0) {
    out.x = Vector::Zero(n);
    out.residual_norm = beta;
    return out;
  }
  v /= alpha;
  Vector w = v;
  double phibar = beta, rhobar = alpha;
  double anorm = 0.0;

  for (int it = 1; it <= max_iter; ++it) {
    // Bidiagonalization step.
    u = apply(v) - alpha * u;
    beta = u.norm();
    if (beta > 0.0) u /= beta;
    anorm = std::sqrt(anorm * anorm + alpha * alpha + beta * beta);
    Vector v_next = apply_adj(u) - beta * v;
    alpha = v_next.norm();
    if (alpha > 0.0) v_next /= alpha;
    v = v_next;

    // Givens rotation on the bidiagonal system.
    const double rho = std::hypot(rhobar, beta);
    const double c = rhobar / rho, s = beta / rho;
    const double theta = s * alpha;
    rhobar = -c * alpha;
    const double phi = c * phibar;
    phibar = s * phibar;

    y += (phi / rho) * w;
    w = v - (theta / rho) * w;

    out.iterations = it;
    // Stopping test on the true normal-equation residual of the original
    // problem (the preconditioner does not change A^T(Ax - b) = 0 solutions).
    Vector x = unmap(y);
    Vector r = A.apply(x) - b;
    const double grad = A.adjoint_apply(r).norm();
    const double denom = std::max(anorm * r.norm() + atb_norm, 1e-300);
    if (grad / denom <= tol) {
      out.x = std::move(x);
      out.residual_norm = r.norm();
      out.converged = true;
      return out;
    }
  }
  out.x = unmap(y);
  out.residual_norm = residual_norm_of(A, out.x, b);
  out.converged = false;  // stagnation flag, not an error
  return out;
}

LsSolution sketch_solve_ls(const Matrix& A, const Vector& b, Index d,
                           SketchKind kind, std::uint64_t seed) {
  const Index m = A.rows(), n = A.cols();
  if (b.size() != m) throw DimMismatch("sketch_solve_ls: rhs length");
  if (d < n + 1) throw InvalidDims("sketch_solve_ls: d >= n + 1 required");
  SketchOperator S = SketchOperator::make(kind, std::min(d, m), m, seed);
  Matrix Ab(m, n + 1);
  Ab << A, b;
  Matrix SAb = apply_sketch(S, Ab, Side::Left);
  LsSolution out;
  out.method = "sketch_solve";
  out.x = pinv_solve(SAb.leftCols(n), SAb.col(n), 1e-12);
  out.iterations = 1;
  out.residual_norm = (A * out.x - b).norm();
  return out;
}

LsSolution iterative_sketch_ls(const Matrix& A, const Vector& b, Index d,
                               int n_iter, std::uint64_t seed) {
  const Index m = A.rows(), n = A.cols();
  if (b.size() != m) throw DimMismatch("iterative_sketch_ls: rhs length");
  if (d < n + 1 || n_iter < 1)
    throw InvalidDims("iterative_sketch_ls: need d >= n + 1, n_iter >= 1");
  LsSolution out;
  out.method = "iterative_sketch";
  out.x = sketch_solve_ls(A, b, d, SketchKind::Gaussian, seed).x;
  for (int t = 1; t <= n_iter; ++t) {
    Matrix S = sketch_rows(SketchKind::Gaussian, std::min(d, m), m,
                           detail::splitmix64(seed) + static_cast<std::uint64_t>(t));
    Matrix SA = S * A;
    Eigen::HouseholderQR<Matrix> qr(SA);
    Matrix R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j)
      if (R(j, j) == 0.0) {
        // Resample once, then give up.
        S = sketch_rows(SketchKind::Gaussian, std::min(d, m), m,
                        detail::splitmix64(seed ^ 0xabcdefULL) +
                            static_cast<std::uint64_t>(t));
        SA = S * A;
        qr.compute(SA);
        R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
        for (Index jj = 0; jj < n; ++jj)
          if (R(jj, jj) == 0.0)
            throw SingularSketch("iterative_sketch_ls: sketched Gram singular");
        break;
      }
    Vector g = A.transpose() * (b - A * out.x);
    // Newton-type step through the sketched Gram factor: solve R^T R dx = g.
    Vector dx = R.transpose().triangularView<Eigen::Lower>().solve(g);
    dx = R.triangularView<Eigen::Upper>().solve(dx);
    out.x += dx;
    out.iterations = t;
  }
  out.residual_norm = (A * out.x - b).norm();
  return out;
}

LsSolution sketch_precondition_ls(const Matrix& A, const Vector& b, Index d,
                                  double tol, std::uint64_t seed) {
  const Index m = A.rows(), n = A.cols();
  if (b.size() != m) throw DimMismatch("sketch_precondition_ls: rhs length");
  if (d < n + 1) throw InvalidDims("sketch_precondition_ls: d >= n + 1");
  Matrix S = sketch_rows(SketchKind::Gaussian, std::min(d, m), m, seed);
  Matrix Ab(m, n + 1);
  Ab << A, b;
  Matrix Y = S * Ab;
  Eigen::HouseholderQR<Matrix> qr(Y.leftCols(n));
  Matrix R = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j)
    if (R(j, j) == 0.0)
      throw SingularSketch("sketch_precondition_ls: sketched factor singular");

  // Warm start: sketch-and-solve with the same embedding.
  Vector x0 = pinv_solve(Y.leftCols(n), Y.col(n), 1e-12);

  // Solve min || A x - b || from x0: iterate on the shifted residual system.
  LinearOperator Aop = LinearOperator::from_dense(A);
  Vector b_shift = b - A * x0;
  LsSolution inner = lsqr(Aop, b_shift, &R, tol, 200);
  LsSolution out;
  out.method = "sketch_precondition";
  out.x = x0 + inner.x;
  out.iterations = inner.iterations;
  out.converged = inner.converged;
  out.residual_norm = (A * out.x - b).norm();
  return out;
}

LsSolution randomized_kaczmarz(const Matrix& A, const Vector& b, int n_iter,
                               KaczmarzMode mode, Index block_l,
                               std::uint64_t seed) {
  const Index m = A.rows(), n = A.cols();
  if (b.size() != m) throw DimMismatch("randomized_kaczmarz: rhs length");
  if (n_iter < 1) throw InvalidDims("randomized_kaczmarz: n_iter >= 1");
  LsSolution out;
  out.method = mode == KaczmarzMode::Rows ? "kaczmarz_rows" : "kaczmarz_block";
  out.x = Vector::Zero(n);
  RandomStream rng(seed, 0);

  if (mode == KaczmarzMode::Rows) {
    std::vector<double> w(static_cast<std::size_t>(m));
    double total = 0.0;
    for (Index i = 0; i < m; ++i) {
      w[static_cast<std::size_t>(i)] = A.row(i).squaredNorm();
      total += w[static_cast<std::size_t>(i)];
    }
    if (total <= 0.0) throw ZeroMatrix("randomized_kaczmarz: zero matrix");
    AliasTable table(w);
    for (int t = 0; t < n_iter; ++t) {
      const auto i = static_cast<Index>(table.sample(rng));
      const double rn2 = w[static_cast<std::size_t>(i)];
      if (rn2 <= 0.0) continue;
      const double resid = b(i) - A.row(i).dot(out.x);
      out.x += (resid / rn2) * A.row(i).transpose();
    }
  } else {
    if (block_l < 1) throw InvalidDims("randomized_kaczmarz: block l >= 1");
    if (A.squaredNorm() <= 0.0)
      throw ZeroMatrix("randomized_kaczmarz: zero matrix");
    for (int t = 0; t < n_iter; ++t) {
      Matrix S = rng.gaussian_matrix(block_l, m);
      Matrix SA = S * A;
      Vector rhs = S * b - SA * out.x;
      // Minimum-norm correction dx = (SA)^+ rhs = SA^T (SA SA^T)^+ rhs.
      Matrix G = SA * SA.transpose();
      Vector y = psd_pinv(G, 1e-12) * rhs;
      out.x += SA.transpose() * y;
    }
  }
  out.iterations = n_iter;
  out.residual_norm = (A * out.x - b).norm();
  return out;
}

LsSolution cg(const LinearOperator& A, const Vector& b, double tol,
              int max_iter) {
  LsSolution out;
  out.method = "cg";
  Vector x = Vector::Zero(A.cols);
  Vector r = b;
  Vector p = r;
  double rs = r.squaredNorm();
  const double target = tol * b.norm();
  int it = 0;
  while (it < max_iter && std::sqrt(rs) > target) {
    Vector Ap = A.apply(p);
    const double alpha = rs / p.dot(Ap);
    x += alpha * p;
    r -= alpha * Ap;
    const double rs_new = r.squaredNorm();
    p = r + (rs_new / rs) * p;
    rs = rs_new;
    ++it;
  }
  out.x = std::move(x);
  out.iterations = it;
  out.converged = std::sqrt(rs) <= target;
  out.residual_norm = residual_norm_of(A, out.x, b);
  return out;
}

LsSolution nystrom_pcg(const LinearOperator& A, const Vector& b, Index k,
                       Index l, double tol, int max_iter, std::uint64_t seed) {
  if (A.rows != A.cols) throw DimMismatch("nystrom_pcg: operator not square");
  if (b.size() != A.rows) throw DimMismatch("nystrom_pcg: rhs length");
  NystromFactors ny = nystrom(A, k, l, seed);
  const Index r = ny.lambda.size();
  if (r == 0 || ny.lambda(r - 1) <= 0.0)
    throw NotPsd("nystrom_pcg: deflation basis is degenerate");
  const double alpha = ny.lambda(r - 1);
  const Matrix& U = ny.U;
  Vector dinv = ny.lambda.cwiseInverse();
  auto apply_minv = [&](const Vector& v) -> Vector {
    Vector Utv = U.transpose() * v;
    return alpha * (U * dinv.asDiagonal() * Utv) + (v - U * Utv);
  };

  LsSolution out;
  out.method = "nystrom_pcg";
  Vector x = Vector::Zero(A.rows);
  Vector rvec = b;
  Vector z = apply_minv(rvec);
  Vector p = z;
  double rz = rvec.dot(z);
  const double target = tol * b.norm();
  int it = 0;
  while (it < max_iter && rvec.norm() > target) {
    Vector Ap = A.apply(p);
    const double step = rz / p.dot(Ap);
    x += step * p;
    rvec -= step * Ap;
    z = apply_minv(rvec);
    const double rz_new = rvec.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
    ++it;
  }
  out.x = std::move(x);
  out.iterations = it;
  out.converged = rvec.norm() <= target;
  out.residual_norm = residual_norm_of(A, out.x, b);
  return out;
}

}  // namespace rnla
