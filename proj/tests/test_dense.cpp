#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "rnla/dense.hpp"
#include "rnla/rng.hpp"
#include "test_util.hpp"

using namespace rnla;

TEST_CASE("qr_econ identity") {
  QrEcon f = qr_econ(Matrix::Identity(3, 3));
  CHECK((f.Q - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((f.R - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("qr_econ of orthonormal input has unit diagonal R") {
  Matrix V = test::random_orthonormal(4, 2, 42);
  QrEcon f = qr_econ(V);
  for (Index i = 0; i < 2; ++i) CHECK(std::abs(std::abs(f.R(i, i)) - 1.0) < 1e-12);
  // Off-diagonal of R vanishes since the columns are orthogonal.
  CHECK(std::abs(f.R(0, 1)) < 1e-12);
}

TEST_CASE("qr_econ reconstruction and orthonormality") {
  RandomStream rng(7, 0);
  Matrix A = rng.gaussian_matrix(6, 3);
  QrEcon f = qr_econ(A);
  CHECK((A - f.Q * f.R).norm() <= 1e-12 * A.norm());
  CHECK((f.Q.transpose() * f.Q - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() <
        1e-12);
  for (Index i = 1; i < f.R.rows(); ++i)
    for (Index j = 0; j < i; ++j) CHECK(f.R(i, j) == 0.0);
}

TEST_CASE("qr_econ idempotence on Q") {
  RandomStream rng(11, 0);
  Matrix A = rng.gaussian_matrix(8, 4);
  Matrix Q1 = qr_econ(A).Q;
  Matrix Q2 = qr_econ(Q1).Q;
  CHECK(test::projector_gap(Q1, Q2) <= 1e-11);
}

TEST_CASE("svd_econ diagonal and zero inputs") {
  Vector d(2);
  d << 3.0, 1.0;
  SvdEcon f = svd_econ(Matrix(d.asDiagonal()));
  CHECK(f.sigma(0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.sigma(1) == doctest::Approx(1.0).epsilon(1e-12));

  SvdEcon z = svd_econ(Matrix::Zero(3, 2));
  CHECK(z.sigma.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("svd_econ singular values match Gram eigenvalue oracle") {
  RandomStream rng(23, 0);
  Matrix A = rng.gaussian_matrix(5, 4);
  SvdEcon f = svd_econ(A);
  CHECK((A - f.U * f.sigma.asDiagonal() * f.V.transpose()).norm() <=
        1e-12 * A.norm());
  Eigen::SelfAdjointEigenSolver<Matrix> es(A.transpose() * A);
  for (Index i = 0; i < 4; ++i) {
    const double oracle = std::sqrt(std::max(es.eigenvalues()(3 - i), 0.0));
    CHECK(f.sigma(i) == doctest::Approx(oracle).epsilon(1e-10));
  }
  for (Index i = 0; i + 1 < f.sigma.size(); ++i)
    CHECK(f.sigma(i) >= f.sigma(i + 1));
}

TEST_CASE("eig_sym_tridiag closed forms") {
  Vector a2(2), b1(1);
  a2 << 2.0, 2.0;
  b1 << 0.0;
  SymEig e1 = eig_sym_tridiag(a2, b1);
  CHECK(e1.values(0) == doctest::Approx(2.0));
  CHECK(e1.values(1) == doctest::Approx(2.0));

  a2 << 0.0, 0.0;
  b1 << 1.0;
  SymEig e2 = eig_sym_tridiag(a2, b1);
  CHECK(e2.values(0) == doctest::Approx(-1.0));
  CHECK(e2.values(1) == doctest::Approx(1.0));
}

TEST_CASE("eig_sym_tridiag matches dense oracle") {
  RandomStream rng(3, 0);
  Vector alpha = rng.gaussian_vector(8);
  Vector beta = rng.gaussian_vector(7);
  SymEig e = eig_sym_tridiag(alpha, beta);
  Matrix T = Matrix::Zero(8, 8);
  for (Index i = 0; i < 8; ++i) T(i, i) = alpha(i);
  for (Index i = 0; i < 7; ++i) {
    T(i, i + 1) = beta(i);
    T(i + 1, i) = beta(i);
  }
  const double scale = T.cwiseAbs().maxCoeff();
  CHECK((T * e.vectors - e.vectors * e.values.asDiagonal()).cwiseAbs().maxCoeff() <=
        1e-11 * scale);
  CHECK((e.vectors.transpose() * e.vectors - Matrix::Identity(8, 8))
            .cwiseAbs()
            .maxCoeff() <= 1e-12);
  Eigen::SelfAdjointEigenSolver<Matrix> es(T);
  for (Index i = 0; i < 8; ++i)
    CHECK(e.values(i) == doctest::Approx(es.eigenvalues()(i)).epsilon(1e-10));
}

TEST_CASE("cholesky identity, hand oracle, indefinite rejection") {
  CHECK((cholesky(Matrix::Identity(2, 2)) - Matrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  Matrix A(2, 2);
  A << 4.0, 2.0, 2.0, 5.0;
  Matrix C = cholesky(A);
  Matrix expect(2, 2);
  expect << 2.0, 0.0, 1.0, 2.0;  // hand elimination
  CHECK((C - expect).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((C * C.transpose() - A).cwiseAbs().maxCoeff() <= 1e-12 * A.norm());

  Matrix B(2, 2);
  B << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(cholesky(B), NotPositiveDefinite);
}

TEST_CASE("LinearOperator adjoint consistency on random pairs") {
  RandomStream rng(99, 0);
  Matrix A = rng.gaussian_matrix(7, 5);
  LinearOperator op = LinearOperator::from_dense(A);
  for (int t = 0; t < 20; ++t) {
    Vector u = rng.gaussian_vector(7);
    Vector v = rng.gaussian_vector(5);
    const double lhs = op.adjoint_apply(u).dot(v);
    const double rhs = u.dot(op.apply(v));
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + std::abs(rhs) + 1.0));
  }
  CHECK((op.materialize() - A).norm() == 0.0);
}

TEST_CASE("orth_trunc drops numerically dead directions") {
  RandomStream rng(5, 0);
  Matrix U = test::random_orthonormal(9, 3, 21);
  Matrix C = rng.gaussian_matrix(3, 5);
  Matrix Y = U * C;  // rank 3, 5 columns
  Matrix Q = orth_trunc(Y);
  CHECK(Q.cols() == 3);
  CHECK(test::containment_gap(Q, Y) < 1e-10);
  CHECK(orth_trunc(Matrix::Zero(4, 3)).cols() == 0);
}
