#include "rnla/dense.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace rnla {

QrEcon qr_econ(const Matrix& A) {
  const Index m = A.rows(), n = A.cols(), k = std::min(m, n);
  Eigen::HouseholderQR<Matrix> qr(A);
  QrEcon out;
  out.Q = qr.householderQ() * Matrix::Identity(m, k);
  out.R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return out;
}

SvdEcon svd_econ(const Matrix& A) {
  Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SvdEcon out;
  out.U = svd.matrixU();
  out.sigma = svd.singularValues();
  out.V = svd.matrixV();
  return out;
}

SymEig eig_sym_tridiag(const Vector& alpha, const Vector& beta) {
  if (beta.size() != alpha.size() - 1 && !(alpha.size() == 1 && beta.size() == 0))
    throw DimMismatch("eig_sym_tridiag: beta must have length alpha-1");
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  es.computeFromTridiagonal(alpha, beta, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eig_sym_tridiag: iteration failed");
  return SymEig{es.eigenvalues(), es.eigenvectors()};
}

Matrix cholesky(const Matrix& A) {
  if (A.rows() != A.cols()) throw DimMismatch("cholesky: matrix not square");
  const double scale = A.cwiseAbs().maxCoeff();
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0))
    throw DimMismatch("cholesky: matrix not symmetric");
  Eigen::LLT<Matrix> llt(A);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("cholesky: nonpositive pivot");
  return llt.matrixL();
}

double spectral_norm(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(A);
  return svd.singularValues()(0);
}

Matrix orth_trunc(const Matrix& Y, double rel_tol) {
  const Index m = Y.rows(), k = std::min(Y.rows(), Y.cols());
  if (Y.cols() == 0 || Y.size() == 0) return Matrix(m, 0);
  Eigen::ColPivHouseholderQR<Matrix> qr(Y);
  const Matrix& QR = qr.matrixQR();
  const double head = std::abs(QR(0, 0));
  Index r = 0;
  while (r < k && std::abs(QR(r, r)) > rel_tol * head) ++r;
  if (head == 0.0) r = 0;
  Matrix Q = qr.householderQ() * Matrix::Identity(m, r);
  return Q;
}

Matrix pinv_solve(const Matrix& A, const Matrix& B, double rel_tol) {
  if (A.rows() != B.rows()) throw DimMismatch("pinv_solve: row mismatch");
  Eigen::ColPivHouseholderQR<Matrix> qr(A);
  qr.setThreshold(rel_tol);
  return qr.solve(B);
}

Matrix psd_pinv(const Matrix& A, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (A + A.transpose()));
  const Vector& w = es.eigenvalues();
  const double wmax = w.size() ? w.cwiseAbs().maxCoeff() : 0.0;
  Vector winv = Vector::Zero(w.size());
  for (Index i = 0; i < w.size(); ++i)
    if (w(i) > rel_tol * wmax) winv(i) = 1.0 / w(i);
  return es.eigenvectors() * winv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace rnla
