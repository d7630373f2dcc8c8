#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rnla/sketch.hpp"
#include "rnla/types.hpp"

namespace rnla {

struct SvdFactors {
  Matrix U;
  Vector sigma;
  Matrix V;

  Matrix reconstruct() const { return U * sigma.asDiagonal() * V.transpose(); }
};

// Randomized SVD with oversampling p and power depth q, truncated to rank k.
// Modes with sigma below max(sigma_k, 1e-12 * sigma_1) are discarded.
SvdFactors rsvd(const Matrix& B, Index k, Index p, int q, std::uint64_t seed);

struct RowId {
  Matrix X;                 // m x k interpolation matrix, X(rows,:) = I
  std::vector<Index> rows;  // skeleton row indices I_s
};

struct ColId {
  Matrix Z;                 // k x n interpolation matrix, Z(:,cols) = I
  std::vector<Index> cols;  // skeleton column indices J_s
};

enum class IdSide { Row, Col };

RowId randomized_id_row(const Matrix& A, Index k, Index p, std::uint64_t seed);
ColId randomized_id_col(const Matrix& A, Index k, Index p, std::uint64_t seed);

struct TwoSidedId {
  Matrix X;  // m x k
  Matrix Z;  // k x n
  std::vector<Index> rows, cols;
  Matrix skeleton;  // A(rows, cols)
};

TwoSidedId two_sided_id(const Matrix& A, Index k, Index p, std::uint64_t seed);

struct CurFactors {
  std::vector<Index> rows, cols;
  Matrix U;  // k x k link, U = C^+ A R^+ through QR-based solves
};

CurFactors cur(const Matrix& A, Index k, Index p, std::uint64_t seed);

struct NystromFactors {
  Matrix U;       // n x k orthonormal
  Vector lambda;  // nonnegative, descending

  Matrix reconstruct() const { return U * lambda.asDiagonal() * U.transpose(); }
};

// Shifted, Cholesky-based randomized Nystrom approximation of a psd operator.
// On Cholesky failure the shift is escalated once (x10) before NotPsd.
NystromFactors nystrom(const LinearOperator& A, Index k, Index l,
                       std::uint64_t seed);

enum class CoreEstimate { TwoSketch, ThreeSketch };

// Linear sketch of a matrix revealed as a stream of additive updates.
// Four fixed test operators (Upsilon m x l, Omega n x l, Phi m x s, Psi n x s)
// and three accumulators X = A^T Upsilon, Y = A Omega, Z = Phi^T A Psi.
class StreamSketch {
 public:
  StreamSketch(Index m, Index n, Index l, Index s, std::uint64_t seed,
               SketchKind kind = SketchKind::SparseSign);

  Index rows() const { return m_; }
  Index cols() const { return n_; }
  Index l() const { return l_; }
  Index s() const { return s_; }

  void update(const Matrix& H, double scale = 1.0);
  void update_rank_one(const Vector& u, const Vector& v, double scale = 1.0);

  // Does not consume the sketch; re-finalizable.
  SvdFactors finalize(Index k,
                      CoreEstimate core = CoreEstimate::ThreeSketch) const;

  // Accumulator merge across processes; requires identical (dims, sizes,
  // seed, kind).
  void merge(const StreamSketch& other);

  std::string to_json() const;
  static StreamSketch from_json(const std::string& text);

  const Matrix& accum_x() const { return X_; }
  const Matrix& accum_y() const { return Y_; }
  const Matrix& accum_z() const { return Z_; }

 private:
  Index m_, n_, l_, s_;
  std::uint64_t seed_;
  SketchKind kind_;
  SketchOperator upsilon_, omega_, phi_, psi_;
  Matrix X_;  // n x l
  Matrix Y_;  // m x l
  Matrix Z_;  // s x s
};

}  // namespace rnla
