#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "rnla/types.hpp"

namespace rnla {

enum class SketchKind {
  Gaussian,
  PartialIsometry,
  SparseSign,
  Srtt,
  TensorKR,
  CoordSample
};

// Two scaling conventions coexist. Isotropic keeps E||Sx||^2 = ||x||^2 for
// every fixed x; UnitVariance multiplies the isotropic realization by sqrt(d)
// (for Gaussian maps this is the standard-normal test matrix convention).
enum class Scaling { Isotropic, UnitVariance };

enum class SrttTransform { Dht, Dct2 };
enum class CoordMode { Uniform, Leverage };
enum class Side { Left, Right };

struct SketchOptions {
  int sparse_nnz = 8;  // zeta; clamped to min(d, 8) when left at the default
  SrttTransform transform = SrttTransform::Dht;
  std::vector<Index> tensor_dims;  // factor input dims; product must equal n
  CoordMode coord_mode = CoordMode::Uniform;
  Vector coord_probs;  // required for CoordMode::Leverage
};

class SketchOperator {
 public:
  static SketchOperator make(SketchKind kind, Index d, Index n,
                             std::uint64_t seed,
                             Scaling scaling = Scaling::Isotropic,
                             SketchOptions opts = {});

  SketchKind kind() const { return kind_; }
  Index rows() const { return d_; }
  Index cols() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  Scaling scaling() const { return scaling_; }

  Vector apply(const Vector& x) const;          // S x
  Vector apply_adjoint(const Vector& y) const;  // S^T y

  // Dense d x n realization; the oracle that the fast paths are tested against.
  Matrix materialize() const;

  struct Impl;

 private:
  SketchOperator() = default;
  SketchKind kind_ = SketchKind::Gaussian;
  Index d_ = 0, n_ = 0;
  std::uint64_t seed_ = 0;
  Scaling scaling_ = Scaling::Isotropic;
  std::shared_ptr<const Impl> impl_;
};

// op(S) * A (side Left) or A * op(S) (side Right), op = transpose if adjoint.
Matrix apply_sketch(const SketchOperator& S, const Matrix& A, Side side,
                    bool adjoint = false);

struct LeverageScores {
  Vector probabilities;  // length n, sums to 1
};

// p_i = ||row i of U||^2 / k for an orthonormal n x k basis U.
LeverageScores leverage_scores(const Matrix& U);

enum class MatmulMode { Uniform, Importance };

// Monte-Carlo estimate of B*C from k sampled rank-one terms.
Matrix approx_matmul(const Matrix& B, const Matrix& C, int k, MatmulMode mode,
                     std::uint64_t seed);

}  // namespace rnla
