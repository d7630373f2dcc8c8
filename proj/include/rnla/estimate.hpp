#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rnla/types.hpp"

namespace rnla {

enum class TestVectorDist { Gaussian, Rademacher, ScaledSphere };

struct EstimatorReport {
  double estimate = 0.0;
  std::optional<double> sample_variance;  // S_k; absent when k = 1
  int samples = 0;
  std::vector<double> per_sample;
};

struct ConfidenceInterval {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.0;  // 1 - 2*alpha
};

// Mean of k quadratic-form samples w^T (A w); compensated summation throughout.
EstimatorReport trace_estimate(const LinearOperator& A, int k,
                               TestVectorDist dist, std::uint64_t seed);

// Bootstrap CI at level 1-2*alpha from B resampled-mean errors; quantiles by
// linear interpolation of the order statistics.
ConfidenceInterval bootstrap_trace_ci(std::span<const double> samples, int B,
                                      double alpha, std::uint64_t seed);

// Symmetric Student-t interval on the mean of the samples.
ConfidenceInterval student_t_ci(std::span<const double> samples, double alpha);

struct FrobSchatten4 {
  EstimatorReport frob_sq;  // unbiased for ||B||_F^2
  double schatten4_4 = 0.0;  // unbiased for ||B||_4^4 (= S_k / 2)
};

FrobSchatten4 frob_schatten4(const LinearOperator& B, int k,
                             std::uint64_t seed);

// Kong-Valiant estimator V_p of ||B||_{2p}^{2p} via the strict-upper-triangle
// trace formula.
double schatten2p_kv(const Matrix& B, int p, int k, std::uint64_t seed);

struct PowerEigResult {
  double xi = 0.0;  // Rayleigh quotient estimate of lambda_1
  int iterations = 0;
  bool zero_start = false;
};

PowerEigResult power_max_eig(const LinearOperator& A, int q_max, double tol,
                             std::uint64_t seed);

enum class Extremal { Max, Min };

struct LanczosEigResult {
  double xi = 0.0;
  Vector eigenvector;  // Ritz vector for the extremal value
  int steps = 0;       // Lanczos steps actually taken
};

LanczosEigResult lanczos_extremal_eig(const LinearOperator& A, int q,
                                      bool reorthogonalize, Extremal which,
                                      std::uint64_t seed);

// Stochastic Lanczos quadrature for trace f(A). Each sample is
// ||w||^2 * sum_l tau_l^2 f(theta_l) so the estimator is unbiased for every
// isotropic test-vector distribution.
EstimatorReport slq_trace_fn(const LinearOperator& A,
                             const std::function<double(double)>& f, int k,
                             int q, TestVectorDist dist, std::uint64_t seed);

struct PosteriorErrorEstimate {
  double frob_sq_est = 0.0;  // unbiased for ||(I-QQ^T)A||_F^2
  double spec_est = 0.0;     // max residual column norm; heuristic proxy
};

PosteriorErrorEstimate posterior_error(const LinearOperator& A,
                                       const Matrix& Q, int s,
                                       std::uint64_t seed);

// Lanczos coefficients (alpha, beta) with optional double Gram-Schmidt;
// exposed for SLQ and shared by the eigenvalue drivers.
struct LanczosDecomposition {
  Vector alpha;
  Vector beta;   // length alpha.size()-1
  Matrix basis;  // n x steps
};

LanczosDecomposition lanczos_tridiag(const LinearOperator& A, const Vector& w0,
                                     int q, bool reorthogonalize);

}  // namespace rnla
