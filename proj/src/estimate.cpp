#include "rnla/estimate.hpp"

#include <algorithm>
#include <cmath>

#include "rnla/dense.hpp"
#include "rnla/rng.hpp"

namespace rnla {

namespace {

Vector draw_test_vector(RandomStream& rng, TestVectorDist dist, Index n) {
  switch (dist) {
    case TestVectorDist::Gaussian:
      return rng.gaussian_vector(n);
    case TestVectorDist::Rademacher:
      return rng.rademacher_vector(n);
    case TestVectorDist::ScaledSphere:
      return rng.sphere_vector(n);
  }
  throw std::logic_error("unreachable");
}

double kahan_sum(std::span<const double> xs) {
  double sum = 0.0, c = 0.0;
  for (double x : xs) {
    double y = x - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

// Sample variance S_k with compensated accumulation.
std::optional<double> sample_variance(std::span<const double> xs, double mean) {
  const std::size_t k = xs.size();
  if (k < 2) return std::nullopt;
  double sum = 0.0, c = 0.0;
  for (double x : xs) {
    double d = (x - mean) * (x - mean);
    double y = d - c;
    double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(k - 1);
}

EstimatorReport collate(std::vector<double> samples) {
  EstimatorReport rep;
  rep.samples = static_cast<int>(samples.size());
  rep.estimate = kahan_sum(samples) / static_cast<double>(samples.size());
  rep.sample_variance = sample_variance(samples, rep.estimate);
  rep.per_sample = std::move(samples);
  return rep;
}

// Quantile by linear interpolation of order statistics.
double quantile(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  const auto n = static_cast<double>(xs.size());
  double pos = q * (n - 1.0);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  auto hi = static_cast<std::size_t>(std::ceil(pos));
  double frac = pos - std::floor(pos);
  return xs[lo] * (1.0 - frac) + xs[hi] * frac;
}

// Student-t quantile via the normal quantile plus the Cornish-Fisher style
// expansion in 1/nu (Abramowitz & Stegun 26.7.5); accurate to ~1e-6 for
// nu >= 5 and alpha >= 0.005.
double normal_quantile(double p) {
  // Acklam's rational approximation.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > phigh) return -normal_quantile(1.0 - p);
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double student_t_quantile(double p, int nu) {
  const double x = normal_quantile(p);
  const double n = static_cast<double>(nu);
  const double g1 = (x * x * x + x) / 4.0;
  const double g2 = (5.0 * std::pow(x, 5) + 16.0 * x * x * x + 3.0 * x) / 96.0;
  const double g3 = (3.0 * std::pow(x, 7) + 19.0 * std::pow(x, 5) +
                     17.0 * x * x * x - 15.0 * x) /
                    384.0;
  const double g4 = (79.0 * std::pow(x, 9) + 776.0 * std::pow(x, 7) +
                     1482.0 * std::pow(x, 5) - 1920.0 * x * x * x -
                     945.0 * x) /
                    92160.0;
  return x + g1 / n + g2 / (n * n) + g3 / (n * n * n) + g4 / (n * n * n * n);
}

}  // namespace

EstimatorReport trace_estimate(const LinearOperator& A, int k,
                               TestVectorDist dist, std::uint64_t seed) {
  if (A.rows != A.cols) throw DimMismatch("trace_estimate: operator not square");
  if (k < 1) throw InsufficientSamples("trace_estimate: k >= 1 required");
  RandomStream rng(seed, 0);
  std::vector<double> samples(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    Vector w = draw_test_vector(rng, dist, A.rows);
    samples[static_cast<std::size_t>(i)] = w.dot(A.apply(w));
  }
  return collate(std::move(samples));
}

ConfidenceInterval bootstrap_trace_ci(std::span<const double> samples, int B,
                                      double alpha, std::uint64_t seed) {
  const std::size_t k = samples.size();
  if (k < 2) throw InsufficientSamples("bootstrap_trace_ci: k >= 2 required");
  if (B < 1 || alpha <= 0.0 || alpha >= 0.5)
    throw InvalidDims("bootstrap_trace_ci: need B >= 1 and 0 < alpha < 0.5");
  const double mean =
      kahan_sum(samples) / static_cast<double>(k);
  RandomStream rng(seed, 0);
  std::vector<double> errors(static_cast<std::size_t>(B));
  std::vector<double> replicate(k);
  for (int b = 0; b < B; ++b) {
    for (std::size_t i = 0; i < k; ++i)
      replicate[i] = samples[rng.integer(k)];
    errors[static_cast<std::size_t>(b)] =
        kahan_sum(replicate) / static_cast<double>(k) - mean;
  }
  ConfidenceInterval ci;
  ci.lo = mean + quantile(errors, alpha);
  ci.hi = mean + quantile(errors, 1.0 - alpha);
  ci.level = 1.0 - 2.0 * alpha;
  if (ci.lo > ci.hi) std::swap(ci.lo, ci.hi);
  return ci;
}

ConfidenceInterval student_t_ci(std::span<const double> samples, double alpha) {
  const std::size_t k = samples.size();
  if (k < 2) throw InsufficientSamples("student_t_ci: k >= 2 required");
  const double mean = kahan_sum(samples) / static_cast<double>(k);
  const double sk = *sample_variance(samples, mean);
  const double half = -student_t_quantile(alpha, static_cast<int>(k) - 1) *
                      std::sqrt(sk / static_cast<double>(k));
  return ConfidenceInterval{mean - half, mean + half, 1.0 - 2.0 * alpha};
}

FrobSchatten4 frob_schatten4(const LinearOperator& B, int k,
                             std::uint64_t seed) {
  if (k < 2) throw InsufficientSamples("frob_schatten4: k >= 2 required");
  RandomStream rng(seed, 0);
  std::vector<double> samples(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    Vector w = rng.gaussian_vector(B.cols);
    samples[static_cast<std::size_t>(i)] = B.apply(w).squaredNorm();
  }
  FrobSchatten4 out;
  out.frob_sq = collate(std::move(samples));
  // Var[X] = 2 ||B||_4^4 for Gaussian test vectors, so S_k / 2 is unbiased.
  out.schatten4_4 = out.frob_sq.sample_variance.value_or(0.0) / 2.0;
  return out;
}

double schatten2p_kv(const Matrix& B, int p, int k, std::uint64_t seed) {
  if (p < 1) throw InvalidOrder("schatten2p_kv: p >= 1 required");
  if (k < p) throw InvalidOrder("schatten2p_kv: k >= p required");
  RandomStream rng(seed, 0);
  Matrix Omega = rng.gaussian_matrix(B.cols(), k);
  Matrix Y = B * Omega;
  Matrix X = Y.transpose() * Y;
  Matrix T = X.triangularView<Eigen::StrictlyUpper>();
  Matrix Tp = Matrix::Identity(k, k);
  for (int i = 0; i < p - 1; ++i) Tp = Tp * T;
  double binom = 1.0;
  for (int i = 0; i < p; ++i)
    binom *= static_cast<double>(k - i) / static_cast<double>(p - i);
  return (Tp * X).trace() / binom;
}

PowerEigResult power_max_eig(const LinearOperator& A, int q_max, double tol,
                             std::uint64_t seed) {
  if (A.rows != A.cols) throw DimMismatch("power_max_eig: operator not square");
  if (q_max < 1) throw InvalidDims("power_max_eig: q_max >= 1 required");
  RandomStream rng(seed, 0);
  Vector y = rng.gaussian_vector(A.rows);
  y /= y.norm();
  PowerEigResult out;
  double xi_prev = 0.0;
  for (int i = 1; i <= q_max; ++i) {
    Vector z = A.apply(y);
    double xi = y.dot(z);
    out.iterations = i;
    const double nz = z.norm();
    if (nz == 0.0) {
      out.zero_start = true;
      out.xi = 0.0;
      return out;
    }
    y = z / nz;
    out.xi = xi;
    if (i >= 2 && std::abs(xi - xi_prev) <= tol * std::abs(xi)) break;
    xi_prev = xi;
  }
  return out;
}

LanczosDecomposition lanczos_tridiag(const LinearOperator& A, const Vector& w0,
                                     int q, bool reorthogonalize) {
  const Index n = A.rows;
  q = static_cast<int>(std::min<Index>(q, n - 1));
  q = std::max(q, 1);
  Matrix Q(n, q + 1);
  Q.col(0) = w0 / w0.norm();
  std::vector<double> alpha, beta;
  int i = 0;
  for (; i < q; ++i) {
    Vector v = A.apply(Q.col(i));
    double a = Q.col(i).dot(v);
    alpha.push_back(a);
    v -= a * Q.col(i);
    if (i > 0) v -= beta[static_cast<std::size_t>(i - 1)] * Q.col(i - 1);
    if (reorthogonalize) {
      // Double Gram-Schmidt against the whole basis.
      v -= Q.leftCols(i + 1) * (Q.leftCols(i + 1).transpose() * v);
      v -= Q.leftCols(i + 1) * (Q.leftCols(i + 1).transpose() * v);
    }
    double b = v.norm();
    if (b < kMachineEps * std::sqrt(static_cast<double>(n))) break;
    beta.push_back(b);
    Q.col(i + 1) = v / b;
  }
  // The tridiagonal uses beta(1:i-1); the trailing beta produced by a full
  // loop couples to the discarded next basis vector.
  if (beta.size() == alpha.size()) beta.pop_back();
  LanczosDecomposition out;
  out.alpha = Eigen::Map<Vector>(alpha.data(), static_cast<Index>(alpha.size()));
  out.beta = Eigen::Map<Vector>(beta.data(), static_cast<Index>(beta.size()));
  out.basis = Q.leftCols(static_cast<Index>(alpha.size()));
  return out;
}

LanczosEigResult lanczos_extremal_eig(const LinearOperator& A, int q,
                                      bool reorthogonalize, Extremal which,
                                      std::uint64_t seed) {
  if (A.rows != A.cols)
    throw DimMismatch("lanczos_extremal_eig: operator not square");
  if (q < 1) throw InvalidDims("lanczos_extremal_eig: q >= 1 required");
  RandomStream rng(seed, 0);
  Vector w = rng.gaussian_vector(A.rows);
  LanczosDecomposition lz = lanczos_tridiag(A, w, q, reorthogonalize);
  SymEig eig = eig_sym_tridiag(lz.alpha, lz.beta);
  LanczosEigResult out;
  out.steps = static_cast<int>(lz.alpha.size());
  // Eigen returns ascending eigenvalues.
  const Index idx = (which == Extremal::Max) ? lz.alpha.size() - 1 : 0;
  out.xi = eig.values(idx);
  out.eigenvector = lz.basis * eig.vectors.col(idx);
  return out;
}

EstimatorReport slq_trace_fn(const LinearOperator& A,
                             const std::function<double(double)>& f, int k,
                             int q, TestVectorDist dist, std::uint64_t seed) {
  if (A.rows != A.cols) throw DimMismatch("slq_trace_fn: operator not square");
  if (k < 1 || q < 1) throw InvalidDims("slq_trace_fn: k, q >= 1 required");
  RandomStream rng(seed, 0);
  std::vector<double> samples(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    Vector w = draw_test_vector(rng, dist, A.rows);
    LanczosDecomposition lz = lanczos_tridiag(A, w, q, /*reorth=*/true);
    SymEig eig = eig_sym_tridiag(lz.alpha, lz.beta);
    const double scale = eig.values.cwiseAbs().maxCoeff();
    double z = 0.0;
    for (Index l = 0; l < eig.values.size(); ++l) {
      double theta = eig.values(l);
      if (theta < -1e-10 * std::max(scale, 1.0))
        throw FunctionDomain("slq_trace_fn: negative Ritz node");
      theta = std::max(theta, 0.0);
      const double tau = eig.vectors(0, l);
      z += tau * tau * f(theta);
    }
    samples[static_cast<std::size_t>(i)] = w.squaredNorm() * z;
  }
  return collate(std::move(samples));
}

PosteriorErrorEstimate posterior_error(const LinearOperator& A, const Matrix& Q,
                                       int s, std::uint64_t seed) {
  if (s < 1) throw InvalidDims("posterior_error: s >= 1 required");
  if (Q.rows() != A.rows) throw DimMismatch("posterior_error: Q rows");
  if (Q.cols() > 0) {
    Matrix G = Q.transpose() * Q;
    if ((G - Matrix::Identity(Q.cols(), Q.cols())).cwiseAbs().maxCoeff() >
        1e-10)
      throw NotOrthonormal("posterior_error: Q not orthonormal");
  }
  RandomStream rng(seed, 0);
  PosteriorErrorEstimate out;
  double frob_acc = 0.0;
  for (int j = 0; j < s; ++j) {
    Vector z = A.apply(rng.gaussian_vector(A.cols));
    if (Q.cols() > 0) z -= Q * (Q.transpose() * z);
    frob_acc += z.squaredNorm();
    out.spec_est = std::max(out.spec_est, z.norm());
  }
  out.frob_sq_est = frob_acc / static_cast<double>(s);
  return out;
}

}  // namespace rnla
