#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the library's numerical kernels.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

namespace oracle {

using HighPrecision = boost::multiprecision::cpp_dec_float_50;

/// Gauss-Legendre nodes and weights on [-1, 1], Newton on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(std::size_t n) {
  std::vector<double> x(n), w(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / static_cast<double>(j);
      }
      dp = static_cast<double>(n) * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

/// Generalized Dirichlet log-density term by term in 50 significant digits.
/// Sum of the magnitudes of the individual log-density terms, for judging
/// round-off in a sum that may cancel.
inline double gd_log_density_scale(const std::vector<double>& alpha, const std::vector<double>& beta,
                                   const std::vector<double>& y) {
  const std::size_t k = alpha.size();
  double s = 0.0, rem = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    rem -= y[i];
    const double gamma = i + 1 < k ? beta[i] - alpha[i + 1] - beta[i + 1] : beta[i] - 1;
    s += std::abs(std::lgamma(alpha[i] + beta[i])) + std::abs(std::lgamma(alpha[i])) + std::abs(std::lgamma(beta[i]));
    s += std::abs((alpha[i] - 1) * std::log(y[i])) + std::abs(gamma * std::log(rem));
  }
  return s;
}

inline HighPrecision gd_log_density_hp(const std::vector<HighPrecision>& alpha,
                                       const std::vector<HighPrecision>& beta,
                                       const std::vector<HighPrecision>& y) {
  using boost::math::lgamma;
  using boost::multiprecision::log;
  const std::size_t k = alpha.size();
  HighPrecision total = 0, rem = 1;
  for (std::size_t i = 0; i < k; ++i) {
    rem -= y[i];
    const HighPrecision gamma = i + 1 < k ? HighPrecision(beta[i] - alpha[i + 1] - beta[i + 1]) : HighPrecision(beta[i] - 1);
    total += lgamma(alpha[i] + beta[i]) - lgamma(alpha[i]) - lgamma(beta[i]);
    total += (alpha[i] - 1) * log(y[i]) + gamma * log(rem);
  }
  return total;
}

/// Two-pass mean and population covariance.
struct TwoPass {
  std::vector<double> mean;
  std::vector<std::vector<double>> cov;
};

inline TwoPass two_pass(const std::vector<std::vector<double>>& xs) {
  const std::size_t d = xs.front().size();
  const double n = static_cast<double>(xs.size());
  TwoPass r{std::vector<double>(d, 0.0), std::vector<std::vector<double>>(d, std::vector<double>(d, 0.0))};
  for (const auto& x : xs)
    for (std::size_t i = 0; i < d; ++i) r.mean[i] += x[i];
  for (auto& m : r.mean) m /= n;
  for (const auto& x : xs)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) r.cov[i][j] += (x[i] - r.mean[i]) * (x[j] - r.mean[j]);
  for (auto& row : r.cov)
    for (auto& v : row) v /= n;
  return r;
}

/// K = 3 drift and diffusion written out term by term. c = {c11, c12, c22}.
/// a_scale holds the same expressions with every summand made positive, the
/// natural yardstick when the bracket nearly cancels.
struct K3Kernel {
  double a[3];
  double B[3];
  double a_scale[3];
};

inline K3Kernel k3_kernel(const double b[3], const double S[3], const double kappa[3], const double c[3],
                          const double y[3]) {
  const double r1 = 1 - y[0];
  const double r2 = 1 - y[0] - y[1];
  const double r3 = 1 - y[0] - y[1] - y[2];
  K3Kernel k{};
  k.a[0] = (b[0] / 2) / (r1 * r2) * (S[0] * r3 - (1 - S[0]) * y[0]) +
           y[0] * r3 / (r1 * r2) * ((c[0] / 2) / r1 + (c[1] / 2) / r2);
  k.a[1] = (b[1] / 2) / r2 * (S[1] * r3 - (1 - S[1]) * y[1]) + (c[2] / 2) * y[1] * r3 / (r2 * r2);
  k.a[2] = (b[2] / 2) * (S[2] * r3 - (1 - S[2]) * y[2]);
  k.a_scale[0] = (b[0] / 2) / (r1 * r2) * (S[0] * r3 + (1 - S[0]) * y[0]) +
                 y[0] * r3 / (r1 * r2) * (std::abs(c[0] / 2) / r1 + std::abs(c[1] / 2) / r2);
  k.a_scale[1] = (b[1] / 2) / r2 * (S[1] * r3 + (1 - S[1]) * y[1]) + std::abs(c[2] / 2) * y[1] * r3 / (r2 * r2);
  k.a_scale[2] = (b[2] / 2) * (S[2] * r3 + (1 - S[2]) * y[2]);
  k.B[0] = kappa[0] * y[0] * r3 / (r1 * r2);
  k.B[1] = kappa[1] * y[1] * r3 / r2;
  k.B[2] = kappa[2] * y[2] * r3;
  return k;
}

/// -phi for arbitrary K, summed directly from the logarithms.
inline double minus_phi(const std::vector<double>& alpha, const std::vector<double>& gamma,
                        const std::vector<double>& y) {
  double s = 0.0, rem = 1.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    rem -= y[i];
    s += (alpha[i] - 1) * std::log(y[i]) + gamma[i] * std::log(rem);
  }
  return s;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace oracle
