#pragma once

// Correspondence between the SDE coefficients (b, S, kappa, c) and the
// generalized Dirichlet parameters (alpha, beta) of the invariant density.
//
//   alpha_i     = b_i S_i / kappa_i                        i = 1..K
//   1 - gamma_j = c_{1j}/kappa_1 = ... = c_{jj}/kappa_j     j = 1..K-1
//   1 + gamma_K = b_i (1 - S_i) / kappa_i  for every i
//
// The forward map is a function; the inverse needs the kappa vector as an
// explicit choice because distinct coefficient sets share one invariant.

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gendir/distributions.hpp"

namespace gendir {

inline constexpr double kMapTolerance = 1e-10;

class CoefficientError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the recovered beta_i is not positive.
class NonNormalizableError : public CoefficientError {
 public:
  using CoefficientError::CoefficientError;
};

template <class T>
struct BasicSdeCoefficients {
  std::vector<T> b;
  std::vector<T> S;
  std::vector<T> kappa;
  /// (K-1) x (K-1); c(i, j) is used for i <= j only, the lower triangle is
  /// a structural zero. Indices are zero-based.
  SquareMatrix<T> c;

  std::size_t dimension() const noexcept { return b.size(); }

  friend bool operator==(const BasicSdeCoefficients&, const BasicSdeCoefficients&) = default;
};

using SdeCoefficients = BasicSdeCoefficients<double>;

struct Violation {
  std::string rule;     // "bounds", "structure", "gamma-chain", "beta-chain"
  std::string detail;
  double spread = 0.0;  // max - min over the chain (0 for bound violations)
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
  std::string describe() const {
    std::ostringstream out;
    for (const auto& v : violations) out << v.rule << ": " << v.detail << '\n';
    return out.str();
  }
};

namespace detail {

template <class T>
T abs_value(const T& v) {
  return v < T(0) ? T(-v) : v;
}

template <class T>
double to_double(const T& v) {
  if constexpr (std::is_arithmetic_v<T>) {
    return static_cast<double>(v);
  } else {
    return v.template convert_to<double>();
  }
}

// Spread of a chain of values that must all agree, judged relative to the
// largest magnitude in the chain.
template <class T>
bool chain_agrees(const std::vector<T>& values, const T& tol, T& spread) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  spread = *hi - *lo;
  T scale(0);
  for (const auto& v : values) scale = std::max(scale, abs_value(v));
  return spread <= tol * scale;
}

}  // namespace detail

template <class T>
ValidationReport validate(const BasicSdeCoefficients<T>& c, const T& tol = T(kMapTolerance)) {
  ValidationReport report;
  const std::size_t k = c.dimension();
  auto fail = [&](std::string rule, std::string detail, double spread = 0.0) {
    report.violations.push_back({std::move(rule), std::move(detail), spread});
  };

  if (k == 0 || c.S.size() != k || c.kappa.size() != k) {
    fail("structure", "b, S and kappa must be non-empty and of equal length");
    return report;
  }
  if (c.c.size() != k - 1) {
    std::ostringstream msg;
    msg << "c must be " << k - 1 << " x " << k - 1 << " for K = " << k;
    fail("structure", msg.str());
    return report;
  }
  for (std::size_t i = 0; i < k; ++i) {
    const auto idx = std::to_string(i + 1);
    if (!(c.b[i] > T(0))) fail("bounds", "b_" + idx + " must satisfy b > 0");
    if (!(c.kappa[i] > T(0))) fail("bounds", "kappa_" + idx + " must satisfy kappa > 0");
    if (!(c.S[i] > T(0) && c.S[i] < T(1))) fail("bounds", "S_" + idx + " must satisfy 0 < S < 1");
  }
  for (std::size_t i = 0; i + 1 < k; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (c.c(i, j) != T(0))
        fail("structure", "c_" + std::to_string(i + 1) + std::to_string(j + 1) +
                              " lies below the diagonal and must be zero");
  if (!report.ok()) return report;

  // c_{1j}/kappa_1 = ... = c_{jj}/kappa_j for every column j.
  for (std::size_t j = 0; j + 1 < k; ++j) {
    std::vector<T> chain;
    for (std::size_t i = 0; i <= j; ++i) chain.push_back(c.c(i, j) / c.kappa[i]);
    T spread(0);
    if (!detail::chain_agrees(chain, tol, spread)) {
      std::ostringstream msg;
      msg << "c_{i" << j + 1 << "}/kappa_i disagree for i = 1.." << j + 1 << " (spread "
          << detail::to_double(spread) << ")";
      fail("gamma-chain", msg.str(), detail::to_double(spread));
    }
  }
  // b_i (1 - S_i) / kappa_i identical for every i.
  std::vector<T> chain;
  for (std::size_t i = 0; i < k; ++i) chain.push_back(c.b[i] * (T(1) - c.S[i]) / c.kappa[i]);
  T spread(0);
  if (!detail::chain_agrees(chain, tol, spread)) {
    std::ostringstream msg;
    msg << "b_i(1-S_i)/kappa_i disagree for i = 1.." << k << " (spread "
        << detail::to_double(spread) << ")";
    fail("beta-chain", msg.str(), detail::to_double(spread));
  }
  return report;
}

template <class T>
void require_valid(const BasicSdeCoefficients<T>& c, const T& tol = T(kMapTolerance)) {
  if (auto report = validate(c, tol); !report.ok())
    throw CoefficientError("invalid SDE coefficients:\n" + report.describe());
}

template <class T>
BasicGenDirParams<T> sde_to_distribution(const BasicSdeCoefficients<T>& c,
                                         const T& tol = T(kMapTolerance)) {
  require_valid(c, tol);
  const std::size_t k = c.dimension();
  std::vector<T> alpha(k), gamma(k), beta(k);
  for (std::size_t i = 0; i < k; ++i) alpha[i] = c.b[i] * c.S[i] / c.kappa[i];
  for (std::size_t j = 0; j + 1 < k; ++j) gamma[j] = T(1) - c.c(j, j) / c.kappa[j];
  gamma[k - 1] = c.b[0] * (T(1) - c.S[0]) / c.kappa[0] - T(1);

  beta[k - 1] = gamma[k - 1] + T(1);
  for (std::size_t i = k - 1; i-- > 0;) beta[i] = gamma[i] + alpha[i + 1] + beta[i + 1];
  for (std::size_t i = 0; i < k; ++i) {
    if (!(beta[i] > T(0))) {
      std::ostringstream msg;
      msg << "recovered beta_" << i + 1 << " = " << detail::to_double(beta[i])
          << " is not positive; the target density is not normalizable";
      throw NonNormalizableError(msg.str());
    }
  }
  return BasicGenDirParams<T>(std::move(alpha), std::move(beta));
}

/// b_i = kappa_i (alpha_i + beta_K), S_i = alpha_i / (alpha_i + beta_K),
/// c_ij = kappa_i (1 - gamma_j) for i <= j.
template <class T>
BasicSdeCoefficients<T> distribution_to_sde(const BasicGenDirParams<T>& p,
                                            const std::vector<T>& kappa) {
  const std::size_t k = p.dimension();
  if (kappa.size() != k) throw CoefficientError("kappa must have one entry per coordinate");
  for (const auto& v : kappa)
    if (!(v > T(0))) throw CoefficientError("kappa entries must be positive");
  const auto& a = p.alpha();
  const T beta_last = p.beta().back();
  const auto g = p.gamma();

  BasicSdeCoefficients<T> out{std::vector<T>(k), std::vector<T>(k), kappa, SquareMatrix<T>(k - 1)};
  for (std::size_t i = 0; i < k; ++i) {
    out.b[i] = kappa[i] * (a[i] + beta_last);
    out.S[i] = a[i] / (a[i] + beta_last);
  }
  for (std::size_t i = 0; i + 1 < k; ++i)
    for (std::size_t j = i; j + 1 < k; ++j) out.c(i, j) = kappa[i] * (T(1) - g[j]);
  return out;
}

/// Replaces c by c_ij = kappa_i (i <= j), which makes the invariant a
/// standard Dirichlet (gamma_1 = ... = gamma_{K-1} = 0).
template <class T>
BasicSdeCoefficients<T> dirichlet_choice(BasicSdeCoefficients<T> c) {
  const std::size_t k = c.dimension();
  c.c = SquareMatrix<T>(k == 0 ? 0 : k - 1);
  for (std::size_t i = 0; i + 1 < k; ++i)
    for (std::size_t j = i; j + 1 < k; ++j) c.c(i, j) = c.kappa[i];
  return c;
}

}  // namespace gendir
