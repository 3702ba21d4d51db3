#pragma once

// Generalized Dirichlet, Dirichlet and beta distributions: log-densities and
// first/second moments.
//
// Parameter types and moment formulas are templates over the scalar so that
// the same code runs in double and in exact rational arithmetic (tests use
// boost::multiprecision::cpp_rational).

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gendir/simplex.hpp"

namespace gendir {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense square matrix, row-major. Small K only.
template <class T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, const T& fill = T(0)) : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

template <class T>
class BasicGenDirParams {
 public:
  BasicGenDirParams(std::vector<T> alpha, std::vector<T> beta)
      : alpha_(std::move(alpha)), beta_(std::move(beta)) {
    if (alpha_.empty() || alpha_.size() != beta_.size())
      throw ParameterError("alpha and beta must be non-empty and of equal length");
    for (std::size_t i = 0; i < alpha_.size(); ++i) {
      if (!(alpha_[i] > T(0)) || !(beta_[i] > T(0))) {
        std::ostringstream msg;
        msg << "alpha_" << i + 1 << " and beta_" << i + 1 << " must be positive";
        throw ParameterError(msg.str());
      }
    }
  }

  std::size_t dimension() const noexcept { return alpha_.size(); }
  const std::vector<T>& alpha() const noexcept { return alpha_; }
  const std::vector<T>& beta() const noexcept { return beta_; }

  /// gamma_i = beta_i - alpha_{i+1} - beta_{i+1} (i < K), gamma_K = beta_K - 1.
  std::vector<T> gamma() const {
    const std::size_t k = dimension();
    std::vector<T> g(k);
    for (std::size_t i = 0; i + 1 < k; ++i) g[i] = beta_[i] - alpha_[i + 1] - beta_[i + 1];
    g[k - 1] = beta_[k - 1] - T(1);
    return g;
  }

  /// True when gamma_1 = ... = gamma_{K-1} = 0 (the standard Dirichlet case).
  bool is_dirichlet(const T& tol = T(0)) const {
    auto g = gamma();
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
      T a = g[i] < T(0) ? T(-g[i]) : g[i];
      if (a > tol) return false;
    }
    return true;
  }

  friend bool operator==(const BasicGenDirParams&, const BasicGenDirParams&) = default;

 private:
  std::vector<T> alpha_;
  std::vector<T> beta_;
};

template <class T>
class BasicDirichletParams {
 public:
  explicit BasicDirichletParams(std::vector<T> omega) : omega_(std::move(omega)) {
    if (omega_.size() < 2) throw ParameterError("Dirichlet needs at least two weights");
    for (std::size_t i = 0; i < omega_.size(); ++i)
      if (!(omega_[i] > T(0))) throw ParameterError("Dirichlet weights must be positive");
  }

  /// omega = (alpha_1..alpha_K, beta_K).
  static BasicDirichletParams from_gen_dir(const BasicGenDirParams<T>& p) {
    std::vector<T> w(p.alpha());
    w.push_back(p.beta().back());
    return BasicDirichletParams(std::move(w));
  }

  std::size_t components() const noexcept { return omega_.size(); }
  std::size_t dimension() const noexcept { return omega_.size() - 1; }
  const std::vector<T>& omega() const noexcept { return omega_; }
  T total() const {
    T s(0);
    for (const auto& w : omega_) s += w;
    return s;
  }

 private:
  std::vector<T> omega_;
};

template <class T>
struct BasicBetaParams {
  T alpha;
  T beta;
};

/// Means and covariance of the K free coordinates.
template <class T>
struct BasicMomentSet {
  std::vector<T> mean;
  SquareMatrix<T> cov;
};

using GenDirParams = BasicGenDirParams<double>;
using DirichletParams = BasicDirichletParams<double>;
using BetaParams = BasicBetaParams<double>;
using MomentSet = BasicMomentSet<double>;

// ---------------------------------------------------------------------------
// Moments

/// <Y_i> = alpha_i/(alpha_i+beta_i) prod_{j<i} beta_j/(alpha_j+beta_j) and the
/// covariance with M_{i-1} = prod_{k<i} (beta_k+1)/(alpha_k+beta_k+1).
/// The off-diagonal formula is applied with i < j and mirrored.
template <class T>
BasicMomentSet<T> gd_moments(const BasicGenDirParams<T>& p) {
  const std::size_t k = p.dimension();
  const auto& a = p.alpha();
  const auto& b = p.beta();
  BasicMomentSet<T> m{std::vector<T>(k), SquareMatrix<T>(k)};

  // m_prefix = prod_{j<i} beta_j/(alpha_j+beta_j); big_m = M_{i-1}.
  T m_prefix(1);
  std::vector<T> big_m(k);
  T running(1);
  for (std::size_t i = 0; i < k; ++i) {
    m.mean[i] = a[i] / (a[i] + b[i]) * m_prefix;
    m_prefix *= b[i] / (a[i] + b[i]);
    big_m[i] = running;
    running *= (b[i] + T(1)) / (a[i] + b[i] + T(1));
  }
  for (std::size_t i = 0; i < k; ++i) {
    const T denom = a[i] + b[i] + T(1);
    m.cov(i, i) = m.mean[i] * ((a[i] + T(1)) / denom * big_m[i] - m.mean[i]);
    const T bracket = a[i] / denom * big_m[i] - m.mean[i];
    for (std::size_t j = i + 1; j < k; ++j) {
      m.cov(i, j) = m.mean[j] * bracket;
      m.cov(j, i) = m.cov(i, j);
    }
  }
  return m;
}

/// Moments of the first N-1 components of a Dirichlet(omega).
template <class T>
BasicMomentSet<T> dirichlet_moments(const BasicDirichletParams<T>& p) {
  const std::size_t k = p.dimension();
  const auto& w = p.omega();
  const T total = p.total();
  const T scale = total * total * (total + T(1));
  BasicMomentSet<T> m{std::vector<T>(k), SquareMatrix<T>(k)};
  for (std::size_t i = 0; i < k; ++i) {
    m.mean[i] = w[i] / total;
    m.cov(i, i) = w[i] * (total - w[i]) / scale;
    for (std::size_t j = i + 1; j < k; ++j) {
      m.cov(i, j) = -(w[i] * w[j]) / scale;
      m.cov(j, i) = m.cov(i, j);
    }
  }
  return m;
}

template <class T>
std::pair<T, T> beta_moments(const BasicBetaParams<T>& p) {
  const T s = p.alpha + p.beta;
  return {p.alpha / s, p.alpha * p.beta / (s * s * (s + T(1)))};
}

/// Extends K-variate moments to all N = K+1 components using
/// Y_N = 1 - sum(Y_i): <Y_N> = 1 - sum<Y_i>, cov(Y_i, Y_N) = -sum_j cov_ij.
template <class T>
BasicMomentSet<T> complete_moments(const BasicMomentSet<T>& m) {
  const std::size_t k = m.mean.size();
  BasicMomentSet<T> full{std::vector<T>(k + 1), SquareMatrix<T>(k + 1)};
  T last_mean(1);
  T last_var(0);
  for (std::size_t i = 0; i < k; ++i) {
    full.mean[i] = m.mean[i];
    last_mean -= m.mean[i];
    T row(0);
    for (std::size_t j = 0; j < k; ++j) {
      full.cov(i, j) = m.cov(i, j);
      row += m.cov(i, j);
    }
    full.cov(i, k) = -row;
    full.cov(k, i) = -row;
    last_var += row;
  }
  full.mean[k] = last_mean;
  full.cov(k, k) = last_var;
  return full;
}

/// sign(cov_ij) for i < j, with the two structural facts checked: every row
/// has one sign across j > i, and row 1 is non-positive.
struct SignStructure {
  SquareMatrix<int> signs;  // upper triangle populated, rest zero
  bool rows_constant = true;
  bool first_row_nonpositive = true;
};

SignStructure covariance_sign_structure(const GenDirParams& p);

// ---------------------------------------------------------------------------
// Densities

enum class DensityStatus {
  interior,        // finite log-density
  zero,            // boundary point where the density vanishes: value = -inf
  infinite,        // boundary point where the density diverges: value = +inf
  indeterminate,   // vanishing and diverging factors meet: value = NaN
};

struct LogDensity {
  double value;
  DensityStatus status;
};

LogDensity gd_log_density(const GenDirParams& p, const SimplexPoint& y);
LogDensity dirichlet_log_density(const DirichletParams& p, const SimplexPoint& y);

}  // namespace gendir
