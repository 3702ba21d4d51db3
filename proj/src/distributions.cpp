#include "gendir/distributions.hpp"

#include <cmath>
#include <limits>

namespace gendir {

namespace {

// Accumulates exponent * ln(x), tracking boundary factors where x == 0.
class LogSum {
 public:
  void add_constant(double v) { finite_ += v; }

  void add_power(double x, double exponent) {
    if (x > 0.0) {
      finite_ += exponent * std::log(x);
    } else if (exponent > 0.0) {
      vanishes_ = true;
    } else if (exponent < 0.0) {
      diverges_ = true;
    }
    // x == 0 with exponent 0 contributes the factor 1.
  }

  LogDensity result() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (vanishes_ && diverges_)
      return {std::numeric_limits<double>::quiet_NaN(), DensityStatus::indeterminate};
    if (vanishes_) return {-inf, DensityStatus::zero};
    if (diverges_) return {inf, DensityStatus::infinite};
    return {finite_, DensityStatus::interior};
  }

 private:
  double finite_ = 0.0;
  bool vanishes_ = false;
  bool diverges_ = false;
};

void require_dimension(std::size_t expected, const SimplexPoint& y) {
  if (y.dimension() != expected) throw ParameterError("point dimension does not match parameters");
}

}  // namespace

LogDensity gd_log_density(const GenDirParams& p, const SimplexPoint& y) {
  require_dimension(p.dimension(), y);
  const auto& a = p.alpha();
  const auto& b = p.beta();
  const auto g = p.gamma();
  const auto r = remainders(y);
  LogSum sum;
  for (std::size_t i = 0; i < p.dimension(); ++i) {
    sum.add_constant(std::lgamma(a[i] + b[i]) - std::lgamma(a[i]) - std::lgamma(b[i]));
    sum.add_power(y[i], a[i] - 1.0);
    sum.add_power(r.values[i], g[i]);
  }
  return sum.result();
}

LogDensity dirichlet_log_density(const DirichletParams& p, const SimplexPoint& y) {
  require_dimension(p.dimension(), y);
  const auto& w = p.omega();
  const auto full = full_point(y);
  LogSum sum;
  sum.add_constant(std::lgamma(p.total()));
  for (std::size_t i = 0; i < w.size(); ++i) {
    sum.add_constant(-std::lgamma(w[i]));
    sum.add_power(full[i], w[i] - 1.0);
  }
  return sum.result();
}

SignStructure covariance_sign_structure(const GenDirParams& p) {
  const auto m = gd_moments(p);
  const std::size_t k = p.dimension();
  SignStructure s{SquareMatrix<int>(k, 0)};
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double c = m.cov(i, j);
      s.signs(i, j) = (c > 0.0) - (c < 0.0);
      if (s.signs(i, j) != s.signs(i, i + 1)) s.rows_constant = false;
      if (i == 0 && s.signs(i, j) > 0) s.first_row_nonpositive = false;
    }
  }
  return s;
}

}  // namespace gendir
