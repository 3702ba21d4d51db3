#include "gendir/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gendir {

std::string check_simplex(std::span<const double> y, double tol) {
  if (y.empty()) return "simplex point needs at least one coordinate";
  double remainder = 1.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    std::ostringstream msg;
    if (!std::isfinite(y[i])) {
      msg << "coordinate y_" << i + 1 << " is not finite";
      return msg.str();
    }
    if (y[i] < -tol) {
      msg << "coordinate y_" << i + 1 << " = " << y[i] << " is negative";
      return msg.str();
    }
    remainder -= y[i];
    if (remainder < -tol) {
      msg << "partial sum through y_" << i + 1 << " exceeds 1 (remainder " << remainder << ")";
      return msg.str();
    }
  }
  return {};
}

SimplexPoint::SimplexPoint(std::vector<double> y) : y_(std::move(y)) {
  if (auto err = check_simplex(y_); !err.empty()) throw GeometryError(err);
}

void remainders_into(std::span<const double> y, std::span<double> out) noexcept {
  double r = 1.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    r -= y[i];
    out[i] = r;
  }
}

Remainders remainders(const SimplexPoint& p) {
  Remainders r{std::vector<double>(p.dimension())};
  remainders_into(p.coords(), r.values);
  // Round-off within tolerance is allowed by validation; never report a
  // negative remainder.
  for (auto& v : r.values) v = std::max(v, 0.0);
  return r;
}

ScalingFactors scaling_factors(const Remainders& r) {
  const std::size_t k = r.values.size();
  ScalingFactors u{std::vector<double>(k, 1.0)};
  for (std::size_t i = k - 1; i-- > 0;) {
    if (r.values[i] <= kGeometryTolerance) {
      std::ostringstream msg;
      msg << "remainder R_" << i + 1 << " = " << r.values[i] << " vanishes on a singular face";
      throw SingularFaceError(msg.str(), i);
    }
    u.values[i] = u.values[i + 1] / r.values[i];
  }
  return u;
}

std::vector<double> full_point(const SimplexPoint& p) {
  std::vector<double> full(p.coords().begin(), p.coords().end());
  double r = 1.0;
  for (double v : p.coords()) r -= v;
  full.push_back(std::max(r, 0.0));
  return full;
}

}  // namespace gendir
