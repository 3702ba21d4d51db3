#pragma once

// Geometry of the open unit simplex in K free coordinates.
//
// A point stores y_1..y_K only. The last component of the full N = K+1
// vector is the remainder 1 - sum(y), so the unit-sum constraint holds by
// construction rather than by maintenance.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gendir {

/// Absolute tolerance separating boundary contact from round-off.
inline constexpr double kGeometryTolerance = 1e-12;

class GeometryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when a remainder that enters a scaling factor vanishes.
class SingularFaceError : public GeometryError {
 public:
  SingularFaceError(const std::string& what, std::size_t face)
      : GeometryError(what), face_(face) {}
  std::size_t face() const noexcept { return face_; }

 private:
  std::size_t face_;
};

class SimplexPoint {
 public:
  /// Throws GeometryError unless every y_i >= -tol and every partial sum
  /// stays below 1 + tol.
  explicit SimplexPoint(std::vector<double> y);

  std::size_t dimension() const noexcept { return y_.size(); }
  std::span<const double> coords() const noexcept { return y_; }
  double operator[](std::size_t i) const { return y_[i]; }

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

 private:
  std::vector<double> y_;
};

/// Remainders R_i = 1 - (y_1 + ... + y_i), i = 1..K. Non-increasing.
struct Remainders {
  std::vector<double> values;
};

/// Scaling factors U_i = prod_{j=1}^{K-i} 1/R_{K-j}; U_K = 1.
struct ScalingFactors {
  std::vector<double> values;
};

/// Returns an empty string when y is admissible, otherwise a description of
/// the first violation.
std::string check_simplex(std::span<const double> y, double tol = kGeometryTolerance);

Remainders remainders(const SimplexPoint& p);

/// Running-subtraction remainders without validation; out.size() == y.size().
void remainders_into(std::span<const double> y, std::span<double> out) noexcept;

/// Throws SingularFaceError if some R_i, i < K, is <= kGeometryTolerance.
ScalingFactors scaling_factors(const Remainders& r);

/// (y_1, ..., y_K, R_K).
std::vector<double> full_point(const SimplexPoint& p);

}  // namespace gendir
