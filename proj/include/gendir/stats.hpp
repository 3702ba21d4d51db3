#pragma once

// Ensemble statistics: single-pass mean/co-moment accumulation, mergeable
// across workers, plus moment time series and comparison against analytic
// moments.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gendir/distributions.hpp"

namespace gendir {

class StatsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Welford-style accumulator over vectors of a fixed dimension.
class OnlineMoments {
 public:
  explicit OnlineMoments(std::size_t dimension);

  void add(std::span<const double> sample);

  /// Chan et al. pairwise combination; equals accumulating the
  /// concatenation of both inputs up to round-off.
  void merge(const OnlineMoments& other);

  std::size_t dimension() const noexcept { return mean_.size(); }
  std::size_t count() const noexcept { return count_; }
  const std::vector<double>& mean() const noexcept { return mean_; }
  /// Sum of (x_i - mean_i)(x_j - mean_j); full symmetric matrix.
  const SquareMatrix<double>& comoments() const noexcept { return comoment_; }

 private:
  std::size_t count_ = 0;
  std::vector<double> mean_;
  SquareMatrix<double> comoment_;
  std::vector<double> delta_;
};

/// Merges accumulators as a balanced binary tree in index order, so the
/// result depends only on the partition, not on who computed each part.
OnlineMoments merge_pairwise(std::vector<OnlineMoments> parts);

struct MomentRecord {
  double t = 0.0;
  std::size_t count = 0;
  std::vector<double> mean;
  /// Standard errors of the means, sqrt(var_i / n). Empty when count < 2.
  std::vector<double> mean_se;
  /// Absent when count < 2.
  std::optional<SquareMatrix<double>> cov;

  std::size_t dimension() const noexcept { return mean.size(); }
  /// Throws StatsError when the covariance is unavailable.
  const SquareMatrix<double>& covariance() const;
};

enum class Normalization { population, sample };

MomentRecord finalize(const OnlineMoments& acc, double t = 0.0,
                      Normalization norm = Normalization::population);

class MomentTimeSeries {
 public:
  /// Throws StatsError unless t increases strictly and dimensions agree.
  void push(MomentRecord rec);
  const std::vector<MomentRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

 private:
  std::vector<MomentRecord> records_;
};

/// Arithmetic mean of all records with t in [t_from, t_to]. The result is
/// stamped with the last averaged time. Standard errors are averaged too and
/// ignore temporal correlation.
MomentRecord window_average(const MomentTimeSeries& ts, double t_from, double t_to);

struct Tolerance {
  double mean_rel = 0.05;
  double var_rel = 0.05;
  double cov_rel = 0.10;
};

struct ComparisonEntry {
  std::string quantity;  // mean_1, var_2, cov_1_2, ...
  double empirical;
  double analytic;
  double abs_dev;
  double rel_dev;
  double se_multiple;  // |dev| / SE for means, NaN otherwise
  double tolerance;
  bool pass;
};

struct ComparisonReport {
  std::vector<ComparisonEntry> entries;
  bool pass = true;
};

/// Compares the leading analytic.mean.size() components of rec.
ComparisonReport compare(const MomentRecord& rec, const MomentSet& analytic, const Tolerance& tol);

}  // namespace gendir
