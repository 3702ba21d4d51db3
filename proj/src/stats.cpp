#include "gendir/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gendir {

OnlineMoments::OnlineMoments(std::size_t dimension)
    : mean_(dimension, 0.0), comoment_(dimension), delta_(dimension) {}

void OnlineMoments::add(std::span<const double> x) {
  const std::size_t d = dimension();
  if (x.size() != d) throw StatsError("sample dimension mismatch");
  ++count_;
  const double inv_n = 1.0 / static_cast<double>(count_);
  for (std::size_t i = 0; i < d; ++i) {
    delta_[i] = x[i] - mean_[i];
    mean_[i] += delta_[i] * inv_n;
  }
  // delta_i (x_j - new mean_j) is the standard multivariate Welford update.
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      comoment_(i, j) += delta_[i] * (x[j] - mean_[j]);
      comoment_(j, i) = comoment_(i, j);
    }
  }
}

void OnlineMoments::merge(const OnlineMoments& o) {
  const std::size_t d = dimension();
  if (o.dimension() != d) throw StatsError("accumulator dimension mismatch");
  if (o.count_ == 0) return;
  if (count_ == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(o.count_);
  const double n = na + nb;
  for (std::size_t i = 0; i < d; ++i) delta_[i] = o.mean_[i] - mean_[i];
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i; j < d; ++j) {
      comoment_(i, j) += o.comoment_(i, j) + delta_[i] * delta_[j] * na * nb / n;
      comoment_(j, i) = comoment_(i, j);
    }
  }
  for (std::size_t i = 0; i < d; ++i) mean_[i] += delta_[i] * nb / n;
  count_ += o.count_;
}

OnlineMoments merge_pairwise(std::vector<OnlineMoments> parts) {
  if (parts.empty()) throw StatsError("nothing to merge");
  for (std::size_t width = 1; width < parts.size(); width *= 2)
    for (std::size_t i = 0; i + width < parts.size(); i += 2 * width) parts[i].merge(parts[i + width]);
  return std::move(parts.front());
}

const SquareMatrix<double>& MomentRecord::covariance() const {
  if (!cov) throw StatsError("variance unavailable: fewer than two samples");
  return *cov;
}

MomentRecord finalize(const OnlineMoments& acc, double t, Normalization norm) {
  if (acc.count() == 0) throw StatsError("cannot finalize an empty accumulator");
  MomentRecord rec;
  rec.t = t;
  rec.count = acc.count();
  rec.mean = acc.mean();
  if (acc.count() < 2) return rec;

  const std::size_t d = acc.dimension();
  const double n = static_cast<double>(acc.count());
  const double divisor = norm == Normalization::population ? n : n - 1.0;
  SquareMatrix<double> cov(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) cov(i, j) = acc.comoments()(i, j) / divisor;
  for (std::size_t i = 0; i < d; ++i) cov(i, i) = std::max(cov(i, i), 0.0);
  rec.mean_se.resize(d);
  for (std::size_t i = 0; i < d; ++i) rec.mean_se[i] = std::sqrt(cov(i, i) / n);
  rec.cov = std::move(cov);
  return rec;
}

void MomentTimeSeries::push(MomentRecord rec) {
  if (!records_.empty()) {
    if (!(rec.t > records_.back().t)) throw StatsError("moment records must have increasing times");
    if (rec.dimension() != records_.back().dimension())
      throw StatsError("moment record dimension changed within a series");
  }
  records_.push_back(std::move(rec));
}

MomentRecord window_average(const MomentTimeSeries& ts, double t_from, double t_to) {
  MomentRecord avg;
  std::size_t used = 0;
  bool have_cov = true;
  for (const auto& r : ts.records()) {
    if (r.t < t_from || r.t > t_to) continue;
    const std::size_t d = r.dimension();
    if (used == 0) {
      avg.mean.assign(d, 0.0);
      avg.mean_se.assign(d, 0.0);
      avg.cov = SquareMatrix<double>(d);
      avg.count = r.count;
    }
    have_cov = have_cov && r.cov.has_value();
    for (std::size_t i = 0; i < d; ++i) {
      avg.mean[i] += r.mean[i];
      if (have_cov) {
        avg.mean_se[i] += r.mean_se[i];
        for (std::size_t j = 0; j < d; ++j) (*avg.cov)(i, j) += (*r.cov)(i, j);
      }
    }
    avg.t = r.t;
    ++used;
  }
  if (used == 0) {
    std::ostringstream msg;
    msg << "no moment records inside the window [" << t_from << ", " << t_to << "]";
    throw StatsError(msg.str());
  }
  const double inv = 1.0 / static_cast<double>(used);
  for (auto& v : avg.mean) v *= inv;
  if (have_cov) {
    for (auto& v : avg.mean_se) v *= inv;
    const std::size_t d = avg.dimension();
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) (*avg.cov)(i, j) *= inv;
  } else {
    avg.mean_se.clear();
    avg.cov.reset();
  }
  return avg;
}

ComparisonReport compare(const MomentRecord& rec, const MomentSet& analytic, const Tolerance& tol) {
  const std::size_t k = analytic.mean.size();
  if (rec.dimension() < k) throw StatsError("record has fewer components than the analytic moments");
  ComparisonReport report;
  auto add = [&](std::string name, double emp, double ana, double rel_tol, double se) {
    ComparisonEntry e;
    e.quantity = std::move(name);
    e.empirical = emp;
    e.analytic = ana;
    e.abs_dev = std::abs(emp - ana);
    e.rel_dev = ana != 0.0 ? e.abs_dev / std::abs(ana) : e.abs_dev;
    e.se_multiple = se > 0.0 ? e.abs_dev / se : std::numeric_limits<double>::quiet_NaN();
    e.tolerance = rel_tol;
    e.pass = std::isfinite(emp) && e.rel_dev <= rel_tol;
    report.pass = report.pass && e.pass;
    report.entries.push_back(std::move(e));
  };
  for (std::size_t i = 0; i < k; ++i)
    add("mean_" + std::to_string(i + 1), rec.mean[i], analytic.mean[i], tol.mean_rel,
        rec.mean_se.empty() ? 0.0 : rec.mean_se[i]);
  if (!rec.cov) {
    report.pass = false;
    return report;
  }
  for (std::size_t i = 0; i < k; ++i)
    add("var_" + std::to_string(i + 1), (*rec.cov)(i, i), analytic.cov(i, i), tol.var_rel, 0.0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      add("cov_" + std::to_string(i + 1) + "_" + std::to_string(j + 1), (*rec.cov)(i, j),
          analytic.cov(i, j), tol.cov_rel, 0.0);
  return report;
}

}  // namespace gendir
