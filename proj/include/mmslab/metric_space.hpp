#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmslab/errors.hpp"

namespace mmslab {

enum class BallKind { open, closed };

inline const char* to_string(BallKind kind) { return kind == BallKind::open ? "open" : "closed"; }

// Membership test shared by every ball query. Exact on stored values: the
// open/closed distinction lives entirely in this comparison.
inline bool within(double distance, double radius, BallKind kind) {
  return kind == BallKind::open ? distance < radius : distance <= radius;
}

enum class Norm { l1, l2, linf };

inline const char* to_string(Norm norm) {
  switch (norm) {
    case Norm::l1: return "l1";
    case Norm::l2: return "l2";
    case Norm::linf: return "linf";
  }
  return "l2";
}

using DistanceMatrix = std::vector<std::vector<double>>;

// One violated metric axiom. Indices not relevant to the axiom are left at 0.
// For triangle violations, dist[i][j] > dist[i][k] + dist[k][j].
struct MetricViolation {
  ErrorCode code;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  double excess = 0.0;
};

enum class TriangleCheck {
  exact,     // every violation fails
  advisory,  // violations within relative slack are reported, not failed
};

inline constexpr double kTriangleSlack = 1e-12;

struct MetricAudit {
  std::vector<MetricViolation> violations;
  std::vector<MetricViolation> near_violations;

  bool ok() const { return violations.empty(); }
};

class MetricError : public Error {
 public:
  explicit MetricError(std::vector<MetricViolation> violations)
      : Error(violations.empty() ? ErrorCode::invalid_shape : violations.front().code, describe(violations)),
        violations_(std::move(violations)) {}

  const std::vector<MetricViolation>& violations() const noexcept { return violations_; }

 private:
  static std::string describe(const std::vector<MetricViolation>& v) {
    std::string s = std::to_string(v.size()) + " metric axiom violation(s)";
    if (!v.empty()) {
      const auto& f = v.front();
      s += ", first: " + std::string(mmslab::to_string(f.code)) + "(" + std::to_string(f.i) + "," +
           std::to_string(f.j);
      if (f.code == ErrorCode::triangle_violation) s += "," + std::to_string(f.k);
      s += ")";
    }
    return s;
  }

  std::vector<MetricViolation> violations_;
};

// Checks every metric axiom and returns all violations found. Shape errors
// short-circuit since nothing else is meaningful without a square matrix.
inline MetricAudit audit_metric(const DistanceMatrix& m, TriangleCheck mode = TriangleCheck::exact) {
  MetricAudit audit;
  const std::size_t n = m.size();
  if (n < 2) {
    audit.violations.push_back({ErrorCode::invalid_shape, n, 0, 0, 0.0});
    return audit;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) {
      audit.violations.push_back({ErrorCode::invalid_shape, i, m[i].size(), 0, 0.0});
    }
  }
  if (!audit.violations.empty()) return audit;

  bool entries_ok = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = m[i][j];
      if (!std::isfinite(d)) {
        audit.violations.push_back({ErrorCode::non_finite_entry, i, j, 0, 0.0});
        entries_ok = false;
      } else if (d < 0.0) {
        audit.violations.push_back({ErrorCode::negative_distance, i, j, 0, -d});
        entries_ok = false;
      }
    }
  }
  if (!entries_ok) return audit;

  for (std::size_t i = 0; i < n; ++i) {
    if (m[i][i] != 0.0) audit.violations.push_back({ErrorCode::nonzero_diagonal, i, i, 0, m[i][i]});
    for (std::size_t j = i + 1; j < n; ++j) {
      if (m[i][j] != m[j][i]) {
        audit.violations.push_back({ErrorCode::asymmetric_matrix, i, j, 0, std::abs(m[i][j] - m[j][i])});
      } else if (m[i][j] == 0.0) {
        audit.violations.push_back({ErrorCode::duplicate_points, i, j, 0, 0.0});
      }
    }
  }
  if (!audit.violations.empty()) return audit;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double detour = m[i][k] + m[k][j];
        if (m[i][j] > detour) {
          const double excess = m[i][j] - detour;
          MetricViolation v{ErrorCode::triangle_violation, i, j, k, excess};
          if (mode == TriangleCheck::advisory && excess <= kTriangleSlack * detour) {
            audit.near_violations.push_back(v);
          } else {
            audit.violations.push_back(v);
          }
        }
      }
    }
  }
  return audit;
}

// A finite metric space on points 0..n-1. Only obtainable through
// validate_metric or from_point_cloud, so every instance satisfies the axioms.
class FiniteMetricSpace {
 public:
  std::size_t size() const noexcept { return n_; }

  double distance(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }

  std::span<const double> row(std::size_t i) const { return {dist_.data() + i * n_, n_}; }

  const std::vector<std::string>& labels() const noexcept { return labels_; }

  // Near-violations of the triangle inequality tolerated at construction.
  const std::vector<MetricViolation>& near_violations() const noexcept { return near_violations_; }

  double diameter() const { return *std::max_element(dist_.begin(), dist_.end()); }

  DistanceMatrix matrix() const {
    DistanceMatrix m(n_, std::vector<double>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) m[i][j] = distance(i, j);
    return m;
  }

  FiniteMetricSpace with_labels(std::vector<std::string> labels) const {
    if (!labels.empty() && labels.size() != n_)
      throw Error(ErrorCode::dimension_mismatch, "label count does not match point count");
    FiniteMetricSpace copy = *this;
    copy.labels_ = std::move(labels);
    return copy;
  }

 private:
  friend FiniteMetricSpace validate_metric(const DistanceMatrix&, TriangleCheck);

  FiniteMetricSpace(std::size_t n, std::vector<double> dist) : n_(n), dist_(std::move(dist)) {}

  std::size_t n_;
  std::vector<double> dist_;
  std::vector<std::string> labels_;
  std::vector<MetricViolation> near_violations_;
};

inline FiniteMetricSpace validate_metric(const DistanceMatrix& m, TriangleCheck mode = TriangleCheck::exact) {
  MetricAudit audit = audit_metric(m, mode);
  if (!audit.ok()) throw MetricError(std::move(audit.violations));
  const std::size_t n = m.size();
  std::vector<double> flat;
  flat.reserve(n * n);
  for (const auto& row : m) flat.insert(flat.end(), row.begin(), row.end());
  FiniteMetricSpace space(n, std::move(flat));
  space.near_violations_ = std::move(audit.near_violations);
  return space;
}

struct PointCloud {
  std::size_t dim = 1;
  std::vector<std::vector<double>> points;
  Norm norm = Norm::l2;
};

inline double norm_distance(std::span<const double> a, std::span<const double> b, Norm norm) {
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double g = std::abs(a[k] - b[k]);
    switch (norm) {
      case Norm::l1: acc += g; break;
      case Norm::l2: acc += g * g; break;
      case Norm::linf: acc = std::max(acc, g); break;
    }
  }
  return norm == Norm::l2 ? std::sqrt(acc) : acc;
}

// Floating point norms may break the triangle inequality by an ulp, so the
// derived space is validated in advisory mode.
inline FiniteMetricSpace from_point_cloud(const PointCloud& cloud) {
  if (cloud.dim < 1) throw Error(ErrorCode::invalid_shape, "point cloud dimension must be >= 1");
  const std::size_t n = cloud.points.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (cloud.points[i].size() != cloud.dim)
      throw Error(ErrorCode::dimension_mismatch, "point " + std::to_string(i) + " has wrong dimension");
    for (double x : cloud.points[i])
      if (!std::isfinite(x)) throw Error(ErrorCode::non_finite_entry, "point " + std::to_string(i));
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (cloud.points[i] == cloud.points[j])
        throw Error(ErrorCode::duplicate_points,
                    "points " + std::to_string(i) + " and " + std::to_string(j) + " coincide");
  DistanceMatrix m(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      m[i][j] = m[j][i] = norm_distance(cloud.points[i], cloud.points[j], cloud.norm);
  return validate_metric(m, TriangleCheck::advisory);
}

// Indices j with dist(center, j) < radius (open) or <= radius (closed), ascending.
inline std::vector<std::size_t> ball(const FiniteMetricSpace& space, std::size_t center, double radius,
                                     BallKind kind) {
  if (center >= space.size()) throw Error(ErrorCode::index_out_of_range, "ball center out of range");
  if (!(radius > 0.0)) throw Error(ErrorCode::domain_error, "ball radius must be positive");
  std::vector<std::size_t> out;
  const auto row = space.row(center);
  for (std::size_t j = 0; j < row.size(); ++j)
    if (within(row[j], radius, kind)) out.push_back(j);
  return out;
}

// Sorted distinct positive distances plus canonical probes between them.
struct CriticalRadii {
  std::vector<double> values;
  std::vector<double> midpoints;  // below-min, consecutive midpoints, above-max

  std::vector<double> all() const {
    std::vector<double> merged;
    merged.reserve(values.size() + midpoints.size());
    std::merge(values.begin(), values.end(), midpoints.begin(), midpoints.end(), std::back_inserter(merged));
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    return merged;
  }
};

inline std::vector<double> distinct_distances(const FiniteMetricSpace& space) {
  std::vector<double> v;
  v.reserve(space.size() * (space.size() - 1) / 2);
  for (std::size_t i = 0; i < space.size(); ++i)
    for (std::size_t j = i + 1; j < space.size(); ++j) v.push_back(space(i, j));
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

// Probe radii for a sorted breakpoint list: half the smallest, the midpoint of
// every consecutive pair, and one value beyond the largest.
inline std::vector<double> probe_points(const std::vector<double>& breakpoints) {
  std::vector<double> probes;
  if (breakpoints.empty()) return probes;
  probes.push_back(breakpoints.front() / 2.0);
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double mid = breakpoints[i] + (breakpoints[i + 1] - breakpoints[i]) / 2.0;
    if (mid > breakpoints[i] && mid < breakpoints[i + 1]) probes.push_back(mid);
  }
  double above = breakpoints.back() + breakpoints.front() / 2.0;
  if (!(above > breakpoints.back())) above = breakpoints.back() * 2.0;
  probes.push_back(above);
  return probes;
}

inline CriticalRadii critical_radii(const FiniteMetricSpace& space) {
  CriticalRadii cr;
  cr.values = distinct_distances(space);
  cr.midpoints = probe_points(cr.values);
  return cr;
}

// Radii at which a family of balls B(x, s*r), s in scales, can change, plus
// probes between them. For a single scale of 1 this is critical_radii().all().
inline std::vector<double> sweep_radii(const FiniteMetricSpace& space, std::span<const double> scales) {
  const auto values = distinct_distances(space);
  std::vector<double> breaks;
  for (double s : scales) {
    for (double v : values) {
      // s * (v / s) may round below v, which would skip the closed ball of radius v
      double r = v / s;
      while (s * r < v) r = std::nextafter(r, INFINITY);
      breaks.push_back(r);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  auto probes = probe_points(breaks);
  breaks.insert(breaks.end(), probes.begin(), probes.end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return breaks;
}

inline std::vector<double> sweep_radii(const FiniteMetricSpace& space, std::initializer_list<double> scales) {
  return sweep_radii(space, std::span<const double>(scales.begin(), scales.size()));
}

}  // namespace mmslab
