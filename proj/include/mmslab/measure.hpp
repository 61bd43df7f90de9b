#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmslab/errors.hpp"
#include "mmslab/metric_space.hpp"

namespace mmslab {

// Nonnegative point masses on 0..n-1, not identically zero.
class PointMeasure {
 public:
  explicit PointMeasure(std::vector<double> weights) : weights_(std::move(weights)) {
    bool any_positive = false;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      const double w = weights_[i];
      if (!std::isfinite(w) || w < 0.0)
        throw Error(ErrorCode::invalid_measure, "weight " + std::to_string(i) + " is negative or not finite");
      any_positive = any_positive || w > 0.0;
    }
    if (!any_positive) throw Error(ErrorCode::invalid_measure, "measure is identically zero");
  }

  static PointMeasure uniform(std::size_t n, double mass = 1.0) { return PointMeasure(std::vector<double>(n, mass)); }

  static PointMeasure dirac(std::size_t n, std::size_t at, double mass = 1.0) {
    if (at >= n) throw Error(ErrorCode::index_out_of_range, "dirac location out of range");
    std::vector<double> w(n, 0.0);
    w[at] = mass;
    return PointMeasure(std::move(w));
  }

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  std::span<const double> weights() const noexcept { return weights_; }

  double total_mass() const {
    double acc = 0.0;
    for (double w : weights_) acc += w;
    return acc;
  }

 private:
  std::vector<double> weights_;
};

inline void require_compatible(const FiniteMetricSpace& space, const PointMeasure& mu) {
  if (space.size() != mu.size())
    throw Error(ErrorCode::dimension_mismatch, "measure has " + std::to_string(mu.size()) + " weights for a " +
                                                   std::to_string(space.size()) + "-point space");
}

// Positive-weight points, ascending.
inline std::vector<std::size_t> support(const PointMeasure& mu) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i] > 0.0) s.push_back(i);
  return s;
}

// Sum of weights over the given indices, accumulated in the order given
// (ascending when the indices come from ball()).
inline double ball_measure(const PointMeasure& mu, std::span<const std::size_t> indices) {
  double acc = 0.0;
  for (std::size_t i : indices) {
    if (i >= mu.size()) throw Error(ErrorCode::index_out_of_range, "ball index out of range");
    acc += mu[i];
  }
  return acc;
}

// mu(B(center, radius)) without materializing the ball. Same accumulation
// order as ball_measure(mu, ball(...)).
inline double ball_mass(const FiniteMetricSpace& space, const PointMeasure& mu, std::size_t center, double radius,
                        BallKind kind) {
  const auto row = space.row(center);
  double acc = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j)
    if (within(row[j], radius, kind)) acc += mu[j];
  return acc;
}

inline PointMeasure weighted_diracs(const FiniteMetricSpace& space, std::span<const std::size_t> centers,
                                    std::span<const double> masses) {
  if (centers.size() != masses.size())
    throw Error(ErrorCode::dimension_mismatch, "centers and masses differ in length");
  std::vector<double> w(space.size(), 0.0);
  for (std::size_t k = 0; k < centers.size(); ++k) {
    if (centers[k] >= space.size()) throw Error(ErrorCode::index_out_of_range, "dirac center out of range");
    if (!(masses[k] > 0.0) || !std::isfinite(masses[k]))
      throw Error(ErrorCode::invalid_measure, "dirac masses must be positive and finite");
    w[centers[k]] += masses[k];
  }
  return PointMeasure(std::move(w));
}

}  // namespace mmslab
