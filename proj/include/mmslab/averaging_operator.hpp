#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmslab/errors.hpp"
#include "mmslab/measure.hpp"
#include "mmslab/metric_space.hpp"

namespace mmslab {

// Parameters of the modified averaging operator: integrate over B(x, t*r),
// normalize by mu(B(x, r)). t > 1 is superaveraging, t < 1 subaveraging.
struct OperatorSpec {
  double t;
  double r;
  BallKind kind;

  OperatorSpec(double t_, double r_, BallKind kind_) : t(t_), r(r_), kind(kind_) {
    if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::domain_error, "expansion factor t must be positive");
    if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::domain_error, "radius r must be positive");
  }

  double outer_radius() const { return t * r; }
  bool subaveraging() const { return t < 1.0; }
  bool superaveraging() const { return t > 1.0; }
};

// A function known only on supp(mu); values[k] belongs to points[k].
struct SupportFunction {
  std::vector<std::size_t> points;
  std::vector<double> values;

  std::optional<double> at(std::size_t point) const {
    auto it = std::lower_bound(points.begin(), points.end(), point);
    if (it == points.end() || *it != point) return std::nullopt;
    return values[static_cast<std::size_t>(it - points.begin())];
  }
};

// Explicit matrix of the operator restricted to supp(mu), row-major.
// entry(x, y) = [y in B(x, t r)] * w[y] / mu(B(x, r)).
struct OperatorMatrix {
  std::vector<std::size_t> support;
  std::vector<double> entries;

  std::size_t size() const { return support.size(); }
  double operator()(std::size_t row, std::size_t col) const { return entries[row * support.size() + col]; }
  double& operator()(std::size_t row, std::size_t col) { return entries[row * support.size() + col]; }

  // Matrix-vector product; f is indexed by point, not by support position.
  SupportFunction multiply(std::span<const double> f) const {
    SupportFunction out{support, std::vector<double>(support.size(), 0.0)};
    for (std::size_t a = 0; a < support.size(); ++a) {
      double acc = 0.0;
      for (std::size_t b = 0; b < support.size(); ++b) acc += (*this)(a, b) * f[support[b]];
      out.values[a] = acc;
    }
    return out;
  }
};

struct NormCertificate {
  double value = 0.0;
  std::size_t argmax = 0;  // point index attaining the maximum (lowest on ties)
};

inline constexpr double kCrossCheckTolerance = 1e-12;

inline bool relatively_equal(double a, double b, double rel = kCrossCheckTolerance) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

namespace detail {

inline void require_function(const FiniteMetricSpace& space, std::span<const double> f) {
  if (f.size() != space.size())
    throw Error(ErrorCode::dimension_mismatch, "function length does not match point count");
  for (double v : f)
    if (!std::isfinite(v)) throw Error(ErrorCode::non_finite_entry, "function values must be finite");
}

// mu(B(x, r)) for every support point, in support order.
inline std::vector<double> inner_masses(const FiniteMetricSpace& space, const PointMeasure& mu,
                                        std::span<const std::size_t> supp, const OperatorSpec& spec) {
  std::vector<double> m;
  m.reserve(supp.size());
  for (std::size_t x : supp) m.push_back(ball_mass(space, mu, x, spec.r, spec.kind));
  return m;
}

}  // namespace detail

inline SupportFunction apply(const FiniteMetricSpace& space, const PointMeasure& mu, const OperatorSpec& spec,
                             std::span<const double> f) {
  require_compatible(space, mu);
  detail::require_function(space, f);
  SupportFunction out{support(mu), {}};
  out.values.reserve(out.points.size());
  const double outer = spec.outer_radius();
  for (std::size_t x : out.points) {
    const double denom = ball_mass(space, mu, x, spec.r, spec.kind);
    const auto row = space.row(x);
    double acc = 0.0;
    for (std::size_t y = 0; y < row.size(); ++y)
      if (within(row[y], outer, spec.kind)) acc += f[y] * mu[y];
    out.values.push_back(acc / denom);
  }
  return out;
}

inline OperatorMatrix matrix(const FiniteMetricSpace& space, const PointMeasure& mu, const OperatorSpec& spec) {
  require_compatible(space, mu);
  OperatorMatrix m{support(mu), {}};
  const std::size_t k = m.support.size();
  m.entries.assign(k * k, 0.0);
  const auto inner = detail::inner_masses(space, mu, m.support, spec);
  const double outer = spec.outer_radius();
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      const std::size_t x = m.support[a], y = m.support[b];
      if (within(space(x, y), outer, spec.kind)) m(a, b) = mu[y] / inner[a];
    }
  }
  return m;
}

// a(y) = sum over x in supp(mu) with x in B(y, t r) of w[x] / mu(B(x, r)).
inline SupportFunction conjugate(const FiniteMetricSpace& space, const PointMeasure& mu, const OperatorSpec& spec) {
  require_compatible(space, mu);
  SupportFunction a{support(mu), {}};
  const auto inner = detail::inner_masses(space, mu, a.points, spec);
  const double outer = spec.outer_radius();
  a.values.reserve(a.points.size());
  for (std::size_t y : a.points) {
    double acc = 0.0;
    for (std::size_t b = 0; b < a.points.size(); ++b) {
      const std::size_t x = a.points[b];
      if (within(space(y, x), outer, spec.kind)) acc += mu[x] / inner[b];
    }
    a.values.push_back(acc);
  }
  return a;
}

inline NormCertificate max_of(const SupportFunction& g) {
  NormCertificate c{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t k = 0; k < g.points.size(); ++k) {
    if (g.values[k] > c.value) c = {g.values[k], g.points[k]};
  }
  return c;
}

// Weighted maximum column sum: the L1(mu) -> L1(mu) norm of the matrix,
// max over y of sum_x entry(x, y) * w[x] / w[y].
inline NormCertificate column_sum_norm(const OperatorMatrix& m, const PointMeasure& mu) {
  SupportFunction cols{m.support, std::vector<double>(m.size(), 0.0)};
  for (std::size_t b = 0; b < m.size(); ++b) {
    const double wy = mu[m.support[b]];
    double acc = 0.0;
    for (std::size_t a = 0; a < m.size(); ++a) acc += m(a, b) * mu[m.support[a]] / wy;
    cols.values[b] = acc;
  }
  return max_of(cols);
}

// Both routes to the L1 operator norm, computed independently.
struct L1NormRoutes {
  NormCertificate conjugate_route;
  NormCertificate matrix_route;

  bool agree() const { return relatively_equal(conjugate_route.value, matrix_route.value); }
};

inline L1NormRoutes l1_norm_routes(const FiniteMetricSpace& space, const PointMeasure& mu, const OperatorSpec& spec) {
  return {max_of(conjugate(space, mu, spec)), column_sum_norm(matrix(space, mu, spec), mu)};
}

// ||A||_{L1 -> L1} = max over supp(mu) of the conjugate function. The matrix
// column-sum norm is always computed alongside and must agree.
inline NormCertificate l1_norm(const FiniteMetricSpace& space, const PointMeasure& mu, const OperatorSpec& spec) {
  const auto routes = l1_norm_routes(space, mu, spec);
  if (!routes.agree())
    throw Error(ErrorCode::cross_check_mismatch,
                "conjugate max " + std::to_string(routes.conjugate_route.value) + " vs column-sum norm " +
                    std::to_string(routes.matrix_route.value));
  return routes.conjugate_route;
}

// ||A||_{Linf -> Linf} = max over supp(mu) of mu(B(x, t r)) / mu(B(x, r)).
inline NormCertificate linf_norm(const FiniteMetricSpace& space, const PointMeasure& mu, const OperatorSpec& spec) {
  require_compatible(space, mu);
  SupportFunction ratio{support(mu), {}};
  for (std::size_t x : ratio.points)
    ratio.values.push_back(ball_mass(space, mu, x, spec.outer_radius(), spec.kind) /
                           ball_mass(space, mu, x, spec.r, spec.kind));
  return max_of(ratio);
}

// L^p(mu) norm of a function on the support; p = infinity gives the max of |g|.
inline double norm_on_support(const SupportFunction& g, const PointMeasure& mu, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : g.values) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < g.points.size(); ++k) acc += std::pow(std::abs(g.values[k]), p) * mu[g.points[k]];
  return std::pow(acc, 1.0 / p);
}

struct LpBounds {
  double p = 2.0;
  double lower = 0.0;
  double upper = 0.0;
  std::optional<std::size_t> lower_probe;  // point of the best indicator probe; empty = constant probe
};

// Bracket for ||A||_{Lp -> Lp}, 1 < p < inf. Lower: best of the normalized
// point indicators and the normalized constant. Upper: ||A||_1^{1/p} ||A||_inf^{1-1/p}.
inline LpBounds lp_norm_bounds(const FiniteMetricSpace& space, const PointMeasure& mu, const OperatorSpec& spec,
                               double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorCode::invalid_exponent, "p must lie in (1, inf)");
  const auto m = matrix(space, mu, spec);
  const std::size_t k = m.size();
  LpBounds out;
  out.p = p;

  for (std::size_t b = 0; b < k; ++b) {
    const double scale = std::pow(mu[m.support[b]], -1.0 / p);
    double acc = 0.0;
    for (std::size_t a = 0; a < k; ++a) acc += std::pow(m(a, b) * scale, p) * mu[m.support[a]];
    const double value = std::pow(acc, 1.0 / p);
    if (value > out.lower) {
      out.lower = value;
      out.lower_probe = m.support[b];
    }
  }

  const std::vector<double> ones(space.size(), 1.0);
  const auto image = apply(space, mu, spec, ones);
  double supp_mass = 0.0;
  for (std::size_t x : m.support) supp_mass += mu[x];
  const double constant_probe = norm_on_support(image, mu, p) / std::pow(supp_mass, 1.0 / p);
  if (constant_probe > out.lower) {
    out.lower = constant_probe;
    out.lower_probe.reset();
  }

  const double l1 = l1_norm(space, mu, spec).value;
  const double linf = linf_norm(space, mu, spec).value;
  out.upper = std::pow(l1, 1.0 / p) * std::pow(linf, 1.0 - 1.0 / p);
  if (out.lower > out.upper) {
    if (!relatively_equal(out.lower, out.upper))
      throw Error(ErrorCode::cross_check_mismatch, "Lp probe lower bound exceeds interpolation upper bound");
    out.upper = out.lower;
  }
  return out;
}

}  // namespace mmslab
