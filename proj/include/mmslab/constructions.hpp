#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mmslab/averaging_operator.hpp"
#include "mmslab/errors.hpp"
#include "mmslab/measure.hpp"
#include "mmslab/metric_space.hpp"
#include "mmslab/nets_covers.hpp"

namespace mmslab {

// Truncation of {0, 1/2} x {1, 2, ...} in the euclidean plane. The column
// x = 1/2 carries counting measure; (0, n) carries mass 1/n.
// Point (0, n) has index 2(n-1) and (1/2, n) has index 2(n-1)+1.
struct SmallballsInstance {
  std::size_t N = 0;
  PointCloud cloud;
  FiniteMetricSpace space;
  PointMeasure measure;

  static std::size_t left(std::size_t n) { return 2 * (n - 1); }
  static std::size_t right(std::size_t n) { return 2 * (n - 1) + 1; }
};

inline SmallballsInstance make_smallballs(std::size_t N) {
  if (N < 1) throw Error(ErrorCode::invalid_n, "truncation level must be >= 1");
  PointCloud cloud{2, {}, Norm::l2};
  std::vector<double> weights;
  std::vector<std::string> labels;
  for (std::size_t n = 1; n <= N; ++n) {
    const double y = static_cast<double>(n);
    cloud.points.push_back({0.0, y});
    cloud.points.push_back({0.5, y});
    weights.push_back(1.0 / y);
    weights.push_back(1.0);
    labels.push_back("(0," + std::to_string(n) + ")");
    labels.push_back("(1/2," + std::to_string(n) + ")");
  }
  auto space = from_point_cloud(cloud).with_labels(std::move(labels));
  return {N, std::move(cloud), std::move(space), PointMeasure(std::move(weights))};
}

// Lattice {lo..hi}^dim / denominator. Distances come from the integer offsets
// (norm of the offset divided once by the denominator), so equal offsets give
// bit-identical distances and steps like 0.1 keep their ties.
struct GridSpec {
  std::size_t dim = 1;
  long lo = -10;
  long hi = 10;
  long denominator = 10;
  Norm norm = Norm::l2;
};

struct GridInstance {
  PointCloud cloud;
  FiniteMetricSpace space;
  std::vector<std::vector<long>> lattice;  // integer coordinates per point
};

inline GridInstance make_grid(const GridSpec& g) {
  if (g.dim < 1 || g.hi < g.lo || g.denominator < 1)
    throw Error(ErrorCode::domain_error, "grid needs dim >= 1, lo <= hi and a positive denominator");
  const std::size_t side = static_cast<std::size_t>(g.hi - g.lo + 1);
  std::size_t total = 1;
  for (std::size_t k = 0; k < g.dim; ++k) total *= side;
  if (total < 2) throw Error(ErrorCode::invalid_shape, "grid must contain at least two points");

  PointCloud cloud{g.dim, {}, g.norm};
  std::vector<std::vector<long>> lattice;
  std::vector<long> idx(g.dim, g.lo);
  for (std::size_t p = 0; p < total; ++p) {
    lattice.push_back(idx);
    std::vector<double> coords;
    for (long v : idx) coords.push_back(static_cast<double>(v) / static_cast<double>(g.denominator));
    cloud.points.push_back(std::move(coords));
    for (std::size_t k = 0; k < g.dim; ++k) {
      if (++idx[k] <= g.hi) break;
      idx[k] = g.lo;
    }
  }
  const double den = static_cast<double>(g.denominator);
  DistanceMatrix m(total, std::vector<double>(total, 0.0));
  for (std::size_t i = 0; i < total; ++i) {
    for (std::size_t j = i + 1; j < total; ++j) {
      long l1 = 0, linf = 0, sq = 0;
      for (std::size_t k = 0; k < g.dim; ++k) {
        const long d = std::labs(lattice[i][k] - lattice[j][k]);
        l1 += d;
        linf = std::max(linf, d);
        sq += d * d;
      }
      double d = 0.0;
      switch (g.norm) {
        case Norm::l1: d = static_cast<double>(l1) / den; break;
        case Norm::linf: d = static_cast<double>(linf) / den; break;
        case Norm::l2: d = std::sqrt(static_cast<double>(sq)) / den; break;
      }
      m[i][j] = m[j][i] = d;
    }
  }
  return {std::move(cloud), validate_metric(m, TriangleCheck::advisory), std::move(lattice)};
}

// Index of the grid point with the given integer coordinates.
inline std::size_t grid_index(const GridSpec& g, const std::vector<long>& coords) {
  std::size_t idx = 0, stride = 1;
  const std::size_t side = static_cast<std::size_t>(g.hi - g.lo + 1);
  for (std::size_t k = 0; k < g.dim; ++k) {
    if (coords[k] < g.lo || coords[k] > g.hi) throw Error(ErrorCode::index_out_of_range, "coordinate off the grid");
    idx += static_cast<std::size_t>(coords[k] - g.lo) * stride;
    stride *= side;
  }
  return idx;
}

// The measure c delta_x + sum_j delta_{y_j} built on a net {y_j} inside
// B(x, r), together with the checks the boundedness argument relies on.
struct AdversarialInstance {
  std::size_t x = 0;
  double r = 0.0;
  double t = 0.0;
  double s = 0.0;  // operator radius r / t
  double c = 0.0;
  BallKind kind = BallKind::closed;
  std::vector<std::size_t> net;
  PointMeasure measure;
  std::vector<double> probe;  // f_c = (1/c) 1_{x}

  std::vector<double> denominators;  // mu_c(B(y_j, s)), in [1, 1 + c]
  std::vector<bool> x_in_outer_ball;  // x in B(y_j, t s)
  std::vector<double> values;         // A f_c (y_j), in [1/(1+c), 1]
  double probe_l1 = 0.0;              // ||f_c||_{L1(mu_c)} = 1
  double image_l1 = 0.0;              // ||A f_c||_{L1(mu_c)}
  double lower_bound = 0.0;           // m / (1 + c)

  std::size_t m() const { return net.size(); }

  bool denominators_hold() const {
    return std::all_of(denominators.begin(), denominators.end(),
                       [&](double d) { return d >= 1.0 && d <= (1.0 + c) * (1.0 + 1e-12); });
  }
  bool memberships_hold() const {
    return std::all_of(x_in_outer_ball.begin(), x_in_outer_ball.end(), [](bool b) { return b; });
  }
  bool values_hold() const {
    return std::all_of(values.begin(), values.end(), [&](double v) {
      return v <= 1.0 + 1e-12 && v >= (1.0 / (1.0 + c)) * (1.0 - 1e-12);
    });
  }
  bool chain_holds() const { return image_l1 >= lower_bound * (1.0 - 1e-12); }
  bool all_hold() const {
    return denominators_hold() && memberships_hold() && values_hold() && chain_holds() &&
           std::abs(probe_l1 - 1.0) <= 1e-12;
  }
};

inline AdversarialInstance make_adversarial(const FiniteMetricSpace& space, std::size_t x, double r, double t,
                                            double c, BallKind kind = BallKind::closed) {
  if (x >= space.size()) throw Error(ErrorCode::index_out_of_range, "distinguished point out of range");
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::domain_error, "r must be positive");
  if (!(t > 1.0 && t < 2.0)) throw Error(ErrorCode::domain_error, "t must lie in (1, 2)");
  if (!(c > 0.0 && c < 1.0)) throw Error(ErrorCode::domain_error, "c must lie in (0, 1)");

  // t * (r / t) can round below r; nudge s up so that B(x, r) sits inside B(y, t s).
  double s = r / t;
  while (t * s < r) s = std::nextafter(s, INFINITY);
  AdversarialInstance a{x, r, t, s, c, kind, {}, PointMeasure::dirac(space.size(), x, c), {}, {}, {}, {}};
  std::vector<std::size_t> ambient;
  for (std::size_t p : ball(space, x, r, kind))
    if (p != x) ambient.push_back(p);
  if (ambient.empty()) throw Error(ErrorCode::empty_net, "B(x, r) contains no point besides x");
  a.net = greedy_maximal_net(space, ambient, a.s, default_net_kind(kind)).points;

  std::vector<std::size_t> centers{x};
  std::vector<double> masses{c};
  for (std::size_t y : a.net) {
    centers.push_back(y);
    masses.push_back(1.0);
  }
  a.measure = weighted_diracs(space, centers, masses);
  a.probe.assign(space.size(), 0.0);
  a.probe[x] = 1.0 / c;

  const OperatorSpec spec(t, a.s, kind);
  const auto image = apply(space, a.measure, spec, a.probe);
  for (std::size_t y : a.net) {
    a.denominators.push_back(ball_mass(space, a.measure, y, a.s, kind));
    a.x_in_outer_ball.push_back(within(space(y, x), spec.outer_radius(), kind) && within(space(y, x), r, kind));
    a.values.push_back(*image.at(y));
  }
  a.probe_l1 = a.probe[x] * a.measure[x];
  a.image_l1 = norm_on_support(image, a.measure, 1.0);
  a.lower_bound = static_cast<double>(a.m()) / (1.0 + c);
  return a;
}

// Every adversarial instance over the centers and the radius sweep of the space.
struct AdversarialSweep {
  double t = 1.5;
  double c = 1e-3;
  BallKind kind = BallKind::closed;
  std::size_t instances = 0;
  std::size_t failures = 0;       // instances violating one of the checks
  double max_image_l1 = 0.0;      // largest ||A f_c||_{L1}
  std::size_t max_net = 0;        // largest net size m
  std::size_t witness_x = 0;
  double witness_r = 0.0;
};

inline AdversarialSweep adversarial_sweep(const FiniteMetricSpace& space, BallKind kind, double t, double c) {
  AdversarialSweep out;
  out.t = t;
  out.c = c;
  out.kind = kind;
  for (double r : sweep_radii(space, {1.0, 1.0 / t})) {
    for (std::size_t x = 0; x < space.size(); ++x) {
      if (ball(space, x, r, kind).size() < 2) continue;
      const auto a = make_adversarial(space, x, r, t, c, kind);
      ++out.instances;
      if (!a.all_hold()) ++out.failures;
      out.max_net = std::max(out.max_net, a.m());
      if (a.image_l1 > out.max_image_l1) {
        out.max_image_l1 = a.image_l1;
        out.witness_x = x;
        out.witness_r = r;
      }
    }
  }
  return out;
}

struct DoublingBound {
  double t = 1.5;
  double C = 1.0;
  long exponent = 0;        // ceil(1 / log2 t)
  std::uint64_t bound = 0;  // floor(C^exponent)
};

// Bound on the doubling constant of a space on which every superaveraging
// operator with this t has L1 norm at most C.
inline DoublingBound doubling_bound_from_norms(double t, double C) {
  if (!(t > 1.0 && t < 2.0)) throw Error(ErrorCode::domain_error, "t must lie in (1, 2)");
  if (!(C >= 1.0) || !std::isfinite(C)) throw Error(ErrorCode::domain_error, "C must be a finite value >= 1");
  DoublingBound b{t, C, guarded_ceil(1.0 / std::log2(t)), 0};
  const double raw = std::pow(C, static_cast<double>(b.exponent));
  if (raw >= 1.8e19) throw Error(ErrorCode::domain_error, "bound overflows");
  const double nearest = std::round(raw);
  const double floored = (nearest > raw && nearest - raw <= 1e-12 * nearest) ? nearest : std::floor(raw);
  b.bound = static_cast<std::uint64_t>(floored);
  return b;
}

// Companion to doubling_bound_from_norms on a concrete space: the adversarial
// nets must respect C (m <= C) on every enumerated ball.
struct DoublingBoundCheck {
  DoublingBound bound;
  std::size_t max_net = 0;
  bool nets_respect_C = false;
};

inline DoublingBoundCheck doubling_bound_from_norms(const FiniteMetricSpace& space, BallKind kind, double t,
                                                    double C) {
  DoublingBoundCheck out{doubling_bound_from_norms(t, C), 0, false};
  // Net sizes do not depend on the mass parameter.
  out.max_net = adversarial_sweep(space, kind, t, 0.5).max_net;
  out.nets_respect_C = static_cast<double>(out.max_net) <= C;
  return out;
}

struct MeasureDoublingEntry {
  double t = 2.0;
  double C = 0.0;  // max over supp and radii of mu(B(x, t r)) / mu(B(x, r))
  std::size_t witness_x = 0;
  double witness_r = 0.0;
};

struct DoublingAeReport {
  BallKind kind = BallKind::closed;
  std::vector<MeasureDoublingEntry> entries;  // t = 2 first, then requested values
  bool bounded = true;                        // always true on a finite space
};

// Sup of mu(B(x, t r)) / mu(B(x, r)) over supp(mu) and every radius at which
// either ball changes. Equals the sup over r of the Linf operator norms.
inline DoublingAeReport doubling_ae_diagnostic(const FiniteMetricSpace& space, const PointMeasure& mu, BallKind kind,
                                               std::vector<double> ts = {}) {
  require_compatible(space, mu);
  if (std::find(ts.begin(), ts.end(), 2.0) == ts.end()) ts.insert(ts.begin(), 2.0);
  DoublingAeReport rep;
  rep.kind = kind;
  const auto supp = support(mu);
  for (double t : ts) {
    if (!(t > 1.0) || !std::isfinite(t)) throw Error(ErrorCode::domain_error, "t must exceed 1");
    MeasureDoublingEntry e{t, 0.0, 0, 0.0};
    for (double r : sweep_radii(space, {1.0, t})) {
      for (std::size_t x : supp) {
        const double ratio = ball_mass(space, mu, x, t * r, kind) / ball_mass(space, mu, x, r, kind);
        if (ratio > e.C) e = {t, ratio, x, r};
      }
    }
    rep.bounded = rep.bounded && std::isfinite(e.C);
    rep.entries.push_back(e);
  }
  return rep;
}

// Large-radius regime of the smallballs example: with closed balls and
// r >= 1/2 every ball has mass >= 1, so the Linf norm is at most the largest
// mass of a ball of radius t r.
struct SmallballsRegime {
  double r = 0.5;
  double t = 2.0;
  double min_inner_mass = 0.0;
  double max_outer_mass = 0.0;
  double linf = 0.0;
  bool bounded = false;
};

inline SmallballsRegime smallballs_regime(const SmallballsInstance& inst, double r, double t) {
  SmallballsRegime out{r, t, std::numeric_limits<double>::infinity(), 0.0, 0.0, false};
  for (std::size_t x = 0; x < inst.space.size(); ++x) {
    out.min_inner_mass = std::min(out.min_inner_mass, ball_mass(inst.space, inst.measure, x, r, BallKind::closed));
    out.max_outer_mass = std::max(out.max_outer_mass, ball_mass(inst.space, inst.measure, x, t * r, BallKind::closed));
  }
  out.linf = linf_norm(inst.space, inst.measure, OperatorSpec(t, r, BallKind::closed)).value;
  out.bounded = out.min_inner_mass >= 1.0 && out.linf <= out.max_outer_mass / out.min_inner_mass;
  return out;
}

}  // namespace mmslab
