#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmslab/errors.hpp"
#include "mmslab/metric_space.hpp"
#include "mmslab/search.hpp"

namespace mmslab {

enum class NetKind { strict, non_strict };

inline const char* to_string(NetKind kind) { return kind == NetKind::strict ? "strict" : "non-strict"; }

// Nets are strict with closed balls and non-strict with open balls, so that
// half-radius balls around net points are disjoint.
inline NetKind default_net_kind(BallKind kind) {
  return kind == BallKind::closed ? NetKind::strict : NetKind::non_strict;
}

inline bool separated(double distance, double radius, NetKind kind) {
  return kind == NetKind::strict ? distance > radius : distance >= radius;
}

inline bool is_net(const FiniteMetricSpace& space, std::span<const std::size_t> points, double radius, NetKind kind) {
  for (std::size_t a = 0; a < points.size(); ++a)
    for (std::size_t b = a + 1; b < points.size(); ++b)
      if (points[a] == points[b] || !separated(space(points[a], points[b]), radius, kind)) return false;
  return true;
}

struct BallSpec {
  std::size_t center = 0;
  double radius = 1.0;
  BallKind kind = BallKind::closed;
};

enum class SearchMode { exact, greedy };

inline const char* to_string(SearchMode mode) { return mode == SearchMode::exact ? "exact" : "greedy"; }

struct SearchOptions {
  std::uint64_t node_budget = kDefaultNodeBudget;
  bool fail_on_budget = false;  // throw instead of downgrading to optimal=false
};

struct NetReport {
  double radius = 0.0;
  NetKind kind = NetKind::strict;
  std::optional<BallSpec> ambient;  // empty when built over an explicit index set
  std::vector<std::size_t> points;
  std::size_t cardinality = 0;
  bool maximal = false;
  bool optimal = false;
  std::uint64_t nodes = 0;
};

struct CoverCertificate {
  std::uint64_t nodes = 0;
  std::size_t root_lower_bound = 0;
  bool exhausted = false;  // true: no cover with size-1 centers exists
};

struct CoverReport {
  BallSpec ambient;
  double cover_radius = 0.0;
  std::vector<std::size_t> centers;
  std::size_t size = 0;
  SearchMode method = SearchMode::greedy;
  bool optimal = false;
  CoverCertificate certificate;
};

namespace detail {

inline void require_radius(double r, const char* what) {
  if (!(r > 0.0) || std::isnan(r)) throw Error(ErrorCode::domain_error, std::string(what) + " must be positive");
}

// True when no point of `ambient` outside the net could be added.
inline bool net_is_maximal(const FiniteMetricSpace& space, std::span<const std::size_t> ambient,
                           std::span<const std::size_t> net, double radius, NetKind kind) {
  for (std::size_t p : ambient) {
    if (std::find(net.begin(), net.end(), p) != net.end()) continue;
    bool blocked = false;
    for (std::size_t q : net)
      if (!separated(space(p, q), radius, kind)) {
        blocked = true;
        break;
      }
    if (!blocked) return false;
  }
  return true;
}

inline std::vector<Bitset> conflict_graph(const FiniteMetricSpace& space, std::span<const std::size_t> pts,
                                          double radius, NetKind kind) {
  std::vector<Bitset> adj(pts.size(), Bitset(pts.size()));
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b)
      if (!separated(space(pts[a], pts[b]), radius, kind)) {
        adj[a].set(b);
        adj[b].set(a);
      }
  return adj;
}

}  // namespace detail

// Scans `ambient` in ascending order and keeps every point separated from all
// points kept so far. The result is maximal by construction.
inline NetReport greedy_maximal_net(const FiniteMetricSpace& space, std::span<const std::size_t> ambient,
                                    double radius, NetKind kind) {
  detail::require_radius(radius, "net radius");
  if (ambient.empty()) throw Error(ErrorCode::domain_error, "ambient set is empty");
  std::vector<std::size_t> order(ambient.begin(), ambient.end());
  for (std::size_t p : order)
    if (p >= space.size()) throw Error(ErrorCode::index_out_of_range, "ambient index out of range");
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  NetReport r;
  r.radius = radius;
  r.kind = kind;
  for (std::size_t p : order) {
    bool ok = true;
    for (std::size_t q : r.points)
      if (!separated(space(p, q), radius, kind)) {
        ok = false;
        break;
      }
    if (ok) r.points.push_back(p);
  }
  r.cardinality = r.points.size();
  r.maximal = detail::net_is_maximal(space, order, r.points, radius, kind);
  // A single point is optimal only when every pair of ambient points conflicts.
  r.optimal = r.cardinality == 1 &&
              std::all_of(order.begin(), order.end(), [&](std::size_t p) {
                return std::all_of(order.begin(), order.end(), [&](std::size_t q) {
                  return p == q || !separated(space(p, q), radius, kind);
                });
              });
  return r;
}

// Largest net of the given radius inside the ball. Exact mode solves maximum
// independent set on the conflict graph; greedy mode returns a maximal net.
inline NetReport max_net_in_ball(const FiniteMetricSpace& space, const BallSpec& b, double net_radius, NetKind kind,
                                 SearchMode mode = SearchMode::exact, const SearchOptions& opts = {}) {
  detail::require_radius(net_radius, "net radius");
  const auto pts = ball(space, b.center, b.radius, b.kind);
  if (mode == SearchMode::greedy) {
    NetReport r = greedy_maximal_net(space, pts, net_radius, kind);
    r.ambient = b;
    return r;
  }
  const auto adj = detail::conflict_graph(space, pts, net_radius, kind);
  Bitset all(pts.size());
  for (std::size_t a = 0; a < pts.size(); ++a) all.set(a);
  const SearchResult s = max_independent_set(adj, all, opts.node_budget);
  if (!s.optimal && opts.fail_on_budget)
    throw Error(ErrorCode::exact_search_budget_exceeded, "maximum net search exceeded its node budget");

  NetReport r;
  r.radius = net_radius;
  r.kind = kind;
  r.ambient = b;
  for (std::size_t a : s.chosen) r.points.push_back(pts[a]);
  r.cardinality = r.points.size();
  r.maximal = detail::net_is_maximal(space, pts, r.points, net_radius, kind);
  r.optimal = s.optimal;
  r.nodes = s.nodes;
  if (!is_net(space, r.points, net_radius, kind))
    throw Error(ErrorCode::cross_check_mismatch, "net search returned a non-net");
  return r;
}

namespace detail {

// Removes empty sets and sets contained in another one (on ties the lower
// index survives). Returns surviving original indices.
inline std::vector<std::size_t> undominated(const std::vector<Bitset>& sets) {
  std::vector<std::size_t> keep;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    if (sets[s].none()) continue;
    bool dominated = false;
    for (std::size_t o = 0; o < sets.size() && !dominated; ++o) {
      if (o == s || !sets[s].subset_of(sets[o])) continue;
      dominated = !(sets[o] == sets[s]) || o < s;
    }
    if (!dominated) keep.push_back(s);
  }
  return keep;
}

// Covers `universe` with the given candidate sets; `labels[k]` names set k.
inline CoverReport solve_cover(const std::vector<Bitset>& sets, const Bitset& universe,
                               std::span<const std::size_t> labels, SearchMode mode, const SearchOptions& opts) {
  CoverReport r;
  r.method = mode;
  Bitset uncovered = universe;
  for (const auto& s : sets) uncovered.subtract(s);
  if (!uncovered.none())
    throw Error(ErrorCode::uncoverable, "ball point " + std::to_string(uncovered.first()) +
                                            " (local index) lies in no candidate ball");

  if (mode == SearchMode::greedy) {
    for (std::size_t s : greedy_set_cover(sets, universe)) r.centers.push_back(labels[s]);
    r.optimal = r.centers.size() <= 1;
  } else {
    const auto keep = undominated(sets);
    std::vector<Bitset> reduced;
    reduced.reserve(keep.size());
    for (std::size_t s : keep) reduced.push_back(sets[s]);
    const SearchResult sr = min_set_cover(reduced, universe, opts.node_budget);
    if (!sr.optimal && opts.fail_on_budget)
      throw Error(ErrorCode::exact_search_budget_exceeded, "cover search exceeded its node budget");
    for (std::size_t s : sr.chosen) r.centers.push_back(labels[keep[s]]);
    r.optimal = sr.optimal;
    r.certificate = {sr.nodes, sr.root_bound, sr.optimal};
  }
  std::sort(r.centers.begin(), r.centers.end());
  r.size = r.centers.size();
  return r;
}

}  // namespace detail

// Fewest balls B(c, cover_radius), c in candidates, covering the ambient ball.
// Cover balls share the ambient ball's kind. Empty candidates means all points.
inline CoverReport min_cover_of_ball(const FiniteMetricSpace& space, const BallSpec& b, double cover_radius,
                                     std::span<const std::size_t> candidates = {},
                                     SearchMode mode = SearchMode::exact, const SearchOptions& opts = {}) {
  detail::require_radius(cover_radius, "cover radius");
  const auto pts = ball(space, b.center, b.radius, b.kind);
  std::vector<std::size_t> cands(candidates.begin(), candidates.end());
  if (cands.empty())
    for (std::size_t i = 0; i < space.size(); ++i) cands.push_back(i);
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

  std::vector<Bitset> sets;
  sets.reserve(cands.size());
  for (std::size_t c : cands) {
    if (c >= space.size()) throw Error(ErrorCode::index_out_of_range, "candidate center out of range");
    Bitset s(pts.size());
    for (std::size_t a = 0; a < pts.size(); ++a)
      if (within(space(c, pts[a]), cover_radius, b.kind)) s.set(a);
    sets.push_back(std::move(s));
  }
  Bitset universe(pts.size());
  for (std::size_t a = 0; a < pts.size(); ++a) universe.set(a);

  CoverReport r = detail::solve_cover(sets, universe, cands, mode, opts);
  r.ambient = b;
  r.cover_radius = cover_radius;

  for (std::size_t p : pts) {
    const bool covered = std::any_of(r.centers.begin(), r.centers.end(),
                                     [&](std::size_t c) { return within(space(c, p), cover_radius, b.kind); });
    if (!covered) throw Error(ErrorCode::cross_check_mismatch, "cover search returned a non-cover");
  }
  return r;
}

struct CoverInstance {
  std::size_t center = 0;
  double radius = 0.0;
  std::size_t cover_number = 0;
  bool optimal = false;
};

enum class CenterPolicy {
  space_points,   // cover balls centered at points of the space
  ambient_boxes,  // closed sup-norm boxes placed anywhere in the ambient R^d
};

inline const char* to_string(CenterPolicy p) {
  return p == CenterPolicy::space_points ? "space_points" : "ambient_boxes";
}

struct DoublingReport {
  BallKind kind = BallKind::closed;
  double contraction = 0.5;
  CenterPolicy centers = CenterPolicy::space_points;
  std::size_t D = 0;
  std::size_t witness_center = 0;
  double witness_radius = 0.0;
  std::vector<std::size_t> witness_cover;  // indices for space_points; unused for ambient boxes
  bool exact = true;
  std::vector<CoverInstance> instances;
};

namespace detail {

inline void require_contraction(double c) {
  if (!(c > 0.0 && c < 1.0)) throw Error(ErrorCode::domain_error, "contraction must lie in (0, 1)");
}

inline void record(DoublingReport& rep, std::size_t x, double r, const CoverReport& cov) {
  rep.instances.push_back({x, r, cov.size, cov.optimal});
  rep.exact = rep.exact && cov.optimal;
  if (cov.size > rep.D) {
    rep.D = cov.size;
    rep.witness_center = x;
    rep.witness_radius = r;
    rep.witness_cover = cov.centers;
  }
}

}  // namespace detail

// Largest covering number of B(x, r) by balls of radius contraction*r over
// every center and every radius at which either ball family changes.
inline DoublingReport doubling_constant(const FiniteMetricSpace& space, BallKind kind, double contraction = 0.5,
                                        SearchMode mode = SearchMode::exact, const SearchOptions& opts = {}) {
  detail::require_contraction(contraction);
  DoublingReport rep;
  rep.kind = kind;
  rep.contraction = contraction;
  rep.exact = mode == SearchMode::exact;
  const auto radii = sweep_radii(space, {1.0, contraction});
  for (std::size_t x = 0; x < space.size(); ++x) {
    for (double r : radii) {
      const auto cov = min_cover_of_ball(space, {x, r, kind}, contraction * r, {}, mode, opts);
      detail::record(rep, x, r, cov);
    }
  }
  return rep;
}

// Doubling sweep for a point cloud where the covering balls are closed
// sup-norm boxes of half-side contraction*r centered anywhere in R^d, while
// the balls being covered are balls of the finite space. Restricted to closed
// balls with the sup norm (or d = 1), where it suffices to try boxes whose
// lower corner sits at point coordinates on every axis.
inline DoublingReport box_doubling_constant(const PointCloud& cloud, const FiniteMetricSpace& space,
                                            double contraction = 0.5, SearchMode mode = SearchMode::exact,
                                            const SearchOptions& opts = {}) {
  detail::require_contraction(contraction);
  if (cloud.points.size() != space.size())
    throw Error(ErrorCode::dimension_mismatch, "point cloud and space differ in size");
  if (cloud.norm != Norm::linf && cloud.dim != 1)
    throw Error(ErrorCode::domain_error, "ambient box centers require the sup norm or dimension 1");

  DoublingReport rep;
  rep.kind = BallKind::closed;
  rep.contraction = contraction;
  rep.centers = CenterPolicy::ambient_boxes;
  rep.exact = mode == SearchMode::exact;

  std::vector<double> breaks = distinct_distances(space);
  for (std::size_t k = 0; k < cloud.dim; ++k)
    for (std::size_t i = 0; i < cloud.points.size(); ++i)
      for (std::size_t j = 0; j < cloud.points.size(); ++j) {
        const double gap = cloud.points[i][k] - cloud.points[j][k];
        if (gap > 0.0) breaks.push_back(gap / (2.0 * contraction));
      }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  auto radii = probe_points(breaks);
  radii.insert(radii.end(), breaks.begin(), breaks.end());
  std::sort(radii.begin(), radii.end());

  for (std::size_t x = 0; x < space.size(); ++x) {
    for (double r : radii) {
      const auto pts = ball(space, x, r, BallKind::closed);
      const double side = 2.0 * (contraction * r);
      std::vector<std::vector<double>> corners(cloud.dim);
      for (std::size_t k = 0; k < cloud.dim; ++k) {
        for (std::size_t p : pts) corners[k].push_back(cloud.points[p][k]);
        std::sort(corners[k].begin(), corners[k].end());
        corners[k].erase(std::unique(corners[k].begin(), corners[k].end()), corners[k].end());
      }
      std::vector<Bitset> sets;
      std::vector<std::size_t> pick(cloud.dim, 0);
      while (true) {
        Bitset s(pts.size());
        for (std::size_t a = 0; a < pts.size(); ++a) {
          bool inside = true;
          for (std::size_t k = 0; k < cloud.dim && inside; ++k) {
            const double off = cloud.points[pts[a]][k] - corners[k][pick[k]];
            inside = off >= 0.0 && off <= side;
          }
          if (inside) s.set(a);
        }
        sets.push_back(std::move(s));
        std::size_t k = 0;
        while (k < cloud.dim && ++pick[k] == corners[k].size()) pick[k++] = 0;
        if (k == cloud.dim) break;
      }
      Bitset universe(pts.size());
      for (std::size_t a = 0; a < pts.size(); ++a) universe.set(a);
      std::vector<std::size_t> labels(sets.size());
      for (std::size_t s = 0; s < labels.size(); ++s) labels[s] = s;
      CoverReport cov = detail::solve_cover(sets, universe, labels, mode, opts);
      cov.centers.clear();
      detail::record(rep, x, r, cov);
    }
  }
  return rep;
}

// ceil(x), except that values within 1e-12 (relative) above an integer are
// taken to be that integer, so rounding in log2 cannot bump the exponent.
inline long guarded_ceil(double x) {
  const double nearest = std::round(x);
  if (x > nearest && x - nearest <= 1e-12 * std::max(1.0, std::abs(x))) return static_cast<long>(nearest);
  return static_cast<long>(std::ceil(x));
}

inline std::uint64_t checked_pow(std::uint64_t base, long exponent) {
  if (exponent < 0) throw Error(ErrorCode::domain_error, "negative exponent");
  std::uint64_t out = 1;
  for (long k = 0; k < exponent; ++k) {
    if (base != 0 && out > UINT64_MAX / base) throw Error(ErrorCode::domain_error, "integer power overflows");
    out *= base;
  }
  return out;
}

struct HytBounds {
  std::uint64_t N = 1;
  double t = 0.5;
  long part2_exponent = 0;  // ceil(-log2 t)
  std::uint64_t part2 = 1;  // balls of radius t r covering B(x, r)
  std::optional<long> part4_exponent;  // ceil(-1 / log2 t), only for t in (1/2, 1)
  std::optional<std::uint64_t> part4;  // balls of radius r/2 covering B(x, r)
};

// Iterated covering counts: from N half-radius balls to balls of radius t r,
// and back from N balls of radius t r (t > 1/2) to half-radius balls.
inline HytBounds hyt_bounds(std::uint64_t N, double t) {
  if (N < 1) throw Error(ErrorCode::domain_error, "N must be a positive integer");
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorCode::domain_error, "t must lie in (0, 1)");
  HytBounds h;
  h.N = N;
  h.t = t;
  h.part2_exponent = guarded_ceil(-std::log2(t));
  h.part2 = checked_pow(N, h.part2_exponent);
  if (t > 0.5) {
    h.part4_exponent = guarded_ceil(-1.0 / std::log2(t));
    h.part4 = checked_pow(N, *h.part4_exponent);
  }
  return h;
}

struct MtReport {
  double t = 2.0;
  BallKind kind = BallKind::closed;
  NetKind net_kind = NetKind::strict;
  std::size_t Mt = 0;
  std::size_t witness_center = 0;
  double witness_radius = 0.0;
  std::vector<std::size_t> witness_net;
  std::size_t D = 0;
  long exponent = 0;  // ceil(log2(2 t))
  std::uint64_t bound = 0;
  bool holds = false;
  bool exact = true;
};

// Measures M_t, the largest r-net inside some B(x, t r), and compares it with
// D^ceil(log2 2t) for the space's doubling constant D.
inline MtReport net_cardinality_bound_Mt(const FiniteMetricSpace& space, BallKind kind, double t,
                                         std::optional<NetKind> net_kind = std::nullopt,
                                         const SearchOptions& opts = {}) {
  if (!(t > 1.0) || !std::isfinite(t)) throw Error(ErrorCode::domain_error, "t must exceed 1");
  MtReport rep;
  rep.t = t;
  rep.kind = kind;
  rep.net_kind = net_kind.value_or(default_net_kind(kind));
  const auto radii = sweep_radii(space, {1.0, t});
  for (std::size_t x = 0; x < space.size(); ++x) {
    for (double r : radii) {
      const auto net = max_net_in_ball(space, {x, t * r, kind}, r, rep.net_kind, SearchMode::exact, opts);
      rep.exact = rep.exact && net.optimal;
      if (net.cardinality > rep.Mt) {
        rep.Mt = net.cardinality;
        rep.witness_center = x;
        rep.witness_radius = r;
        rep.witness_net = net.points;
      }
    }
  }
  const auto dbl = doubling_constant(space, kind, 0.5, SearchMode::exact, opts);
  rep.exact = rep.exact && dbl.exact;
  rep.D = dbl.D;
  rep.exponent = guarded_ceil(std::log2(2.0 * t));
  rep.bound = checked_pow(rep.D, rep.exponent);
  rep.holds = rep.Mt <= rep.bound;
  return rep;
}

struct SandwichInstance {
  std::size_t center = 0;
  double radius = 0.0;
  std::size_t M = 0;   // largest r-net in B(x, r)
  std::size_t D = 0;   // fewest r/2-balls covering B(x, r)
  std::size_t M2 = 0;  // largest r/2-net in B(x, r)
  bool exact = true;

  bool holds() const { return M <= D && D <= M2; }
};

struct SandwichReport {
  BallKind kind = BallKind::closed;
  std::vector<SandwichInstance> instances;
  std::size_t violations = 0;
  std::optional<SandwichInstance> first_violation;
};

// Packing/covering sandwich M <= D <= M2 on every enumerated ball.
inline SandwichReport rnet_sandwich(const FiniteMetricSpace& space, BallKind kind, const SearchOptions& opts = {}) {
  SandwichReport rep;
  rep.kind = kind;
  const NetKind nk = default_net_kind(kind);
  const auto radii = sweep_radii(space, {1.0, 0.5});
  for (std::size_t x = 0; x < space.size(); ++x) {
    for (double r : radii) {
      const BallSpec b{x, r, kind};
      const double half = 0.5 * r;
      const auto m = max_net_in_ball(space, b, r, nk, SearchMode::exact, opts);
      const auto d = min_cover_of_ball(space, b, half, {}, SearchMode::exact, opts);
      const auto m2 = max_net_in_ball(space, b, half, nk, SearchMode::exact, opts);
      SandwichInstance inst{x, r, m.cardinality, d.size, m2.cardinality, m.optimal && d.optimal && m2.optimal};
      if (!inst.holds()) {
        ++rep.violations;
        if (!rep.first_violation) rep.first_violation = inst;
      }
      rep.instances.push_back(inst);
    }
  }
  return rep;
}

}  // namespace mmslab
