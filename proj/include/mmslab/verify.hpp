#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mmslab/averaging_operator.hpp"
#include "mmslab/constructions.hpp"
#include "mmslab/io.hpp"
#include "mmslab/nets_covers.hpp"
#include "mmslab/random_instances.hpp"
#include "mmslab/version.hpp"

namespace mmslab {

enum class Perturbation { none, l1 };

struct RunConfig {
  std::uint64_t seed = 20240601;
  std::size_t instances = 500;        // population for the operator checks
  std::size_t exact_instances = 200;  // population for checks running exact searches
  std::uint64_t node_budget = kDefaultNodeBudget;
  Perturbation perturb = Perturbation::none;
};

inline json to_json(const RunConfig& c) {
  return json{{"seed", c.seed},
              {"instances", c.instances},
              {"exact_instances", c.exact_instances},
              {"node_budget", c.node_budget},
              {"perturb", c.perturb == Perturbation::l1 ? "l1" : "none"}};
}

// FNV-1a over the canonical config dump.
inline std::string config_hash(const RunConfig& c) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : to_json(c).dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int k = 15; k >= 0; --k, h >>= 4) out[static_cast<std::size_t>(k)] = hex[h & 15];
  return out;
}

struct CheckRecord {
  std::string id;
  std::string anchor;
  std::size_t instances = 0;
  std::size_t failures = 0;
  json witness;  // first failure, or the extremal passing case

  void fail(json w) {
    if (failures++ == 0) witness = std::move(w);
  }
  bool pass() const { return failures == 0; }
};

struct VerificationReport {
  RunConfig config;
  std::vector<CheckRecord> checks;

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass()) return false;
    return true;
  }
  const CheckRecord* find(const std::string& id) const {
    for (const auto& c : checks)
      if (c.id == id) return &c;
    return nullptr;
  }
};

inline json to_json(const VerificationReport& r) {
  json j;
  j["tool"] = kToolName;
  j["version"] = kVersion;
  j["config"] = to_json(r.config);
  j["config_hash"] = config_hash(r.config);
  j["generator"] = {{"n", {4, 10}}, {"dim", {1, 3}}, {"coordinates", "uniform in [0,1], rounded to 1/64"},
                    {"norms", {"l1", "l2", "linf"}}, {"weights", "log-uniform in [0.1, 10]"}};
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"id", c.id},
                      {"anchor", c.anchor},
                      {"instances", c.instances},
                      {"failures", c.failures},
                      {"pass", c.pass()},
                      {"witness", c.witness}});
  j["checks"] = std::move(checks);
  j["pass"] = r.pass();
  return j;
}

namespace detail {

inline const double kTs[] = {0.5, 1.0, 1.5, 2.0};
inline const BallKind kKinds[] = {BallKind::open, BallKind::closed};

inline json instance_json(const RandomInstance& inst) {
  return json{{"space", to_json(inst.cloud)}, {"measure", to_json(inst.measure)}};
}

inline double pick_radius(const FiniteMetricSpace& space, std::mt19937_64& rng) {
  const auto radii = critical_radii(space).all();
  std::uniform_int_distribution<std::size_t> pick(0, radii.size() - 1);
  return radii[pick(rng)];
}

inline void check_l1_identity(const RunConfig& cfg, const std::vector<RandomInstance>& pop,
                              const std::vector<double>& radii, CheckRecord& rec) {
  bool perturbed = false;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    for (double t : kTs) {
      for (BallKind kind : kKinds) {
        const OperatorSpec spec(t, radii[i], kind);
        const auto conj = max_of(conjugate(pop[i].space, pop[i].measure, spec));
        auto m = matrix(pop[i].space, pop[i].measure, spec);
        if (cfg.perturb == Perturbation::l1 && !perturbed) {
          const auto col = column_sum_norm(m, pop[i].measure);
          std::size_t b = 0;
          while (m.support[b] != col.argmax) ++b;
          m(0, b) += 1.0;
          perturbed = true;
        }
        const auto cols = column_sum_norm(m, pop[i].measure);
        ++rec.instances;
        if (!relatively_equal(conj.value, cols.value))
          rec.fail({{"instance", i}, {"t", t}, {"r", radii[i]}, {"kind", to_string(kind)},
                    {"conjugate_max", conj.value}, {"column_sum_norm", cols.value},
                    {"data", instance_json(pop[i])}});
      }
    }
  }
}

inline void check_duality(const std::vector<RandomInstance>& pop, const std::vector<double>& radii,
                          std::mt19937_64& rng, CheckRecord& rec) {
  std::uniform_real_distribution<double> val(0.0, 1.0);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const auto& [cloud, space, mu] = pop[i];
    for (double t : kTs) {
      for (BallKind kind : kKinds) {
        const OperatorSpec spec(t, radii[i], kind);
        std::vector<double> f(space.size());
        for (double& v : f) v = val(rng);
        const auto image = apply(space, mu, spec, f);
        const auto a = conjugate(space, mu, spec);
        const double lhs = norm_on_support(image, mu, 1.0);
        double rhs = 0.0;
        for (std::size_t k = 0; k < a.points.size(); ++k) rhs += f[a.points[k]] * a.values[k] * mu[a.points[k]];
        ++rec.instances;
        if (!relatively_equal(lhs, rhs))
          rec.fail({{"instance", i}, {"t", t}, {"kind", to_string(kind)}, {"lhs", lhs}, {"rhs", rhs}});
      }
    }
  }
}

inline void check_subaveraging(const std::vector<RandomInstance>& pop, const std::vector<double>& radii,
                               CheckRecord& rec) {
  double worst = 0.0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    for (double t : {0.25, 0.5}) {
      for (BallKind kind : kKinds) {
        const double l1 = l1_norm(pop[i].space, pop[i].measure, OperatorSpec(t, radii[i], kind)).value;
        ++rec.instances;
        worst = std::max(worst, l1);
        if (l1 > 1.0 + 1e-12)
          rec.fail({{"instance", i}, {"t", t}, {"kind", to_string(kind)}, {"l1", l1}, {"data", instance_json(pop[i])}});
      }
    }
  }
  if (rec.pass()) rec.witness = {{"max_l1", worst}};
}

inline void check_linf_identity(const std::vector<RandomInstance>& pop, const std::vector<double>& radii,
                                std::mt19937_64& rng, CheckRecord& rec) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    const auto& [cloud, space, mu] = pop[i];
    for (double t : kTs) {
      for (BallKind kind : kKinds) {
        const OperatorSpec spec(t, radii[i], kind);
        const double linf = linf_norm(space, mu, spec).value;
        const std::vector<double> ones(space.size(), 1.0);
        const double attained = norm_on_support(apply(space, mu, spec, ones), mu, INFINITY);
        ++rec.instances;
        if (attained != linf) {
          rec.fail({{"instance", i}, {"t", t}, {"kind", to_string(kind)}, {"linf", linf}, {"constant_probe", attained}});
          continue;
        }
        std::vector<double> f(space.size());
        for (int probe = 0; probe < 200; ++probe) {
          for (double& v : f) v = val(rng);
          const auto image = apply(space, mu, spec, f);
          SupportFunction fs{image.points, {}};
          for (std::size_t x : fs.points) fs.values.push_back(f[x]);
          const double ratio = norm_on_support(image, mu, INFINITY) / norm_on_support(fs, mu, INFINITY);
          if (ratio > linf * (1.0 + 1e-12)) {
            rec.fail({{"instance", i}, {"t", t}, {"kind", to_string(kind)}, {"linf", linf}, {"probe_ratio", ratio}});
            break;
          }
        }
      }
    }
  }
}

inline void check_smallballs(CheckRecord& rec) {
  json table = json::array();
  for (std::size_t N : {10u, 50u, 100u}) {
    const auto sb = make_smallballs(N);
    const OperatorSpec spec(2.0, 0.25, BallKind::closed);
    const double l1 = l1_norm(sb.space, sb.measure, spec).value;
    const auto linf = linf_norm(sb.space, sb.measure, spec);
    const auto lp = lp_norm_bounds(sb.space, sb.measure, spec, 2.0);
    std::vector<double> fN(sb.space.size(), 0.0);
    fN[SmallballsInstance::right(N)] = 1.0;
    const double probe = norm_on_support(apply(sb.space, sb.measure, spec, fN), sb.measure, 2.0);
    const double formula = std::sqrt(static_cast<double>(N) * N / (4.0 * N));
    const auto big = smallballs_regime(sb, 0.5, 2.0);
    const bool ok = std::abs(l1 - 2.0) <= 1e-12 && linf.value == static_cast<double>(N + 1) &&
                    linf.argmax == SmallballsInstance::left(N) && probe >= formula && lp.lower >= formula &&
                    big.bounded;
    ++rec.instances;
    json row = {{"N", N}, {"l1", l1}, {"linf", linf.value}, {"linf_argmax", linf.argmax},
                {"probe_l2", probe}, {"formula", formula}, {"lp_lower", lp.lower}, {"lp_upper", lp.upper},
                {"r_half_linf", big.linf}, {"r_half_bounded", big.bounded}};
    if (!ok) rec.fail(row);
    table.push_back(std::move(row));
  }
  if (rec.pass()) rec.witness = {{"table", std::move(table)}};
}

inline void check_sandwich(const std::vector<RandomInstance>& pop, const SearchOptions& opts, CheckRecord& rec) {
  for (std::size_t i = 0; i < pop.size(); ++i) {
    for (BallKind kind : kKinds) {
      const auto rep = rnet_sandwich(pop[i].space, kind, opts);
      rec.instances += rep.instances.size();
      for (const auto& inst : rep.instances) {
        if (!inst.exact || !inst.holds())
          rec.fail({{"instance", i}, {"kind", to_string(kind)}, {"center", inst.center}, {"radius", inst.radius},
                    {"M", inst.M}, {"D", inst.D}, {"M2", inst.M2}, {"exact", inst.exact},
                    {"data", instance_json(pop[i])}});
      }
    }
  }
}

inline void check_hyt(const std::vector<RandomInstance>& pop, const SearchOptions& opts, CheckRecord& rec) {
  struct Hand {
    std::uint64_t N;
    double t;
    std::uint64_t part2;
    std::optional<std::uint64_t> part4;
  };
  for (const Hand& h : {Hand{3, 0.6, 3, 9}, Hand{3, 0.3, 9, std::nullopt}, Hand{2, 0.5, 2, std::nullopt}}) {
    const auto b = hyt_bounds(h.N, h.t);
    ++rec.instances;
    if (b.part2 != h.part2 || b.part4 != h.part4) rec.fail(to_json(b));
  }
  for (std::size_t i = 0; i < pop.size(); ++i) {
    for (BallKind kind : kKinds) {
      const auto D = doubling_constant(pop[i].space, kind, 0.5, SearchMode::exact, opts);
      for (double t : {0.3, 0.6, 0.75}) {
        const auto Dt = doubling_constant(pop[i].space, kind, t, SearchMode::exact, opts);
        const auto forward = hyt_bounds(D.D, t);
        ++rec.instances;
        bool ok = D.exact && Dt.exact && Dt.D <= forward.part2;
        if (ok && t > 0.5) ok = D.D <= *hyt_bounds(Dt.D, t).part4;
        if (!ok)
          rec.fail({{"instance", i}, {"kind", to_string(kind)}, {"t", t}, {"D_half", D.D}, {"D_t", Dt.D},
                    {"part2_bound", forward.part2}, {"data", instance_json(pop[i])}});
      }
    }
  }
}

inline void check_mt(const std::vector<RandomInstance>& pop, const SearchOptions& opts, CheckRecord& rec) {
  for (std::size_t i = 0; i < pop.size(); ++i) {
    for (BallKind kind : kKinds) {
      for (double t : {1.5, 2.0, 3.0}) {
        const auto rep = net_cardinality_bound_Mt(pop[i].space, kind, t, std::nullopt, opts);
        ++rec.instances;
        if (!rep.holds || !rep.exact)
          rec.fail({{"instance", i}, {"report", to_json(rep)}, {"data", instance_json(pop[i])}});
      }
    }
  }
}

inline void check_adversarial(const std::vector<RandomInstance>& pop, const SearchOptions& opts,
                              CheckRecord& rec) {
  // Three collinear points: both outer points form the net around the middle one.
  PointCloud line{1, {{-0.9}, {0.0}, {0.9}}, Norm::l2};
  const auto space = from_point_cloud(line);
  const auto a = make_adversarial(space, 1, 1.0, 1.5, 0.01, BallKind::closed);
  ++rec.instances;
  if (!a.all_hold() || a.m() != 2 || std::abs(a.image_l1 - 3.0) > 1e-12) rec.fail(to_json(a));
  double previous = 0.0;
  json sweep = json::array();
  for (double c : {0.1, 0.01, 0.001}) {
    const auto ac = make_adversarial(space, 1, 1.0, 1.5, c, BallKind::closed);
    ++rec.instances;
    if (!ac.all_hold() || !(ac.lower_bound > previous) || ac.lower_bound > 2.0) rec.fail(to_json(ac));
    previous = ac.lower_bound;
    sweep.push_back({{"c", c}, {"lower_bound", ac.lower_bound}, {"image_l1", ac.image_l1}});
  }

  const double t = 1.5, c = 1e-3;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    for (BallKind kind : kKinds) {
      const auto sw = adversarial_sweep(pop[i].space, kind, t, c);
      rec.instances += sw.instances;
      if (sw.failures > 0) {
        rec.fail({{"instance", i}, {"kind", to_string(kind)}, {"failures", sw.failures}, {"data", instance_json(pop[i])}});
        continue;
      }
      // m/(1+c) <= ||A f_c|| gives m <= C(1+c) for every adversarial net.
      const double C = std::max(1.0, sw.max_image_l1 * (1.0 + c));
      const auto bound = doubling_bound_from_norms(t, C);
      const auto D = doubling_constant(pop[i].space, kind, 0.5, SearchMode::exact, opts);
      ++rec.instances;
      if (!D.exact || D.D > bound.bound || static_cast<double>(sw.max_net) > C)
        rec.fail({{"instance", i}, {"kind", to_string(kind)}, {"C", C}, {"bound", bound.bound}, {"D", D.D},
                  {"max_net", sw.max_net}, {"data", instance_json(pop[i])}});
    }
  }
  if (rec.pass()) rec.witness = {{"line_instance", to_json(a)}, {"c_sweep", std::move(sweep)}};
}

}  // namespace detail

// Runs every check. Deterministic given the config.
inline VerificationReport run_verification(const RunConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<RandomInstance> pop;
  std::vector<double> radii;
  for (std::size_t i = 0; i < cfg.instances; ++i) {
    pop.push_back(random_instance(rng));
    radii.push_back(detail::pick_radius(pop.back().space, rng));
  }
  std::vector<RandomInstance> exact_pop;
  for (std::size_t i = 0; i < cfg.exact_instances; ++i) exact_pop.push_back(random_instance(rng));
  const SearchOptions opts{cfg.node_budget, false};

  VerificationReport rep;
  rep.config = cfg;
  auto add = [&](std::string id, std::string anchor) -> CheckRecord& {
    rep.checks.push_back({std::move(id), std::move(anchor), 0, 0, nullptr});
    return rep.checks.back();
  };

  detail::check_l1_identity(cfg, pop, radii,
                            add("l1_conjugate_identity", "||A_{t,r}||_{L1->L1} = ||a_{t,r}||_inf"));
  detail::check_duality(pop, radii, rng, add("l1_duality", "||A f||_1 = integral of f a_{t,r} dmu for f >= 0"));
  detail::check_subaveraging(pop, radii, add("subaveraging_bound", "t <= 1/2 implies ||A_{t,r}||_{L1->L1} <= 1"));
  detail::check_linf_identity(
      pop, radii, rng, add("linf_ratio_identity", "||A_{t,r}||_{Linf->Linf} = ||mu(B(.,tr))/mu(B(.,r))||_inf"));
  detail::check_smallballs(add("smallballs_growth", "||A f_n||_p >= (n^p/(2^p n))^{1/p} on {0,1/2}xN"));
  detail::check_sandwich(exact_pop, opts, add("rnet_sandwich", "M <= D <= M_2"));
  detail::check_hyt(exact_pop, opts,
                    add("hyt_covers", "N^ceil(-log2 t) balls of radius tr; N^ceil(-1/log2 t) balls of radius r/2"));
  detail::check_mt(exact_pop, opts, add("mt_inequality", "M_t <= D^ceil(log2 2t)"));
  detail::check_adversarial(exact_pop, opts,
                            add("adversarial_chain", "m/(1+c) <= ||A_{t,r/t,mu_c} f_c|| <= C; D <= C^ceil(1/log2 t)"));
  return rep;
}

}  // namespace mmslab
