#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmslab/mmslab.hpp"

using namespace mmslab;

namespace {

constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;
constexpr int kExitVerification = 3;

void emit(const json& j, const std::string& out) {
  const std::string text = j.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error(ErrorCode::parse_error, "cannot write '" + out + "'");
  f << text;
}

void write_text(const std::filesystem::path& p, const json& j) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error(ErrorCode::parse_error, "cannot write '" + p.string() + "'");
  f << j.dump(2) << "\n";
}

// MMSLAB_BUDGET replaces the default; an explicit --budget wins over both.
std::uint64_t resolve_budget(const CLI::Option* flag, std::uint64_t flag_value) {
  if (flag->count() > 0) return flag_value;
  if (const char* env = std::getenv("MMSLAB_BUDGET")) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(env, &used);
      if (used == std::string(env).size() && v > 0) return static_cast<std::uint64_t>(v);
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("MMSLAB_BUDGET", "must be a positive integer");
  }
  return kDefaultNodeBudget;
}

const std::map<std::string, BallKind> kKindMap{{"open", BallKind::open}, {"closed", BallKind::closed}};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Averaging operators, nets and doubling constants on finite metric measure spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  // verify
  RunConfig vcfg;
  std::string perturb = "none", verify_out;
  std::uint64_t verify_budget = kDefaultNodeBudget;
  auto* verify = app.add_subcommand("verify", "run the full verification suite");
  verify->add_option("--seed", vcfg.seed, "seed for instance generation");
  verify->add_option("--instances", vcfg.instances, "random instances for operator checks")->check(CLI::PositiveNumber);
  verify->add_option("--exact-instances", vcfg.exact_instances, "random instances for exact-search checks")
      ->check(CLI::PositiveNumber);
  auto* verify_budget_opt =
      verify->add_option("--budget", verify_budget, "node budget per exact search")->check(CLI::PositiveNumber);
  verify->add_option("--perturb", perturb, "inject a fault: none or l1")->check(CLI::IsMember({"none", "l1"}));
  verify->add_option("--out", verify_out, "write the report here instead of stdout");

  // norms
  std::string space_path, measure_spec = "uniform", kind_name = "closed", out;
  double t = 1.0, r = 1.0;
  std::optional<double> p;
  auto* norms = app.add_subcommand("norms", "L1, Linf and Lp bounds of one averaging operator");
  norms->add_option("--space", space_path, "space file (.json or .csv)")->required();
  norms->add_option("--measure", measure_spec, "uniform, dirac:<i> or a weights file");
  norms->add_option("--t", t, "ball ratio t")->required();
  norms->add_option("--r", r, "inner radius r")->required();
  norms->add_option("--kind", kind_name, "open or closed")->check(CLI::IsMember(kKindMap));
  norms->add_option("--p", p, "exponent for the Lp bracket");
  norms->add_option("--out", out);

  // doubling
  double contraction = 0.5;
  bool exact_flag = false, greedy_flag = false;
  std::string centers = "points";
  std::uint64_t budget = kDefaultNodeBudget;
  auto* doubling = app.add_subcommand("doubling", "geometric doubling constant over the radius sweep");
  doubling->add_option("--space", space_path)->required();
  doubling->add_option("--kind", kind_name)->check(CLI::IsMember(kKindMap));
  doubling->add_option("--contraction", contraction, "cover radius as a fraction of r");
  doubling->add_flag("--exact", exact_flag, "exact covers (the default)");
  doubling->add_flag("--greedy", greedy_flag, "greedy covers, an upper bound only");
  doubling->add_option("--centers", centers, "points: centers at space points; boxes: ambient linf boxes")
      ->check(CLI::IsMember({"points", "boxes"}));
  auto* doubling_budget = doubling->add_option("--budget", budget)->check(CLI::PositiveNumber);
  doubling->add_option("--out", out);

  // cover
  std::size_t center = 0;
  double radius = 1.0, cover_radius = 0.5, net_radius = 0.5;
  auto* cover = app.add_subcommand("cover", "minimum cover of a ball by smaller balls");
  cover->add_option("--space", space_path)->required();
  cover->add_option("--center", center)->required();
  cover->add_option("--radius", radius)->required();
  cover->add_option("--cover-radius", cover_radius)->required();
  cover->add_option("--kind", kind_name)->check(CLI::IsMember(kKindMap));
  cover->add_flag("--greedy", greedy_flag);
  auto* cover_budget = cover->add_option("--budget", budget)->check(CLI::PositiveNumber);
  cover->add_option("--out", out);

  // net
  std::string net_kind_name;
  auto* net = app.add_subcommand("net", "maximum net inside a ball");
  net->add_option("--space", space_path)->required();
  net->add_option("--center", center)->required();
  net->add_option("--radius", radius)->required();
  net->add_option("--net-radius", net_radius)->required();
  net->add_option("--kind", kind_name)->check(CLI::IsMember(kKindMap));
  net->add_option("--net-kind", net_kind_name, "strict or non-strict (default follows --kind)")
      ->check(CLI::IsMember({"strict", "non-strict"}));
  net->add_flag("--greedy", greedy_flag);
  auto* net_budget = net->add_option("--budget", budget)->check(CLI::PositiveNumber);
  net->add_option("--out", out);

  // hyt
  std::uint64_t N = 1;
  auto* hyt = app.add_subcommand("hyt", "cover-number bounds from the doubling constant");
  hyt->add_option("--N", N)->required()->check(CLI::PositiveNumber);
  hyt->add_option("--t", t)->required();
  hyt->add_option("--out", out);

  // gen
  auto* gen = app.add_subcommand("gen", "generate instances");
  gen->require_subcommand(1);
  std::size_t sbN = 1;
  auto* gen_sb = gen->add_subcommand("smallballs", "the {0,1/2} x {1..N} example");
  gen_sb->add_option("--N", sbN)->required();
  gen_sb->add_option("--out", out, "output directory for space.json and measure.json");
  std::size_t x = 0;
  double c = 0.01;
  auto* gen_adv = gen->add_subcommand("adversarial", "the measure c delta_x + sum of net diracs");
  gen_adv->add_option("--space", space_path)->required();
  gen_adv->add_option("--x", x)->required();
  gen_adv->add_option("--r", r)->required();
  gen_adv->add_option("--t", t)->required();
  gen_adv->add_option("--c", c)->required();
  gen_adv->add_option("--kind", kind_name)->check(CLI::IsMember(kKindMap));
  gen_adv->add_option("--out", out, "output directory for space.json and measure.json");

  // diagnose
  auto* diagnose = app.add_subcommand("diagnose", "measure diagnostics");
  diagnose->require_subcommand(1);
  std::vector<double> ts;
  auto* diag_ae = diagnose->add_subcommand("doubling-ae", "sup of mu(B(x,tr))/mu(B(x,r)) over the support");
  diag_ae->add_option("--space", space_path)->required();
  diag_ae->add_option("--measure", measure_spec);
  diag_ae->add_option("--t", ts, "ratios (2 is always included)");
  diag_ae->add_option("--kind", kind_name)->check(CLI::IsMember(kKindMap));
  diag_ae->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const BallKind kind = kKindMap.at(kind_name);
    if (*verify) {
      vcfg.node_budget = resolve_budget(verify_budget_opt, verify_budget);
      vcfg.perturb = perturb == "l1" ? Perturbation::l1 : Perturbation::none;
      const auto rep = run_verification(vcfg);
      emit(to_json(rep), verify_out);
      if (!rep.pass()) {
        for (const auto& ch : rep.checks)
          if (!ch.pass())
            std::cerr << "FAILED " << ch.id << " (" << ch.failures << " of " << ch.instances << ")\n"
                      << "witness: " << ch.witness.dump() << "\n";
        return kExitVerification;
      }
      return 0;
    }
    if (*norms) {
      const auto ls = load_space(space_path);
      const auto mu = load_measure(measure_spec, ls.space.size());
      const OperatorSpec spec(t, r, kind);
      emit(to_json(compute_norms(ls.space, mu, spec, p), spec), out);
      return 0;
    }
    if (*hyt) {
      emit(to_json(hyt_bounds(N, t)), out);
      return 0;
    }
    const SearchMode mode = greedy_flag ? SearchMode::greedy : SearchMode::exact;
    if (*doubling) {
      if (exact_flag && greedy_flag) throw CLI::ValidationError("--exact", "conflicts with --greedy");
      const SearchOptions opts{resolve_budget(doubling_budget, budget), false};
      const auto ls = load_space(space_path);
      if (centers == "boxes") {
        if (!ls.cloud) throw Error(ErrorCode::domain_error, "--centers boxes needs a point-cloud space");
        if (kind != BallKind::closed) throw Error(ErrorCode::domain_error, "--centers boxes needs closed balls");
        emit(to_json(box_doubling_constant(*ls.cloud, ls.space, contraction, mode, opts)), out);
      } else {
        emit(to_json(doubling_constant(ls.space, kind, contraction, mode, opts)), out);
      }
      return 0;
    }
    if (*cover) {
      const SearchOptions opts{resolve_budget(cover_budget, budget), false};
      const auto ls = load_space(space_path);
      emit(to_json(min_cover_of_ball(ls.space, {center, radius, kind}, cover_radius, {}, mode, opts)), out);
      return 0;
    }
    if (*net) {
      const SearchOptions opts{resolve_budget(net_budget, budget), false};
      const auto ls = load_space(space_path);
      const NetKind nk = net_kind_name.empty()      ? default_net_kind(kind)
                         : net_kind_name == "strict" ? NetKind::strict
                                                     : NetKind::non_strict;
      emit(to_json(max_net_in_ball(ls.space, {center, radius, kind}, net_radius, nk, mode, opts)), out);
      return 0;
    }
    if (*gen_sb) {
      const auto sb = make_smallballs(sbN);
      const json space_j = to_json(sb.cloud, sb.space.labels());
      const json measure_j = to_json(sb.measure);
      if (out.empty()) {
        emit({{"space", space_j}, {"measure", measure_j}}, "");
      } else {
        std::filesystem::create_directories(out);
        write_text(std::filesystem::path(out) / "space.json", space_j);
        write_text(std::filesystem::path(out) / "measure.json", measure_j);
        emit({{"N", sbN}, {"points", sb.space.size()}, {"files", {"space.json", "measure.json"}}}, "");
      }
      return 0;
    }
    if (*gen_adv) {
      const auto ls = load_space(space_path);
      const auto a = make_adversarial(ls.space, x, r, t, c, kind);
      json report = to_json(a);
      if (!out.empty()) {
        std::filesystem::create_directories(out);
        write_text(std::filesystem::path(out) / "space.json",
                   ls.cloud ? to_json(*ls.cloud, ls.space.labels()) : to_json(ls.space));
        write_text(std::filesystem::path(out) / "measure.json", to_json(a.measure));
      }
      emit(report, "");
      return a.all_hold() ? 0 : kExitVerification;
    }
    if (*diag_ae) {
      const auto ls = load_space(space_path);
      const auto mu = load_measure(measure_spec, ls.space.size());
      emit(to_json(doubling_ae_diagnostic(ls.space, mu, kind, ts)), out);
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << json{{"error", "UsageError"}, {"message", e.what()}}.dump() << "\n";
    return kExitUsage;
  } catch (const MetricError& e) {
    json v = json::array();
    for (const auto& m : e.violations())
      v.push_back({{"code", std::string(to_string(m.code))}, {"i", m.i}, {"j", m.j}, {"k", m.k}, {"excess", m.excess}});
    std::cerr << json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}, {"violations", v}}.dump()
              << "\n";
    return kExitDomain;
  } catch (const Error& e) {
    std::cerr << json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump() << "\n";
    return kExitDomain;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << json{{"error", "IoError"}, {"message", e.what()}}.dump() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
