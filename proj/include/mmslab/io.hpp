#pragma once

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmslab/averaging_operator.hpp"
#include "mmslab/constructions.hpp"
#include "mmslab/errors.hpp"
#include "mmslab/measure.hpp"
#include "mmslab/metric_space.hpp"
#include "mmslab/nets_covers.hpp"

namespace mmslab {

using json = nlohmann::ordered_json;

// A space as read from disk; point-cloud inputs keep their coordinates.
struct LoadedSpace {
  FiniteMetricSpace space;
  std::optional<PointCloud> cloud;
};

inline Norm parse_norm(const std::string& s) {
  if (s == "l1") return Norm::l1;
  if (s == "l2") return Norm::l2;
  if (s == "linf") return Norm::linf;
  throw Error(ErrorCode::parse_error, "unknown norm '" + s + "' (expected l1, l2 or linf)");
}

inline BallKind parse_ball_kind(const std::string& s) {
  if (s == "open") return BallKind::open;
  if (s == "closed") return BallKind::closed;
  throw Error(ErrorCode::parse_error, "unknown ball kind '" + s + "' (expected open or closed)");
}

inline std::vector<std::string> read_labels(const json& j) {
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
  return labels;
}

// Accepts {"dist": [[...]]} or {"dim": d, "norm": ..., "points": [[...]]}.
inline LoadedSpace parse_space_json(const json& j) {
  try {
    if (j.contains("dist")) {
      auto m = j.at("dist").get<DistanceMatrix>();
      return {validate_metric(m).with_labels(read_labels(j)), std::nullopt};
    }
    if (j.contains("points")) {
      PointCloud cloud;
      cloud.points = j.at("points").get<std::vector<std::vector<double>>>();
      cloud.dim = j.contains("dim") ? j.at("dim").get<std::size_t>()
                                    : (cloud.points.empty() ? 1 : cloud.points.front().size());
      cloud.norm = parse_norm(j.value("norm", std::string("l2")));
      auto space = from_point_cloud(cloud).with_labels(read_labels(j));
      return {std::move(space), std::move(cloud)};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, e.what());
  }
  throw Error(ErrorCode::parse_error, "space JSON needs a \"dist\" or \"points\" member");
}

// n rows of n comma-separated decimals; blank lines are ignored.
inline DistanceMatrix parse_csv_matrix(std::istream& in) {
  DistanceMatrix m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(ErrorCode::parse_error, "bad CSV cell '" + cell + "' in row " + std::to_string(m.size()));
      }
    }
    m.push_back(std::move(row));
  }
  return m;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::parse_error, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, origin + ": " + e.what());
  }
}

inline LoadedSpace load_space(const std::string& path) {
  const std::string text = read_file(path);
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    std::stringstream ss(text);
    return {validate_metric(parse_csv_matrix(ss)), std::nullopt};
  }
  return parse_space_json(parse_json_text(text, path));
}

inline PointMeasure parse_measure_json(const json& j) {
  try {
    return PointMeasure(j.at("weights").get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string("measure JSON: ") + e.what());
  }
}

// "uniform", "dirac:<i>" or a path to {"weights": [...]}.
inline PointMeasure load_measure(const std::string& spec, std::size_t n) {
  if (spec == "uniform") return PointMeasure::uniform(n);
  if (spec.rfind("dirac:", 0) == 0) {
    try {
      return PointMeasure::dirac(n, std::stoul(spec.substr(6)));
    } catch (const std::invalid_argument&) {
      throw Error(ErrorCode::parse_error, "bad dirac index in '" + spec + "'");
    }
  }
  PointMeasure mu = parse_measure_json(parse_json_text(read_file(spec), spec));
  if (mu.size() != n)
    throw Error(ErrorCode::dimension_mismatch, "measure has " + std::to_string(mu.size()) + " weights for " +
                                                   std::to_string(n) + " points");
  return mu;
}

inline json to_json(const FiniteMetricSpace& s) {
  json j;
  j["dist"] = s.matrix();
  if (!s.labels().empty()) j["labels"] = s.labels();
  return j;
}

inline json to_json(const PointCloud& c, const std::vector<std::string>& labels = {}) {
  json j;
  j["dim"] = c.dim;
  j["norm"] = to_string(c.norm);
  j["points"] = c.points;
  if (!labels.empty()) j["labels"] = labels;
  return j;
}

inline json to_json(const PointMeasure& mu) {
  json j;
  j["weights"] = std::vector<double>(mu.weights().begin(), mu.weights().end());
  return j;
}

inline json to_json(const BallSpec& b) {
  return json{{"center", b.center}, {"radius", b.radius}, {"kind", to_string(b.kind)}};
}

inline json to_json(const NetReport& r) {
  json j;
  j["radius"] = r.radius;
  j["kind"] = to_string(r.kind);
  j["ambient"] = r.ambient ? to_json(*r.ambient) : json(nullptr);
  j["points"] = r.points;
  j["cardinality"] = r.cardinality;
  j["maximal"] = r.maximal;
  j["optimal"] = r.optimal;
  j["nodes"] = r.nodes;
  return j;
}

inline json to_json(const CoverReport& r) {
  json j;
  j["ambient"] = to_json(r.ambient);
  j["cover_radius"] = r.cover_radius;
  j["centers"] = r.centers;
  j["size"] = r.size;
  j["method"] = to_string(r.method);
  j["optimal"] = r.optimal;
  j["certificate"] = {{"nodes", r.certificate.nodes},
                      {"root_lower_bound", r.certificate.root_lower_bound},
                      {"exhausted", r.certificate.exhausted}};
  return j;
}

inline json to_json(const DoublingReport& r, bool with_instances = true) {
  json j;
  j["kind"] = to_string(r.kind);
  j["contraction"] = r.contraction;
  j["centers"] = to_string(r.centers);
  j["D"] = r.D;
  j["exact"] = r.exact;
  j["witness"] = {{"center", r.witness_center}, {"radius", r.witness_radius}, {"cover", r.witness_cover}};
  if (with_instances) {
    json inst = json::array();
    for (const auto& c : r.instances)
      inst.push_back({{"center", c.center}, {"radius", c.radius}, {"cover_number", c.cover_number},
                      {"optimal", c.optimal}});
    j["instances"] = std::move(inst);
  }
  return j;
}

inline json to_json(const HytBounds& h) {
  json j;
  j["N"] = h.N;
  j["t"] = h.t;
  j["part2_exponent"] = h.part2_exponent;
  j["part2"] = h.part2;
  j["part4_exponent"] = h.part4_exponent ? json(*h.part4_exponent) : json(nullptr);
  j["part4"] = h.part4 ? json(*h.part4) : json(nullptr);
  return j;
}

inline json to_json(const MtReport& r) {
  json j;
  j["t"] = r.t;
  j["kind"] = to_string(r.kind);
  j["net_kind"] = to_string(r.net_kind);
  j["Mt"] = r.Mt;
  j["witness"] = {{"center", r.witness_center}, {"radius", r.witness_radius}, {"net", r.witness_net}};
  j["D"] = r.D;
  j["exponent"] = r.exponent;
  j["bound"] = r.bound;
  j["holds"] = r.holds;
  j["exact"] = r.exact;
  return j;
}

inline json to_json(const AdversarialInstance& a) {
  json j;
  j["x"] = a.x;
  j["r"] = a.r;
  j["t"] = a.t;
  j["s"] = a.s;
  j["c"] = a.c;
  j["kind"] = to_string(a.kind);
  j["net"] = a.net;
  j["m"] = a.m();
  j["measure"] = to_json(a.measure);
  j["probe"] = a.probe;
  j["denominators"] = a.denominators;
  j["x_in_outer_ball"] = a.x_in_outer_ball;
  j["values"] = a.values;
  j["probe_l1"] = a.probe_l1;
  j["image_l1"] = a.image_l1;
  j["lower_bound"] = a.lower_bound;
  j["checks"] = {{"denominators", a.denominators_hold()},
                 {"memberships", a.memberships_hold()},
                 {"values", a.values_hold()},
                 {"chain", a.chain_holds()},
                 {"all", a.all_hold()}};
  return j;
}

inline json to_json(const DoublingAeReport& r) {
  json j;
  j["kind"] = to_string(r.kind);
  json entries = json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"t", e.t}, {"C", e.C}, {"witness_x", e.witness_x}, {"witness_r", e.witness_r}});
  j["entries"] = std::move(entries);
  j["bounded"] = r.bounded;
  return j;
}

struct NormsReport {
  NormCertificate l1;
  NormCertificate linf;
  std::optional<LpBounds> lp;
};

inline NormsReport compute_norms(const FiniteMetricSpace& space, const PointMeasure& mu, const OperatorSpec& spec,
                                 std::optional<double> p) {
  NormsReport r{l1_norm(space, mu, spec), linf_norm(space, mu, spec), std::nullopt};
  if (p) r.lp = lp_norm_bounds(space, mu, spec, *p);
  return r;
}

inline json to_json(const NormsReport& r, const OperatorSpec& spec) {
  json j;
  j["t"] = spec.t;
  j["r"] = spec.r;
  j["kind"] = to_string(spec.kind);
  j["l1"] = r.l1.value;
  j["l1_argmax"] = r.l1.argmax;
  j["linf"] = r.linf.value;
  j["linf_argmax"] = r.linf.argmax;
  if (r.lp) {
    j["p"] = r.lp->p;
    j["lp_lower"] = r.lp->lower;
    j["lp_upper"] = r.lp->upper;
    j["lp_lower_probe"] = r.lp->lower_probe ? json(*r.lp->lower_probe) : json("constant");
  } else {
    j["lp_lower"] = nullptr;
    j["lp_upper"] = nullptr;
  }
  return j;
}

}  // namespace mmslab
