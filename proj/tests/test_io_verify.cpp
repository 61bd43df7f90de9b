#include <gtest/gtest.h>

#include <sstream>

#include "mmslab/io.hpp"
#include "mmslab/verify.hpp"

using namespace mmslab;

TEST(Io, ParsesDistanceMatrixJson) {
  const auto ls = parse_space_json(json::parse(R"({"dist": [[0,1],[1,0]], "labels": ["a","b"]})"));
  EXPECT_EQ(ls.space.size(), 2u);
  EXPECT_EQ(ls.space.labels()[0], "a");
  EXPECT_FALSE(ls.cloud.has_value());
}

TEST(Io, ParsesPointCloudJson) {
  const auto ls = parse_space_json(json::parse(R"({"dim": 2, "norm": "linf", "points": [[0,0],[1,1]]})"));
  EXPECT_EQ(ls.space(0, 1), 1.0);
  ASSERT_TRUE(ls.cloud.has_value());
  EXPECT_EQ(ls.cloud->norm, Norm::linf);
}

TEST(Io, Errors) {
  auto code = [](const char* text) {
    try {
      parse_space_json(json::parse(text));
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::domain_error;
  };
  EXPECT_EQ(code(R"({"foo": 1})"), ErrorCode::parse_error);
  EXPECT_EQ(code(R"({"points": [[0]], "norm": "l7"})"), ErrorCode::parse_error);
  EXPECT_EQ(code(R"({"dist": "x"})"), ErrorCode::parse_error);
  EXPECT_EQ(code(R"({"dist": [[0,1],[2,0]]})"), ErrorCode::asymmetric_matrix);
  EXPECT_THROW(parse_json_text("{", "inline"), Error);
  EXPECT_THROW(parse_measure_json(json::parse(R"({"w": [1]})")), Error);
}

TEST(Io, Csv) {
  std::stringstream ok("0,1,2\n1,0,1\n\n2,1,0\n");
  EXPECT_EQ(parse_csv_matrix(ok).size(), 3u);
  std::stringstream bad("0,x\n1,0\n");
  EXPECT_THROW(parse_csv_matrix(bad), Error);
}

TEST(Io, RoundTrip) {
  const auto sb = make_smallballs(4);
  const auto again = parse_space_json(json::parse(to_json(sb.cloud, sb.space.labels()).dump()));
  EXPECT_EQ(again.space.matrix(), sb.space.matrix());
  EXPECT_EQ(again.space.labels(), sb.space.labels());
  const auto mu = parse_measure_json(json::parse(to_json(sb.measure).dump()));
  for (std::size_t i = 0; i < mu.size(); ++i) EXPECT_EQ(mu[i], sb.measure[i]);
  const auto dist = parse_space_json(json::parse(to_json(sb.space).dump()));
  EXPECT_EQ(dist.space.matrix(), sb.space.matrix());
}

TEST(Io, MeasureSpecs) {
  EXPECT_EQ(load_measure("uniform", 3).total_mass(), 3.0);
  EXPECT_EQ(load_measure("dirac:1", 3)[1], 1.0);
  EXPECT_THROW(load_measure("dirac:9", 3), Error);
  EXPECT_THROW(load_measure("dirac:x", 3), Error);
  EXPECT_THROW(load_measure("/nonexistent/measure.json", 3), Error);
}

TEST(Io, NormsReportKeys) {
  const auto s = validate_metric({{0, 1}, {1, 0}});
  const OperatorSpec spec(2, 0.5, BallKind::closed);
  const auto j = to_json(compute_norms(s, PointMeasure::uniform(2), spec, 2.0), spec);
  for (const char* k : {"l1", "l1_argmax", "linf", "linf_argmax", "lp_lower", "lp_upper"}) EXPECT_TRUE(j.contains(k));
  EXPECT_EQ(j["l1"], 2.0);
  EXPECT_EQ(j["linf"], 2.0);
}

TEST(Verify, SmallRunPassesAndIsDeterministic) {
  RunConfig cfg;
  cfg.instances = 30;
  cfg.exact_instances = 10;
  const auto a = to_json(run_verification(cfg)).dump();
  const auto b = to_json(run_verification(cfg)).dump();
  EXPECT_EQ(a, b);
  const auto rep = run_verification(cfg);
  EXPECT_TRUE(rep.pass());
  for (const auto& c : rep.checks) {
    EXPECT_FALSE(c.anchor.empty());
    EXPECT_GT(c.instances, 0u);
  }
  cfg.seed += 1;
  EXPECT_NE(to_json(run_verification(cfg)).dump(), a);
}

TEST(Verify, PerturbationIsCaught) {
  RunConfig cfg;
  cfg.instances = 10;
  cfg.exact_instances = 3;
  cfg.perturb = Perturbation::l1;
  const auto rep = run_verification(cfg);
  EXPECT_FALSE(rep.pass());
  const auto* c = rep.find("l1_conjugate_identity");
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->failures, 1u);
  EXPECT_TRUE(c->witness.contains("column_sum_norm"));
  for (const auto& other : rep.checks) {
    if (other.id != "l1_conjugate_identity") {
      EXPECT_TRUE(other.pass()) << other.id;
    }
  }
}

TEST(Verify, ConfigHashTracksConfig) {
  RunConfig a, b;
  EXPECT_EQ(config_hash(a), config_hash(b));
  b.node_budget = 5;
  EXPECT_NE(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
}
