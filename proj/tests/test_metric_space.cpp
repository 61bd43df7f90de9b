#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "mmslab/metric_space.hpp"
#include "mmslab/random_instances.hpp"

using namespace mmslab;

namespace {

FiniteMetricSpace line(std::vector<double> xs) {
  PointCloud c{1, {}, Norm::l2};
  for (double x : xs) c.points.push_back({x});
  return from_point_cloud(c);
}

ErrorCode code_of(const DistanceMatrix& m) {
  try {
    validate_metric(m);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "matrix accepted";
  return ErrorCode::parse_error;
}

// brute force ball, written out directly from the definition
std::vector<std::size_t> naive_ball(const FiniteMetricSpace& s, std::size_t x, double r, BallKind k) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double d = s(x, j);
    if (k == BallKind::open ? d < r : d <= r) out.push_back(j);
  }
  return out;
}

}  // namespace

TEST(ValidateMetric, AcceptsTwoPointSpace) {
  const auto s = validate_metric({{0, 1}, {1, 0}});
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s(0, 1), 1.0);
}

TEST(ValidateMetric, RejectsAsymmetry) { EXPECT_EQ(code_of({{0, 1}, {2, 0}}), ErrorCode::asymmetric_matrix); }

TEST(ValidateMetric, ReportsTriangleViolationIndices) {
  try {
    validate_metric({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}});
    FAIL();
  } catch (const MetricError& e) {
    ASSERT_EQ(e.violations().size(), 1u);
    const auto& v = e.violations()[0];
    EXPECT_EQ(v.code, ErrorCode::triangle_violation);
    EXPECT_EQ(v.i, 0u);
    EXPECT_EQ(v.j, 2u);
    EXPECT_EQ(v.k, 1u);
    EXPECT_EQ(v.excess, 1.0);
  }
}

TEST(ValidateMetric, ListsEveryViolation) {
  try {
    validate_metric({{0, 1, 2}, {3, 0, 1}, {4, 1, 0}});
    FAIL();
  } catch (const MetricError& e) {
    EXPECT_EQ(e.violations().size(), 2u);
  }
}

TEST(ValidateMetric, OtherAxioms) {
  EXPECT_EQ(code_of({{1, 1}, {1, 0}}), ErrorCode::nonzero_diagonal);
  EXPECT_EQ(code_of({{0, -1}, {-1, 0}}), ErrorCode::negative_distance);
  EXPECT_EQ(code_of({{0, NAN}, {NAN, 0}}), ErrorCode::non_finite_entry);
  EXPECT_EQ(code_of({{0, 0}, {0, 0}}), ErrorCode::duplicate_points);
  EXPECT_EQ(code_of({{0, 1}, {1}}), ErrorCode::invalid_shape);
  EXPECT_EQ(code_of({{0}}), ErrorCode::invalid_shape);
}

TEST(ValidateMetric, AdvisoryModeToleratesRounding) {
  const double eps = 1e-15;
  const DistanceMatrix m{{0, 1, 2 + eps}, {1, 0, 1}, {2 + eps, 1, 0}};
  EXPECT_THROW(validate_metric(m), MetricError);
  const auto s = validate_metric(m, TriangleCheck::advisory);
  EXPECT_EQ(s.near_violations().size(), 1u);
}

TEST(PointCloud, Examples) {
  const auto s = line({0, 1, 2});
  EXPECT_EQ(s(0, 1), 1.0);
  EXPECT_EQ(s(0, 2), 2.0);
  PointCloud sq{2, {{0, 0}, {1, 1}}, Norm::linf};
  EXPECT_EQ(from_point_cloud(sq)(0, 1), 1.0);
  sq.norm = Norm::l2;
  EXPECT_NEAR(from_point_cloud(sq)(0, 1), 1.41421356, 1e-8);
  sq.norm = Norm::l1;
  EXPECT_EQ(from_point_cloud(sq)(0, 1), 2.0);
}

TEST(PointCloud, Errors) {
  PointCloud dup{1, {{0}, {0}}, Norm::l2};
  try {
    from_point_cloud(dup);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::duplicate_points);
  }
  PointCloud ragged{2, {{0, 0}, {1}}, Norm::l2};
  EXPECT_THROW(from_point_cloud(ragged), Error);
}

TEST(PointCloud, RandomCloudsValidateUnderAllNorms) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    for (Norm n : {Norm::l1, Norm::l2, Norm::linf}) {
      PointCloud c{3, {}, n};
      for (int i = 0; i < 8; ++i) c.points.push_back({u(rng), u(rng), u(rng)});
      EXPECT_NO_THROW(from_point_cloud(c));
    }
  }
}

TEST(Ball, OpenClosedExamples) {
  const auto s = line({0, 1, 2});
  EXPECT_EQ(ball(s, 0, 1.0, BallKind::open), (std::vector<std::size_t>{0}));
  EXPECT_EQ(ball(s, 0, 1.0, BallKind::closed), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(ball(s, 1, 5.0, BallKind::open).size(), 3u);
}

TEST(Ball, Errors) {
  const auto s = line({0, 1});
  EXPECT_THROW(ball(s, 2, 1.0, BallKind::open), Error);
  EXPECT_THROW(ball(s, 0, 0.0, BallKind::open), Error);
  EXPECT_THROW(ball(s, 0, -1.0, BallKind::closed), Error);
}

TEST(Ball, InclusionAndMonotonicity) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = random_instance(rng);
    const auto radii = critical_radii(inst.space).all();
    for (std::size_t x = 0; x < inst.space.size(); ++x) {
      for (std::size_t a = 0; a < radii.size(); ++a) {
        const auto o = ball(inst.space, x, radii[a], BallKind::open);
        const auto c = ball(inst.space, x, radii[a], BallKind::closed);
        EXPECT_EQ(o, naive_ball(inst.space, x, radii[a], BallKind::open));
        EXPECT_TRUE(std::includes(c.begin(), c.end(), o.begin(), o.end()));
        if (a + 1 < radii.size()) {
          const auto c2 = ball(inst.space, x, radii[a + 1], BallKind::closed);
          EXPECT_TRUE(std::includes(c2.begin(), c2.end(), c.begin(), c.end()));
        }
      }
    }
  }
}

TEST(CriticalRadii, LineExample) {
  const auto cr = critical_radii(line({0, 1, 2}));
  EXPECT_EQ(cr.values, (std::vector<double>{1, 2}));
  for (double m : {0.5, 1.5, 2.5}) EXPECT_NE(std::find(cr.midpoints.begin(), cr.midpoints.end(), m), cr.midpoints.end());
  EXPECT_EQ(critical_radii(line({0, 1})).values, (std::vector<double>{1}));
}

TEST(CriticalRadii, CompleteOnProbeGrid) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 30; ++trial) {
    PointCloud c{2, {}, static_cast<Norm>(trial % 3)};
    for (int i = 0; i < 6; ++i) c.points.push_back({std::round(u(rng) * 16) / 16, std::round(u(rng) * 16) / 16});
    std::set<std::vector<double>> seen;
    std::vector<std::vector<double>> pts;
    for (auto& p : c.points)
      if (seen.insert(p).second) pts.push_back(p);
    c.points = pts;
    if (c.points.size() < 2) continue;
    const auto s = from_point_cloud(c);
    const auto radii = critical_radii(s).all();
    for (BallKind k : {BallKind::open, BallKind::closed}) {
      std::set<std::vector<std::vector<std::size_t>>> families;
      for (double r : radii) {
        std::vector<std::vector<std::size_t>> fam;
        for (std::size_t x = 0; x < s.size(); ++x) fam.push_back(naive_ball(s, x, r, k));
        families.insert(fam);
      }
      // fine probe grid plus every exact distance
      std::vector<double> probes;
      for (int i = 1; i <= 4000; ++i) probes.push_back(i * 0.001);
      for (double v : distinct_distances(s)) probes.push_back(v);
      for (double r : probes) {
        std::vector<std::vector<std::size_t>> fam;
        for (std::size_t x = 0; x < s.size(); ++x) fam.push_back(naive_ball(s, x, r, k));
        EXPECT_TRUE(families.count(fam)) << "radius " << r << " kind " << to_string(k);
      }
    }
  }
}

TEST(SweepRadii, RealizesEveryPairOfBallFamilies) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const auto inst = random_instance(rng);
    const auto& s = inst.space;
    for (double scale : {0.5, 1.5, 2.0 / 3.0, 3.0}) {
      const auto radii = sweep_radii(s, {1.0, scale});
      for (BallKind k : {BallKind::open, BallKind::closed}) {
        using Pair = std::pair<std::vector<std::size_t>, std::vector<std::size_t>>;
        std::set<std::vector<Pair>> families;
        for (double r : radii) {
          std::vector<Pair> fam;
          for (std::size_t x = 0; x < s.size(); ++x)
            fam.push_back({naive_ball(s, x, r, k), naive_ball(s, x, scale * r, k)});
          families.insert(fam);
        }
        std::vector<double> probes;
        for (int i = 1; i <= 3000; ++i) probes.push_back(i * 0.001);
        for (double v : distinct_distances(s)) {
          probes.push_back(v);
          double r = v / scale;
          while (scale * r < v) r = std::nextafter(r, INFINITY);
          probes.push_back(r);
        }
        for (double r : probes) {
          std::vector<Pair> fam;
          for (std::size_t x = 0; x < s.size(); ++x)
            fam.push_back({naive_ball(s, x, r, k), naive_ball(s, x, scale * r, k)});
          EXPECT_TRUE(families.count(fam)) << "radius " << r << " scale " << scale;
        }
      }
    }
  }
}

TEST(FiniteMetricSpace, Labels) {
  const auto s = line({0, 1}).with_labels({"a", "b"});
  EXPECT_EQ(s.labels()[1], "b");
  EXPECT_THROW(s.with_labels({"a"}), Error);
  EXPECT_EQ(s.diameter(), 1.0);
}
