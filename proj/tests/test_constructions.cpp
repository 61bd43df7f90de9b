#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mmslab/constructions.hpp"
#include "mmslab/random_instances.hpp"

using namespace mmslab;

namespace {

FiniteMetricSpace line(std::vector<double> xs) {
  PointCloud c{1, {}, Norm::l2};
  for (double x : xs) c.points.push_back({x});
  return from_point_cloud(c);
}

}  // namespace

TEST(Smallballs, LayoutAndWeights) {
  const auto one = make_smallballs(1);
  EXPECT_EQ(one.space.size(), 2u);
  EXPECT_EQ(one.space(0, 1), 0.5);
  EXPECT_EQ(one.measure[0], 1.0);
  EXPECT_EQ(one.measure[1], 1.0);
  const auto sb = make_smallballs(6);
  for (std::size_t n = 1; n <= 6; ++n) {
    EXPECT_EQ(sb.cloud.points[SmallballsInstance::left(n)], (std::vector<double>{0.0, double(n)}));
    EXPECT_EQ(sb.cloud.points[SmallballsInstance::right(n)], (std::vector<double>{0.5, double(n)}));
    EXPECT_EQ(sb.measure[SmallballsInstance::left(n)], 1.0 / double(n));
    EXPECT_EQ(sb.measure[SmallballsInstance::right(n)], 1.0);
    EXPECT_EQ(sb.space(SmallballsInstance::left(n), SmallballsInstance::right(n)), 0.5);
    if (n > 1) {
      EXPECT_EQ(sb.space(SmallballsInstance::left(n), SmallballsInstance::left(n - 1)), 1.0);
    }
  }
  EXPECT_EQ(sb.space.labels()[3], "(1/2,2)");
  try {
    make_smallballs(0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_n);
  }
}

TEST(Smallballs, NormsAtQuarterRadius) {
  const OperatorSpec spec(2, 0.25, BallKind::closed);
  const auto three = make_smallballs(3);
  EXPECT_EQ(l1_norm(three.space, three.measure, spec).value, 2.0);
  for (double v : conjugate(three.space, three.measure, spec).values) EXPECT_NEAR(v, 2.0, 1e-15);
  const auto sb = make_smallballs(100);
  const auto linf = linf_norm(sb.space, sb.measure, spec);
  EXPECT_EQ(linf.value, 101.0);
  EXPECT_EQ(linf.argmax, SmallballsInstance::left(100));
  EXPECT_NEAR(l1_norm(sb.space, sb.measure, spec).value, 2.0, 1e-12);
}

TEST(Smallballs, LpGrowth) {
  // lower bound grows at least like N^{1-1/p}/2
  for (double p : {1.5, 2.0, 4.0}) {
    for (std::size_t N : {4u, 16u, 64u}) {
      const auto sb = make_smallballs(N);
      const auto b = lp_norm_bounds(sb.space, sb.measure, {2, 0.25, BallKind::closed}, p);
      const double n = static_cast<double>(N);
      EXPECT_GE(b.lower * (1 + 1e-12), std::pow(std::pow(n, p) / (std::pow(2.0, p) * n), 1.0 / p));
    }
  }
}

TEST(Smallballs, HalfRadiusRegimeBounded) {
  for (std::size_t N : {1u, 5u, 40u, 100u}) {
    const auto reg = smallballs_regime(make_smallballs(N), 0.5, 2.0);
    EXPECT_TRUE(reg.bounded);
    EXPECT_GE(reg.min_inner_mass, 1.0);
    EXPECT_LE(reg.linf, 4.0);
  }
  EXPECT_FALSE(smallballs_regime(make_smallballs(10), 0.25, 2.0).bounded);
}

TEST(Grid, TiesAreExact) {
  const GridSpec spec{1, -20, 20, 10, Norm::l2};
  const auto g = make_grid(spec);
  EXPECT_EQ(g.space.size(), 41u);
  const std::size_t z = grid_index(spec, {0});
  EXPECT_EQ(g.space(z, grid_index(spec, {10})), 1.0);
  EXPECT_EQ(g.space(grid_index(spec, {-3}), grid_index(spec, {7})), 1.0);
  EXPECT_EQ(g.space(z, grid_index(spec, {20})), 2.0);
  EXPECT_THROW(grid_index(spec, {21}), Error);
}

TEST(Adversarial, LineInstance) {
  const auto s = line({-0.9, 0.0, 0.9});
  const auto a = make_adversarial(s, 1, 1.0, 1.5, 0.01, BallKind::closed);
  EXPECT_EQ(a.net, (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(a.m(), 2u);
  EXPECT_TRUE(a.all_hold());
  EXPECT_NEAR(a.image_l1, 3.0, 1e-12);
  for (double v : a.values) EXPECT_GE(v, 1.0 / 1.01);
  EXPECT_EQ(a.measure[1], 0.01);
  EXPECT_EQ(a.measure[0], 1.0);
  EXPECT_NEAR(a.probe_l1, 1.0, 1e-15);
}

TEST(Adversarial, CSweepIncreasesTowardM) {
  const auto s = line({-0.9, 0.0, 0.9});
  double prev = 0.0;
  for (double c : {0.1, 0.01, 0.001}) {
    const auto a = make_adversarial(s, 1, 1.0, 1.5, c, BallKind::closed);
    EXPECT_GT(a.lower_bound, prev);
    EXPECT_LT(a.lower_bound, 2.0);
    EXPECT_NEAR(a.lower_bound, 2.0 / (1.0 + c), 1e-15);
    prev = a.lower_bound;
  }
}

TEST(Adversarial, Errors) {
  const auto s = line({0.0, 5.0});
  try {
    make_adversarial(s, 0, 1.0, 1.5, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::empty_net);
  }
  EXPECT_THROW(make_adversarial(s, 0, 6.0, 2.0, 0.1), Error);
  EXPECT_THROW(make_adversarial(s, 0, 6.0, 1.5, 1.0), Error);
  EXPECT_THROW(make_adversarial(s, 3, 6.0, 1.5, 0.5), Error);
}

TEST(Adversarial, RandomInstancesSatisfyProofInequalities) {
  std::mt19937_64 rng(113);
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = random_instance(rng);
    for (BallKind k : {BallKind::open, BallKind::closed}) {
      for (double t : {1.2, 1.5, 1.9}) {
        const auto sw = adversarial_sweep(inst.space, k, t, 0.01);
        EXPECT_GT(sw.instances, 0u);
        EXPECT_EQ(sw.failures, 0u);
      }
    }
  }
}

TEST(DoublingBound, Arithmetic) {
  const auto a = doubling_bound_from_norms(1.5, 4.0);
  EXPECT_EQ(a.exponent, 2);
  EXPECT_EQ(a.bound, 16u);
  const auto b = doubling_bound_from_norms(1.99, 2.0);
  EXPECT_EQ(b.exponent, 2);
  EXPECT_EQ(b.bound, 4u);
  EXPECT_EQ(doubling_bound_from_norms(1.5, 2.5).bound, 6u);
  EXPECT_THROW(doubling_bound_from_norms(2.0, 2.0), Error);
  EXPECT_THROW(doubling_bound_from_norms(1.5, 0.5), Error);
}

TEST(DoublingBound, MeasuredDoublingRespectsBound) {
  std::mt19937_64 rng(127);
  RandomInstanceParams p;
  p.min_n = p.max_n = 8;
  const double t = 1.5, c = 1e-3;
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = random_instance(rng, p);
    const BallKind k = trial % 2 ? BallKind::open : BallKind::closed;
    const auto sw = adversarial_sweep(inst.space, k, t, c);
    const double C = std::max(1.0, sw.max_image_l1 * (1 + c));
    const auto check = doubling_bound_from_norms(inst.space, k, t, C);
    EXPECT_TRUE(check.nets_respect_C);
    EXPECT_LE(doubling_constant(inst.space, k).D, check.bound.bound);
  }
}

TEST(DoublingAe, Examples) {
  const auto s = line({0, 1, 2, 3});
  const auto dirac = doubling_ae_diagnostic(s, PointMeasure::dirac(4, 2, 0.7), BallKind::closed);
  ASSERT_EQ(dirac.entries.size(), 1u);
  EXPECT_EQ(dirac.entries[0].t, 2.0);
  EXPECT_EQ(dirac.entries[0].C, 1.0);

  const auto sb = make_smallballs(100);
  const auto rep = doubling_ae_diagnostic(sb.space, sb.measure, BallKind::closed, {3.0});
  ASSERT_EQ(rep.entries.size(), 2u);
  EXPECT_GE(rep.entries[0].C, 101.0);
  EXPECT_TRUE(rep.bounded);

  // equals the sup of Linf operator norms over the radius sweep
  std::mt19937_64 rng(131);
  for (int trial = 0; trial < 50; ++trial) {
    const auto inst = random_instance(rng);
    const auto r = doubling_ae_diagnostic(inst.space, inst.measure, BallKind::open, {1.5});
    for (const auto& e : r.entries) {
      double best = 0.0;
      for (double rad : sweep_radii(inst.space, {1.0, e.t}))
        best = std::max(best, linf_norm(inst.space, inst.measure, {e.t, rad, BallKind::open}).value);
      EXPECT_EQ(e.C, best);
    }
  }
  EXPECT_THROW(doubling_ae_diagnostic(s, PointMeasure::uniform(4), BallKind::open, {0.5}), Error);
}

TEST(RandomInstances, Deterministic) {
  std::mt19937_64 a(5), b(5);
  for (int i = 0; i < 20; ++i) {
    const auto x = random_instance(a);
    const auto y = random_instance(b);
    EXPECT_EQ(x.cloud.points, y.cloud.points);
    EXPECT_EQ(x.space.matrix(), y.space.matrix());
    EXPECT_GE(x.space.size(), 4u);
    EXPECT_LE(x.space.size(), 10u);
    for (double w : x.measure.weights()) {
      EXPECT_GE(w, 0.1 * (1 - 1e-12));
      EXPECT_LE(w, 10.0 * (1 + 1e-12));
    }
  }
}
