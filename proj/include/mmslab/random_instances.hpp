#pragma once

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "mmslab/measure.hpp"
#include "mmslab/metric_space.hpp"

namespace mmslab {

// Seeded generator for property runs: n in [min_n, max_n] distinct points in
// [0,1]^d, d in {1,2,3}, coordinates rounded to multiples of 1/64 so that
// exact distance ties occur, a random norm, and log-uniform weights in [0.1, 10].
struct RandomInstance {
  PointCloud cloud;
  FiniteMetricSpace space;
  PointMeasure measure;
};

struct RandomInstanceParams {
  std::size_t min_n = 4;
  std::size_t max_n = 10;
  std::size_t max_dim = 3;
  int grid = 64;
  double min_weight = 0.1;
  double max_weight = 10.0;
};

inline RandomInstance random_instance(std::mt19937_64& rng, const RandomInstanceParams& p = {}) {
  std::uniform_int_distribution<std::size_t> n_dist(p.min_n, p.max_n);
  std::uniform_int_distribution<std::size_t> d_dist(1, p.max_dim);
  std::uniform_int_distribution<int> norm_dist(0, 2);
  std::uniform_int_distribution<int> coord_dist(0, p.grid);
  std::uniform_real_distribution<double> log_w(std::log(p.min_weight), std::log(p.max_weight));

  const std::size_t n = n_dist(rng);
  PointCloud cloud;
  cloud.dim = d_dist(rng);
  cloud.norm = static_cast<Norm>(norm_dist(rng));
  while (cloud.points.size() < n) {
    std::vector<double> pt(cloud.dim);
    for (double& x : pt) x = static_cast<double>(coord_dist(rng)) / p.grid;
    bool fresh = true;
    for (const auto& q : cloud.points) fresh = fresh && q != pt;
    if (fresh) cloud.points.push_back(std::move(pt));
  }
  std::vector<double> w(n);
  for (double& x : w) x = std::exp(log_w(rng));
  auto space = from_point_cloud(cloud);
  return {std::move(cloud), std::move(space), PointMeasure(std::move(w))};
}

}  // namespace mmslab
