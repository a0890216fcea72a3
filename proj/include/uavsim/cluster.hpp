#pragma once

#include <cstdint>
#include <vector>

#include "uavsim/scenario.hpp"

namespace uavsim {

struct Clustering {
  std::vector<int> assignments;          // GN index -> cluster id
  std::vector<Eigen::Vector2d> centroids;

  std::vector<std::vector<int>> members() const;
};

// Lloyd iterations from seeded random initial centroids chosen among the data
// points; equidistant ties break to the lowest cluster id, empty clusters are
// reseeded with the farthest point.
Clustering kmeans(const std::vector<Eigen::Vector2d>& points, int n_clusters,
                  std::uint64_t seed, int max_iters = 200);

std::vector<Eigen::Vector2d> gn_points(const std::vector<GroundNode>& gns);

}  // namespace uavsim
