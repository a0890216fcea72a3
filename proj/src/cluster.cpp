#include "uavsim/cluster.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

#include "uavsim/rng.hpp"

namespace uavsim {

std::vector<std::vector<int>> Clustering::members() const {
  std::vector<std::vector<int>> m(centroids.size());
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    m[assignments[i]].push_back(static_cast<int>(i));
  }
  return m;
}

std::vector<Eigen::Vector2d> gn_points(const std::vector<GroundNode>& gns) {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(gns.size());
  for (const GroundNode& g : gns) {
    pts.emplace_back(g.position.x(), g.position.y());
  }
  return pts;
}

Clustering kmeans(const std::vector<Eigen::Vector2d>& points, int n_clusters,
                  std::uint64_t seed, int max_iters) {
  std::set<std::pair<double, double>> distinct;
  for (const auto& p : points) distinct.insert({p.x(), p.y()});
  if (n_clusters < 1 || n_clusters > static_cast<int>(distinct.size())) {
    throw std::invalid_argument("kmeans: need C <= number of distinct points");
  }
  const int n = static_cast<int>(points.size());

  Rng rng = make_rng(seed, /*stream=*/0x6b6d);
  Clustering cl;
  cl.centroids.resize(n_clusters);
  // Initial centroids: distinct data points drawn uniformly.
  {
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::set<std::pair<double, double>> used;
    int c = 0;
    for (int idx : order) {
      auto key = std::make_pair(points[idx].x(), points[idx].y());
      if (used.insert(key).second) {
        cl.centroids[c++] = points[idx];
        if (c == n_clusters) break;
      }
    }
  }

  cl.assignments.assign(n, 0);
  auto assign = [&]() {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < n_clusters; ++c) {
        const double d = (points[i] - cl.centroids[c]).squaredNorm();
        if (d < best_d) {  // strict: equidistant ties keep the lowest id
          best_d = d;
          best = c;
        }
      }
      if (cl.assignments[i] != best) {
        cl.assignments[i] = best;
        changed = true;
      }
    }
    return changed;
  };

  assign();
  for (int iter = 0; iter < max_iters; ++iter) {
    // Repair empty clusters with the point farthest from its centroid.
    for (int c = 0; c < n_clusters; ++c) {
      if (std::count(cl.assignments.begin(), cl.assignments.end(), c) > 0) continue;
      int far_i = -1;
      double far_d = -1.0;
      for (int i = 0; i < n; ++i) {
        const double d = (points[i] - cl.centroids[cl.assignments[i]]).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far_i = i;
        }
      }
      cl.assignments[far_i] = c;
      cl.centroids[c] = points[far_i];
    }
    for (int c = 0; c < n_clusters; ++c) {
      Eigen::Vector2d sum = Eigen::Vector2d::Zero();
      int count = 0;
      for (int i = 0; i < n; ++i) {
        if (cl.assignments[i] == c) {
          sum += points[i];
          ++count;
        }
      }
      if (count > 0) cl.centroids[c] = sum / count;
    }
    if (!assign()) break;
  }
  return cl;
}

}  // namespace uavsim
