#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "speclust/linalg.hpp"

namespace speclust {

struct PointCloud {
  Eigen::MatrixXd coords;   // n x d
  std::vector<int> labels;  // empty when no ground truth is attached

  Eigen::Index n() const { return coords.rows(); }
  Eigen::Index dim() const { return coords.cols(); }
  bool has_labels() const { return !labels.empty(); }
};

/// Weighted undirected graph with the derived quantities every solver needs:
/// degrees, volume and the normalized Laplacian I - D^{-1/2} A D^{-1/2}.
/// Constructed through build_laplacian, which enforces connectivity.
struct AffinityGraph {
  SymMatrix a;
  Eigen::VectorXd degrees;
  double vol = 0.0;
  SymMatrix lbar;

  Eigen::Index n() const { return a.size(); }

  /// D^{1/2} 1, the null direction of lbar for connected graphs.
  Eigen::VectorXd trivial_vector() const { return degrees.cwiseSqrt(); }
};

/// Validates non-negativity, zeroes the diagonal, computes degrees/vol/lbar
/// and checks connectivity by breadth-first reachability over nonzero
/// affinities.
AffinityGraph build_laplacian(const SymMatrix& a, const Tolerances& tol = {});

inline constexpr double kAutoSigma = -1.0;

/// Gaussian kernel affinities exp(-||xi-xj||^2 / (2 sigma^2)). sigma <= 0
/// selects the median of all pairwise distances.
AffinityGraph rbf_affinity(const PointCloud& points, double sigma = kAutoSigma,
                           const Tolerances& tol = {});

/// Cosine similarity between non-negative feature rows, negatives clamped.
AffinityGraph cosine_affinity(const Eigen::MatrixXd& vectors, const Tolerances& tol = {});

/// Interleaving half-circle sample: n/2 points per moon with Gaussian jitter,
/// plus background_n uniform points over the bounding box labeled by the
/// nearest moon point. Deterministic per seed.
PointCloud two_moons(int n, double noise_std, int background_n, std::uint64_t seed);

}  // namespace speclust
