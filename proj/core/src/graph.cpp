#include "speclust/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "speclust/rng.hpp"

namespace speclust {

namespace {

void check_connected(const Eigen::MatrixXd& a) {
  const Eigen::Index n = a.rows();
  if (n == 0) fail(ErrorCode::InvalidMatrix, "graph: empty matrix");

  bool all_zero_degree = true;
  bool any_zero_degree = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double deg = a.row(i).sum();
    if (deg > 0.0) all_zero_degree = false;
    else any_zero_degree = true;
  }
  if (all_zero_degree && n > 1) {
    fail(ErrorCode::DisconnectedGraph, "graph: all affinities are zero");
  }
  if (any_zero_degree) {
    fail(ErrorCode::IsolatedNode, "graph: node with zero degree");
  }

  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::deque<Eigen::Index> queue{0};
  seen[0] = 1;
  Eigen::Index reached = 1;
  while (!queue.empty()) {
    const Eigen::Index i = queue.front();
    queue.pop_front();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!seen[static_cast<std::size_t>(j)] && a(i, j) > 0.0) {
        seen[static_cast<std::size_t>(j)] = 1;
        ++reached;
        queue.push_back(j);
      }
    }
  }
  if (reached != n) {
    fail(ErrorCode::DisconnectedGraph,
         "graph: only " + std::to_string(reached) + " of " + std::to_string(n) +
             " nodes reachable from node 0");
  }
}

}  // namespace

AffinityGraph build_laplacian(const SymMatrix& a, const Tolerances&) {
  Eigen::MatrixXd m = a.mat();
  if ((m.array() < 0.0).any()) {
    fail(ErrorCode::InvalidMatrix, "graph: negative affinity");
  }
  m.diagonal().setZero();
  check_connected(m);

  const Eigen::Index n = m.rows();
  Eigen::VectorXd degrees = m.rowwise().sum();
  const double vol = degrees.sum();
  const Eigen::VectorXd inv_sqrt = degrees.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd lbar = Eigen::MatrixXd::Identity(n, n) -
                         (inv_sqrt.asDiagonal() * m * inv_sqrt.asDiagonal()).eval();

  return AffinityGraph{SymMatrix(std::move(m), "affinity"), std::move(degrees), vol,
                       SymMatrix(std::move(lbar), "laplacian")};
}

AffinityGraph rbf_affinity(const PointCloud& points, double sigma, const Tolerances& tol) {
  const Eigen::Index n = points.n();
  if (n < 2) fail(ErrorCode::DegenerateData, "rbf_affinity: need at least 2 points");
  if (!points.coords.allFinite()) fail(ErrorCode::InvalidInput, "rbf_affinity: non-finite coordinates");

  Eigen::MatrixXd d2(n, n);
  d2.setZero();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d = (points.coords.row(i) - points.coords.row(j)).squaredNorm();
      d2(i, j) = d;
      d2(j, i) = d;
    }
  }

  if (sigma <= 0.0) {
    // Median of all pairwise distances; lower median for even counts.
    std::vector<double> dists;
    dists.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) dists.push_back(std::sqrt(d2(i, j)));
    }
    const std::size_t mid = (dists.size() - 1) / 2;
    std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid), dists.end());
    sigma = dists[mid];
    if (sigma <= 0.0) {
      fail(ErrorCode::DegenerateData, "rbf_affinity: median pairwise distance is zero");
    }
  }

  Eigen::MatrixXd a = (-d2 / (2.0 * sigma * sigma)).array().exp();
  a.diagonal().setZero();
  return build_laplacian(SymMatrix(std::move(a), "rbf affinity"), tol);
}

AffinityGraph cosine_affinity(const Eigen::MatrixXd& vectors, const Tolerances& tol) {
  const Eigen::Index n = vectors.rows();
  if (n < 2) fail(ErrorCode::DegenerateData, "cosine_affinity: need at least 2 rows");
  if (!vectors.allFinite()) fail(ErrorCode::InvalidInput, "cosine_affinity: non-finite entries");

  Eigen::VectorXd norms = vectors.rowwise().norm();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (norms[i] <= 0.0) {
      fail(ErrorCode::DegenerateData, "cosine_affinity: zero row " + std::to_string(i));
    }
  }
  Eigen::MatrixXd a = (vectors * vectors.transpose()).eval();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = std::max(0.0, a(i, j) / (norms[i] * norms[j]));
    }
  }
  a.diagonal().setZero();
  return build_laplacian(SymMatrix(std::move(a), "cosine affinity"), tol);
}

PointCloud two_moons(int n, double noise_std, int background_n, std::uint64_t seed) {
  if (n < 4 || n % 2 != 0) {
    fail(ErrorCode::InvalidInput, "two_moons: n must be even and >= 4");
  }
  if (noise_std < 0.0 || background_n < 0) {
    fail(ErrorCode::InvalidInput, "two_moons: negative noise or background count");
  }

  Rng rng(seed);
  const int half = n / 2;
  PointCloud pc;
  pc.coords.resize(n + background_n, 2);
  pc.labels.reserve(static_cast<std::size_t>(n + background_n));

  // First moon: upper half-circle at the origin. Second moon: the reflected
  // arc shifted right by 1.0, dipping 0.5 below the first moon's baseline.
  // Draw order per point is pinned: angle, then x-noise, then y-noise.
  for (int i = 0; i < half; ++i) {
    const double theta = rng.uniform(0.0, M_PI);
    double x = std::cos(theta);
    double y = std::sin(theta);
    if (noise_std > 0.0) {
      x += rng.normal(0.0, noise_std);
      y += rng.normal(0.0, noise_std);
    }
    pc.coords(i, 0) = x;
    pc.coords(i, 1) = y;
    pc.labels.push_back(0);
  }
  for (int i = 0; i < half; ++i) {
    const double theta = rng.uniform(0.0, M_PI);
    double x = 1.0 - std::cos(theta);
    double y = 0.5 - std::sin(theta);
    if (noise_std > 0.0) {
      x += rng.normal(0.0, noise_std);
      y += rng.normal(0.0, noise_std);
    }
    pc.coords(half + i, 0) = x;
    pc.coords(half + i, 1) = y;
    pc.labels.push_back(1);
  }

  if (background_n > 0) {
    const double min_x = pc.coords.col(0).head(n).minCoeff();
    const double max_x = pc.coords.col(0).head(n).maxCoeff();
    const double min_y = pc.coords.col(1).head(n).minCoeff();
    const double max_y = pc.coords.col(1).head(n).maxCoeff();
    for (int b = 0; b < background_n; ++b) {
      const double x = rng.uniform(min_x, max_x);
      const double y = rng.uniform(min_y, max_y);
      pc.coords(n + b, 0) = x;
      pc.coords(n + b, 1) = y;
      Eigen::Index nearest = 0;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < n; ++i) {
        const double dx = pc.coords(i, 0) - x;
        const double dy = pc.coords(i, 1) - y;
        const double d = dx * dx + dy * dy;
        if (d < best) {
          best = d;
          nearest = i;
        }
      }
      pc.labels.push_back(pc.labels[static_cast<std::size_t>(nearest)]);
    }
  }
  return pc;
}

}  // namespace speclust
