#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "speclust/errors.hpp"
#include "speclust/tolerances.hpp"

namespace speclust {

/// Dense symmetric matrix. Construction symmetrizes the input as (M + M^T)/2
/// and rejects non-finite entries, so downstream code can rely on exact
/// entrywise symmetry.
class SymMatrix {
 public:
  explicit SymMatrix(Eigen::MatrixXd m, const char* context = "SymMatrix");

  static SymMatrix zero(Eigen::Index n) { return SymMatrix(Eigen::MatrixXd::Zero(n, n)); }
  static SymMatrix identity(Eigen::Index n) { return SymMatrix(Eigen::MatrixXd::Identity(n, n)); }

  Eigen::Index size() const { return m_.rows(); }
  const Eigen::MatrixXd& mat() const { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  Eigen::MatrixXd m_;
};

/// One (value, vector) pair. Vectors are unit-norm with the deterministic
/// sign convention: the entry of largest magnitude is positive, ties broken
/// by lowest index. imag_residual records the magnitude of any imaginary
/// component discarded when the pair came from a non-symmetric solve.
struct EigenPair {
  double value = 0.0;
  Eigen::VectorXd vector;
  double imag_residual = 0.0;
};

/// Applies the largest-|entry|-positive sign convention in place.
void canonicalize_sign(Eigen::VectorXd& v);

/// Full eigendecomposition of a symmetric matrix, ascending by value.
std::vector<EigenPair> sym_eig(const SymMatrix& m, const Tolerances& tol = {});

/// Result of a generalized (matrix pencil) solve a v = lambda b v. Pairs that
/// fail the reality filter are counted, never silently dropped.
struct PencilSolution {
  std::vector<EigenPair> pairs;  // ascending by value
  int filtered_complex = 0;
};

/// Solves a v = lambda b v for symmetric a (PSD) and symmetric b (possibly
/// indefinite). Definite b reduces to a symmetric problem; otherwise the
/// non-symmetric problem on b^{-1} a is solved with a ridge-jitter ladder and
/// a reality filter.
PencilSolution solve_pencil(const SymMatrix& a, const SymMatrix& b, const Tolerances& tol = {});

struct KMeansResult {
  std::vector<int> labels;
  Eigen::MatrixXd centers;  // k x d
  double inertia = 0.0;
  int iterations = 0;
};

/// Lloyd iterations with distance-weighted (k-means++ style) seeding, best of
/// `restarts` runs by inertia, deterministic for a fixed seed. Empty clusters
/// are repaired by moving the point farthest from its center.
KMeansResult kmeans(const Eigen::MatrixXd& rows, int k, std::uint64_t seed, int restarts = 8,
                    const Tolerances& tol = {});

}  // namespace speclust
