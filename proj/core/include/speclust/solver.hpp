#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "speclust/constraints.hpp"
#include "speclust/graph.hpp"

namespace speclust {

/// One KKT candidate: generalized eigenpair of (L-bar, Q-bar - (beta/vol) I)
/// with positive eigenvalue, rescaled so v^T v = vol, plus its relaxed cut
/// cost gamma = v^T L-bar v and purity alpha = v^T Q-bar v.
struct FeasibleCut {
  double lambda = 0.0;
  Eigen::VectorXd v;  // v^T v = vol
  Eigen::VectorXd u;  // D^{-1/2} v, the relaxed cluster indicator
  double cost = 0.0;
  double purity = 0.0;
};

/// feasible_set output with the filter counts needed for diagnosis.
struct FeasibleSet {
  std::vector<FeasibleCut> cuts;  // ascending by cost
  int filtered_complex = 0;
  int filtered_nonpositive = 0;
  int filtered_trivial = 0;
};

FeasibleSet feasible_set(const AffinityGraph& graph, const ConstraintMatrix& cm, double beta,
                         const Tolerances& tol = {});

enum class PartitionSource { two_way, k_way, transfer, unconstrained };

enum class KWayMode { embed_kmeans, sign_kmeans, weighted_sign_kmeans };

struct Partition {
  std::vector<int> labels;
  int k = 2;
  double beta = 0.0;
  PartitionSource source = PartitionSource::two_way;
  std::optional<KWayMode> mode;       // set for k_way partitions
  std::vector<FeasibleCut> cuts;      // the cut(s) this partition consumed
  int n_feasible = 0;                 // size of the feasible set examined
  int filtered_complex = 0;
  int filtered_nonpositive = 0;

  Eigen::Index n() const { return static_cast<Eigen::Index>(labels.size()); }
};

/// 2-way constrained cut: argmin-cost feasible cut (ties by larger purity,
/// then smaller eigenvalue), labels from the sign of u*, zeros on the
/// positive side. Cuts whose u* has no sign change do not define a cut and
/// are skipped.
Partition csp_two_way(const AffinityGraph& graph, const ConstraintMatrix& cm,
                      const BetaPolicy& policy, std::int64_t n_constraints = 0,
                      const Tolerances& tol = {});

/// K-way partition from the K-1 lowest-cost feasible cuts; discretized by
/// kmeans over the selected embedding (see KWayMode).
Partition csp_k_way(const AffinityGraph& graph, const ConstraintMatrix& cm,
                    const BetaPolicy& policy, int k, KWayMode mode, std::uint64_t seed,
                    std::int64_t n_constraints = 0, const Tolerances& tol = {});

/// The embedding rows handed to kmeans for a given V* (columns = selected
/// cuts' v vectors). Exposed so the discretization variants are testable.
Eigen::MatrixXd kway_embedding(const AffinityGraph& graph, const Eigen::MatrixXd& vstar,
                               KWayMode mode);

struct TransferResult {
  Partition partition;
  double transfer_cost = 0.0;
};

/// 2-way cut on the target constrained by the source's affinities (soft
/// must-links); the admissible beta bound uses the second largest eigenvalue
/// of the normalized source affinity.
TransferResult transfer_cut(const AffinityGraph& target, const AffinityGraph& source,
                            const BetaPolicy& policy, const Tolerances& tol = {});

/// Plain normalized-cut baseline: the smallest nontrivial eigenvectors of
/// L-bar, sign split for k = 2, kmeans on the D^{-1/2}-scaled rows otherwise.
Partition unconstrained_ncut(const AffinityGraph& graph, int k, std::uint64_t seed = 0,
                             const Tolerances& tol = {});

enum class JNROrigin { unconstrained_eigvec, feasible_cut };

/// One point of the joint numerical range J(L-bar, Q-bar): both quadratic
/// forms evaluated on a unit-normalized vector.
struct JNRSample {
  double cost_coord = 0.0;
  double purity_coord = 0.0;
  JNROrigin origin = JNROrigin::feasible_cut;
};

std::vector<JNRSample> jnr_samples(const AffinityGraph& graph, const ConstraintMatrix& cm,
                                   const std::vector<FeasibleCut>& cuts,
                                   bool include_unconstrained, const Tolerances& tol = {});

}  // namespace speclust
