#pragma once

#include <cstdint>
#include <vector>

#include "speclust/graph.hpp"
#include "speclust/linalg.hpp"

namespace speclust {

/// One pairwise belief: w > 0 must-link, w < 0 cannot-link; magnitude is the
/// strength of the belief.
struct ConstraintTriple {
  int i = 0;
  int j = 0;
  double w = 0.0;
};

/// Validated list of pairwise constraints over n nodes. Duplicate unordered
/// pairs are allowed and accumulate when materialized.
struct ConstraintList {
  ConstraintList(Eigen::Index n, std::vector<ConstraintTriple> triples);

  Eigen::Index n = 0;
  std::vector<ConstraintTriple> triples;

  bool empty() const { return triples.empty(); }
  std::size_t size() const { return triples.size(); }
};

/// Constraint matrix Q with its degree-normalized form Q-bar =
/// D^{-1/2} Q D^{-1/2} and cached ascending eigenvalues of Q-bar.
struct ConstraintMatrix {
  SymMatrix q;
  SymMatrix qbar;
  std::vector<double> qbar_eigs;  // ascending

  double lambda_min() const { return qbar_eigs.front(); }
  double lambda_max() const { return qbar_eigs.back(); }
  /// k-th largest eigenvalue, 1-based (kth_largest(1) == lambda_max()).
  double kth_largest(int k) const {
    return qbar_eigs[qbar_eigs.size() - static_cast<std::size_t>(k)];
  }
};

/// Builds Q from a triple list (duplicates summed, mirrored across the
/// diagonal, diagonal zero) and normalizes by the graph's degrees.
ConstraintMatrix materialize(const ConstraintList& list, const AffinityGraph& graph,
                             const Tolerances& tol = {});

/// Uses a full Q verbatim (any diagonal), normalized by the graph's degrees.
ConstraintMatrix materialize(const SymMatrix& q, const AffinityGraph& graph,
                             const Tolerances& tol = {});

/// Partial labels: entries < 0 mean unknown; every labeled pair contributes
/// +1 (same label) or -1 (different labels).
ConstraintMatrix from_labels(const std::vector<int>& labels, const AffinityGraph& graph,
                             const Tolerances& tol = {});

/// Treats a source graph's affinities as soft must-link beliefs for the
/// target graph; the normalization uses the TARGET degrees.
ConstraintMatrix from_source_graph(const AffinityGraph& source, const AffinityGraph& target,
                                   const Tolerances& tol = {});

enum class SampleStrategy { uniform, misclustered };

/// Draws m distinct unordered pairs and emits the true relation (+1 same
/// cluster, -1 different). `misclustered` restricts candidates to pairs whose
/// baseline relation disagrees with the truth.
ConstraintList sample_constraints(const std::vector<int>& truth,
                                  const std::vector<int>& baseline_labels, int m,
                                  std::uint64_t seed, SampleStrategy strategy);

struct BetaPolicy {
  enum class Mode { explicit_value, fraction, paper_heuristic };

  static BetaPolicy explicit_value(double value) { return {Mode::explicit_value, value, 0.0}; }
  static BetaPolicy fraction(double t) { return {Mode::fraction, 0.0, t}; }
  static BetaPolicy heuristic() { return {Mode::paper_heuristic, 0.0, 0.0}; }

  Mode mode = Mode::fraction;
  double value = 0.0;  // explicit beta
  double t = 0.5;      // fraction position in (0, 1)
};

/// Which eigenvalue of Q-bar caps admissible beta: the largest for 2-way, the
/// (K-1)-th largest for K-way, the second largest for transfer cuts.
enum class BetaBound { k_way, transfer };

double beta_upper_bound(const ConstraintMatrix& cm, const AffinityGraph& graph, int k,
                        BetaBound bound);

/// Resolves a policy to a concrete beta and enforces the strict admissibility
/// bound (with slack beta_slack_rel * vol). n_constraints feeds the paper
/// heuristic's ramp.
double resolve_beta(const BetaPolicy& policy, const ConstraintMatrix& cm,
                    const AffinityGraph& graph, int k, std::int64_t n_constraints,
                    BetaBound bound = BetaBound::k_way, const Tolerances& tol = {});

}  // namespace speclust
