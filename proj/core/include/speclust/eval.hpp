#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "speclust/solver.hpp"

namespace speclust {

/// Hubert-Arabie adjusted Rand index between two labelings.
double ari(const std::vector<int>& pred, const std::vector<int>& truth);

/// Fraction of constraints a partition satisfies; weights count only through
/// their sign (binary satisfaction semantics).
double satisfaction_ratio(const Partition& partition, const ConstraintList& list);
double satisfaction_ratio(const std::vector<int>& labels, const ConstraintList& list);

/// Spectral Learning: overwrite affinities with 1 for must-link and 0 for
/// cannot-link, rebuild the Laplacian, and run the unconstrained cut.
Partition spectral_learning_baseline(const AffinityGraph& graph, const ConstraintList& list,
                                     int k, std::uint64_t seed = 0, const Tolerances& tol = {});

struct MetricsReport {
  std::optional<double> ari;
  double satisfied_ratio = 0.0;
  double cost = 0.0;
  double purity = 0.0;
  double beta = 0.0;
  std::int64_t n_constraints = 0;
};

struct SweepPoint {
  double x = 0.0;  // grid coordinate (beta or constraint count)
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  int failures = 0;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::uint64_t seed = 0;
  int trials_per_point = 1;
};

struct ConvergenceOptions {
  double sigma = kAutoSigma;
  SampleStrategy strategy = SampleStrategy::uniform;
  BetaPolicy policy = BetaPolicy::heuristic();
  int jobs = 1;
};

/// Fig-6-style protocol: for each constraint count m, draw `trials` random
/// constraint sets, run the 2-way constrained cut and report ARI mean/min/max
/// against the cloud's ground truth. Per-cell seeds derive from
/// (seed, m index, trial), so results do not depend on grid order; failed
/// trials are excluded from the stats and counted.
SweepResult convergence_experiment(const PointCloud& points,
                                   const std::vector<int>& constraint_counts, int trials,
                                   std::uint64_t seed, const ConvergenceOptions& options = {},
                                   const Tolerances& tol = {});

struct BetaSweepRow {
  double t = 0.0;
  double beta = 0.0;
  bool ok = false;
  MetricsReport metrics;
};

struct BetaSweepResult {
  std::vector<BetaSweepRow> rows;
  /// Sweep summary with x = resolved beta and the satisfaction ratio as the
  /// metric (single deterministic evaluation per grid point).
  SweepResult summary() const;
};

/// Solves once per t in the fraction-policy grid and records cost, purity and
/// satisfaction. k = 2 uses the sign cut, k > 2 the embedding kmeans.
BetaSweepResult beta_sweep(const AffinityGraph& graph, const ConstraintMatrix& cm,
                           const std::vector<double>& t_grid, int k, std::uint64_t seed = 0,
                           const Tolerances& tol = {});

}  // namespace speclust
