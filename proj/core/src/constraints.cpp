#include "speclust/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "speclust/rng.hpp"

namespace speclust {

ConstraintList::ConstraintList(Eigen::Index n_, std::vector<ConstraintTriple> triples_)
    : n(n_), triples(std::move(triples_)) {
  for (const ConstraintTriple& t : triples) {
    if (t.i < 0 || t.j < 0 || t.i >= n || t.j >= n) {
      fail(ErrorCode::InvalidConstraint, "constraint (" + std::to_string(t.i) + "," +
                                             std::to_string(t.j) + ") out of range for n=" +
                                             std::to_string(n));
    }
    if (t.i == t.j) {
      fail(ErrorCode::InvalidConstraint, "self-constraint on node " + std::to_string(t.i));
    }
  }
}

namespace {

ConstraintMatrix normalize(SymMatrix q, const AffinityGraph& graph, const Tolerances& tol) {
  const Eigen::VectorXd inv_sqrt = graph.degrees.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd qbar = inv_sqrt.asDiagonal() * q.mat() * inv_sqrt.asDiagonal();
  ConstraintMatrix cm{std::move(q), SymMatrix(std::move(qbar), "qbar"), {}};
  const std::vector<EigenPair> eigs = sym_eig(cm.qbar, tol);
  cm.qbar_eigs.reserve(eigs.size());
  for (const EigenPair& p : eigs) cm.qbar_eigs.push_back(p.value);
  return cm;
}

}  // namespace

ConstraintMatrix materialize(const ConstraintList& list, const AffinityGraph& graph,
                             const Tolerances& tol) {
  if (list.n != graph.n()) {
    fail(ErrorCode::InvalidConstraint, "constraint list is for n=" + std::to_string(list.n) +
                                           " but graph has n=" + std::to_string(graph.n()));
  }
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(graph.n(), graph.n());
  for (const ConstraintTriple& t : list.triples) {
    q(t.i, t.j) += t.w;
    q(t.j, t.i) += t.w;
  }
  return normalize(SymMatrix(std::move(q), "constraints"), graph, tol);
}

ConstraintMatrix materialize(const SymMatrix& q, const AffinityGraph& graph,
                             const Tolerances& tol) {
  if (q.size() != graph.n()) {
    fail(ErrorCode::InvalidConstraint, "constraint matrix is " + std::to_string(q.size()) +
                                           " but graph has n=" + std::to_string(graph.n()));
  }
  return normalize(q, graph, tol);
}

ConstraintMatrix from_labels(const std::vector<int>& labels, const AffinityGraph& graph,
                             const Tolerances& tol) {
  if (static_cast<Eigen::Index>(labels.size()) != graph.n()) {
    fail(ErrorCode::InvalidInput, "from_labels: label count does not match graph");
  }
  Eigen::Index labeled = 0;
  for (int l : labels)
    if (l >= 0) ++labeled;
  if (labeled < 2) {
    fail(ErrorCode::InsufficientLabels, "from_labels: need at least 2 labeled nodes, have " +
                                            std::to_string(labeled));
  }
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(graph.n(), graph.n());
  for (Eigen::Index i = 0; i < graph.n(); ++i) {
    if (labels[static_cast<std::size_t>(i)] < 0) continue;
    for (Eigen::Index j = i + 1; j < graph.n(); ++j) {
      if (labels[static_cast<std::size_t>(j)] < 0) continue;
      const double w =
          labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(j)] ? 1.0 : -1.0;
      q(i, j) = w;
      q(j, i) = w;
    }
  }
  return normalize(SymMatrix(std::move(q), "labels"), graph, tol);
}

ConstraintMatrix from_source_graph(const AffinityGraph& source, const AffinityGraph& target,
                                   const Tolerances& tol) {
  if (source.n() != target.n()) {
    fail(ErrorCode::InvalidConstraint, "from_source_graph: source has n=" +
                                           std::to_string(source.n()) + ", target n=" +
                                           std::to_string(target.n()));
  }
  return normalize(source.a, target, tol);
}

ConstraintList sample_constraints(const std::vector<int>& truth,
                                  const std::vector<int>& baseline_labels, int m,
                                  std::uint64_t seed, SampleStrategy strategy) {
  const Eigen::Index n = static_cast<Eigen::Index>(truth.size());
  if (m < 1) fail(ErrorCode::InvalidInput, "sample_constraints: m must be >= 1");
  if (baseline_labels.size() != truth.size()) {
    fail(ErrorCode::InvalidInput, "sample_constraints: baseline/truth size mismatch");
  }

  std::vector<ConstraintTriple> candidates;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const bool truth_same = truth[static_cast<std::size_t>(i)] == truth[static_cast<std::size_t>(j)];
      if (strategy == SampleStrategy::misclustered) {
        const bool base_same =
            baseline_labels[static_cast<std::size_t>(i)] == baseline_labels[static_cast<std::size_t>(j)];
        if (truth_same == base_same) continue;
      }
      candidates.push_back({static_cast<int>(i), static_cast<int>(j), truth_same ? 1.0 : -1.0});
    }
  }
  if (static_cast<std::size_t>(m) > candidates.size()) {
    fail(ErrorCode::InsufficientPairs, "sample_constraints: requested " + std::to_string(m) +
                                           " pairs, only " + std::to_string(candidates.size()) +
                                           " available");
  }

  // Partial Fisher-Yates gives m distinct picks.
  Rng rng(seed);
  std::vector<ConstraintTriple> out;
  out.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const std::size_t pick =
        static_cast<std::size_t>(k) + rng.below(candidates.size() - static_cast<std::size_t>(k));
    std::swap(candidates[static_cast<std::size_t>(k)], candidates[pick]);
    out.push_back(candidates[static_cast<std::size_t>(k)]);
  }
  return ConstraintList(n, std::move(out));
}

double beta_upper_bound(const ConstraintMatrix& cm, const AffinityGraph& graph, int k,
                        BetaBound bound) {
  if (bound == BetaBound::transfer) return cm.kth_largest(2) * graph.vol;
  return cm.kth_largest(k - 1) * graph.vol;
}

double resolve_beta(const BetaPolicy& policy, const ConstraintMatrix& cm,
                    const AffinityGraph& graph, int k, std::int64_t n_constraints,
                    BetaBound bound, const Tolerances& tol) {
  if (k < 2) fail(ErrorCode::InvalidK, "resolve_beta: k must be >= 2");
  if (bound == BetaBound::k_way && k - 1 > static_cast<int>(cm.qbar_eigs.size())) {
    fail(ErrorCode::InvalidK, "resolve_beta: k exceeds spectrum size");
  }

  const double upper = beta_upper_bound(cm, graph, k, bound);
  const double slack = tol.beta_slack_rel * graph.vol;

  const auto check = [&](double beta) {
    if (!(beta < upper - slack)) {
      std::ostringstream msg;
      msg << "beta " << beta << " must be smaller than " << upper << " (= "
          << upper / graph.vol << " * vol)";
      fail(ErrorCode::BetaOutOfRange, msg.str());
    }
    return beta;
  };

  switch (policy.mode) {
    case BetaPolicy::Mode::explicit_value:
      return check(policy.value);
    case BetaPolicy::Mode::fraction: {
      if (!(policy.t > 0.0 && policy.t < 1.0)) {
        fail(ErrorCode::InvalidInput, "resolve_beta: fraction t must lie in (0, 1)");
      }
      const double lo = cm.lambda_min() * graph.vol;
      const double hi = upper;
      if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi))) {
        // Degenerate spectrum (e.g. Q = 0 or Q proportional to D): drop one
        // vol below the spectrum so the pencil's right side is definite.
        return check(lo - graph.vol);
      }
      return check(lo + policy.t * (hi - lo));
    }
    case BetaPolicy::Mode::paper_heuristic: {
      const double n = static_cast<double>(graph.n());
      const double ramp = 0.5 + 0.4 * static_cast<double>(n_constraints) / (n * n);
      double beta = cm.lambda_max() * graph.vol * ramp;
      if (beta >= upper - slack) beta = upper - slack - tol.beta_slack_rel * graph.vol;
      return check(beta);
    }
  }
  fail(ErrorCode::InvalidInput, "resolve_beta: unknown policy mode");
}

}  // namespace speclust
