#include "speclust/solver.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace speclust {

namespace {

bool has_sign_change(const Eigen::VectorXd& u) {
  bool any_neg = false, any_nonneg = false;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (u[i] < 0.0) any_neg = true;
    else any_nonneg = true;
  }
  return any_neg && any_nonneg;
}

std::vector<int> sign_labels(const Eigen::VectorXd& u) {
  std::vector<int> labels(static_cast<std::size_t>(u.size()));
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    labels[static_cast<std::size_t>(i)] = u[i] < 0.0 ? 1 : 0;
  }
  return labels;
}

// Feasible cuts ordered by (cost, -purity, lambda).
bool cut_order(const FeasibleCut& a, const FeasibleCut& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  if (a.purity != b.purity) return a.purity > b.purity;
  return a.lambda < b.lambda;
}

}  // namespace

FeasibleSet feasible_set(const AffinityGraph& graph, const ConstraintMatrix& cm, double beta,
                         const Tolerances& tol) {
  const Eigen::Index n = graph.n();
  Eigen::MatrixXd b = cm.qbar.mat() - (beta / graph.vol) * Eigen::MatrixXd::Identity(n, n);
  PencilSolution pencil = solve_pencil(graph.lbar, SymMatrix(std::move(b), "pencil rhs"), tol);

  FeasibleSet fs;
  fs.filtered_complex = pencil.filtered_complex;

  const Eigen::VectorXd trivial = graph.trivial_vector().normalized();
  const Eigen::VectorXd inv_sqrt_deg = graph.degrees.cwiseSqrt().cwiseInverse();
  const double sqrt_vol = std::sqrt(graph.vol);

  for (EigenPair& p : pencil.pairs) {
    if (p.value <= tol.positive_lambda) {
      ++fs.filtered_nonpositive;
      continue;
    }
    FeasibleCut cut;
    cut.lambda = p.value;
    cut.v = p.vector * sqrt_vol;  // vectors arrive unit-norm
    const double cos = std::abs(cut.v.dot(trivial)) / cut.v.norm();
    if (cos >= 1.0 - tol.trivial_cos_gap) {
      ++fs.filtered_trivial;
      continue;
    }
    cut.u = inv_sqrt_deg.cwiseProduct(cut.v);
    cut.cost = cut.v.dot(graph.lbar.mat() * cut.v);
    cut.purity = cut.v.dot(cm.qbar.mat() * cut.v);
    fs.cuts.push_back(std::move(cut));
  }
  std::sort(fs.cuts.begin(), fs.cuts.end(), cut_order);
  return fs;
}

namespace {

[[noreturn]] void no_feasible(const FeasibleSet& fs, const std::string& what) {
  std::ostringstream msg;
  msg << what << " (feasible=" << fs.cuts.size() << ", filtered_complex=" << fs.filtered_complex
      << ", filtered_nonpositive=" << fs.filtered_nonpositive
      << ", filtered_trivial=" << fs.filtered_trivial << ")";
  fail(ErrorCode::NoFeasibleCut, msg.str());
}

Partition two_way_from_set(FeasibleSet fs, double beta, PartitionSource source) {
  // Cuts arrive cost-sorted; take the first whose sign split is non-empty on
  // both sides, otherwise the "partition" would leave a cluster empty.
  for (FeasibleCut& cut : fs.cuts) {
    if (!has_sign_change(cut.u)) continue;
    Partition part;
    part.labels = sign_labels(cut.u);
    part.k = 2;
    part.beta = beta;
    part.source = source;
    part.n_feasible = static_cast<int>(fs.cuts.size());
    part.filtered_complex = fs.filtered_complex;
    part.filtered_nonpositive = fs.filtered_nonpositive;
    part.cuts.push_back(std::move(cut));
    return part;
  }
  no_feasible(fs, "no feasible cut with a sign change");
}

}  // namespace

Partition csp_two_way(const AffinityGraph& graph, const ConstraintMatrix& cm,
                      const BetaPolicy& policy, std::int64_t n_constraints,
                      const Tolerances& tol) {
  const double beta = resolve_beta(policy, cm, graph, 2, n_constraints, BetaBound::k_way, tol);
  FeasibleSet fs = feasible_set(graph, cm, beta, tol);
  if (fs.cuts.empty()) no_feasible(fs, "empty feasible set");
  return two_way_from_set(std::move(fs), beta, PartitionSource::two_way);
}

Eigen::MatrixXd kway_embedding(const AffinityGraph& graph, const Eigen::MatrixXd& vstar,
                               KWayMode mode) {
  const Eigen::VectorXd inv_sqrt_deg = graph.degrees.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd embed = inv_sqrt_deg.asDiagonal() * vstar;
  if (mode == KWayMode::embed_kmeans) return embed;
  if (mode == KWayMode::weighted_sign_kmeans) {
    const Eigen::MatrixXd w = vstar.transpose() * graph.lbar.mat() * vstar;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(w);
    if (!lu.isInvertible()) {
      fail(ErrorCode::SingularWeighting, "kway_embedding: V*^T L-bar V* is singular");
    }
    embed = embed * lu.inverse();
  }
  return embed.unaryExpr([](double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

Partition csp_k_way(const AffinityGraph& graph, const ConstraintMatrix& cm,
                    const BetaPolicy& policy, int k, KWayMode mode, std::uint64_t seed,
                    std::int64_t n_constraints, const Tolerances& tol) {
  if (k < 2) fail(ErrorCode::InvalidK, "csp_k_way: k must be >= 2");
  const double beta = resolve_beta(policy, cm, graph, k, n_constraints, BetaBound::k_way, tol);
  FeasibleSet fs = feasible_set(graph, cm, beta, tol);

  // Columns of V*: the k-1 lowest-cost cuts that define actual cuts.
  std::vector<const FeasibleCut*> picked;
  for (const FeasibleCut& cut : fs.cuts) {
    if (!has_sign_change(cut.u)) continue;
    picked.push_back(&cut);
    if (static_cast<int>(picked.size()) == k - 1) break;
  }
  if (static_cast<int>(picked.size()) < k - 1) {
    no_feasible(fs, "fewer than k-1 feasible cuts for k=" + std::to_string(k));
  }

  Eigen::MatrixXd vstar(graph.n(), k - 1);
  for (int c = 0; c < k - 1; ++c) vstar.col(c) = picked[static_cast<std::size_t>(c)]->v;

  const Eigen::MatrixXd embed = kway_embedding(graph, vstar, mode);
  KMeansResult km = kmeans(embed, k, seed, 8, tol);

  Partition part;
  part.labels = std::move(km.labels);
  part.k = k;
  part.beta = beta;
  part.source = PartitionSource::k_way;
  part.mode = mode;
  part.n_feasible = static_cast<int>(fs.cuts.size());
  part.filtered_complex = fs.filtered_complex;
  part.filtered_nonpositive = fs.filtered_nonpositive;
  for (const FeasibleCut* cut : picked) part.cuts.push_back(*cut);
  return part;
}

TransferResult transfer_cut(const AffinityGraph& target, const AffinityGraph& source,
                            const BetaPolicy& policy, const Tolerances& tol) {
  const ConstraintMatrix cm = from_source_graph(source, target, tol);
  const double beta = resolve_beta(policy, cm, target, 2, 0, BetaBound::transfer, tol);
  FeasibleSet fs = feasible_set(target, cm, beta, tol);
  if (fs.cuts.empty()) no_feasible(fs, "empty feasible set");
  Partition part = two_way_from_set(std::move(fs), beta, PartitionSource::transfer);
  const double cost = part.cuts.front().cost;
  return TransferResult{std::move(part), cost};
}

Partition unconstrained_ncut(const AffinityGraph& graph, int k, std::uint64_t seed,
                             const Tolerances& tol) {
  if (k < 2) fail(ErrorCode::InvalidK, "unconstrained_ncut: k must be >= 2");
  if (k > graph.n()) fail(ErrorCode::InvalidK, "unconstrained_ncut: k exceeds n");

  const std::vector<EigenPair> eigs = sym_eig(graph.lbar, tol);
  const Eigen::VectorXd inv_sqrt_deg = graph.degrees.cwiseSqrt().cwiseInverse();
  const double sqrt_vol = std::sqrt(graph.vol);

  Partition part;
  part.k = k;
  part.source = PartitionSource::unconstrained;

  auto record_cut = [&](const EigenPair& p) {
    FeasibleCut cut;
    cut.lambda = p.value;
    cut.v = p.vector * sqrt_vol;
    cut.u = inv_sqrt_deg.cwiseProduct(cut.v);
    cut.cost = cut.v.dot(graph.lbar.mat() * cut.v);
    cut.purity = 0.0;  // no constraints in play
    part.cuts.push_back(std::move(cut));
  };

  if (k == 2) {
    record_cut(eigs[1]);
    part.labels = sign_labels(part.cuts.front().u);
    return part;
  }

  Eigen::MatrixXd embed(graph.n(), k - 1);
  for (int c = 0; c < k - 1; ++c) {
    record_cut(eigs[static_cast<std::size_t>(c + 1)]);
    embed.col(c) = part.cuts.back().u;
  }
  KMeansResult km = kmeans(embed, k, seed, 8, tol);
  part.labels = std::move(km.labels);
  return part;
}

std::vector<JNRSample> jnr_samples(const AffinityGraph& graph, const ConstraintMatrix& cm,
                                   const std::vector<FeasibleCut>& cuts,
                                   bool include_unconstrained, const Tolerances& tol) {
  std::vector<JNRSample> out;
  auto add = [&](Eigen::VectorXd v, JNROrigin origin) {
    v.normalize();
    JNRSample s;
    s.cost_coord = v.dot(graph.lbar.mat() * v);
    s.purity_coord = v.dot(cm.qbar.mat() * v);
    s.origin = origin;
    out.push_back(s);
  };
  if (include_unconstrained) {
    for (const EigenPair& p : sym_eig(graph.lbar, tol)) {
      add(p.vector, JNROrigin::unconstrained_eigvec);
    }
  }
  for (const FeasibleCut& cut : cuts) add(cut.v, JNROrigin::feasible_cut);
  return out;
}

}  // namespace speclust
