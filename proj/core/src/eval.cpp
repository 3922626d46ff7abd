#include "speclust/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "speclust/rng.hpp"

namespace speclust {

double ari(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size() || pred.size() < 2) {
    fail(ErrorCode::InvalidInput, "ari: label sequences must have equal length >= 2");
  }
  const auto relabel = [](const std::vector<int>& v, std::vector<int>& out) {
    std::vector<int> seen;
    out.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto it = std::find(seen.begin(), seen.end(), v[i]);
      if (it == seen.end()) {
        out[i] = static_cast<int>(seen.size());
        seen.push_back(v[i]);
      } else {
        out[i] = static_cast<int>(it - seen.begin());
      }
    }
    return static_cast<int>(seen.size());
  };
  std::vector<int> a, b;
  const int ka = relabel(pred, a);
  const int kb = relabel(truth, b);

  std::vector<std::vector<long long>> table(static_cast<std::size_t>(ka),
                                            std::vector<long long>(static_cast<std::size_t>(kb), 0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++table[static_cast<std::size_t>(a[i])][static_cast<std::size_t>(b[i])];
  }
  const auto choose2 = [](long long x) { return 0.5 * static_cast<double>(x) * static_cast<double>(x - 1); };

  double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (int i = 0; i < ka; ++i) {
    long long row = 0;
    for (int j = 0; j < kb; ++j) {
      const long long c = table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      sum_ij += choose2(c);
      row += c;
    }
    sum_a += choose2(row);
  }
  for (int j = 0; j < kb; ++j) {
    long long col = 0;
    for (int i = 0; i < ka; ++i) col += table[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    sum_b += choose2(col);
  }
  const double total = choose2(static_cast<long long>(pred.size()));
  const double expected = sum_a * sum_b / total;
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return 1.0;  // both partitions carry no pair information
  return (sum_ij - expected) / (max_index - expected);
}

double satisfaction_ratio(const std::vector<int>& labels, const ConstraintList& list) {
  if (list.empty()) fail(ErrorCode::InvalidInput, "satisfaction_ratio: empty constraint list");
  if (static_cast<Eigen::Index>(labels.size()) != list.n) {
    fail(ErrorCode::InvalidInput, "satisfaction_ratio: partition size mismatch");
  }
  long long considered = 0, satisfied = 0;
  for (const ConstraintTriple& t : list.triples) {
    if (t.w == 0.0) continue;
    ++considered;
    const bool same = labels[static_cast<std::size_t>(t.i)] == labels[static_cast<std::size_t>(t.j)];
    if ((t.w > 0.0 && same) || (t.w < 0.0 && !same)) ++satisfied;
  }
  if (considered == 0) fail(ErrorCode::InvalidInput, "satisfaction_ratio: all weights are zero");
  return static_cast<double>(satisfied) / static_cast<double>(considered);
}

double satisfaction_ratio(const Partition& partition, const ConstraintList& list) {
  return satisfaction_ratio(partition.labels, list);
}

Partition spectral_learning_baseline(const AffinityGraph& graph, const ConstraintList& list,
                                     int k, std::uint64_t seed, const Tolerances& tol) {
  if (list.n != graph.n()) {
    fail(ErrorCode::InvalidInput, "spectral_learning_baseline: list/graph size mismatch");
  }
  Eigen::MatrixXd a = graph.a.mat();
  for (const ConstraintTriple& t : list.triples) {
    if (t.w == 0.0) continue;
    const double v = t.w > 0.0 ? 1.0 : 0.0;
    a(t.i, t.j) = v;
    a(t.j, t.i) = v;
  }
  const AffinityGraph modified = build_laplacian(SymMatrix(std::move(a), "spectral learning"), tol);
  Partition part = unconstrained_ncut(modified, k, seed, tol);
  return part;
}

namespace {

struct CellResult {
  bool ok = false;
  double value = 0.0;
};

ConstraintList list_from_matrix(const SymMatrix& q) {
  std::vector<ConstraintTriple> triples;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    for (Eigen::Index j = i + 1; j < q.size(); ++j) {
      if (q(i, j) != 0.0) {
        triples.push_back({static_cast<int>(i), static_cast<int>(j), q(i, j)});
      }
    }
  }
  return ConstraintList(q.size(), std::move(triples));
}

void parallel_cells(std::size_t count, int jobs, const std::function<void(std::size_t)>& work) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  const int n_threads = std::min<int>(jobs, static_cast<int>(count));
  threads.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) {
    threads.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
    });
  }
  for (std::thread& t : threads) t.join();
}

}  // namespace

SweepResult convergence_experiment(const PointCloud& points,
                                   const std::vector<int>& constraint_counts, int trials,
                                   std::uint64_t seed, const ConvergenceOptions& options,
                                   const Tolerances& tol) {
  if (!points.has_labels()) {
    fail(ErrorCode::InvalidInput, "convergence_experiment: points carry no ground truth");
  }
  if (trials < 1 || constraint_counts.empty()) {
    fail(ErrorCode::InvalidInput, "convergence_experiment: empty grid or no trials");
  }

  const AffinityGraph graph = rbf_affinity(points, options.sigma, tol);
  const Partition baseline = unconstrained_ncut(graph, 2, 0, tol);
  const double baseline_ari = ari(baseline.labels, points.labels);

  const std::size_t cells = constraint_counts.size() * static_cast<std::size_t>(trials);
  std::vector<CellResult> results(cells);

  parallel_cells(cells, options.jobs, [&](std::size_t cell) {
    const std::size_t gi = cell / static_cast<std::size_t>(trials);
    const int trial = static_cast<int>(cell % static_cast<std::size_t>(trials));
    const int m = constraint_counts[gi];
    CellResult& r = results[cell];
    if (m == 0) {
      r.ok = true;
      r.value = baseline_ari;
      return;
    }
    // Seeds keyed on the constraint count itself, not the grid position, so
    // reordering the grid cannot change any cell.
    const std::uint64_t cell_seed =
        derive_seed(seed, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(trial));
    try {
      const ConstraintList list =
          sample_constraints(points.labels, baseline.labels, m, cell_seed, options.strategy);
      const ConstraintMatrix cm = materialize(list, graph, tol);
      const Partition part = csp_two_way(graph, cm, options.policy, m, tol);
      r.ok = true;
      r.value = ari(part.labels, points.labels);
    } catch (const Error&) {
      r.ok = false;
    }
  });

  SweepResult sweep;
  sweep.seed = seed;
  sweep.trials_per_point = trials;
  for (std::size_t gi = 0; gi < constraint_counts.size(); ++gi) {
    SweepPoint pt;
    pt.x = static_cast<double>(constraint_counts[gi]);
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    int ok = 0;
    for (int t = 0; t < trials; ++t) {
      const CellResult& r = results[gi * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)];
      if (!r.ok) {
        ++pt.failures;
        continue;
      }
      ++ok;
      sum += r.value;
      lo = std::min(lo, r.value);
      hi = std::max(hi, r.value);
    }
    if (ok > 0) {
      pt.mean = sum / ok;
      pt.min = lo;
      pt.max = hi;
    }
    sweep.points.push_back(pt);
  }
  return sweep;
}

SweepResult BetaSweepResult::summary() const {
  SweepResult sweep;
  sweep.trials_per_point = 1;
  for (const BetaSweepRow& row : rows) {
    SweepPoint pt;
    pt.x = row.beta;
    if (row.ok) {
      pt.mean = pt.min = pt.max = row.metrics.satisfied_ratio;
    } else {
      pt.failures = 1;
    }
    sweep.points.push_back(pt);
  }
  return sweep;
}

BetaSweepResult beta_sweep(const AffinityGraph& graph, const ConstraintMatrix& cm,
                           const std::vector<double>& t_grid, int k, std::uint64_t seed,
                           const Tolerances& tol) {
  if (t_grid.empty()) fail(ErrorCode::InvalidInput, "beta_sweep: empty grid");
  const ConstraintList list = list_from_matrix(cm.q);

  BetaSweepResult result;
  for (const double t : t_grid) {
    BetaSweepRow row;
    row.t = t;
    try {
      const BetaPolicy policy = BetaPolicy::fraction(t);
      row.beta = resolve_beta(policy, cm, graph, k, static_cast<std::int64_t>(list.size()),
                              BetaBound::k_way, tol);
      const Partition part =
          k == 2 ? csp_two_way(graph, cm, policy, static_cast<std::int64_t>(list.size()), tol)
                 : csp_k_way(graph, cm, policy, k, KWayMode::embed_kmeans, seed,
                             static_cast<std::int64_t>(list.size()), tol);
      row.ok = true;
      row.metrics.beta = part.beta;
      row.metrics.cost = part.cuts.front().cost;
      row.metrics.purity = part.cuts.front().purity;
      row.metrics.n_constraints = static_cast<std::int64_t>(list.size());
      row.metrics.satisfied_ratio = list.empty() ? 0.0 : satisfaction_ratio(part, list);
    } catch (const Error&) {
      row.ok = false;
    }
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace speclust
