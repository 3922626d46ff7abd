#include "speclust/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "speclust/rng.hpp"

namespace speclust {

SymMatrix::SymMatrix(Eigen::MatrixXd m, const char* context) {
  if (m.rows() != m.cols()) {
    fail(ErrorCode::InvalidMatrix,
         std::string(context) + ": matrix is " + std::to_string(m.rows()) + "x" +
             std::to_string(m.cols()) + ", expected square");
  }
  if (!m.allFinite()) {
    fail(ErrorCode::InvalidMatrix, std::string(context) + ": non-finite entries");
  }
  m_ = 0.5 * (m + m.transpose()).eval();
}

void canonicalize_sign(Eigen::VectorXd& v) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  if (v[best] < 0.0) v = -v;
}

std::vector<EigenPair> sym_eig(const SymMatrix& m, const Tolerances&) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.mat());
  if (es.info() != Eigen::Success) {
    fail(ErrorCode::InvalidMatrix, "sym_eig: eigensolver did not converge");
  }
  std::vector<EigenPair> out(static_cast<std::size_t>(m.size()));
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    EigenPair& p = out[static_cast<std::size_t>(i)];
    p.value = es.eigenvalues()[i];
    p.vector = es.eigenvectors().col(i);
    p.vector.normalize();
    canonicalize_sign(p.vector);
    p.imag_residual = 0.0;
  }
  return out;
}

namespace {

// Rotate a complex eigenvector's phase so the largest-modulus entry is real
// positive, then drop the imaginary part. Returns the discarded magnitude
// relative to the vector norm.
double realize_vector(const Eigen::VectorXcd& z, Eigen::VectorXd& out) {
  Eigen::Index best = 0;
  double best_abs = -1.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double a = std::abs(z[i]);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  if (best_abs <= 0.0) {
    out = Eigen::VectorXd::Zero(z.size());
    return 0.0;
  }
  const std::complex<double> phase = std::conj(z[best]) / std::abs(z[best]);
  Eigen::VectorXcd rotated = z * phase;
  out = rotated.real();
  const double imag_norm = rotated.imag().cwiseAbs().maxCoeff();
  const double norm = out.norm();
  if (norm > 0.0) out /= norm;
  return norm > 0.0 ? imag_norm / std::max(1.0, norm) : imag_norm;
}

PencilSolution solve_definite(const SymMatrix& a, const SymMatrix& b,
                              const std::vector<EigenPair>& b_eigs, const Tolerances& tol) {
  const Eigen::Index n = a.size();
  // b = U diag(w) U^T with all w > 0; reduce to C = b^{-1/2} a b^{-1/2}.
  Eigen::MatrixXd u(n, n);
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    w[i] = b_eigs[static_cast<std::size_t>(i)].value;
    u.col(i) = b_eigs[static_cast<std::size_t>(i)].vector;
  }
  const Eigen::VectorXd inv_sqrt = w.cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd b_inv_half = u * inv_sqrt.asDiagonal() * u.transpose();
  const SymMatrix c(b_inv_half * a.mat() * b_inv_half, "solve_pencil");
  const std::vector<EigenPair> c_eigs = sym_eig(c, tol);

  PencilSolution sol;
  sol.pairs.reserve(c_eigs.size());
  for (const EigenPair& p : c_eigs) {
    EigenPair q;
    q.value = p.value;
    q.vector = b_inv_half * p.vector;
    q.vector.normalize();
    canonicalize_sign(q.vector);
    q.imag_residual = 0.0;
    sol.pairs.push_back(std::move(q));
  }
  return sol;
}

}  // namespace

PencilSolution solve_pencil(const SymMatrix& a, const SymMatrix& b, const Tolerances& tol) {
  if (a.size() != b.size()) {
    fail(ErrorCode::InvalidMatrix, "solve_pencil: dimension mismatch " +
                                       std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  const Eigen::Index n = a.size();
  const std::vector<EigenPair> b_eigs = sym_eig(b, tol);

  if (b_eigs.front().value > tol.definite_cutoff) {
    return solve_definite(a, b, b_eigs, tol);
  }

  // Indefinite or near-singular b: solve the standard problem on (b+eps)^{-1} a,
  // escalating the ridge until b is numerically invertible.
  const double b_scale = std::max(1.0, std::abs(b_eigs.front().value));
  double used_eps = std::numeric_limits<double>::quiet_NaN();
  Eigen::MatrixXd m;
  for (std::size_t step = 0; step <= tol.pencil_jitter.size(); ++step) {
    const double eps = step == 0 ? 0.0 : tol.pencil_jitter[step - 1];
    double min_abs = std::numeric_limits<double>::infinity();
    for (const EigenPair& p : b_eigs) min_abs = std::min(min_abs, std::abs(p.value + eps));
    if (min_abs <= 1e-14 * b_scale) continue;
    Eigen::MatrixXd u(n, n);
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      w[i] = b_eigs[static_cast<std::size_t>(i)].value + eps;
      u.col(i) = b_eigs[static_cast<std::size_t>(i)].vector;
    }
    m = u * w.cwiseInverse().asDiagonal() * u.transpose() * a.mat();
    used_eps = eps;
    break;
  }
  if (std::isnan(used_eps)) {
    fail(ErrorCode::SingularPencil,
         "solve_pencil: b numerically singular after jitter escalation");
  }

  Eigen::EigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) {
    fail(ErrorCode::SingularPencil, "solve_pencil: eigensolver did not converge");
  }

  PencilSolution sol;
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::complex<double> lam = es.eigenvalues()[i];
    if (std::abs(lam.imag()) > tol.reality_rel * (1.0 + std::abs(lam.real()))) {
      ++sol.filtered_complex;
      continue;
    }
    EigenPair p;
    p.value = lam.real();
    const double vec_imag = realize_vector(es.eigenvectors().col(i), p.vector);
    canonicalize_sign(p.vector);
    p.imag_residual = std::max(std::abs(lam.imag()), vec_imag);
    sol.pairs.push_back(std::move(p));
  }
  std::sort(sol.pairs.begin(), sol.pairs.end(),
            [](const EigenPair& x, const EigenPair& y) { return x.value < y.value; });
  return sol;
}

namespace {

double squared_distance(const Eigen::MatrixXd& rows, Eigen::Index i, const Eigen::RowVectorXd& c) {
  return (rows.row(i) - c).squaredNorm();
}

struct LloydRun {
  std::vector<int> labels;
  Eigen::MatrixXd centers;
  double inertia = std::numeric_limits<double>::infinity();
  int iterations = 0;
};

LloydRun lloyd_once(const Eigen::MatrixXd& rows, int k, Rng& rng, const Tolerances& tol) {
  const Eigen::Index n = rows.rows();
  const Eigen::Index d = rows.cols();

  // Distance-weighted seeding.
  Eigen::MatrixXd centers(k, d);
  centers.row(0) = rows.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n))));
  Eigen::VectorXd dist2(n);
  for (Eigen::Index i = 0; i < n; ++i) dist2[i] = squared_distance(rows, i, centers.row(0));
  for (int c = 1; c < k; ++c) {
    const double total = dist2.sum();
    Eigen::Index pick = 0;
    if (total <= 0.0) {
      pick = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n)));
    } else {
      double r = rng.uniform() * total;
      for (Eigen::Index i = 0; i < n; ++i) {
        r -= dist2[i];
        if (r <= 0.0) {
          pick = i;
          break;
        }
        pick = i;
      }
    }
    centers.row(c) = rows.row(pick);
    for (Eigen::Index i = 0; i < n; ++i) {
      dist2[i] = std::min(dist2[i], squared_distance(rows, i, centers.row(c)));
    }
  }

  LloydRun run;
  run.labels.assign(static_cast<std::size_t>(n), 0);
  std::vector<Eigen::Index> counts(static_cast<std::size_t>(k), 0);

  for (int iter = 1; iter <= tol.kmeans_max_iter; ++iter) {
    run.iterations = iter;
    // Assignment.
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = squared_distance(rows, i, centers.row(0));
      for (int c = 1; c < k; ++c) {
        const double dd = squared_distance(rows, i, centers.row(c));
        if (dd < best_d) {
          best_d = dd;
          best = c;
        }
      }
      run.labels[static_cast<std::size_t>(i)] = best;
    }
    std::fill(counts.begin(), counts.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(run.labels[static_cast<std::size_t>(i)])];

    // Empty-cluster repair: move the globally farthest point into each empty cluster.
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) continue;
      Eigen::Index worst = -1;
      double worst_d = -1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const int li = run.labels[static_cast<std::size_t>(i)];
        if (counts[static_cast<std::size_t>(li)] <= 1) continue;
        const double dd = squared_distance(rows, i, centers.row(li));
        if (dd > worst_d) {
          worst_d = dd;
          worst = i;
        }
      }
      if (worst < 0) break;
      --counts[static_cast<std::size_t>(run.labels[static_cast<std::size_t>(worst)])];
      run.labels[static_cast<std::size_t>(worst)] = c;
      ++counts[static_cast<std::size_t>(c)];
      centers.row(c) = rows.row(worst);
    }

    // Update.
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, d);
    for (Eigen::Index i = 0; i < n; ++i) next.row(run.labels[static_cast<std::size_t>(i)]) += rows.row(i);
    double shift = 0.0;
    for (int c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) next.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
      else next.row(c) = centers.row(c);
      shift = std::max(shift, (next.row(c) - centers.row(c)).norm());
    }
    centers = next;
    if (shift < tol.kmeans_shift) break;
  }

  run.inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    run.inertia += squared_distance(rows, i, centers.row(run.labels[static_cast<std::size_t>(i)]));
  }
  run.centers = centers;
  return run;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& rows, int k, std::uint64_t seed, int restarts,
                    const Tolerances& tol) {
  if (!rows.allFinite()) fail(ErrorCode::InvalidInput, "kmeans: non-finite rows");
  if (k < 1) fail(ErrorCode::InvalidK, "kmeans: k must be positive");
  if (k > rows.rows()) {
    fail(ErrorCode::InvalidK, "kmeans: k=" + std::to_string(k) + " exceeds n=" +
                                  std::to_string(rows.rows()));
  }
  if (restarts < 1) restarts = 1;

  LloydRun best;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
    LloydRun run = lloyd_once(rows, k, rng, tol);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  KMeansResult result;
  result.labels = std::move(best.labels);
  result.centers = std::move(best.centers);
  result.inertia = best.inertia;
  result.iterations = best.iterations;
  return result;
}

}  // namespace speclust
