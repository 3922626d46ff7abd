#pragma once

#include <array>

namespace speclust {

/// Central numeric tolerance record. Every module takes its thresholds from
/// here so experiments can tighten or relax them in one place.
struct Tolerances {
  // sym_eig: reconstruction residual bound is eig_residual * (1 + |value|).
  double eig_residual = 1e-8;
  // solve_pencil: residual bound is pencil_residual * (1 + |lambda|) * ||v||_inf.
  double pencil_residual = 1e-6;
  // Reality filter: keep pairs with |Im lambda| <= reality_rel * (1 + |Re lambda|).
  double reality_rel = 1e-8;
  // Smallest eigenvalue of b above which the definite (symmetric) path is used.
  double definite_cutoff = 1e-10;
  // Ridge escalation ladder for near-singular b.
  std::array<double, 3> pencil_jitter{1e-12, 1e-10, 1e-8};
  // Feasible cuts require lambda > positive_lambda.
  double positive_lambda = 1e-8;
  // Trivial-vector rejection: |cos(v, D^{1/2} 1)| >= 1 - trivial_cos_gap.
  double trivial_cos_gap = 1e-6;
  // kmeans convergence: stop when max center shift drops below this.
  double kmeans_shift = 1e-6;
  int kmeans_max_iter = 100;
  // Dense matrix symmetry check when loading files.
  double symmetry_check = 1e-8;
  // Beta bound check: accept beta < bound - beta_slack_rel * vol.
  double beta_slack_rel = 1e-12;
  // Relative consistency required of derived graph quantities.
  double graph_consistency = 1e-10;
};

}  // namespace speclust
