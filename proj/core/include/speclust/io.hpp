#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "speclust/constraints.hpp"
#include "speclust/eval.hpp"
#include "speclust/graph.hpp"

namespace speclust::io {

/// File grammars (UTF-8, LF, '#' comment lines ignored everywhere):
///   points-csv   one point per line "x1,x2,...,xd[,label]"
///   edge-list    "i j w" whitespace-separated, w > 0, symmetrized by max
///   dense-csv    n lines of n comma-separated reals, symmetric within 1e-8
///   constraints  "i j w" per line, sign of w encodes ML/CL
///   labels       one integer (or '?') per line
/// All indices are 0-based.

PointCloud load_points_csv(const std::filesystem::path& path, bool labeled_last_column);
SymMatrix load_edge_list(const std::filesystem::path& path);
SymMatrix load_dense_csv(const std::filesystem::path& path, const Tolerances& tol = {});
std::vector<ConstraintTriple> load_constraint_triples(const std::filesystem::path& path);
std::vector<int> load_labels(const std::filesystem::path& path);  // -1 for '?'

void write_points_csv(const std::filesystem::path& path, const PointCloud& points);
void write_labels(const std::filesystem::path& path, const std::vector<int>& labels);

/// Clustering result payload; written as a JSON object with doubles at 17
/// significant digits so readers recover bit-identical values.
struct ResultDocument {
  std::vector<int> labels;
  std::vector<double> indicator;  // u*
  double eigenvalue = 0.0;
  double cost = 0.0;
  double purity = 0.0;
  double beta = 0.0;
  double vol = 0.0;
  bool has_satisfied_ratio = false;
  double satisfied_ratio = 0.0;
  int n_feasible = 0;
  int filtered_complex = 0;
  int filtered_nonpositive = 0;
};

void write_result_json(const std::filesystem::path& path, const ResultDocument& doc);
ResultDocument read_result_json(const std::filesystem::path& path);

/// Sweep CSV: header "x,mean,min,max,failures".
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep);
SweepResult read_sweep_csv(const std::filesystem::path& path);

/// JNR CSV: header "cost,purity,origin".
void write_jnr_csv(const std::filesystem::path& path, const std::vector<JNRSample>& samples);
std::vector<JNRSample> read_jnr_csv(const std::filesystem::path& path);

/// Serializes a double with 17 significant digits (round-trip exact).
std::string format_double(double value);

/// Writes content to path atomically (temp file in the same directory, then
/// rename).
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// FNV-1a 64-bit content hash, hex-encoded; used by run manifests.
std::string file_hash(const std::filesystem::path& path);

}  // namespace speclust::io
