#include "speclust/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace speclust::io {

namespace {

[[noreturn]] void parse_fail(const std::filesystem::path& path, std::size_t line,
                             const std::string& why) {
  fail(ErrorCode::FormatError, path.string() + ":" + std::to_string(line) + ": " + why);
}

/// Reads all non-comment, non-blank lines with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::string>> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::FormatError, path.string() + ": cannot open");
  std::vector<std::pair<std::size_t, std::string>> lines;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    lines.emplace_back(no, line);
  }
  if (lines.empty()) fail(ErrorCode::FormatError, path.string() + ": no data lines");
  return lines;
}

double parse_double(const std::filesystem::path& path, std::size_t line_no,
                    const std::string& token) {
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used != token.size()) parse_fail(path, line_no, "trailing junk in '" + token + "'");
    return v;
  } catch (const std::exception&) {
    parse_fail(path, line_no, "not a number: '" + token + "'");
  }
}

long parse_int(const std::filesystem::path& path, std::size_t line_no, const std::string& token) {
  try {
    std::size_t used = 0;
    const long v = std::stol(token, &used);
    if (used != token.size()) parse_fail(path, line_no, "trailing junk in '" + token + "'");
    return v;
  } catch (const std::exception&) {
    parse_fail(path, line_no, "not an integer: '" + token + "'");
  }
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != ' ' && c != '\t') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

}  // namespace

PointCloud load_points_csv(const std::filesystem::path& path, bool labeled_last_column) {
  const auto lines = read_lines(path);
  std::vector<std::vector<std::string>> rows;
  rows.reserve(lines.size());
  std::size_t width = 0;
  for (const auto& [no, line] : lines) {
    rows.push_back(split_csv(line));
    if (width == 0) width = rows.back().size();
    if (rows.back().size() != width) {
      parse_fail(path, no, "expected " + std::to_string(width) + " fields, got " +
                               std::to_string(rows.back().size()));
    }
  }
  const std::size_t dim = labeled_last_column ? width - 1 : width;
  if (dim == 0) parse_fail(path, lines.front().first, "no coordinate columns");

  PointCloud pc;
  pc.coords.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(dim));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      pc.coords(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parse_double(path, lines[r].first, rows[r][c]);
    }
    if (labeled_last_column) {
      pc.labels.push_back(static_cast<int>(parse_int(path, lines[r].first, rows[r][dim])));
    }
  }
  return pc;
}

SymMatrix load_edge_list(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  struct Edge {
    long i, j;
    double w;
  };
  std::vector<Edge> edges;
  long max_index = -1;
  for (const auto& [no, line] : lines) {
    const auto toks = split_ws(line);
    if (toks.size() != 3) parse_fail(path, no, "expected 'i j w'");
    const long i = parse_int(path, no, toks[0]);
    const long j = parse_int(path, no, toks[1]);
    const double w = parse_double(path, no, toks[2]);
    if (i < 0 || j < 0) parse_fail(path, no, "negative node index");
    if (i == j) parse_fail(path, no, "self-loop on node " + std::to_string(i));
    if (w < 0.0) fail(ErrorCode::InvalidMatrix, path.string() + ":" + std::to_string(no) +
                                                    ": negative edge weight");
    if (w == 0.0) parse_fail(path, no, "zero edge weight");
    edges.push_back({i, j, w});
    max_index = std::max({max_index, i, j});
  }
  const Eigen::Index n = static_cast<Eigen::Index>(max_index + 1);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  // Directions may disagree; keep the larger weight.
  for (const Edge& e : edges) {
    a(e.i, e.j) = std::max(a(e.i, e.j), e.w);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double w = std::max(a(i, j), a(j, i));
      a(i, j) = w;
      a(j, i) = w;
    }
  }
  return SymMatrix(std::move(a), path.string().c_str());
}

SymMatrix load_dense_csv(const std::filesystem::path& path, const Tolerances& tol) {
  const auto lines = read_lines(path);
  const Eigen::Index n = static_cast<Eigen::Index>(lines.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto toks = split_csv(lines[static_cast<std::size_t>(r)].second);
    if (static_cast<Eigen::Index>(toks.size()) != n) {
      parse_fail(path, lines[static_cast<std::size_t>(r)].first,
                 "expected " + std::to_string(n) + " columns, got " + std::to_string(toks.size()));
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      m(r, c) = parse_double(path, lines[static_cast<std::size_t>(r)].first,
                             toks[static_cast<std::size_t>(c)]);
    }
  }
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol.symmetry_check) {
    fail(ErrorCode::InvalidMatrix,
         path.string() + ": asymmetric beyond tolerance (max deviation " + format_double(asym) + ")");
  }
  if ((m.array() < 0.0).any()) {
    fail(ErrorCode::InvalidMatrix, path.string() + ": negative weights");
  }
  return SymMatrix(std::move(m), path.string().c_str());
}

std::vector<ConstraintTriple> load_constraint_triples(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  std::vector<ConstraintTriple> triples;
  triples.reserve(lines.size());
  for (const auto& [no, line] : lines) {
    const auto toks = split_ws(line);
    if (toks.size() != 3) parse_fail(path, no, "expected 'i j w'");
    ConstraintTriple t;
    t.i = static_cast<int>(parse_int(path, no, toks[0]));
    t.j = static_cast<int>(parse_int(path, no, toks[1]));
    t.w = parse_double(path, no, toks[2]);
    triples.push_back(t);
  }
  return triples;
}

std::vector<int> load_labels(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  std::vector<int> labels;
  labels.reserve(lines.size());
  for (const auto& [no, line] : lines) {
    const auto toks = split_ws(line);
    if (toks.size() != 1) parse_fail(path, no, "expected one label per line");
    if (toks[0] == "?") {
      labels.push_back(-1);
    } else {
      labels.push_back(static_cast<int>(parse_int(path, no, toks[0])));
    }
  }
  return labels;
}

std::string format_double(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::InvalidInput, "cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

void write_points_csv(const std::filesystem::path& path, const PointCloud& points) {
  std::ostringstream out;
  for (Eigen::Index i = 0; i < points.n(); ++i) {
    for (Eigen::Index c = 0; c < points.dim(); ++c) {
      if (c > 0) out << ',';
      out << format_double(points.coords(i, c));
    }
    if (points.has_labels()) out << ',' << points.labels[static_cast<std::size_t>(i)];
    out << '\n';
  }
  atomic_write(path, out.str());
}

void write_labels(const std::filesystem::path& path, const std::vector<int>& labels) {
  std::ostringstream out;
  for (int l : labels) {
    if (l < 0) out << "?\n";
    else out << l << '\n';
  }
  atomic_write(path, out.str());
}

namespace {

void json_int_array(std::ostringstream& out, const std::vector<int>& v) {
  out << '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out << ',';
    out << v[i];
  }
  out << ']';
}

void json_double_array(std::ostringstream& out, const std::vector<double>& v) {
  out << '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) out << ',';
    out << format_double(v[i]);
  }
  out << ']';
}

}  // namespace

void write_result_json(const std::filesystem::path& path, const ResultDocument& doc) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"labels\": ";
  json_int_array(out, doc.labels);
  out << ",\n  \"indicator\": ";
  json_double_array(out, doc.indicator);
  out << ",\n  \"eigenvalue\": " << format_double(doc.eigenvalue);
  out << ",\n  \"cost\": " << format_double(doc.cost);
  out << ",\n  \"purity\": " << format_double(doc.purity);
  out << ",\n  \"beta\": " << format_double(doc.beta);
  out << ",\n  \"vol\": " << format_double(doc.vol);
  if (doc.has_satisfied_ratio) {
    out << ",\n  \"satisfied_ratio\": " << format_double(doc.satisfied_ratio);
  }
  out << ",\n  \"n_feasible\": " << doc.n_feasible;
  out << ",\n  \"filtered_complex\": " << doc.filtered_complex;
  out << ",\n  \"filtered_nonpositive\": " << doc.filtered_nonpositive;
  out << "\n}\n";
  atomic_write(path, out.str());
}

ResultDocument read_result_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::FormatError, path.string() + ": cannot open");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::FormatError, path.string() + ": " + e.what());
  }
  ResultDocument doc;
  try {
    doc.labels = j.at("labels").get<std::vector<int>>();
    doc.indicator = j.at("indicator").get<std::vector<double>>();
    doc.eigenvalue = j.at("eigenvalue").get<double>();
    doc.cost = j.at("cost").get<double>();
    doc.purity = j.at("purity").get<double>();
    doc.beta = j.at("beta").get<double>();
    doc.vol = j.at("vol").get<double>();
    if (j.contains("satisfied_ratio")) {
      doc.has_satisfied_ratio = true;
      doc.satisfied_ratio = j.at("satisfied_ratio").get<double>();
    }
    doc.n_feasible = j.at("n_feasible").get<int>();
    doc.filtered_complex = j.at("filtered_complex").get<int>();
    doc.filtered_nonpositive = j.at("filtered_nonpositive").get<int>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::FormatError, path.string() + ": " + e.what());
  }
  return doc;
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep) {
  std::ostringstream out;
  out << "x,mean,min,max,failures\n";
  for (const SweepPoint& p : sweep.points) {
    out << format_double(p.x) << ',' << format_double(p.mean) << ',' << format_double(p.min)
        << ',' << format_double(p.max) << ',' << p.failures << '\n';
  }
  atomic_write(path, out.str());
}

SweepResult read_sweep_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.front().second != "x,mean,min,max,failures") {
    parse_fail(path, lines.front().first, "bad sweep header");
  }
  SweepResult sweep;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto toks = split_csv(lines[r].second);
    if (toks.size() != 5) parse_fail(path, lines[r].first, "expected 5 fields");
    SweepPoint p;
    p.x = parse_double(path, lines[r].first, toks[0]);
    p.mean = parse_double(path, lines[r].first, toks[1]);
    p.min = parse_double(path, lines[r].first, toks[2]);
    p.max = parse_double(path, lines[r].first, toks[3]);
    p.failures = static_cast<int>(parse_int(path, lines[r].first, toks[4]));
    sweep.points.push_back(p);
  }
  return sweep;
}

void write_jnr_csv(const std::filesystem::path& path, const std::vector<JNRSample>& samples) {
  std::ostringstream out;
  out << "cost,purity,origin\n";
  for (const JNRSample& s : samples) {
    out << format_double(s.cost_coord) << ',' << format_double(s.purity_coord) << ','
        << (s.origin == JNROrigin::unconstrained_eigvec ? "unconstrained_eigvec" : "feasible_cut")
        << '\n';
  }
  atomic_write(path, out.str());
}

std::vector<JNRSample> read_jnr_csv(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  if (lines.front().second != "cost,purity,origin") {
    parse_fail(path, lines.front().first, "bad jnr header");
  }
  std::vector<JNRSample> samples;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto toks = split_csv(lines[r].second);
    if (toks.size() != 3) parse_fail(path, lines[r].first, "expected 3 fields");
    JNRSample s;
    s.cost_coord = parse_double(path, lines[r].first, toks[0]);
    s.purity_coord = parse_double(path, lines[r].first, toks[1]);
    if (toks[2] == "unconstrained_eigvec") s.origin = JNROrigin::unconstrained_eigvec;
    else if (toks[2] == "feasible_cut") s.origin = JNROrigin::feasible_cut;
    else parse_fail(path, lines[r].first, "unknown origin '" + toks[2] + "'");
    samples.push_back(s);
  }
  return samples;
}

std::string file_hash(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::InvalidInput, "cannot hash " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016" PRIx64, h);
  return hex;
}

}  // namespace speclust::io
