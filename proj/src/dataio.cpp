#include "ugm/dataio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ugm/errors.hpp"
#include "ugm/random.hpp"

namespace ugm {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= line.size()) break;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

bool parse_real(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_index(std::string_view s, long long& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

struct Entry {
  Eigen::Index row;
  Eigen::Index col;
  double value;
};

}  // namespace

Dataset parse_libsvm(std::istream& in, const ParseOptions& opts, std::string source) {
  std::vector<double> labels;
  std::vector<Entry> entries;
  long long max_index = 0;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tokens = tokenize(line);
    if (tokens.empty() || tokens.front().text.front() == '#') continue;

    double label = 0.0;
    if (!parse_real(tokens[0].text, label))
      throw ParseError(line_no, tokens[0].column, "invalid label '" + std::string(tokens[0].text) + "'");
    if (opts.classification) {
      if (label == 0.0) {
        label = -1.0;
      } else if (label != 1.0 && label != -1.0) {
        throw ParseError(line_no, tokens[0].column,
                         "classification label '" + std::string(tokens[0].text) + "' is not in {-1, 0, +1}");
      }
    }
    const auto row = static_cast<Eigen::Index>(labels.size());
    labels.push_back(label);

    long long prev = 0;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto& tok = tokens[t];
      if (tok.text.front() == '#') break;
      const auto colon = tok.text.find(':');
      if (colon == std::string_view::npos)
        throw ParseError(line_no, tok.column, "expected <index>:<value>, got '" + std::string(tok.text) + "'");
      long long idx = 0;
      if (!parse_index(tok.text.substr(0, colon), idx))
        throw ParseError(line_no, tok.column, "invalid index '" + std::string(tok.text.substr(0, colon)) + "'");
      if (idx <= 0) throw ParseError(line_no, tok.column, "index must be positive, got " + std::to_string(idx));
      if (idx <= prev)
        throw ParseError(line_no, tok.column,
                         "indices must be strictly increasing (" + std::to_string(idx) + " after " +
                             std::to_string(prev) + ")");
      double value = 0.0;
      if (!parse_real(tok.text.substr(colon + 1), value))
        throw ParseError(line_no, tok.column + colon + 1,
                         "invalid value '" + std::string(tok.text.substr(colon + 1)) + "'");
      prev = idx;
      max_index = std::max(max_index, idx);
      entries.push_back({row, static_cast<Eigen::Index>(idx - 1), value});
    }
  }

  if (labels.empty()) throw ParseError(line_no + 1, 1, "no records");
  if (max_index == 0) throw ParseError(line_no + 1, 1, "no feature columns");

  Dataset ds;
  ds.features = Matrix::Zero(static_cast<Eigen::Index>(labels.size()), static_cast<Eigen::Index>(max_index));
  for (const auto& e : entries) ds.features(e.row, e.col) = e.value;
  ds.labels = Eigen::Map<const Vector>(labels.data(), static_cast<Eigen::Index>(labels.size()));
  ds.source = std::move(source);
  if (opts.normalize) normalize_columns(ds);
  return ds;
}

Dataset load_libsvm(const std::string& path, const ParseOptions& opts) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  try {
    return parse_libsvm(in, opts, path);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.column(), path + ": " + e.message());
  }
}

void write_libsvm(std::ostream& out, const Dataset& ds) {
  const auto n = ds.cols();
  // An explicit zero in the last column keeps the width when that column is all zeros.
  const bool pad_width = n > 0 && ds.rows() > 0 && ds.features.col(n - 1).isZero(0.0);
  for (Eigen::Index i = 0; i < ds.rows(); ++i) {
    out << format_double(ds.labels[i]);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double v = ds.features(i, j);
      if (v != 0.0 || (pad_width && i == 0 && j == n - 1)) out << ' ' << (j + 1) << ':' << format_double(v);
    }
    out << '\n';
  }
}

void normalize_columns(Dataset& ds) {
  for (Eigen::Index j = 0; j < ds.cols(); ++j) {
    const double scale = ds.features.col(j).cwiseAbs().maxCoeff();
    if (scale > 0.0) ds.features.col(j) /= scale;
  }
}

namespace {

Vector unit_sphere_point(Eigen::Index n, std::uint64_t seed) {
  Philox rng(seed, 0);
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = rng.next_gaussian();
  return x / x.norm();
}

Matrix uniform_matrix(Eigen::Index m, Eigen::Index n, std::uint64_t seed) {
  Philox rng(seed, 1);
  Matrix A(m, n);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = rng.next_uniform();
  return A;
}

void check_dims(Eigen::Index m, Eigen::Index n) {
  if (m < 1 || n < 1) throw UsageError("synthetic data needs m, n >= 1");
}

std::string synthetic_name(const char* recipe, Eigen::Index m, Eigen::Index n, std::uint64_t seed) {
  return std::string("synthetic:") + recipe + ":" + std::to_string(m) + "x" + std::to_string(n) + ":" +
         std::to_string(seed);
}

}  // namespace

SyntheticLeastSquares synth_least_squares(Eigen::Index m, Eigen::Index n, std::uint64_t seed) {
  check_dims(m, n);
  SyntheticLeastSquares out;
  out.x_star = unit_sphere_point(n, seed);
  out.data.features = uniform_matrix(m, n, seed);
  out.data.labels = out.data.features * out.x_star;
  out.data.source = synthetic_name("ls", m, n, seed);
  return out;
}

Dataset synth_p_power(Eigen::Index m, Eigen::Index n, double p, std::uint64_t seed) {
  if (!(p >= 1.0 && p <= 2.0)) throw UsageError("synth_p_power: p must lie in [1, 2]");
  Dataset ds = synth_least_squares(m, n, seed).data;
  ds.source = synthetic_name("ppower", m, n, seed);
  return ds;
}

Dataset synth_classification(Eigen::Index m, Eigen::Index n, std::uint64_t seed) {
  auto ls = synth_least_squares(m, n, seed);
  Dataset ds = std::move(ls.data);
  const double mean = ds.labels.mean();
  for (Eigen::Index i = 0; i < ds.labels.size(); ++i) ds.labels[i] = ds.labels[i] > mean ? 1.0 : -1.0;
  ds.source = synthetic_name("logistic", m, n, seed);
  return ds;
}

}  // namespace ugm
