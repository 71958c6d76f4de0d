#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "ugm/metric.hpp"

namespace ugm {

struct Dataset {
  Matrix features;  // m x n, dense
  Vector labels;    // m
  std::string source;

  Eigen::Index rows() const noexcept { return features.rows(); }
  Eigen::Index cols() const noexcept { return features.cols(); }
};

struct ParseOptions {
  bool classification = false;  // remap {0, 1} labels to {-1, +1}
  bool normalize = false;       // per-column max-abs scaling
};

/// Reads LIBSVM/svmlight text: `<label> <idx>:<val> ...` with 1-based, strictly
/// increasing indices. Blank lines and lines starting with '#' are skipped.
/// Throws ParseError carrying the 1-based line and column of the offending token.
Dataset parse_libsvm(std::istream& in, const ParseOptions& opts = {}, std::string source = "<stream>");
Dataset load_libsvm(const std::string& path, const ParseOptions& opts = {});

/// Writes nonzero entries with round-trip precision.
void write_libsvm(std::ostream& out, const Dataset& ds);

void normalize_columns(Dataset& ds);

struct SyntheticLeastSquares {
  Dataset data;
  Vector x_star;  // unit norm, b = A x_star exactly
};

/// A_ij ~ U[0, 1], x* uniform on the unit sphere, b = A x*.
SyntheticLeastSquares synth_least_squares(Eigen::Index m, Eigen::Index n, std::uint64_t seed);

/// Same data as synth_least_squares; the p-power loss is attached by p_power_objective.
Dataset synth_p_power(Eigen::Index m, Eigen::Index n, double p, std::uint64_t seed);

/// Same features as synth_least_squares with labels sign(<a_i, x*> - mean_j <a_j, x*>).
Dataset synth_classification(Eigen::Index m, Eigen::Index n, std::uint64_t seed);

// Shortest decimal form that reads back as the identical double.
std::string format_double(double v);

}  // namespace ugm
