#include "tensorlev/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string_view>
#include <vector>

namespace tensorlev {

namespace {

[[noreturn]] void fail(const std::string& path, Index line, const std::string& msg) {
  throw DataError(path + ":" + std::to_string(line) + ": " + msg);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  return in;
}

}  // namespace

LabeledData read_csv(const std::string& path, const CsvOptions& opts) {
  auto in = open(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  Index lineno = 0;
  Index width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (opts.header && lineno == 1) continue;
    if (trim(line).empty()) continue;
    std::vector<double> vals;
    std::string_view rest(line);
    while (true) {
      const auto pos = rest.find(opts.delimiter);
      double v;
      if (!parse_double(rest.substr(0, pos), v))
        fail(path, lineno, "field " + std::to_string(vals.size() + 1) + " is not a finite number");
      vals.push_back(v);
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    if (width == 0) {
      width = vals.size();
      if (width < 2) fail(path, lineno, "need a label and at least one feature");
    } else if (vals.size() != width) {
      fail(path, lineno, "expected " + std::to_string(width) + " fields, found " + std::to_string(vals.size()));
    }
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw DataError(path + ": no samples");
  const long lc = opts.label_column < 0 ? static_cast<long>(width) + opts.label_column : opts.label_column;
  if (lc < 0 || lc >= static_cast<long>(width))
    throw ConfigError("label column " + std::to_string(opts.label_column) + " out of range");
  const auto n = static_cast<Eigen::Index>(rows.size());
  DenseMatrix x(static_cast<Eigen::Index>(width - 1), n);
  Vector y(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::Index r = 0;
    for (Index c = 0; c < width; ++c) {
      if (static_cast<long>(c) == lc) y(j) = rows[j][c];
      else x(r++, j) = rows[j][c];
    }
  }
  return {Dataset(std::move(x)), std::move(y)};
}

LabeledData read_libsvm(const std::string& path, Index dim) {
  auto in = open(path);
  using Triplet = Eigen::Triplet<double>;
  std::vector<Triplet> entries;
  std::vector<double> labels;
  std::string line;
  Index lineno = 0;
  Index max_index = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view rest = trim(line);
    if (const auto hash = rest.find('#'); hash != std::string_view::npos) rest = trim(rest.substr(0, hash));
    if (rest.empty()) continue;
    std::istringstream tokens{std::string(rest)};
    std::string tok;
    tokens >> tok;
    double label;
    if (!parse_double(tok, label)) fail(path, lineno, "label '" + tok + "' is not a number");
    const auto col = static_cast<int>(labels.size());
    labels.push_back(label);
    long prev = 0;
    while (tokens >> tok) {
      const auto colon = tok.find(':');
      if (colon == std::string::npos) fail(path, lineno, "expected index:value, found '" + tok + "'");
      long idx = 0;
      const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + colon, idx);
      if (ec != std::errc() || ptr != tok.data() + colon || idx < 1)
        fail(path, lineno, "bad feature index in '" + tok + "'");
      if (idx <= prev) fail(path, lineno, "feature indices must be strictly increasing");
      prev = idx;
      double v;
      if (!parse_double(std::string_view(tok).substr(colon + 1), v))
        fail(path, lineno, "bad feature value in '" + tok + "'");
      if (dim > 0 && static_cast<Index>(idx) > dim)
        fail(path, lineno, "feature index " + std::to_string(idx) + " exceeds dimension " + std::to_string(dim));
      max_index = std::max(max_index, static_cast<Index>(idx));
      if (v != 0.0) entries.emplace_back(static_cast<int>(idx - 1), col, v);
    }
  }
  if (labels.empty()) throw DataError(path + ": no samples");
  const Index d = dim > 0 ? dim : max_index;
  if (d == 0) throw DataError(path + ": no features");
  SparseColMatrix x(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(labels.size()));
  x.setFromTriplets(entries.begin(), entries.end());
  return {Dataset(std::move(x)), Eigen::Map<const Vector>(labels.data(), static_cast<Eigen::Index>(labels.size()))};
}

LabeledData read_dataset(const std::string& path, const std::string& format, const CsvOptions& csv,
                         Index dim) {
  if (format == "csv") return read_csv(path, csv);
  if (format == "libsvm") return read_libsvm(path, dim);
  throw ConfigError("unknown input format '" + format + "'");
}

void write_csv(const std::string& path, const DenseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw DataError(path + ": cannot open for writing");
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << m(i, j);
    out << '\n';
  }
  if (!out) throw DataError(path + ": write failed");
}

}  // namespace tensorlev
