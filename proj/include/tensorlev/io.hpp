#pragma once

#include "tensorlev/common.hpp"
#include "tensorlev/dataset.hpp"

#include <string>

namespace tensorlev {

/// Data points as columns of x, with one label per point.
struct LabeledData {
  Dataset x;
  Vector y;
};

struct CsvOptions {
  /// Column holding the label; negative counts from the end, e.g. -1 is last.
  int label_column = 0;
  bool header = false;
  char delimiter = ',';
};

/// One sample per line. Errors name the file and line.
LabeledData read_csv(const std::string& path, const CsvOptions& opts = {});

/// "label index:value ..." lines with 1-based indices. `dim` = 0 infers the
/// feature count from the largest index; otherwise larger indices are errors.
LabeledData read_libsvm(const std::string& path, Index dim = 0);

/// Dispatches on "csv" or "libsvm".
LabeledData read_dataset(const std::string& path, const std::string& format,
                         const CsvOptions& csv = {}, Index dim = 0);

/// Writes the rows of m as CSV with round-trip precision.
void write_csv(const std::string& path, const DenseMatrix& m);

}  // namespace tensorlev
