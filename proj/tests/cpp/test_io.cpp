#include <doctest.h>

#include "tensorlev/io.hpp"
#include "test_util.hpp"

#include <filesystem>
#include <fstream>
#include <string>

using namespace tensorlev;

namespace {

std::string write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / ("tensorlev_io_" + name);
  std::ofstream(path) << body;
  return path.string();
}

}  // namespace

TEST_CASE("libsvm line maps to a sparse column") {
  const auto data = read_libsvm(write_temp("one.svm", "1 3:0.5 7:-2\n"));
  CHECK(data.y.size() == 1);
  CHECK(data.y(0) == 1.0);
  REQUIRE(data.x.is_sparse());
  CHECK(data.x.rows() == 7);
  CHECK(data.x.nnz() == 2);
  const DenseMatrix x = data.x.to_dense();
  CHECK(x(2, 0) == 0.5);
  CHECK(x(6, 0) == -2.0);
  CHECK(x.col(0).cwiseAbs().sum() == 2.5);
}

TEST_CASE("empty inputs are rejected") {
  CHECK_THROWS_AS(read_libsvm(write_temp("empty.svm", "")), DataError);
  CHECK_THROWS_AS(read_csv(write_temp("empty.csv", "\n\n")), DataError);
  CHECK_THROWS_AS(read_csv("/nonexistent/tensorlev.csv"), DataError);
}

TEST_CASE("malformed lines report their line number") {
  try {
    read_libsvm(write_temp("bad.svm", "1 1:2\n0 2:x\n"));
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find(":2:") != std::string::npos);
  }
  try {
    read_csv(write_temp("ragged.csv", "1,2,3\n0,1,2\n1,2\n"));
    FAIL("expected an error");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
  CHECK_THROWS_AS(read_libsvm(write_temp("order.svm", "1 4:1 2:1\n")), DataError);
  CHECK_THROWS_AS(read_libsvm(write_temp("zero.svm", "1 0:1\n")), DataError);
  CHECK_THROWS_AS(read_libsvm(write_temp("dim.svm", "1 9:1\n"), 4), DataError);
}

TEST_CASE("csv and libsvm encodings agree") {
  const DenseMatrix x = testutil::random_matrix(5, 10, RngStream(1));
  std::string csv, svm;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const double label = static_cast<double>(j % 3);
    csv += std::to_string(label);
    svm += std::to_string(label);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", x(i, j));
      csv += std::string(",") + buf;
      svm += " " + std::to_string(i + 1) + ":" + buf;
    }
    csv += "\n";
    svm += "\n";
  }
  const auto a = read_csv(write_temp("same.csv", csv));
  const auto b = read_libsvm(write_temp("same.svm", svm));
  CHECK(a.x.to_dense() == b.x.to_dense());
  CHECK(a.x.to_dense() == x);
  CHECK(a.y == b.y);
}

TEST_CASE("csv label column and header options") {
  CsvOptions opts;
  opts.label_column = -1;
  opts.header = true;
  const auto data = read_csv(write_temp("hdr.csv", "a,b,label\n1,2,7\n3,4,8\n"), opts);
  CHECK(data.y(1) == 8.0);
  CHECK(data.x.to_dense()(1, 1) == 4.0);
  opts.label_column = 5;
  CHECK_THROWS_AS(read_csv(write_temp("hdr2.csv", "a,b,label\n1,2,7\n"), opts), ConfigError);
}

TEST_CASE("write_csv round trips") {
  const DenseMatrix m = testutil::random_matrix(3, 4, RngStream(2));
  const auto path = write_temp("rt.csv", "");
  write_csv(path, m);
  CsvOptions opts;
  const auto back = read_csv(path, opts);
  // Column 0 becomes the label, the rest the features (transposed layout).
  CHECK(back.y == m.col(0));
  CHECK(back.x.to_dense() == m.rightCols(3).transpose());
}
