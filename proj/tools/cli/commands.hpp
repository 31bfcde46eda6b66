#pragma once

#include "tensorlev/common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace tensorlev::cli {

/// Every knob of a run; validated before any compute and echoed into the report.
struct ExperimentConfig {
  std::string command;

  std::string kernel = "poly";  // poly | gaussian | ntk | tensor
  Index q = 0;                  // poly degree, or NTK degree cap; 0 = default
  double eps = 0.5;
  double lambda = 1.0;
  double mu = 0.0;
  bool mu_auto = false;
  double samples_const = 4.0;
  Index samples = 0;
  std::uint64_t seed = 0;
  Index trials = 1;
  Index threads = 0;
  bool verify = false;

  std::vector<std::string> inputs;
  std::string train;
  std::string test;
  std::string format = "csv";
  int label_column = 0;
  bool csv_header = false;
  Index dim = 0;

  // Bundled synthetic data, used when no input files are given.
  Index synth_d = 8;
  Index synth_n = 64;
  Index synth_test = 100;
  double radius = 1.0;
  double noise = 0.1;
  Index classes = 0;  // krr: 0 = regression, otherwise classification
  std::uint64_t data_seed = 1;

  bool exact_baseline = false;

  // Sampler constant overrides (0 keeps the default).
  Index tn_reps = 0;
  Index poly_cap = 0;
  Index srht_cap = 0;
  double copies_const = 0.0;
  double jl_const = 0.0;

  // bench
  Index grid = 3;
  Index nnz_per_column = 2;

  std::string out;
  std::string sketch_out;
  std::string rows_out;
  std::string csv_out;
};

/// Validates cross-field constraints; throws ConfigError.
void validate(const ExperimentConfig& cfg);

int run_sample(const ExperimentConfig& cfg);
int run_krr(const ExperimentConfig& cfg);
int run_bench(const ExperimentConfig& cfg);

}  // namespace tensorlev::cli
