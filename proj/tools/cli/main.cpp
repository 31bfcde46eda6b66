#include "commands.hpp"

#include <CLI11.hpp>

#include <iostream>

using tensorlev::cli::ExperimentConfig;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kData = 3, kNumerical = 4 };

void add_common(CLI::App* app, ExperimentConfig& c) {
  app->add_option("--kernel", c.kernel, "poly, gaussian, ntk or tensor")
      ->check(CLI::IsMember({"poly", "gaussian", "ntk", "tensor"}));
  app->add_option("--q", c.q, "Polynomial degree, tensor factor count, or NTK degree cap");
  app->add_option("--eps", c.eps, "Spectral approximation accuracy in (0, 1)");
  app->add_option("--lambda", c.lambda, "Ridge regularizer");
  auto* mu = app->add_option("--mu", c.mu, "Upper bound on the statistical dimension");
  app->add_flag("--mu-auto", c.mu_auto, "Compute the statistical dimension exactly (n <= 2000)")->excludes(mu);
  app->add_option("--samples-const", c.samples_const, "Multiplier C in s = C mu / eps^2 log2 n");
  app->add_option("--samples", c.samples, "Fixed sample count, overriding the formula");
  app->add_option("--seed", c.seed, "Base seed; trial t uses seed + t");
  app->add_option("--trials", c.trials, "Number of independent runs");
  app->add_option("--threads", c.threads, "Worker threads (0 = hardware)");
  app->add_flag("--verify", c.verify, "Check the spectral sandwich against the exact kernel");
  app->add_option("--format", c.format, "Input format: csv or libsvm")->check(CLI::IsMember({"csv", "libsvm"}));
  app->add_option("--label-col", c.label_column, "CSV label column; negative counts from the end");
  app->add_flag("--csv-header", c.csv_header, "Skip the first CSV line");
  app->add_option("--dim", c.dim, "LibSVM feature count (0 = infer)");
  app->add_option("--synth-d", c.synth_d, "Synthetic data dimension");
  app->add_option("--synth-n", c.synth_n, "Synthetic training points");
  app->add_option("--radius", c.radius, "Largest synthetic point norm");
  app->add_option("--data-seed", c.data_seed, "Seed of the synthetic data");
  app->add_option("--tn-reps", c.tn_reps, "Override TensorNorm repetitions");
  app->add_option("--poly-cap", c.poly_cap, "Override the PolySketch dimension cap");
  app->add_option("--srht-cap", c.srht_cap, "Override the SRHT dimension cap");
  app->add_option("--copies-const", c.copies_const, "Override the median copy multiplier");
  app->add_option("--jl-const", c.jl_const, "Override the Gaussian projection multiplier");
  app->add_option("--out", c.out, "Report JSON path (default stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recursive leverage score sampling for polynomial and dot product kernels"};
  app.set_version_flag("--version", tensorlev::version());
  app.require_subcommand(1);
  ExperimentConfig c;

  auto* sample = app.add_subcommand("sample", "Sample a sketch of the kernel feature matrix");
  add_common(sample, c);
  sample->add_option("--input", c.inputs, "Data file (repeat for the tensor kernel)");
  sample->add_option("--sketch-out", c.sketch_out, "CSV of the s x n sketch");
  sample->add_option("--rows-out", c.rows_out, "CSV of the sampled rows");

  auto* krr = app.add_subcommand("krr", "Approximate kernel ridge regression or classification");
  add_common(krr, c);
  krr->add_option("--train", c.train, "Training data file");
  krr->add_option("--test", c.test, "Test data file");
  krr->add_option("--synth-test", c.synth_test, "Synthetic test points");
  krr->add_option("--noise", c.noise, "Synthetic regression noise level");
  krr->add_option("--classes", c.classes, "Classification with this many classes (0 = regression)");
  krr->add_flag("--exact-baseline", c.exact_baseline, "Also report exact kernel ridge regression");

  auto* bench = app.add_subcommand("bench", "Time the sampler over a grid of input sparsity");
  add_common(bench, c);
  bench->add_option("--grid", c.grid, "Number of grid points; nnz doubles between them");
  bench->add_option("--nnz", c.nnz_per_column, "Nonzeros per column at the first grid point");
  bench->add_option("--csv", c.csv_out, "CSV output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (sample->parsed()) {
      c.command = "sample";
      return tensorlev::cli::run_sample(c);
    }
    if (krr->parsed()) {
      c.command = "krr";
      return tensorlev::cli::run_krr(c);
    }
    c.command = "bench";
    return tensorlev::cli::run_bench(c);
  } catch (const tensorlev::ConfigError& e) {
    std::cerr << "tensorlev: config error: " << e.what() << '\n';
    return kConfig;
  } catch (const tensorlev::ContractViolation& e) {
    std::cerr << "tensorlev: invalid input: " << e.what() << '\n';
    return kConfig;
  } catch (const tensorlev::DataError& e) {
    std::cerr << "tensorlev: data error: " << e.what() << '\n';
    return kData;
  } catch (const tensorlev::NumericalError& e) {
    std::cerr << "tensorlev: numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "tensorlev: " << e.what() << '\n';
    return kFailure;
  }
}
