#include "commands.hpp"

#include "tensorlev/io.hpp"
#include "tensorlev/kernels.hpp"
#include "tensorlev/krr.hpp"
#include "tensorlev/log.hpp"
#include "tensorlev/parallel.hpp"
#include "tensorlev/recursive.hpp"
#include "tensorlev/synthetic.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

namespace tensorlev::cli {

using nlohmann::json;

namespace {

constexpr Index kExactCap = 2000;

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - start_).count();
    start_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Collects warnings for the report and still prints them.
class WarningLog {
 public:
  WarningLog() {
    set_log_sink([this](LogLevel level, const std::string& msg) {
      if (level != LogLevel::Warning) return;
      if (std::find(seen_.begin(), seen_.end(), msg) != seen_.end()) return;
      std::cerr << "tensorlev: warning: " << msg << '\n';
      seen_.push_back(msg);
    });
  }
  ~WarningLog() { set_log_sink([](LogLevel level, const std::string& msg) {
    if (level == LogLevel::Warning) std::cerr << "tensorlev: warning: " << msg << '\n';
  }); }
  const std::vector<std::string>& messages() const { return seen_; }

 private:
  std::vector<std::string> seen_;
};

json config_json(const ExperimentConfig& c) {
  return json{{"command", c.command},
              {"kernel", c.kernel},
              {"q", c.q},
              {"eps", c.eps},
              {"lambda", c.lambda},
              {"mu", c.mu},
              {"mu_auto", c.mu_auto},
              {"samples_const", c.samples_const},
              {"samples", c.samples},
              {"seed", c.seed},
              {"trials", c.trials},
              {"threads", c.threads},
              {"verify", c.verify},
              {"inputs", c.inputs},
              {"train", c.train},
              {"test", c.test},
              {"format", c.format},
              {"label_column", c.label_column},
              {"csv_header", c.csv_header},
              {"dim", c.dim},
              {"synth_d", c.synth_d},
              {"synth_n", c.synth_n},
              {"synth_test", c.synth_test},
              {"radius", c.radius},
              {"noise", c.noise},
              {"classes", c.classes},
              {"data_seed", c.data_seed},
              {"exact_baseline", c.exact_baseline},
              {"tn_reps", c.tn_reps},
              {"poly_cap", c.poly_cap},
              {"srht_cap", c.srht_cap},
              {"copies_const", c.copies_const},
              {"jl_const", c.jl_const},
              {"grid", c.grid},
              {"nnz_per_column", c.nnz_per_column}};
}

json report_header(const ExperimentConfig& c) {
  return json{{"tool", "tensorlev"}, {"version", version()}, {"command", c.command}, {"config", config_json(c)}};
}

void check_finite(const json& j, const std::string& where) {
  if (j.is_number_float() && !std::isfinite(j.get<double>()))
    throw NumericalError("report field " + where + " is not finite");
  if (j.is_object())
    for (auto it = j.begin(); it != j.end(); ++it) check_finite(it.value(), where + "." + it.key());
  if (j.is_array())
    for (std::size_t i = 0; i < j.size(); ++i) check_finite(j[i], where + "[" + std::to_string(i) + "]");
}

void emit_report(const ExperimentConfig& c, const json& report) {
  check_finite(report, "report");
  const std::string text = report.dump(2) + "\n";
  if (c.out.empty() || c.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw DataError(c.out + ": cannot open for writing");
  f << text;
}

CsvOptions csv_options(const ExperimentConfig& c) {
  CsvOptions o;
  o.label_column = c.label_column;
  o.header = c.csv_header;
  return o;
}

std::vector<Dataset> load_inputs(const ExperimentConfig& c) {
  std::vector<Dataset> xs;
  if (!c.inputs.empty()) {
    for (const auto& path : c.inputs) xs.push_back(read_dataset(path, c.format, csv_options(c), c.dim).x);
    for (const auto& x : xs)
      if (x.cols() != xs[0].cols()) throw DataError("input files must hold the same number of points");
    return xs;
  }
  const Index count = c.kernel == "tensor" ? (c.q ? c.q : 2) : 1;
  const RngStream root(c.data_seed);
  for (Index a = 0; a < count; ++a) xs.emplace_back(gaussian_cloud(c.synth_d, c.synth_n, c.radius, root.child(a)));
  return xs;
}

struct Problem {
  std::optional<FeatureDescriptor> desc;
  std::optional<GpkSpec> spec;
};

Problem make_problem(const ExperimentConfig& c, const std::vector<Dataset>& xs) {
  Problem p;
  if (c.kernel == "poly") {
    p.desc = FeatureDescriptor::self_tensor(xs[0], c.q ? c.q : 2);
  } else if (c.kernel == "tensor") {
    p.desc = FeatureDescriptor::tensor_product(xs);
  } else if (c.kernel == "gaussian") {
    p.spec = gaussian_gpk_spec(xs[0].to_dense(), c.eps, c.lambda);
  } else {
    if (c.q) {
      log_message(LogLevel::Warning, "NTK degree capped at " + std::to_string(c.q) +
                                         "; the truncation error bound is not certified");
      p.spec = ntk_gpk_spec_with_degree(xs[0].to_dense(), c.q);
    } else {
      // Larger degrees exhaust memory on desk-scale machines; --q caps explicitly.
      constexpr Index kMaxNtkDegree = 1024;
      try {
        p.spec = ntk_gpk_spec(xs[0].to_dense(), c.eps, c.lambda, kMaxNtkDegree);
      } catch (const ConfigError& e) {
        throw ConfigError(std::string(e.what()) + "; raise lambda or eps, or cap the degree with --q");
      }
    }
  }
  if (p.spec) p.desc = p.spec->descriptor();
  return p;
}

/// Gram matrix of the sketched feature matrix.
DenseMatrix exact_gram(const ExperimentConfig& c, const std::vector<Dataset>& xs, const Problem& p) {
  const Index n = xs[0].cols();
  if (n > kExactCap)
    throw ConfigError("exact kernel needs n <= " + std::to_string(kExactCap) + " (n = " + std::to_string(n) + ")");
  if (p.spec) return gpk_kernel_exact(*p.spec);
  if (c.kernel == "poly") {
    const DenseMatrix x = xs[0].to_dense();
    return polynomial_kernel(x, x, c.q ? c.q : 2);
  }
  DenseMatrix k = DenseMatrix::Ones(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& x : xs) k.array() *= x.gram().array();
  return k;
}

SamplerRunConfig sampler_config(const ExperimentConfig& c, double mu) {
  SamplerRunConfig s;
  s.eps = c.eps;
  s.lambda = c.lambda;
  s.mu = mu;
  s.samples_const = c.samples_const;
  s.samples_override = c.samples;
  s.seed = c.seed;
  for (TensorNormConfig* tn : {&s.row.tn, &s.row.tn_single}) {
    if (c.tn_reps) tn->repetitions = c.tn_reps;
    if (c.poly_cap) tn->poly_dim_cap = c.poly_cap;
    if (c.srht_cap) tn->srht_dim_cap = c.srht_cap;
  }
  if (c.copies_const > 0.0) s.row.copies_const = c.copies_const;
  if (c.jl_const > 0.0) s.row.jl_const = c.jl_const;
  return s;
}

double resolve_mu(const ExperimentConfig& c, const std::function<DenseMatrix()>& gram, json& report) {
  double mu = c.mu;
  if (c.mu_auto) {
    const double sd = statistical_dimension(gram(), c.lambda);
    report["statistical_dimension"] = sd;
    mu = std::max(1.0, sd);
  }
  report["mu"] = mu;
  return mu;
}

void write_rows_csv(const std::string& path, const SampledRows& rows) {
  std::ofstream f(path);
  if (!f) throw DataError(path + ": cannot open for writing");
  f << "block,weight,prob,fallback,index\n" << std::setprecision(17);
  for (const auto& r : rows) {
    f << r.block << ',' << r.weight << ',' << r.prob << ',' << (r.fallback ? 1 : 0) << ',';
    for (Index a = 0; a < r.index.size(); ++a) f << (a ? " " : "") << r.index[a];
    f << '\n';
  }
}

json levels_json(const RecursiveResult& r) {
  json out = json::array();
  for (const auto& l : r.levels)
    out.push_back({{"lambda", l.lambda},
                   {"seconds", l.seconds},
                   {"distinct_states", l.report.distinct_states},
                   {"fallback_rows", l.report.fallback_rows},
                   {"kappa", l.report.kappa}});
  return out;
}

json verify_json(const SpectralCheck& v) {
  return {{"pass", v.pass}, {"max_dev", v.max_dev}, {"min_eig", v.min_eig}, {"max_eig", v.max_eig}};
}

}  // namespace

void validate(const ExperimentConfig& c) {
  const std::vector<std::string> kernels{"poly", "gaussian", "ntk", "tensor"};
  if (std::find(kernels.begin(), kernels.end(), c.kernel) == kernels.end())
    throw ConfigError("unknown kernel '" + c.kernel + "'");
  if (!(c.eps > 0.0 && c.eps < 1.0)) throw ConfigError("--eps must lie in (0, 1)");
  if (!(c.lambda > 0.0)) throw ConfigError("--lambda must be positive");
  if (c.mu_auto && c.mu > 0.0) throw ConfigError("--mu and --mu-auto are exclusive");
  if (!c.mu_auto && !(c.mu >= 1.0)) throw ConfigError("give --mu (at least 1) or --mu-auto");
  if (!(c.samples_const > 0.0)) throw ConfigError("--samples-const must be positive");
  if (c.trials < 1) throw ConfigError("--trials must be at least 1");
  if (c.format != "csv" && c.format != "libsvm") throw ConfigError("--format must be csv or libsvm");
  if (c.kernel == "gaussian" && c.q) throw ConfigError("--q does not apply to the gaussian kernel");
  if (c.kernel == "tensor" && !c.inputs.empty() && c.q && c.q != c.inputs.size())
    throw ConfigError("--q must match the number of --input files for the tensor kernel");
  if (c.kernel != "tensor" && c.inputs.size() > 1) throw ConfigError("only the tensor kernel takes several inputs");
  if (c.command == "krr") {
    if (c.kernel == "tensor") throw ConfigError("krr supports the poly, gaussian and ntk kernels");
    if (c.train.empty() != c.test.empty()) throw ConfigError("give both --train and --test, or neither");
    if (c.classes == 1) throw ConfigError("--classes must be 0 (regression) or at least 2");
  }
  if (c.command == "bench") {
    if (c.kernel != "poly") throw ConfigError("bench times the poly kernel sampler");
    if (c.grid < 1 || c.nnz_per_column < 1) throw ConfigError("--grid and --nnz must be positive");
  }
  if (c.synth_d < 1 || c.synth_n < 2) throw ConfigError("synthetic data needs d >= 1 and n >= 2");
  if (!(c.radius > 0.0)) throw ConfigError("--radius must be positive");
}

int run_sample(const ExperimentConfig& c) {
  validate(c);
  if (c.threads) set_thread_count(c.threads);
  WarningLog warnings;
  Stopwatch clock;
  json report = report_header(c);
  json seconds;

  const auto xs = load_inputs(c);
  seconds["load"] = clock.lap();
  const Problem p = make_problem(c, xs);
  seconds["descriptor"] = clock.lap();
  report["n"] = xs[0].cols();
  report["d"] = xs[0].rows();
  report["degree"] = p.desc->degree();
  report["frobenius_sq"] = p.desc->frobenius_sq();
  if (p.spec) report["gpk"] = json::parse(gpk_spec_to_json(*p.spec));

  std::optional<DenseMatrix> gram;
  const auto get_gram = [&]() -> const DenseMatrix& {
    if (!gram) gram = exact_gram(c, xs, p);
    return *gram;
  };
  if (c.verify) get_gram();
  const double mu = resolve_mu(c, get_gram, report);
  seconds["mu"] = clock.lap();

  json trials = json::array();
  Index passed = 0;
  for (Index t = 0; t < c.trials; ++t) {
    SamplerRunConfig run = sampler_config(c, mu);
    run.seed = c.seed + t;
    Stopwatch trial_clock;
    const RecursiveResult res = recursive_leverage_sample(*p.desc, run);
    json trial{{"seed", run.seed},
               {"s", res.s},
               {"lambda0", res.lambda0},
               {"last_level_lambda", res.last_level_lambda},
               {"degenerate", res.degenerate},
               {"levels", levels_json(res)}};
    json ts{{"sampling", trial_clock.lap()}};
    if (c.verify) {
      const SpectralCheck v = spectral_check(get_gram(), res.sketch, c.lambda, c.eps);
      passed += v.pass;
      trial["verify"] = verify_json(v);
      ts["verify"] = trial_clock.lap();
    }
    trial["seconds"] = ts;
    trials.push_back(trial);
    if (t == 0) {
      report["s"] = res.s;
      if (!c.sketch_out.empty()) write_csv(c.sketch_out, res.sketch);
      if (!c.rows_out.empty()) write_rows_csv(c.rows_out, res.rows);
    }
  }
  report["trials"] = trials;
  if (c.verify) report["summary"] = {{"verify_passed", passed}, {"verify_trials", c.trials}};
  seconds["total_trials"] = clock.lap();
  report["seconds"] = seconds;
  report["warnings"] = warnings.messages();
  emit_report(c, report);
  return 0;
}

int run_krr(const ExperimentConfig& c) {
  validate(c);
  if (c.threads) set_thread_count(c.threads);
  WarningLog warnings;
  Stopwatch clock;
  json report = report_header(c);
  json seconds;

  DenseMatrix x_train, x_test;
  Vector y_train, y_test;
  if (!c.train.empty()) {
    auto tr = read_dataset(c.train, c.format, csv_options(c), c.dim);
    auto te = read_dataset(c.test, c.format, csv_options(c), c.dim ? c.dim : tr.x.rows());
    if (te.x.rows() > tr.x.rows()) throw DataError("test data has more features than the training data");
    x_train = tr.x.to_dense();
    x_test = DenseMatrix::Zero(x_train.rows(), static_cast<Eigen::Index>(te.x.cols()));
    x_test.topRows(static_cast<Eigen::Index>(te.x.rows())) = te.x.to_dense();
    y_train = tr.y;
    y_test = te.y;
  } else if (c.classes >= 2) {
    auto task = make_classification(c.synth_d, c.synth_n, c.synth_test, c.classes, c.radius, c.data_seed);
    x_train = task.x_train, x_test = task.x_test, y_train = task.y_train, y_test = task.y_test;
  } else {
    auto task = make_regression(c.synth_d, c.synth_n, c.synth_test, c.radius, c.noise, c.data_seed);
    x_train = task.x_train, x_test = task.x_test, y_train = task.y_train, y_test = task.y_test;
  }
  const bool classify = c.classes >= 2;
  seconds["load"] = clock.lap();

  const std::vector<Dataset> xs{Dataset(x_train)};
  const Problem p = make_problem(c, xs);
  seconds["descriptor"] = clock.lap();
  report["n"] = x_train.cols();
  report["n_test"] = x_test.cols();
  report["d"] = x_train.rows();
  report["degree"] = p.desc->degree();
  report["task"] = classify ? "classification" : "regression";

  KernelChoice kernel;
  kernel.kind = c.kernel == "poly" ? KernelKind::Polynomial : c.kernel == "gaussian" ? KernelKind::Gaussian : KernelKind::Ntk;
  kernel.degree = c.q ? c.q : 2;

  std::optional<DenseMatrix> gram;
  const auto get_gram = [&]() -> const DenseMatrix& {
    if (!gram) gram = exact_gram(c, xs, p);
    return *gram;
  };
  if (c.verify) get_gram();
  const double mu = resolve_mu(c, get_gram, report);

  DenseMatrix targets;
  std::vector<double> classes;
  if (classify) {
    auto oh = one_hot(y_train);
    targets = std::move(oh.targets);
    classes = std::move(oh.classes);
  } else {
    targets = y_train;
  }
  const DenseMatrix k_test = kernel_matrix(kernel, x_test, x_train);
  seconds["test_kernel"] = clock.lap();
  const auto score = [&](const DenseMatrix& coef) {
    const DenseMatrix pred = k_test * coef;
    return classify ? error_rate(pred, classes, y_test) : rmse(pred.col(0), y_test);
  };
  const std::string metric = classify ? "error_rate" : "rmse";

  if (c.exact_baseline) {
    if (x_train.cols() > 5000) throw ConfigError("--exact-baseline needs n <= 5000");
    const DenseMatrix k = kernel_matrix(kernel, x_train, x_train);
    report["exact"] = {{metric, score(exact_krr_coefficients(k, targets, c.lambda))}};
    seconds["exact"] = clock.lap();
  }

  json trials = json::array();
  for (Index t = 0; t < c.trials; ++t) {
    SamplerRunConfig run = sampler_config(c, mu);
    run.seed = c.seed + t;
    Stopwatch trial_clock;
    const RecursiveResult res = recursive_leverage_sample(*p.desc, run);
    json ts{{"sampling", trial_clock.lap()}};
    const DenseMatrix coef = woodbury_coefficients(res.sketch, targets, c.lambda);
    ts["solve"] = trial_clock.lap();
    json trial{{"seed", run.seed}, {"s", res.s}, {"levels", res.levels.size()}, {metric, score(coef)}};
    ts["predict"] = trial_clock.lap();
    if (c.verify) {
      const SpectralCheck v = spectral_check(get_gram(), res.sketch, c.lambda, c.eps);
      trial["verify"] = verify_json(v);
      ts["verify"] = trial_clock.lap();
    }
    trial["seconds"] = ts;
    trials.push_back(trial);
    if (t == 0) report["s"] = res.s;
  }
  report["trials"] = trials;
  report["seconds"] = seconds;
  report["warnings"] = warnings.messages();
  emit_report(c, report);
  return 0;
}

int run_bench(const ExperimentConfig& c) {
  validate(c);
  if (c.threads) set_thread_count(c.threads);
  WarningLog warnings;
  json report = report_header(c);
  const Index q = c.q ? c.q : 2;
  const Index d = c.synth_d, n = c.synth_n;

  std::ostringstream csv;
  csv << "nnz,stage,seconds\n" << std::setprecision(9);
  json points = json::array();
  Index per_col = c.nnz_per_column;
  for (Index g = 0; g < c.grid; ++g, per_col *= 2) {
    // Unit columns keep ||Phi||_F^2 = n and the level count fixed across the grid.
    const Dataset data(sparse_unit_cloud(d, n, per_col, RngStream(c.data_seed).child(g)));
    double build = 0.0, sampling = 0.0;
    double mu = c.mu;
    if (c.mu_auto) {
      const DenseMatrix xd = data.to_dense();
      if (n > kExactCap) throw ConfigError("--mu-auto needs n <= " + std::to_string(kExactCap));
      mu = std::max(1.0, statistical_dimension(polynomial_kernel(xd, xd, q), c.lambda));
    }
    for (Index t = 0; t < c.trials; ++t) {
      Stopwatch clock;
      const auto desc = FeatureDescriptor::self_tensor(data, q);
      build += clock.lap();
      SamplerRunConfig run = sampler_config(c, mu);
      run.seed = c.seed + t;
      recursive_leverage_sample(desc, run);
      sampling += clock.lap();
    }
    const double trials = static_cast<double>(c.trials);
    csv << data.nnz() << ",descriptor," << build / trials << '\n';
    csv << data.nnz() << ",sampling," << sampling / trials << '\n';
    points.push_back({{"nnz", data.nnz()}, {"mu", mu}, {"seconds", {{"descriptor", build / trials}, {"sampling", sampling / trials}}}});
  }
  if (c.csv_out.empty() || c.csv_out == "-") {
    std::cout << csv.str();
  } else {
    std::ofstream f(c.csv_out);
    if (!f) throw DataError(c.csv_out + ": cannot open for writing");
    f << csv.str();
  }
  report["n"] = n;
  report["d"] = d;
  report["degree"] = q;
  report["points"] = points;
  report["warnings"] = warnings.messages();
  if (!c.out.empty()) emit_report(c, report);
  return 0;
}

}  // namespace tensorlev::cli
