#include "tensorlev/row_sampler.hpp"

#include "tensorlev/log.hpp"
#include "tensorlev/parallel.hpp"
#include "tensorlev/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace tensorlev {

// ---------------------------------------------------------------------------
// RegularizedBasis

RegularizedBasis::RegularizedBasis(const DenseMatrix& b, double lambda)
    : n_(static_cast<Index>(b.cols())), lambda_(lambda) {
  require(lambda > 0.0, "reg_inv_sqrt: lambda must be positive");
  require(b.allFinite(), "reg_inv_sqrt: B has non-finite entries");
  if (b.rows() == 0 || b.isZero(0.0)) {
    v_.resize(b.cols(), 0);
    sigma_.resize(0);
  } else {
    Eigen::BDCSVD<DenseMatrix> svd(b, Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) throw NumericalError("reg_inv_sqrt: SVD failed");
    v_ = svd.matrixV();
    sigma_ = svd.singularValues();
  }
  const double top = sigma_.size() ? sigma_(0) : 0.0;
  kappa_ = std::sqrt(top * top / lambda_ + 1.0);
}

DenseMatrix RegularizedBasis::apply_right(const DenseMatrix& m) const {
  require(static_cast<Index>(m.cols()) == n_, "RegularizedBasis: column count mismatch");
  const double base = 1.0 / std::sqrt(lambda_);
  DenseMatrix out = base * m;
  if (sigma_.size() == 0) return out;
  const Vector shift = (sigma_.array().square() + lambda_).rsqrt() - base;
  out.noalias() += ((m * v_) * shift.asDiagonal()) * v_.transpose();
  return out;
}

RegularizedBasis reg_inv_sqrt(const DenseMatrix& b, double lambda) {
  return RegularizedBasis(b, lambda);
}

// ---------------------------------------------------------------------------
// BucketHash

BucketHash::BucketHash(Index d, Index buckets, RngStream rng) : assign_(d), buckets_(buckets) {
  require(buckets >= 1, "BucketHash: need at least one bucket");
  for (auto& a : assign_) a = static_cast<std::uint32_t>(rng.below(buckets));
  *this = BucketHash(std::move(assign_), buckets);
}

BucketHash::BucketHash(std::vector<std::uint32_t> assignment, Index buckets)
    : assign_(std::move(assignment)), buckets_(buckets) {
  std::map<Index, std::vector<Index>> by_bucket;
  for (Index i = 0; i < assign_.size(); ++i) {
    require(assign_[i] < buckets_, "BucketHash: assignment out of range");
    by_bucket[assign_[i]].push_back(i);
  }
  for (auto& [r, members] : by_bucket) {
    group_ids_.push_back(r);
    groups_.push_back(std::move(members));
  }
}

// ---------------------------------------------------------------------------
// Shared sampling engine.
//
// One call owns K TensorNorm banks and m' bucket-sketch copies; copy k is
// paired with bank (K == 1 ? 0 : k). For a walk in state (b, i_1..i_{a-1})
// the level-a distributions are
//   p_r = median_k median_rep ||P D^a X_{h^{-1}(r)}^T G_r^{kT}||^2,
//   q_i = median_bank median_rep ||P D^a X_i^T||^2,
// where P is the bank's sketch at prefix index a + (q - b). Both only depend
// on the state, so each distinct state is evaluated once per call.

namespace {

struct Engine {
  Index q = 0;                          // tensor factors in each bank
  std::vector<Dataset> level_rows;      // X^(a) for a = 1..q
  Vector scale;                         // v (ones unless GPK)
  std::vector<TensorNormDs> banks;
  Index copies = 0;
  Index bucket_dim = 1;                 // n'
  std::vector<BucketHash> level_hash;   // per level, over that level's row count
  std::vector<CountSketch> bucket_sketch;  // per copy, over max row count
  bool median_rows_over_banks = true;
};

struct LevelDist {
  std::vector<double> group_mass;  // aligned with level_hash[a].groups()
  std::vector<double> row_mass;    // over the level's rows
  double total = 0.0;
};

struct StateKey {
  Index block;
  std::vector<Index> prefix;
  bool operator<(const StateKey& o) const {
    return block != o.block ? block < o.block : prefix < o.prefix;
  }
};

LevelDist evaluate_state(const Engine& e, const StateKey& key) {
  const Index a = key.prefix.size();  // 0-based level
  const Dataset& rows = e.level_rows[a];
  const BucketHash& hash = e.level_hash[a];
  const Index query_index = a + 1 + (e.q - key.block);

  Vector w = e.scale;
  for (Index t = 0; t < a; ++t) w = w.cwiseProduct(e.level_rows[t].row(key.prefix[t]));

  const Index d = rows.rows();
  const Index groups = hash.groups().size();
  const Index reps = e.banks.front().repetitions();
  const Index nb = e.banks.size();
  // per bank: [rep][row] and per copy: [rep][group]
  std::vector<std::vector<std::vector<double>>> row_vals(nb, std::vector<std::vector<double>>(reps));
  std::vector<std::vector<std::vector<double>>> grp_vals(e.copies,
                                                         std::vector<std::vector<double>>(reps));
  DenseMatrix acc;
  for (Index bk = 0; bk < nb; ++bk) {
    for (Index i = 0; i < reps; ++i) {
      const DenseMatrix y = e.banks[bk].sketch(i, query_index) * w.asDiagonal();
      const DenseMatrix z = rows.right_multiply_transpose(y);  // m' x d
      auto& rv = row_vals[bk][i];
      rv.resize(d);
      for (Index c = 0; c < d; ++c) rv[c] = z.col(static_cast<Eigen::Index>(c)).squaredNorm();
      for (Index k = 0; k < e.copies; ++k) {
        if (nb > 1 && k != bk) continue;
        const CountSketch& g = e.bucket_sketch[k];
        auto& gv = grp_vals[k][i];
        gv.resize(groups);
        acc.resize(z.rows(), static_cast<Eigen::Index>(e.bucket_dim));
        for (Index r = 0; r < groups; ++r) {
          const auto& members = hash.groups()[r];
          if (members.size() == 1) {
            gv[r] = rv[members[0]];
            continue;
          }
          acc.setZero();
          for (Index c : members)
            acc.col(g.hash()[c]) += g.signs()[c] * z.col(static_cast<Eigen::Index>(c));
          gv[r] = acc.squaredNorm();
        }
      }
    }
  }

  LevelDist out;
  std::vector<double> tmp, outer;
  out.row_mass.resize(d);
  for (Index c = 0; c < d; ++c) {
    outer.clear();
    const Index use_banks = e.median_rows_over_banks ? nb : 1;
    for (Index bk = 0; bk < use_banks; ++bk) {
      tmp.clear();
      for (Index i = 0; i < reps; ++i) tmp.push_back(row_vals[bk][i][c]);
      outer.push_back(lower_median(tmp));
    }
    out.row_mass[c] = lower_median(outer);
  }
  out.group_mass.resize(groups);
  for (Index r = 0; r < groups; ++r) {
    outer.clear();
    for (Index k = 0; k < e.copies; ++k) {
      tmp.clear();
      for (Index i = 0; i < reps; ++i) tmp.push_back(grp_vals[k][i][r]);
      outer.push_back(lower_median(tmp));
    }
    out.group_mass[r] = lower_median(outer);
    out.total += out.group_mass[r];
  }
  return out;
}

struct Walk {
  Index block = 0;
  std::vector<Index> prefix;
  double prob = 1.0;
  bool fallback = false;
  RngStream rng;
};

double draw_uniform(Walk& w) { return w.rng.uniform(); }

/// Runs the level loop for every walk whose block is already set.
void run_levels(const Engine& e, std::vector<Walk>& walks, Index* states_seen) {
  Index max_block = 0;
  for (const auto& w : walks) max_block = std::max(max_block, w.block);
  for (Index a = 0; a < max_block; ++a) {
    std::map<StateKey, Index> index;
    std::vector<StateKey> keys;
    for (const auto& w : walks) {
      if (w.block <= a) continue;
      StateKey k{w.block, w.prefix};
      if (index.emplace(k, keys.size()).second) keys.push_back(std::move(k));
    }
    std::vector<LevelDist> dists(keys.size());
    parallel_for(keys.size(), [&](Index t) { dists[t] = evaluate_state(e, keys[t]); });
    if (states_seen) *states_seen += keys.size();

    const BucketHash& hash = e.level_hash[a];
    for (auto& w : walks) {
      if (w.block <= a) continue;
      const LevelDist& dist = dists[index.at(StateKey{w.block, w.prefix})];
      const Index groups = hash.groups().size();
      Index g;
      double pg;
      const double u1 = draw_uniform(w), u2 = draw_uniform(w);
      if (dist.total > 0.0) {
        g = sample_categorical(dist.group_mass, dist.total, u1);
        pg = dist.group_mass[g] / dist.total;
      } else {
        g = std::min<Index>(static_cast<Index>(u1 * static_cast<double>(groups)), groups - 1);
        pg = 1.0 / static_cast<double>(groups);
        w.fallback = true;
      }
      const auto& members = hash.groups()[g];
      std::vector<double> mass(members.size());
      double msum = 0.0;
      for (Index t = 0; t < members.size(); ++t) msum += (mass[t] = dist.row_mass[members[t]]);
      Index pick;
      double qi;
      if (msum > 0.0) {
        pick = sample_categorical(mass, msum, u2);
        qi = mass[pick] / msum;
      } else {
        pick = std::min<Index>(static_cast<Index>(u2 * static_cast<double>(members.size())),
                               members.size() - 1);
        qi = 1.0 / static_cast<double>(members.size());
        w.fallback = true;
      }
      w.prefix.push_back(members[pick]);
      w.prob *= pg * qi;
    }
  }
}

SampledRows finish(std::vector<Walk>& walks, Index s, RowSamplerReport* report) {
  SampledRows out;
  out.reserve(walks.size());
  Index flagged = 0;
  for (auto& w : walks) {
    SampledRow r;
    r.block = w.block;
    r.index = std::move(w.prefix);
    r.prob = w.prob;
    r.weight = 1.0 / std::sqrt(static_cast<double>(s) * w.prob);
    r.fallback = w.fallback;
    flagged += w.fallback;
    out.push_back(std::move(r));
  }
  if (report) report->fallback_rows = flagged;
  return out;
}

Index copies_for(Index n, const RowSamplerConfig& cfg) {
  return std::max<Index>(std::max<Index>(cfg.copies_min, 1),
                         static_cast<Index>(std::ceil(cfg.copies_const * log2_of(n))));
}

Index jl_rows_for(double factor, Index n, const RowSamplerConfig& cfg) {
  return std::max<Index>(std::max<Index>(cfg.jl_min_rows, 1),
                         static_cast<Index>(std::ceil(cfg.jl_const * factor * log2_of(n))));
}

Index bucket_count(double factor, Index s) {
  return std::max<Index>(1, static_cast<Index>(std::ceil(factor * static_cast<double>(s))));
}

void check_common(Index n, const DenseMatrix& b, double lambda, Index s) {
  require(s >= 1, "row sampler: s must be positive");
  require(lambda > 0.0, "row sampler: lambda must be positive");
  require(static_cast<Index>(b.cols()) == n, "row sampler: B must have one column per data point");
}

void setup_hashes(Engine& e, Index buckets, RngStream rng) {
  Index max_d = 0;
  for (const auto& x : e.level_rows) max_d = std::max(max_d, x.rows());
  BucketHash full(max_d, buckets, rng.child(0));
  for (const auto& x : e.level_rows) {
    std::vector<std::uint32_t> a(full.assignment().begin(),
                                 full.assignment().begin() + static_cast<std::ptrdiff_t>(x.rows()));
    e.level_hash.emplace_back(std::move(a), buckets);
  }
  for (Index k = 0; k < e.copies; ++k)
    e.bucket_sketch.emplace_back(max_d, e.bucket_dim, rng.child({1, k}));
}

/// Shared-sign SRHT compressed banks over (S^(1) X, ..., S^(q) X, M).
void build_selftensor_banks(Engine& e, const Dataset& x, Index q, const DenseMatrix& m,
                            double kappa, const RowSamplerConfig& cfg, RngStream rng,
                            RowSamplerReport* report) {
  const Index n = x.cols();
  const Index d = x.rows();
  const double qd = static_cast<double>(q);
  Index rows = static_cast<Index>(
      std::ceil(cfg.srht_rows_const * (qd * qd * qd + qd * qd * kappa) * log2_of(n)));
  rows = std::max<Index>(rows, 1);
  const Index padded = next_pow2(d);
  if (rows > padded) {
    log_message(LogLevel::Warning,
                "shared-sign SRHT rows clamped to the padded dimension " + std::to_string(padded));
    if (report)
      report->warnings.push_back("shared-sign SRHT rows " + std::to_string(rows) +
                                 " clamped to padded dimension " + std::to_string(padded));
    rows = padded;
  }
  if (report) report->srht_rows = rows;
  const double eps = 1.0 / (cfg.tn_eps_self * std::max<double>(qd, 1.0));
  const DenseMatrix xd = q > 0 ? x.to_dense() : DenseMatrix();
  e.banks.resize(e.copies);
  parallel_for(e.copies, [&](Index k) {
    std::vector<Dataset> inputs;
    if (q > 0) {
      SharedSignSrhtFamily fam(q, d, rows, rng.child({0, k}));
      for (auto& sx : fam.apply_all(xd)) inputs.emplace_back(std::move(sx));
    }
    inputs.emplace_back(m);
    e.banks[k] = TensorNormDs::build(inputs, eps, cfg.tn, rng.child({1, k}));
  });
}

}  // namespace

// ---------------------------------------------------------------------------
// Distinct datasets

SampledRows row_sampler_tensor(const std::vector<Dataset>& xs, const DenseMatrix& b, double lambda,
                               Index s, const RowSamplerConfig& cfg, RngStream rng,
                               RowSamplerReport* report) {
  require(!xs.empty(), "row sampler: need at least one dataset");
  const Index q = xs.size();
  const Index n = xs[0].cols();
  for (const auto& x : xs) require(x.cols() == n, "row sampler: datasets must share column count");
  check_common(n, b, lambda, s);
  if (FeatureDescriptor::tensor_product(xs).frobenius_sq() <= 0.0)
    throw NumericalError("row sampler: feature matrix is zero");

  const RegularizedBasis basis(b, lambda);
  const double qd = static_cast<double>(q);
  const Index jl = jl_rows_for(qd, n, cfg);
  const DenseMatrix m = basis.apply_right(GaussianJl(jl, n, rng.child(0)).matrix());

  Engine e;
  e.q = q;
  e.level_rows = xs;
  e.scale = Vector::Ones(static_cast<Eigen::Index>(n));
  e.copies = copies_for(n, cfg);
  e.bucket_dim = std::max<Index>(1, static_cast<Index>(std::ceil(cfg.bucket_sketch_const * qd * qd)));
  e.median_rows_over_banks = false;
  std::vector<Dataset> inputs = xs;
  inputs.emplace_back(m);
  e.banks.push_back(
      TensorNormDs::build(inputs, 1.0 / (cfg.tn_eps_distinct * qd), cfg.tn_single, rng.child(1)));
  const Index buckets = bucket_count(qd * qd, s);
  setup_hashes(e, buckets, rng.child(2));

  std::vector<Walk> walks(s);
  for (Index l = 0; l < s; ++l) {
    walks[l].block = q;
    walks[l].rng = rng.child({3, l});
  }
  Index states = 0;
  run_levels(e, walks, &states);
  if (report) {
    report->buckets = buckets;
    report->copies = e.copies;
    report->jl_rows = jl;
    report->distinct_states = states;
    report->kappa = basis.kappa();
  }
  return finish(walks, s, report);
}

// ---------------------------------------------------------------------------
// Self tensor

SampledRows row_sampler_selftensor(const Dataset& x, Index q, const DenseMatrix& b, double lambda,
                                   Index s, const RowSamplerConfig& cfg, RngStream rng,
                                   RowSamplerReport* report) {
  require(q >= 1, "row sampler: q must be positive");
  const Index n = x.cols();
  check_common(n, b, lambda, s);
  if (FeatureDescriptor::self_tensor(x, q).frobenius_sq() <= 0.0)
    throw NumericalError("row sampler: feature matrix is zero");

  const RegularizedBasis basis(b, lambda);
  const double qd = static_cast<double>(q);
  const Index jl = jl_rows_for(qd * qd, n, cfg);
  const DenseMatrix m = basis.apply_right(GaussianJl(jl, n, rng.child(0)).matrix());

  Engine e;
  e.q = q;
  e.level_rows.assign(q, x);
  e.scale = Vector::Ones(static_cast<Eigen::Index>(n));
  e.copies = copies_for(n, cfg);
  e.bucket_dim = std::max<Index>(1, static_cast<Index>(std::ceil(cfg.bucket_sketch_const * qd * qd)));
  build_selftensor_banks(e, x, q, m, basis.kappa(), cfg, rng.child(1), report);
  const Index buckets = bucket_count(qd * qd * qd, s);
  setup_hashes(e, buckets, rng.child(2));

  std::vector<Walk> walks(s);
  for (Index l = 0; l < s; ++l) {
    walks[l].block = q;
    walks[l].rng = rng.child({3, l});
  }
  Index states = 0;
  run_levels(e, walks, &states);
  if (report) {
    report->buckets = buckets;
    report->copies = e.copies;
    report->jl_rows = jl;
    report->distinct_states = states;
    report->kappa = basis.kappa();
  }
  return finish(walks, s, report);
}

// ---------------------------------------------------------------------------
// GPK

SampledRows row_sampler_gpk(const Dataset& x, const Vector& v, const Vector& alpha,
                            const DenseMatrix& b, double lambda, Index s,
                            const RowSamplerConfig& cfg, RngStream rng, RowSamplerReport* report) {
  const Index n = x.cols();
  check_common(n, b, lambda, s);
  const auto desc = FeatureDescriptor::gpk(x, v, alpha);  // validates alpha and v
  if (desc.frobenius_sq() <= 0.0) throw NumericalError("row sampler: feature matrix is zero");
  const Index q = desc.degree();

  const RegularizedBasis basis(b, lambda);
  const double qd = std::max<double>(static_cast<double>(q), 1.0);
  const Index jl = jl_rows_for(qd * qd, n, cfg);
  const DenseMatrix m = basis.apply_right(GaussianJl(jl, n, rng.child(0)).matrix());

  Engine e;
  e.q = q;
  e.level_rows.assign(q, x);
  e.scale = v;
  e.copies = copies_for(n, cfg);
  e.bucket_dim = std::max<Index>(1, static_cast<Index>(std::ceil(cfg.bucket_sketch_const * qd * qd)));
  build_selftensor_banks(e, x, q, m, basis.kappa(), cfg, rng.child(1), report);
  const Index buckets = bucket_count(qd * qd * qd, s);
  if (q > 0) setup_hashes(e, buckets, rng.child(2));

  // Block distribution f_j ∝ alpha_j^2 median_k Query(v, q - j).
  std::vector<double> f(q + 1);
  double ftotal = 0.0;
  std::vector<double> tmp;
  for (Index j = 0; j <= q; ++j) {
    const double a = alpha(static_cast<Eigen::Index>(j));
    if (a == 0.0) {
      f[j] = 0.0;
      continue;
    }
    tmp.clear();
    for (const auto& bank : e.banks) tmp.push_back(bank.query(v, q - j));
    f[j] = a * a * lower_median(tmp);
    ftotal += f[j];
  }
  if (!(ftotal > 0.0)) throw NumericalError("GPK sampler: every block has zero estimated mass");
  for (auto& fj : f) fj /= ftotal;

  std::vector<Walk> walks(s);
  for (Index l = 0; l < s; ++l) {
    Walk& w = walks[l];
    w.rng = rng.child({3, l});
    w.block = sample_categorical(f, 1.0, w.rng.uniform());
    w.prob = f[w.block];
  }
  Index states = 0;
  run_levels(e, walks, &states);
  if (report) {
    report->buckets = buckets;
    report->copies = e.copies;
    report->jl_rows = jl;
    report->distinct_states = states;
    report->kappa = basis.kappa();
    report->block_distribution = f;
  }
  return finish(walks, s, report);
}

SampledRows row_sampler(const FeatureDescriptor& desc, const DenseMatrix& b, double lambda,
                        Index s, const RowSamplerConfig& cfg, RngStream rng,
                        RowSamplerReport* report) {
  switch (desc.kind()) {
    case FeatureKind::TensorProduct: {
      std::vector<Dataset> xs;
      for (Index a = 0; a < desc.degree(); ++a) xs.push_back(desc.factor(a));
      return row_sampler_tensor(xs, b, lambda, s, cfg, rng, report);
    }
    case FeatureKind::SelfTensor:
      return row_sampler_selftensor(desc.factor(0), desc.degree(), b, lambda, s, cfg, rng, report);
    case FeatureKind::Gpk: {
      const Dataset x = desc.degree() > 0 ? desc.factor(0) : Dataset(DenseMatrix(0, desc.columns()));
      return row_sampler_gpk(x, desc.scale(), desc.alpha(), b, lambda, s, cfg, rng, report);
    }
  }
  throw ContractViolation("row sampler: unknown feature kind");
}

}  // namespace tensorlev
