#include "tensorlev/features.hpp"

#include <cmath>
#include <string>

namespace tensorlev {

FeatureDescriptor FeatureDescriptor::tensor_product(std::vector<Dataset> factors) {
  require(!factors.empty(), "tensor product needs at least one factor");
  FeatureDescriptor d;
  d.kind_ = FeatureKind::TensorProduct;
  d.q_ = factors.size();
  d.n_ = factors[0].cols();
  for (const auto& f : factors)
    require(f.cols() == d.n_, "tensor product factors must share the column count");
  d.factors_ = std::move(factors);
  d.v_ = Vector::Ones(static_cast<Eigen::Index>(d.n_));
  d.alpha_ = Vector::Ones(1);
  d.finish();
  return d;
}

FeatureDescriptor FeatureDescriptor::self_tensor(Dataset x, Index q) {
  require(q >= 1, "self tensor degree must be positive");
  FeatureDescriptor d;
  d.kind_ = FeatureKind::SelfTensor;
  d.q_ = q;
  d.n_ = x.cols();
  d.factors_ = {std::move(x)};
  d.v_ = Vector::Ones(static_cast<Eigen::Index>(d.n_));
  d.alpha_ = Vector::Ones(1);
  d.finish();
  return d;
}

FeatureDescriptor FeatureDescriptor::gpk(Dataset x, Vector v, Vector alpha) {
  require(alpha.size() >= 1, "GPK needs at least one coefficient");
  require(static_cast<Index>(v.size()) == x.cols(), "GPK scale vector length mismatch");
  require(v.allFinite() && alpha.allFinite(), "GPK parameters must be finite");
  require((alpha.array() >= 0.0).all(), "GPK coefficients must be nonnegative");
  require((alpha.array() > 0.0).any(), "GPK coefficients are all zero");
  FeatureDescriptor d;
  d.kind_ = FeatureKind::Gpk;
  d.q_ = static_cast<Index>(alpha.size()) - 1;
  d.n_ = x.cols();
  d.factors_ = {std::move(x)};
  d.v_ = std::move(v);
  d.alpha_ = std::move(alpha);
  d.finish();
  return d;
}

const Dataset& FeatureDescriptor::factor(Index a) const {
  require(a < q_, "factor position out of range");
  return kind_ == FeatureKind::TensorProduct ? factors_[a] : factors_[0];
}

void FeatureDescriptor::finish() {
  double total = 0.0;
  if (kind_ == FeatureKind::TensorProduct) {
    Vector prod = Vector::Ones(static_cast<Eigen::Index>(n_));
    for (const auto& f : factors_) prod = prod.cwiseProduct(f.column_sq_norms());
    total = prod.sum();
  } else if (kind_ == FeatureKind::SelfTensor) {
    total = factors_[0].column_sq_norms().array().pow(static_cast<double>(q_)).sum();
  } else {
    const Vector norms = factors_[0].column_sq_norms();
    for (Eigen::Index l = 0; l < norms.size(); ++l) {
      double poly = 0.0, pw = 1.0;
      for (Eigen::Index j = 0; j < alpha_.size(); ++j) {
        poly += alpha_(j) * alpha_(j) * pw;
        pw *= norms(l);
      }
      total += v_(l) * v_(l) * poly;
    }
  }
  frob_sq_ = total;
}

double frobenius_sq(const FeatureDescriptor& desc) { return desc.frobenius_sq(); }

DenseMatrix materialize_sampled_rows(const SampledRows& rows, const FeatureDescriptor& desc) {
  const auto n = static_cast<Eigen::Index>(desc.columns());
  DenseMatrix out(static_cast<Eigen::Index>(rows.size()), n);
  for (Index l = 0; l < rows.size(); ++l) {
    const auto& r = rows[l];
    require(r.block >= desc.first_block() && r.block <= desc.degree(),
            "sampled row " + std::to_string(l) + " has an invalid block");
    require(r.index.size() == r.block, "sampled row " + std::to_string(l) +
                                           " has a multi-index of the wrong length");
    const double a = desc.kind() == FeatureKind::Gpk ? desc.alpha()(static_cast<Eigen::Index>(r.block)) : 1.0;
    Vector row = (r.weight * a) * desc.scale();
    for (Index t = 0; t < r.block; ++t) {
      const Dataset& x = desc.factor(t);
      require(r.index[t] < x.rows(), "sampled row " + std::to_string(l) + " index out of range");
      row = row.cwiseProduct(x.row(r.index[t]));
    }
    out.row(static_cast<Eigen::Index>(l)) = row.transpose();
  }
  return out;
}

}  // namespace tensorlev
