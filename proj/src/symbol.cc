// SPDX-License-Identifier: Apache-2.0
#include "specmult/symbol.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "specmult/error.h"

namespace specmult {

namespace {

void require_same_partition(const Partition& a, const Partition& b, const char* who) {
  if (!a.same_structure(b)) {
    throw ValidationError(std::string(who) + ": operands live on different partitions");
  }
}

constexpr double kTraceTailShare = 1e-2;

}  // namespace

Symbol::Symbol(PartitionPtr partition) : partition_(std::move(partition)) {
  blocks_.reserve(partition_->size());
  for (const Level& lv : partition_->levels()) blocks_.emplace_back(lv.dim, lv.dim);
}

Symbol::Symbol(PartitionPtr partition, std::vector<CMatrix> blocks)
    : partition_(std::move(partition)), blocks_(std::move(blocks)) {
  if (blocks_.size() != partition_->size()) {
    throw ValidationError("Symbol: " + std::to_string(blocks_.size()) +
                          " blocks for a partition with " +
                          std::to_string(partition_->size()) + " levels");
  }
  for (std::size_t l = 0; l < blocks_.size(); ++l) {
    const std::size_t d = partition_->level(l).dim;
    if (blocks_[l].rows() != d || blocks_[l].cols() != d) {
      throw ValidationError("Symbol: block " + std::to_string(l) + " must be " +
                            std::to_string(d) + "x" + std::to_string(d));
    }
    if (!blocks_[l].all_finite()) {
      throw ValidationError("Symbol: block " + std::to_string(l) +
                            " has non-finite entries");
    }
  }
}

Symbol Symbol::Identity(PartitionPtr partition) {
  return from_spectral_function(std::move(partition), [](double) { return Complex(1.0); });
}

Symbol from_spectral_function(PartitionPtr partition, const SpectralFunction& f) {
  std::vector<CMatrix> blocks;
  blocks.reserve(partition->size());
  for (const Level& lv : partition->levels()) {
    const Complex v = f(lv.lambda);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw ValidationError("from_spectral_function: F is not finite at lambda = " +
                            std::to_string(lv.lambda));
    }
    CMatrix b(lv.dim, lv.dim);
    for (std::size_t i = 0; i < lv.dim; ++i) b(i, i) = v;
    blocks.push_back(std::move(b));
  }
  return Symbol(std::move(partition), std::move(blocks));
}

Symbol power_symbol(PartitionPtr partition, double alpha) {
  const double nu = partition->order_nu();
  return from_spectral_function(std::move(partition), [alpha, nu](double lambda) {
    return Complex(std::pow(1.0 + lambda, -alpha / nu));
  });
}

FourierCoefficients apply(const Symbol& sigma, const FourierCoefficients& c) {
  require_same_partition(sigma.partition(), c.partition(), "apply");
  FourierCoefficients out(c.partition_ptr());
  for (std::size_t l = 0; l < sigma.size(); ++l) {
    const std::vector<Complex> y = sigma[l] * c.level(l);
    std::copy(y.begin(), y.end(), out.level(l).begin());
  }
  return out;
}

InvarianceReport check_invariance(const CoefficientMap& op, PartitionPtr partition,
                                  double tol) {
  if (!(tol > 0.0)) throw ValidationError("check_invariance: tolerance must be positive");
  InvarianceReport report{0.0, tol, false, Symbol(partition)};
  const Partition& p = *partition;
  for (std::size_t j = 0; j < p.size(); ++j) {
    for (std::size_t k = 0; k < p.level(j).dim; ++k) {
      const FourierCoefficients image = op(FourierCoefficients::Unit(partition, j, k));
      if (!image.partition().same_structure(p)) {
        throw ValidationError("operator returned coefficients on a different partition");
      }
      for (std::size_t l = 0; l < p.size(); ++l) {
        const auto block = image.level(l);
        if (l == j) {
          for (std::size_t m = 0; m < block.size(); ++m) report.extracted[j](m, k) = block[m];
          continue;
        }
        for (const Complex& z : block) {
          report.max_offblock = std::max(report.max_offblock, std::abs(z));
        }
      }
    }
  }
  report.verdict = report.max_offblock < tol;
  return report;
}

Symbol extract(const CoefficientMap& op, PartitionPtr partition) {
  return check_invariance(op, std::move(partition)).extracted;
}

Symbol compose(const Symbol& a, const Symbol& b) {
  require_same_partition(a.partition(), b.partition(), "compose");
  std::vector<CMatrix> blocks;
  blocks.reserve(a.size());
  for (std::size_t l = 0; l < a.size(); ++l) blocks.push_back(a[l] * b[l]);
  return Symbol(a.partition_ptr(), std::move(blocks));
}

double l2_bound(const Symbol& sigma) {
  double sup = 0.0;
  for (const CMatrix& b : sigma.blocks()) sup = std::max(sup, op_norm(b));
  return sup;
}

SchattenValue schatten(const Symbol& sigma, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) {
    throw ValidationError("schatten: exponent r must be a finite positive number");
  }
  // Sum of ||sigma(l)||_{S_r}^r, scaled by the global s_max so that small r
  // neither overflows nor underflows.
  std::vector<SingularValues> values;
  values.reserve(sigma.size());
  double smax = 0.0;
  for (const CMatrix& b : sigma.blocks()) {
    values.push_back(svd(b));
    if (!values.back().empty()) smax = std::max(smax, values.back().front());
  }
  if (smax == 0.0) return {0.0, true};
  double acc = 0.0;
  for (const SingularValues& s : values) {
    for (double v : s) acc += std::pow(v / smax, r);
  }
  const double value = smax * std::pow(acc, 1.0 / r);
  return {value, std::isfinite(value)};
}

TraceResult trace_formula(const Symbol& sigma) {
  TraceResult result{Complex(0.0, 0.0), {}};
  double s1_total = 0.0;
  double s1_top = 0.0;
  for (std::size_t l = 0; l < sigma.size(); ++l) {
    result.value += mat_trace(sigma[l]);
    const double s1 = schatten_q(sigma[l], 1.0);
    s1_total += s1;
    if (l + 1 == sigma.size()) s1_top = s1;
  }
  if (!std::isfinite(s1_total)) {
    result.warnings.push_back("S_1 mass is not finite on the truncation");
  } else if (sigma.size() > 1 && s1_total > 0.0 && s1_top > kTraceTailShare * s1_total) {
    result.warnings.push_back(
        "slow decay: the top retained level carries " +
        std::to_string(100.0 * s1_top / s1_total) +
        "% of the S_1 mass; the truncated trace may not approximate the series");
  }
  return result;
}

SobolevOrder sobolev_order(const Symbol& sigma) {
  constexpr std::size_t kMinLevels = 8;
  const Partition& p = sigma.partition();
  std::vector<std::size_t> positive;
  for (std::size_t l = 0; l < p.size(); ++l) {
    if (p.level(l).lambda > 0.0) positive.push_back(l);
  }
  if (positive.size() < kMinLevels) {
    throw ValidationError("sobolev_order: need at least " + std::to_string(kMinLevels) +
                          " levels with lambda > 0, have " +
                          std::to_string(positive.size()));
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = positive.size() / 2; i < positive.size(); ++i) {
    const std::size_t l = positive[i];
    const double norm = op_norm(sigma[l]);
    if (norm == 0.0) continue;
    xs.push_back(std::log1p(p.level(l).lambda) / p.order_nu());
    ys.push_back(std::log(norm));
  }
  if (xs.size() < 2) {
    throw ValidationError("sobolev_order: symbol vanishes on the fit window");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  return {slope, std::exp(my - slope * mx)};
}

CMatrix assemble_dense(const Symbol& sigma) { return block_diagonal(sigma.blocks()); }

}  // namespace specmult
