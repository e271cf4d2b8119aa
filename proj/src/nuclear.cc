// SPDX-License-Identifier: Apache-2.0
#include "specmult/nuclear.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "specmult/error.h"
#include "specmult/fourier.h"

namespace specmult {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_lebesgue(double p, const char* who) {
  if (!(p >= 1.0)) {
    throw ValidationError(std::string(who) + ": exponent must lie in [1, inf], got " +
                          std::to_string(p));
  }
}

void require_finite_lebesgue(double p, const char* who) {
  require_lebesgue(p, who);
  if (std::isinf(p)) {
    throw ValidationError(std::string(who) + ": p1 and p2 must be finite");
  }
}

// Sum of ||sigma(l)||_{S_r}^r behaviour of c (I + E)^{-alpha/nu}: returns
// alpha when every block is c (1 + lambda)^{-alpha/nu} I with one alpha.
std::optional<double> recognize_power(const Symbol& sigma) {
  const Partition& p = sigma.partition();
  if (p.size() < 2 || p.level(0).lambda != 0.0) return std::nullopt;
  std::vector<double> values;
  for (std::size_t l = 0; l < sigma.size(); ++l) {
    const CMatrix& b = sigma[l];
    const Complex v = b(0, 0);
    const double scale = std::abs(v);
    if (!(scale > 0.0) || std::abs(v.imag()) > 1e-12 * scale || v.real() <= 0.0) {
      return std::nullopt;
    }
    for (std::size_t i = 0; i < b.rows(); ++i) {
      for (std::size_t j = 0; j < b.cols(); ++j) {
        const Complex expect = i == j ? v : Complex(0.0);
        if (std::abs(b(i, j) - expect) > 1e-12 * scale) return std::nullopt;
      }
    }
    values.push_back(v.real());
  }
  const double nu = p.order_nu();
  std::optional<double> alpha;
  for (std::size_t l = 1; l < values.size(); ++l) {
    const double a = -nu * std::log(values[l] / values[0]) / std::log1p(p.level(l).lambda);
    if (!alpha) {
      alpha = a;
    } else if (std::abs(a - *alpha) > 1e-9 * std::max(1.0, std::abs(*alpha))) {
      return std::nullopt;
    }
  }
  return alpha;
}

// Verdict from the per-level summands. When sigma is a recognized power and
// the control grows like (1 + lambda)^gamma, the tail exponent is exact:
// e = -alpha r / nu + control_exponent, with control_exponent = gamma s r.
NuclearityReport classify(const Symbol& sigma, const std::vector<double>& summands,
                          double r, std::optional<double> control_exponent) {
  const Partition& p = sigma.partition();
  NuclearityReport rep;
  for (double s : summands) rep.partial_sum += s;
  rep.critical_exponent = -p.dim_n() / p.order_nu();
  rep.recognized_alpha = recognize_power(sigma);

  if (rep.recognized_alpha && control_exponent) {
    rep.analytic = true;
    rep.tail_exponent = -*rep.recognized_alpha * r / p.order_nu() + *control_exponent;
    rep.verdict = rep.tail_exponent < rep.critical_exponent ? NuclearVerdict::kHolds
                                                            : NuclearVerdict::kFails;
    return rep;
  }

  std::vector<double> xs;
  std::vector<double> ys;
  bool tail_vanishes = true;
  for (std::size_t l = p.size() / 2; l < p.size(); ++l) {
    if (p.level(l).lambda <= 0.0) continue;
    if (summands[l] > 0.0) tail_vanishes = false;
    if (!(summands[l] > 0.0)) continue;
    xs.push_back(std::log1p(p.level(l).lambda));
    ys.push_back(std::log(summands[l] / static_cast<double>(p.level(l).dim)));
  }
  if (tail_vanishes && p.size() >= 2) {
    // Finitely supported within the truncation: nothing to sum in the tail.
    rep.tail_exponent = -kInf;
    rep.verdict = NuclearVerdict::kHolds;
    return rep;
  }
  if (xs.size() < 3) {
    rep.verdict = NuclearVerdict::kInconclusive;
    rep.fit_stderr = kInf;
    return rep;
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
  if (!(sxx > 0.0)) {
    rep.verdict = NuclearVerdict::kInconclusive;
    rep.fit_stderr = kInf;
    return rep;
  }
  const double slope = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double res = ys[i] - my - slope * (xs[i] - mx);
    rss += res * res;
  }
  rep.tail_exponent = slope;
  rep.fit_stderr = std::sqrt(rss / std::max(1.0, n - 2.0) / sxx);
  const double band = kTailFitMargin * std::abs(rep.critical_exponent);
  if (rep.fit_stderr > kTailFitMaxStderr) {
    rep.verdict = NuclearVerdict::kInconclusive;
  } else if (slope < rep.critical_exponent - band) {
    rep.verdict = NuclearVerdict::kHolds;
  } else if (slope > rep.critical_exponent + band) {
    rep.verdict = NuclearVerdict::kFails;
  } else {
    rep.verdict = NuclearVerdict::kInconclusive;
  }
  return rep;
}

double threshold_from_gamma(int n, double nu, double r, double s, double gamma) {
  // -alpha r/nu + gamma s r < -n/nu  <=>  alpha > n/r + gamma s nu.
  return n / r + gamma * s * nu;
}

void require_threshold_args(double order_nu, double r, double p1, double p2) {
  if (!(order_nu > 0.0)) throw ValidationError("power_threshold: nu must be positive");
  if (!(r > 0.0) || std::isinf(r)) {
    throw ValidationError("power_threshold: r must be a finite positive number");
  }
  require_finite_lebesgue(p1, "power_threshold");
  require_finite_lebesgue(p2, "power_threshold");
  if (r > 1.0 && !(p1 == 2.0 && p2 == 2.0)) {
    throw ValidationError("power_threshold: r > 1 is only supported for p1 = p2 = 2");
  }
}

}  // namespace

double ptilde(double p) {
  require_lebesgue(p, "ptilde");
  if (std::isinf(p)) return 1.0;
  if (p <= 2.0) return 0.0;
  return (p - 2.0) / p;
}

double dual_exponent(double p) {
  require_lebesgue(p, "dual_exponent");
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double half_exponent_sum(double p1, double p2) {
  return 0.5 * (ptilde(p2) + ptilde(dual_exponent(p1)));
}

double group_order(double p1, double p2) {
  require_lebesgue(p1, "group_order");
  require_lebesgue(p2, "group_order");
  return 1.0 / std::min(2.0, p1) - 1.0 / std::max(2.0, p2);
}

std::vector<double> eigenfunction_lp_norms(const Partition& partition,
                                           const QuadratureGrid& grid, double p) {
  require_lebesgue(p, "eigenfunction_lp_norms");
  const CMatrix basis = tabulate_basis(partition, grid);
  std::vector<double> norms(basis.cols(), 0.0);
  for (std::size_t b = 0; b < basis.cols(); ++b) {
    if (std::isinf(p)) {
      for (std::size_t node = 0; node < basis.rows(); ++node) {
        norms[b] = std::max(norms[b], std::abs(basis(node, b)));
      }
      continue;
    }
    double acc = 0.0;
    for (std::size_t node = 0; node < basis.rows(); ++node) {
      acc += grid.weights[node] * std::pow(std::abs(basis(node, b)), p);
    }
    norms[b] = std::pow(acc, 1.0 / p);
  }
  return norms;
}

LambdaControl LambdaControl::Uniform(double c) {
  if (!(c > 0.0) || std::isinf(c)) {
    throw ValidationError("LambdaControl: constant must be finite and positive");
  }
  return LambdaControl(Kind::kUniform, c);
}

LambdaControl LambdaControl::Hormander(double c) {
  if (!(c > 0.0) || std::isinf(c)) {
    throw ValidationError("LambdaControl: constant must be finite and positive");
  }
  return LambdaControl(Kind::kHormander, c);
}

LambdaControl LambdaControl::GroupSqrtDim() { return LambdaControl(Kind::kGroupSqrtDim, 1.0); }

LambdaControl LambdaControl::Empirical(const Partition& partition,
                                       const QuadratureGrid& grid) {
  LambdaControl c(Kind::kEmpirical, 1.0);
  c.empirical_ = eigenfunction_lp_norms(partition, grid, kInf);
  return c;
}

LambdaControl::Kind LambdaControl::ParseKind(const std::string& name) {
  if (name == "uniform") return Kind::kUniform;
  if (name == "hormander") return Kind::kHormander;
  if (name == "group-sqrt-dim") return Kind::kGroupSqrtDim;
  if (name == "empirical") return Kind::kEmpirical;
  throw ValidationError("unknown control '" + name +
                        "'; expected uniform, hormander, group-sqrt-dim or empirical");
}

std::string LambdaControl::KindName(Kind kind) {
  switch (kind) {
    case Kind::kUniform:
      return "uniform";
    case Kind::kHormander:
      return "hormander";
    case Kind::kGroupSqrtDim:
      return "group-sqrt-dim";
    case Kind::kEmpirical:
      return "empirical";
  }
  return "unknown";
}

double LambdaControl::evaluate(const Partition& partition, std::size_t level,
                               std::size_t k) const {
  const Level& lv = partition.level(level);
  if (k >= lv.dim) throw ValidationError("LambdaControl: index out of range");
  switch (kind_) {
    case Kind::kUniform:
      return constant_;
    case Kind::kHormander:
      return constant_ * std::pow(std::max(1.0, lv.lambda),
                                  (partition.dim_n() - 1) / (2.0 * partition.order_nu()));
    case Kind::kGroupSqrtDim:
      return lv.two_l >= 0 ? std::sqrt(static_cast<double>(lv.two_l + 1)) : 1.0;
    case Kind::kEmpirical:
      if (empirical_.size() != partition.total_dim()) {
        throw ValidationError("LambdaControl: empirical control was measured on another "
                              "partition");
      }
      return empirical_[partition.offset(level) + k];
  }
  return 0.0;
}

double LambdaControl::level_max(const Partition& partition, std::size_t level) const {
  double m = 0.0;
  for (std::size_t k = 0; k < partition.level(level).dim; ++k) {
    m = std::max(m, evaluate(partition, level, k));
  }
  return m;
}

std::optional<double> LambdaControl::growth_exponent(const ManifoldId& id,
                                                     double order_nu) const {
  switch (kind_) {
    case Kind::kUniform:
      return 0.0;
    case Kind::kHormander:
      return (id.dim() - 1) / (2.0 * order_nu);
    case Kind::kGroupSqrtDim:
      // sqrt(2l+1) ~ (l(l+1))^{1/4} for the Casimir.
      return id.is_su2() ? 0.25 : 0.0;
    case Kind::kEmpirical:
      return std::nullopt;
  }
  return std::nullopt;
}

std::string verdict_name(NuclearVerdict v) {
  switch (v) {
    case NuclearVerdict::kHolds:
      return "holds";
    case NuclearVerdict::kFails:
      return "fails";
    case NuclearVerdict::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

NuclearityReport nuclearity_sum(const Symbol& sigma, double r, double p1, double p2,
                                const LambdaControl& control, NuclearForm form) {
  if (!(r > 0.0 && r <= 1.0)) {
    throw ValidationError("nuclearity_sum: r must lie in (0, 1], got " + std::to_string(r));
  }
  require_finite_lebesgue(p1, "nuclearity_sum");
  require_finite_lebesgue(p2, "nuclearity_sum");
  const Partition& p = sigma.partition();
  const double tp2 = ptilde(p2);
  const double tq1 = ptilde(dual_exponent(p1));

  std::vector<double> summands(sigma.size(), 0.0);
  for (std::size_t l = 0; l < sigma.size(); ++l) {
    const CMatrix& b = sigma[l];
    if (form == NuclearForm::kSchattenBlock) {
      const double lam = control.level_max(p, l);
      summands[l] = std::pow(schatten_q(b, r), r) * std::pow(lam, (tp2 + tq1) * r);
      continue;
    }
    std::vector<double> lam(b.rows());
    for (std::size_t k = 0; k < lam.size(); ++k) lam[k] = control.evaluate(p, l, k);
    double acc = 0.0;
    for (std::size_t m = 0; m < b.rows(); ++m) {
      for (std::size_t k = 0; k < b.cols(); ++k) {
        const double a = std::abs(b(m, k));
        if (a == 0.0) continue;
        acc += std::pow(a, r) * std::pow(lam[m], tp2 * r) * std::pow(lam[k], tq1 * r);
      }
    }
    summands[l] = acc;
  }

  const std::optional<double> gamma = control.growth_exponent(p.manifold(), p.order_nu());
  std::optional<double> control_exponent;
  if (gamma) control_exponent = *gamma * (tp2 + tq1) * r;
  NuclearityReport rep = classify(sigma, summands, r, control_exponent);
  if (gamma) {
    rep.threshold_alpha =
        threshold_from_gamma(p.dim_n(), p.order_nu(), r, tp2 + tq1, *gamma);
  }
  return rep;
}

NuclearityReport schatten_membership(const Symbol& sigma, double r) {
  if (!(r > 0.0) || std::isinf(r)) {
    throw ValidationError("schatten_membership: r must be a finite positive number");
  }
  std::vector<double> summands(sigma.size());
  for (std::size_t l = 0; l < sigma.size(); ++l) {
    summands[l] = std::pow(schatten_q(sigma[l], r), r);
  }
  NuclearityReport rep = classify(sigma, summands, r, 0.0);
  rep.threshold_alpha = sigma.partition().dim_n() / r;
  return rep;
}

double power_threshold(const ManifoldId& id, double order_nu, double r, double p1,
                       double p2, LambdaControl::Kind kind) {
  require_threshold_args(order_nu, r, p1, p2);
  if (kind == LambdaControl::Kind::kEmpirical) {
    throw ValidationError("power_threshold: the empirical control has no closed form");
  }
  const LambdaControl control = kind == LambdaControl::Kind::kUniform
                                    ? LambdaControl::Uniform()
                                : kind == LambdaControl::Kind::kHormander
                                    ? LambdaControl::Hormander()
                                    : LambdaControl::GroupSqrtDim();
  const double s = ptilde(p2) + ptilde(dual_exponent(p1));
  return threshold_from_gamma(id.dim(), order_nu, r, s,
                              *control.growth_exponent(id, order_nu));
}

double power_threshold(int n, double order_nu, double r, double p1, double p2,
                       LambdaControl::Kind kind) {
  if (n < 1) throw ValidationError("power_threshold: n must be positive");
  require_threshold_args(order_nu, r, p1, p2);
  const double s = ptilde(p2) + ptilde(dual_exponent(p1));
  switch (kind) {
    case LambdaControl::Kind::kUniform:
      return threshold_from_gamma(n, order_nu, r, s, 0.0);
    case LambdaControl::Kind::kHormander:
      return threshold_from_gamma(n, order_nu, r, s, (n - 1) / (2.0 * order_nu));
    case LambdaControl::Kind::kGroupSqrtDim:
      if (n != 3 || order_nu != 2.0) {
        throw ValidationError("power_threshold: the group control is supported on SU(2) "
                              "(n = 3, nu = 2) only");
      }
      return threshold_from_gamma(n, order_nu, r, s, 0.25);
    case LambdaControl::Kind::kEmpirical:
      break;
  }
  throw ValidationError("power_threshold: the empirical control has no closed form");
}

HormanderFit hormander_constant_fit(const Partition& partition,
                                    const QuadratureGrid& grid) {
  std::size_t positive = 0;
  for (const Level& lv : partition.levels()) positive += lv.lambda > 0.0 ? 1 : 0;
  if (positive < 5) {
    throw ValidationError("hormander_constant_fit: need at least 5 levels with "
                          "lambda > 0, have " + std::to_string(positive));
  }
  const std::vector<double> sup = eigenfunction_lp_norms(partition, grid, kInf);
  const double expo = (partition.dim_n() - 1) / (2.0 * partition.order_nu());
  HormanderFit fit;
  for (std::size_t l = 0; l < partition.size(); ++l) {
    const Level& lv = partition.level(l);
    if (lv.lambda <= 0.0) continue;
    double m = 0.0;
    for (std::size_t k = 0; k < lv.dim; ++k) m = std::max(m, sup[partition.offset(l) + k]);
    fit.lambdas.push_back(lv.lambda);
    fit.ratios.push_back(m / std::pow(lv.lambda, expo));
    fit.C = std::max(fit.C, fit.ratios.back());
  }
  const std::size_t half = fit.ratios.size() / 2;
  const double lower = *std::max_element(fit.ratios.begin(), fit.ratios.begin() + half);
  const double upper = *std::max_element(fit.ratios.begin() + half, fit.ratios.end());
  fit.bounded = upper <= lower * (1.0 + 1e-9);
  return fit;
}

}  // namespace specmult
