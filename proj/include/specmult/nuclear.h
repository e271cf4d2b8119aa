// SPDX-License-Identifier: Apache-2.0
#ifndef SPECMULT_NUCLEAR_H_
#define SPECMULT_NUCLEAR_H_

#include <optional>
#include <string>
#include <vector>

#include "specmult/manifold.h"
#include "specmult/symbol.h"

namespace specmult {

// 0 on [1, 2], (p - 2)/p on (2, inf), 1 at infinity.
double ptilde(double p);

// p' with 1/p + 1/p' = 1; 1 <-> infinity.
double dual_exponent(double p);

// (ptilde(p2) + ptilde(p1')) / 2 and its closed form
// 1/min(2, p1) - 1/max(2, p2).
double half_exponent_sum(double p1, double p2);
double group_order(double p1, double p2);

// Quadrature L^p norm of every retained eigenfunction, in flat basis order.
// p = infinity is the max over grid nodes.
std::vector<double> eigenfunction_lp_norms(const Partition& partition,
                                           const QuadratureGrid& grid, double p);

// Bound Lambda(l, k; n, inf) on ||e_l^k||_inf.
class LambdaControl {
 public:
  enum class Kind { kUniform, kHormander, kGroupSqrtDim, kEmpirical };

  // Lambda = c.
  static LambdaControl Uniform(double c = 1.0);
  // Lambda = C max(1, lambda)^{(n-1)/(2 nu)}.
  static LambdaControl Hormander(double c = 1.0);
  // Lambda = d_xi^{1/2}: sqrt(2l+1) on SU(2), 1 on the torus.
  static LambdaControl GroupSqrtDim();
  // Measured grid sup-norms, per basis function.
  static LambdaControl Empirical(const Partition& partition, const QuadratureGrid& grid);

  static Kind ParseKind(const std::string& name);
  static std::string KindName(Kind kind);

  Kind kind() const { return kind_; }
  double constant() const { return constant_; }

  double evaluate(const Partition& partition, std::size_t level, std::size_t k) const;
  // Largest value over the level.
  double level_max(const Partition& partition, std::size_t level) const;

  // gamma with Lambda ~ (1 + lambda)^gamma as lambda grows, when known in
  // closed form (not for Empirical).
  std::optional<double> growth_exponent(const ManifoldId& id, double order_nu) const;

 private:
  LambdaControl(Kind kind, double c) : kind_(kind), constant_(c) {}
  Kind kind_;
  double constant_;
  std::vector<double> empirical_;
};

enum class NuclearVerdict { kHolds, kFails, kInconclusive };
std::string verdict_name(NuclearVerdict v);

enum class NuclearForm {
  kEntryWise,      // sum |sigma_mk|^r Lambda(l,m)^{p2~ r} Lambda(l,k)^{q1~ r}
  kSchattenBlock,  // sum ||sigma(l)||_{S_r}^r Lambda(l)^{(p2~ + q1~) r}
};

inline constexpr double kTailFitMaxStderr = 0.1;
inline constexpr double kTailFitMargin = 0.02;

struct NuclearityReport {
  double partial_sum = 0.0;
  // e with summand_l / d_l ~ (1 + lambda_l)^e; the series converges iff
  // e < critical_exponent = -n/nu.
  double tail_exponent = 0.0;
  double critical_exponent = 0.0;
  NuclearVerdict verdict = NuclearVerdict::kInconclusive;
  // Closed-form alpha threshold for the power family under this control.
  std::optional<double> threshold_alpha;
  // Set when sigma was recognized as c (I + E)^{-alpha/nu}.
  std::optional<double> recognized_alpha;
  bool analytic = false;
  // Standard error of the fitted slope (fitted case only).
  double fit_stderr = 0.0;
};

// Sufficient condition for r-nuclearity L^p1 -> L^p2. Requires 0 < r <= 1
// and 1 <= p1, p2 < inf.
NuclearityReport nuclearity_sum(const Symbol& sigma, double r, double p1, double p2,
                                const LambdaControl& control,
                                NuclearForm form = NuclearForm::kSchattenBlock);

// Membership of the operator in S_r(L^2), any r > 0, by the same tail rule
// applied to sum ||sigma(l)||_{S_r}^r.
NuclearityReport schatten_membership(const Symbol& sigma, double r);

// Closed-form alpha threshold for (I + E)^{-alpha/nu}:
// Uniform n/r, Hormander n/r + (p2~ + q1~)(n-1)/2, GroupSqrtDim on SU(2)
// 3/r + (p2~ + q1~)/2. r > 1 is only meaningful for p1 = p2 = 2 (Schatten).
double power_threshold(const ManifoldId& id, double order_nu, double r, double p1,
                       double p2, LambdaControl::Kind kind);
// Torus/general form; GroupSqrtDim is read as SU(2) and needs n = 3.
double power_threshold(int n, double order_nu, double r, double p1, double p2,
                       LambdaControl::Kind kind);

struct HormanderFit {
  double C = 0.0;
  // max_k ||e_l^k||_inf / lambda_l^{(n-1)/(2nu)} per positive level.
  std::vector<double> lambdas;
  std::vector<double> ratios;
  // No growth trend: max ratio over the upper half <= max over the lower half.
  bool bounded = false;
};

HormanderFit hormander_constant_fit(const Partition& partition, const QuadratureGrid& grid);

}  // namespace specmult

#endif  // SPECMULT_NUCLEAR_H_
