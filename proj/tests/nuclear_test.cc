// SPDX-License-Identifier: Apache-2.0
#include "specmult/nuclear.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "oracles.h"
#include "specmult/error.h"

namespace specmult {
namespace {

using oracle::Rng;
constexpr double kInf = std::numeric_limits<double>::infinity();
using Kind = LambdaControl::Kind;

PartitionPtr torus(int n, double cutoff) {
  return enumerate_partition(ManifoldId::Torus(n), 2.0, cutoff);
}

PartitionPtr su2(int max_two_l) {
  return enumerate_partition(ManifoldId::SU2(), 2.0, su2_casimir(max_two_l));
}

// The power symbol with every block rotated by a random unitary: same
// singular values, but no longer recognizable as a spectral function.
Symbol rotated_power(Rng& rng, PartitionPtr p, double alpha) {
  const Symbol base = power_symbol(p, alpha);
  std::vector<CMatrix> blocks;
  for (std::size_t l = 0; l < base.size(); ++l) {
    blocks.push_back(oracle::random_unitary(rng, base[l].rows()) * base[l]);
  }
  return Symbol(std::move(p), std::move(blocks));
}

TEST(Ptilde, Examples) {
  EXPECT_EQ(ptilde(1.0), 0.0);
  EXPECT_EQ(ptilde(2.0), 0.0);
  EXPECT_EQ(ptilde(4.0), 0.5);
  EXPECT_EQ(ptilde(kInf), 1.0);
  EXPECT_NEAR(ptilde(3.0), 1.0 / 3.0, 1e-16);
  EXPECT_THROW(ptilde(0.5), ValidationError);
  EXPECT_EQ(dual_exponent(1.0), kInf);
  EXPECT_EQ(dual_exponent(kInf), 1.0);
  EXPECT_EQ(dual_exponent(2.0), 2.0);
  EXPECT_NEAR(dual_exponent(4.0 / 3.0), 4.0, 1e-15);
}

TEST(ExponentIdentity, ExactOnIndexGrid) {
  using oracle::Rational;
  const std::vector<Rational> ps{Rational::Of(1), Rational::Of(3, 2), Rational::Of(2),
                                 Rational::Of(3), Rational::Of(4), Rational::Infinity()};
  for (Rational p1 : ps) {
    for (Rational p2 : ps) {
      const Rational half = oracle::exact_half_sum(p1, p2);
      EXPECT_TRUE(half == oracle::exact_group_order(p1, p2));
      const double want = half.to_double();
      EXPECT_NEAR(half_exponent_sum(p1.to_double(), p2.to_double()), want, 1e-15);
      EXPECT_NEAR(group_order(p1.to_double(), p2.to_double()), want, 1e-15);
    }
  }
}

TEST(EigenfunctionLpNorms, TorusCharactersAreUnimodular) {
  const PartitionPtr p = torus(2, 10.0);
  const GridPtr g = build_quadrature(*p, p->max_lambda());
  for (double q : {1.0, 1.5, 2.0, 4.0, kInf}) {
    for (double v : eigenfunction_lp_norms(*p, *g, q)) EXPECT_NEAR(v, 1.0, 1e-12);
  }
}

TEST(EigenfunctionLpNorms, SU2WithinInterpolationBounds) {
  const PartitionPtr p = su2(3);
  const GridPtr g = build_quadrature(*p, p->max_lambda());
  const std::vector<double> one = eigenfunction_lp_norms(*p, *g, 1.0);
  const std::vector<double> two = eigenfunction_lp_norms(*p, *g, 2.0);
  const std::vector<double> four = eigenfunction_lp_norms(*p, *g, 4.0);
  const std::vector<double> sup = eigenfunction_lp_norms(*p, *g, kInf);
  for (std::size_t b = 0; b < one.size(); ++b) {
    EXPECT_LE(one[b], 1.0 + 1e-9);
    EXPECT_NEAR(two[b], 1.0, 1e-12);
    EXPECT_LE(four[b], std::pow(sup[b], 0.5) + 1e-9);
  }
  // Spin 1/2 entries: sqrt(2) |D_mk| <= sqrt(2) = d^{1/2}.
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_LE(sup[p->offset(1) + k], std::sqrt(2.0) + 1e-12);
    EXPECT_LE(sup[p->offset(1) + k], LambdaControl::GroupSqrtDim().evaluate(*p, 1, k) + 1e-12);
  }
}

TEST(LambdaControl, EvaluateAndParse) {
  const PartitionPtr t = torus(3, 4.0);
  const PartitionPtr s = su2(4);
  EXPECT_EQ(LambdaControl::Uniform(2.5).evaluate(*t, 3, 0), 2.5);
  // Hormander on T^3: C max(1, lambda)^{1/2}.
  EXPECT_NEAR(LambdaControl::Hormander(2.0).evaluate(*t, 3, 0), 2.0 * std::sqrt(3.0), 1e-14);
  EXPECT_EQ(LambdaControl::Hormander(2.0).evaluate(*t, 0, 0), 2.0);
  EXPECT_EQ(LambdaControl::GroupSqrtDim().evaluate(*t, 2, 0), 1.0);
  EXPECT_NEAR(LambdaControl::GroupSqrtDim().evaluate(*s, 4, 7), std::sqrt(5.0), 1e-15);
  for (const char* name : {"uniform", "hormander", "group-sqrt-dim", "empirical"}) {
    EXPECT_EQ(LambdaControl::KindName(LambdaControl::ParseKind(name)), name);
  }
  EXPECT_THROW(LambdaControl::ParseKind("sobolev"), ValidationError);
  EXPECT_THROW(LambdaControl::Uniform(0.0), ValidationError);
  EXPECT_THROW(LambdaControl::Hormander(-1.0), ValidationError);
}

TEST(LambdaControl, EmpiricalDominatesMeasuredNorms) {
  const PartitionPtr p = su2(4);
  const GridPtr g = build_quadrature(*p, p->max_lambda());
  const LambdaControl c = LambdaControl::Empirical(*p, *g);
  const std::vector<double> sup = eigenfunction_lp_norms(*p, *g, kInf);
  for (std::size_t l = 0; l < p->size(); ++l) {
    for (std::size_t k = 0; k < p->level(l).dim; ++k) {
      EXPECT_GE(c.evaluate(*p, l, k), sup[p->offset(l) + k]);
    }
  }
  EXPECT_FALSE(c.growth_exponent(p->manifold(), 2.0).has_value());
  EXPECT_THROW(c.evaluate(*su2(2), 1, 0), ValidationError);
}

TEST(PowerThreshold, Examples) {
  EXPECT_DOUBLE_EQ(power_threshold(3, 2.0, 1.0, 2.0, 2.0, Kind::kHormander), 3.0);
  EXPECT_DOUBLE_EQ(power_threshold(ManifoldId::SU2(), 2.0, 1.0, 2.0, 2.0, Kind::kGroupSqrtDim), 3.0);
  EXPECT_DOUBLE_EQ(power_threshold(3, 2.0, 2.0, 2.0, 2.0, Kind::kUniform), 1.5);
  // n/r + (p2~ + q1~)(n - 1)/2 with p2~ = 1/2, q1~ = 1/3 on T^3.
  EXPECT_NEAR(power_threshold(3, 2.0, 0.5, 1.5, 4.0, Kind::kHormander), 6.0 + 5.0 / 6.0, 1e-14);
  // 3/r + (p2~ + q1~)/2 on SU(2).
  EXPECT_NEAR(power_threshold(ManifoldId::SU2(), 2.0, 0.5, 1.5, 4.0, Kind::kGroupSqrtDim),
              6.0 + 5.0 / 12.0, 1e-14);
  EXPECT_NEAR(power_threshold(ManifoldId::Torus(2), 2.0, 1.0, 1.5, 4.0, Kind::kGroupSqrtDim), 2.0,
              1e-14);
}

TEST(PowerThreshold, Rejections) {
  EXPECT_THROW(power_threshold(3, 2.0, 1.0, 2.0, 2.0, Kind::kEmpirical), ValidationError);
  EXPECT_THROW(power_threshold(2, 2.0, 1.0, 2.0, 2.0, Kind::kGroupSqrtDim), ValidationError);
  EXPECT_THROW(power_threshold(3, 2.0, 2.0, 3.0, 2.0, Kind::kUniform), ValidationError);
  EXPECT_THROW(power_threshold(3, 2.0, 0.0, 2.0, 2.0, Kind::kUniform), ValidationError);
  EXPECT_THROW(power_threshold(3, 2.0, 1.0, kInf, 2.0, Kind::kUniform), ValidationError);
}

TEST(PowerThreshold, GroupControlBeatsHormanderOnSU2) {
  for (double r : {0.5, 0.75, 1.0}) {
    for (auto [p1, p2] : std::vector<std::pair<double, double>>{{2, 2}, {1.5, 3}, {1, 4}}) {
      EXPECT_LE(power_threshold(ManifoldId::SU2(), 2.0, r, p1, p2, Kind::kGroupSqrtDim),
                power_threshold(ManifoldId::SU2(), 2.0, r, p1, p2, Kind::kHormander));
    }
  }
}

TEST(ControlOrdering, SqrtDimBelowFittedHormander) {
  const PartitionPtr p = su2(5);
  const GridPtr g = build_quadrature(*p, p->max_lambda());
  const HormanderFit fit = hormander_constant_fit(*p, *g);
  const LambdaControl group = LambdaControl::GroupSqrtDim();
  const LambdaControl horm = LambdaControl::Hormander(fit.C);
  // d_xi^{1/2} <= const * C lambda^{1/2}; the constant is d^{1/2}/(C lambda^{1/2}) at l = 1/2.
  const double c0 = group.level_max(*p, 1) / horm.level_max(*p, 1);
  for (std::size_t l = 1; l < p->size(); ++l) {
    EXPECT_LE(group.level_max(*p, l), c0 * horm.level_max(*p, l) * (1.0 + 1e-12));
  }
}

TEST(HormanderFit, TorusRatiosDecrease) {
  const PartitionPtr p = torus(2, 20.0);
  const GridPtr g = build_quadrature(*p, p->max_lambda());
  const HormanderFit fit = hormander_constant_fit(*p, *g);
  // sup norms are 1, so C = lambda_1^{-1/4} = 1.
  EXPECT_NEAR(fit.C, 1.0, 1e-12);
  EXPECT_TRUE(fit.bounded);
  EXPECT_GT(fit.lambdas.front(), 0.0);
  for (std::size_t i = 1; i < fit.ratios.size(); ++i) EXPECT_LT(fit.ratios[i], fit.ratios[i - 1]);
}

TEST(HormanderFit, SU2IsBoundedAndExcludesConstant) {
  const PartitionPtr p = su2(5);
  const GridPtr g = build_quadrature(*p, p->max_lambda());
  const HormanderFit fit = hormander_constant_fit(*p, *g);
  EXPECT_TRUE(std::isfinite(fit.C));
  EXPECT_TRUE(fit.bounded);
  EXPECT_EQ(fit.lambdas.size(), p->size() - 1);
  for (double lam : fit.lambdas) EXPECT_GT(lam, 0.0);
  // The spin 1/2 level is below lambda = 1 and inflates the first ratio;
  // from spin 1 on the ratio does not increase.
  for (std::size_t i = 2; i < fit.ratios.size(); ++i) EXPECT_LE(fit.ratios[i], fit.ratios[i - 1] * (1 + 1e-12));
  EXPECT_THROW(hormander_constant_fit(*su2(2), *build_quadrature(*su2(2), su2_casimir(2))),
               ValidationError);
}

TEST(NuclearitySum, PowerVerdictsAroundThreshold) {
  const PartitionPtr p = torus(3, 12.0);
  const LambdaControl horm = LambdaControl::Hormander();
  const double th = power_threshold(3, 2.0, 1.0, 1.5, 4.0, Kind::kHormander);
  const NuclearityReport above = nuclearity_sum(power_symbol(p, th + 0.25), 1.0, 1.5, 4.0, horm);
  const NuclearityReport below = nuclearity_sum(power_symbol(p, th - 0.25), 1.0, 1.5, 4.0, horm);
  EXPECT_TRUE(above.analytic);
  EXPECT_EQ(above.verdict, NuclearVerdict::kHolds);
  EXPECT_EQ(below.verdict, NuclearVerdict::kFails);
  ASSERT_TRUE(above.threshold_alpha.has_value());
  EXPECT_NEAR(*above.threshold_alpha, th, 1e-12);
  ASSERT_TRUE(above.recognized_alpha.has_value());
  EXPECT_NEAR(*above.recognized_alpha, th + 0.25, 1e-9);
  EXPECT_NEAR(above.critical_exponent, -1.5, 1e-15);
  EXPECT_LT(above.tail_exponent, above.critical_exponent);
  EXPECT_GT(below.tail_exponent, below.critical_exponent);

  const PartitionPtr s = su2(6);
  const LambdaControl group = LambdaControl::GroupSqrtDim();
  EXPECT_EQ(nuclearity_sum(power_symbol(s, 3.5), 1.0, 2.0, 2.0, group).verdict, NuclearVerdict::kHolds);
  EXPECT_EQ(nuclearity_sum(power_symbol(s, 2.5), 1.0, 2.0, 2.0, group).verdict, NuclearVerdict::kFails);
}

TEST(NuclearitySum, HilbertPointReducesToSchatten) {
  Rng rng(1);
  for (const PartitionPtr& p : {torus(2, 10.0), su2(4)}) {
    const Symbol sigma = oracle::random_symbol(rng, p, 1.0);
    for (double r : {0.5, 0.8, 1.0}) {
      const double want = std::pow(schatten(sigma, r).value, r);
      for (const LambdaControl& c : {LambdaControl::Uniform(), LambdaControl::Hormander(3.0),
                                     LambdaControl::GroupSqrtDim()}) {
        EXPECT_LT(oracle::rel_err(nuclearity_sum(sigma, r, 2.0, 2.0, c).partial_sum, want), 1e-10);
      }
    }
  }
}

TEST(NuclearitySum, HilbertPointMatchesSchattenClassification) {
  const PartitionPtr p = torus(2, 30.0);
  for (double r : {0.5, 0.75, 1.0}) {
    const double th = 2.0 / r;
    for (double alpha : {th - 0.1, th + 0.1}) {
      const Symbol sigma = power_symbol(p, alpha);
      const NuclearityReport n = nuclearity_sum(sigma, r, 2.0, 2.0, LambdaControl::Uniform());
      const NuclearityReport s = schatten_membership(sigma, r);
      EXPECT_EQ(n.verdict, alpha > th ? NuclearVerdict::kHolds : NuclearVerdict::kFails);
      EXPECT_EQ(n.verdict, s.verdict);
      EXPECT_NEAR(*s.threshold_alpha, th, 1e-15);
    }
  }
}

TEST(NuclearitySum, VerdictMonotoneInAlpha) {
  const PartitionPtr s = su2(5);
  const PartitionPtr t = torus(3, 6.0);
  for (const PartitionPtr& p : {s, t}) {
    for (const LambdaControl& c : {LambdaControl::Uniform(), LambdaControl::Hormander(),
                                   LambdaControl::GroupSqrtDim()}) {
      for (auto [p1, p2] : std::vector<std::pair<double, double>>{{2, 2}, {1, 3}, {1.5, 4}}) {
        for (double r : {0.5, 1.0}) {
          bool seen_holds = false;
          for (double alpha = 0.5; alpha <= 12.0; alpha += 0.25) {
            const NuclearVerdict v = nuclearity_sum(power_symbol(p, alpha), r, p1, p2, c).verdict;
            if (seen_holds) EXPECT_EQ(v, NuclearVerdict::kHolds) << alpha;
            seen_holds = seen_holds || v == NuclearVerdict::kHolds;
          }
          EXPECT_TRUE(seen_holds);
        }
      }
    }
  }
}

TEST(NuclearitySum, EntryWiseAndBlockFormsAgreeOnDiagonalSymbols) {
  const PartitionPtr p = su2(4);
  const Symbol sigma = power_symbol(p, 4.0);
  for (const LambdaControl& c : {LambdaControl::Uniform(), LambdaControl::GroupSqrtDim()}) {
    const NuclearityReport a = nuclearity_sum(sigma, 0.7, 1.5, 3.0, c, NuclearForm::kEntryWise);
    const NuclearityReport b = nuclearity_sum(sigma, 0.7, 1.5, 3.0, c, NuclearForm::kSchattenBlock);
    EXPECT_LT(oracle::rel_err(a.partial_sum, b.partial_sum), 1e-12);
    EXPECT_EQ(a.verdict, b.verdict);
  }
}

TEST(NuclearitySum, FittedTailMatchesAnalytic) {
  Rng rng(2);
  const PartitionPtr p = torus(2, 60.0);
  for (double alpha : {1.0, 3.0}) {
    const NuclearityReport fit = nuclearity_sum(rotated_power(rng, p, alpha), 1.0, 2.0, 2.0,
                                                LambdaControl::Uniform());
    EXPECT_FALSE(fit.analytic);
    EXPECT_FALSE(fit.recognized_alpha.has_value());
    EXPECT_NEAR(fit.tail_exponent, -alpha / 2.0, 1e-9);
    EXPECT_LT(fit.fit_stderr, 1e-9);
    EXPECT_EQ(fit.verdict, alpha > 2.0 ? NuclearVerdict::kHolds : NuclearVerdict::kFails);
  }
  // Exactly at the critical exponent: inside the margin.
  EXPECT_EQ(nuclearity_sum(rotated_power(rng, p, 2.0), 1.0, 2.0, 2.0, LambdaControl::Uniform()).verdict,
            NuclearVerdict::kInconclusive);
}

TEST(NuclearitySum, NoisyTailIsInconclusive) {
  Rng rng(3);
  const PartitionPtr p = torus(2, 60.0);
  std::vector<CMatrix> blocks;
  std::normal_distribution<double> n;
  for (const Level& lv : p->levels()) {
    blocks.push_back(oracle::random_matrix(rng, lv.dim, lv.dim, std::exp(4.0 * n(rng))));
  }
  const NuclearityReport r =
      nuclearity_sum(Symbol(p, blocks), 1.0, 2.0, 2.0, LambdaControl::Empirical(*p, *build_quadrature(*p, 60.0)));
  EXPECT_GT(r.fit_stderr, kTailFitMaxStderr);
  EXPECT_EQ(r.verdict, NuclearVerdict::kInconclusive);
  EXPECT_FALSE(r.threshold_alpha.has_value());
}

TEST(NuclearitySum, FinitelySupportedHolds) {
  const PartitionPtr p = su2(4);
  Symbol sigma(p);
  sigma[1] = CMatrix::Identity(4);
  EXPECT_EQ(nuclearity_sum(sigma, 0.5, 1.0, 4.0, LambdaControl::Hormander()).verdict,
            NuclearVerdict::kHolds);
}

TEST(NuclearitySum, Rejections) {
  const Symbol sigma = power_symbol(torus(1, 9.0), 2.0);
  const LambdaControl c = LambdaControl::Uniform();
  EXPECT_THROW(nuclearity_sum(sigma, 0.0, 2.0, 2.0, c), ValidationError);
  EXPECT_THROW(nuclearity_sum(sigma, 1.5, 2.0, 2.0, c), ValidationError);
  EXPECT_THROW(nuclearity_sum(sigma, 1.0, kInf, 2.0, c), ValidationError);
  EXPECT_THROW(nuclearity_sum(sigma, 1.0, 2.0, 0.5, c), ValidationError);
  EXPECT_THROW(schatten_membership(sigma, 0.0), ValidationError);
  EXPECT_EQ(verdict_name(NuclearVerdict::kHolds), "holds");
  EXPECT_EQ(verdict_name(NuclearVerdict::kFails), "fails");
  EXPECT_EQ(verdict_name(NuclearVerdict::kInconclusive), "inconclusive");
}

}  // namespace
}  // namespace specmult
