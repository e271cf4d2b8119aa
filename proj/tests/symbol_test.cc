// SPDX-License-Identifier: Apache-2.0
#include "specmult/symbol.h"

#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "oracles.h"
#include "specmult/error.h"
#include "specmult/operators.h"

namespace specmult {
namespace {

using oracle::Rng;

PartitionPtr torus(int n, double cut) { return enumerate_partition(ManifoldId::Torus(n), 2.0, cut); }

TEST(FromSpectralFunction, Examples) {
  const PartitionPtr p = torus(1, 4.0);
  const Symbol id = Symbol::Identity(p);
  for (std::size_t l = 0; l < p->size(); ++l) EXPECT_EQ(id[l], CMatrix::Identity(p->level(l).dim));
  const Symbol inv = from_spectral_function(p, [](double x) { return Complex(1.0 / (1.0 + x)); });
  EXPECT_EQ(inv[2], CMatrix::Diagonal(std::vector<Complex>{0.2, 0.2}));
  EXPECT_THROW(from_spectral_function(p, [](double x) { return Complex(1.0 / (x - 1.0)); }),
               ValidationError);
}

TEST(FromSpectralFunction, PowerSchattenSum) {
  const PartitionPtr p = torus(2, 50.0);
  const double alpha = 3.0, r = 0.7;
  double want = 0.0;
  for (const Level& lv : p->levels()) want += lv.dim * std::pow(1.0 + lv.lambda, -alpha * r / 2.0);
  const double got = std::pow(schatten(power_symbol(p, alpha), r).value, r);
  EXPECT_LT(oracle::rel_err(got, want), 1e-12);
}

TEST(Symbol, RejectsBadBlocks) {
  const PartitionPtr p = torus(1, 1.0);
  EXPECT_THROW(Symbol(p, {CMatrix(1, 1)}), ValidationError);
  EXPECT_THROW(Symbol(p, {CMatrix(1, 1), CMatrix(3, 3)}), ValidationError);
  CMatrix bad = CMatrix::Identity(2);
  bad(0, 0) = std::nan("");
  EXPECT_THROW(Symbol(p, {CMatrix(1, 1), bad}), ValidationError);
}

TEST(Apply, ColumnConvention) {
  Rng rng(1);
  const PartitionPtr p = torus(2, 5.0);
  const Symbol s = oracle::random_symbol(rng, p);
  // T e_j^k = sum_m sigma(j)_{mk} e_j^m.
  for (std::size_t l = 0; l < p->size(); ++l) {
    for (std::size_t k = 0; k < p->level(l).dim; ++k) {
      const FourierCoefficients out = apply(s, FourierCoefficients::Unit(p, l, k));
      for (std::size_t m = 0; m < p->level(l).dim; ++m) EXPECT_EQ(out.level(l)[m], s[l](m, k));
    }
  }
  EXPECT_EQ(apply(Symbol::Identity(p), FourierCoefficients::Unit(p, 3, 2)).flat()[p->offset(3) + 2],
            Complex(1.0));
}

TEST(Apply, MatchesDenseAssembly) {
  Rng rng(2);
  const PartitionPtr p = torus(2, 10.0);
  const Symbol s = oracle::random_symbol(rng, p);
  FourierCoefficients c(p);
  for (Complex& z : c.flat()) z = oracle::gaussian(rng);
  // Coefficient columns: the dense matrix is assemble_transposed(s)^T.
  const CMatrix big = oracle::assemble_transposed(s).transpose();
  const std::vector<Complex> want = big * c.flat();
  const FourierCoefficients got = apply(s, c);
  for (std::size_t i = 0; i < want.size(); ++i) EXPECT_LT(std::abs(got.flat()[i] - want[i]), 1e-12);
  EXPECT_THROW(apply(s, FourierCoefficients(torus(2, 4.0))), ValidationError);
}

TEST(Extract, RoundTripAndSpectralFunction) {
  Rng rng(3);
  const PartitionPtr p = torus(2, 8.0);
  const Symbol s = oracle::random_symbol(rng, p);
  const Symbol e = extract([&s](const FourierCoefficients& c) { return apply(s, c); }, p);
  for (std::size_t l = 0; l < p->size(); ++l) EXPECT_EQ(e[l], s[l]);

  const Symbol f = from_spectral_function(p, [](double x) { return Complex(std::exp(-x)); });
  const Symbol ef = extract([&f](const FourierCoefficients& c) { return apply(f, c); }, p);
  for (std::size_t l = 0; l < p->size(); ++l) EXPECT_EQ(ef[l], f[l]);
}

TEST(Extract, WrongShapedOutputRejected) {
  const PartitionPtr p = torus(1, 4.0);
  const PartitionPtr q = torus(1, 9.0);
  EXPECT_THROW(extract([&q](const FourierCoefficients&) { return FourierCoefficients(q); }, p),
               ValidationError);
}

TEST(CheckInvariance, SymbolOperatorsPass) {
  Rng rng(4);
  const PartitionPtr p = torus(2, 8.0);
  const Symbol s = oracle::random_symbol(rng, p);
  const InvarianceReport r = check_invariance([&s](const FourierCoefficients& c) { return apply(s, c); }, p);
  EXPECT_TRUE(r.verdict);
  EXPECT_LT(r.max_offblock, 1e-12);
  EXPECT_THROW(check_invariance([](const FourierCoefficients& c) { return c; }, p, 0.0),
               ValidationError);
}

TEST(CheckInvariance, TranslationPassesCharacterFails) {
  const PartitionPtr p = torus(2, 10.0);
  auto t = std::make_shared<const FourierTransform>(p, build_quadrature(*p, p->max_lambda()));
  const InvarianceReport tr = check_invariance(torus_translation(t, {0.31, -0.2}), p);
  EXPECT_TRUE(tr.verdict);
  EXPECT_LT(tr.max_offblock, 1e-12);
  // Translation by a multiplies e^{2 pi i j.x} by e^{-2 pi i j.a}.
  const Level& lv = p->level(1);
  for (std::size_t k = 0; k < lv.dim; ++k) {
    const auto& j = std::get<TorusLabel>(lv.labels[k]);
    const Complex want = std::polar(1.0, -2.0 * M_PI * (j[0] * 0.31 - j[1] * 0.2));
    EXPECT_LT(std::abs(tr.extracted[1](k, k) - want), 1e-12);
  }
  const InvarianceReport ch = check_invariance(character_multiplication(t, {1, 0}), p);
  EXPECT_FALSE(ch.verdict);
  EXPECT_NEAR(ch.max_offblock, 1.0, 1e-12);
}

TEST(CheckInvariance, NonConstantMultiplicationFails) {
  const PartitionPtr p = torus(1, 16.0);
  auto t = std::make_shared<const FourierTransform>(p, build_quadrature(*p, p->max_lambda()));
  std::vector<Complex> g;
  for (const Point& x : t->grid()->nodes) g.push_back(2.0 + std::cos(2.0 * M_PI * x[0]));
  EXPECT_FALSE(check_invariance(pointwise_multiplication(t, g), p).verdict);
}

TEST(CheckInvariance, UnitaryChangeOfBasisInsideLevels) {
  Rng rng(5);
  const PartitionPtr p = torus(2, 8.0);
  const Symbol s = oracle::random_symbol(rng, p);
  std::vector<CMatrix> conj;
  for (std::size_t l = 0; l < p->size(); ++l) {
    const CMatrix u = oracle::random_unitary(rng, p->level(l).dim);
    conj.push_back(u * s[l] * u.adjoint());
  }
  const Symbol c(p, conj);
  const InvarianceReport r = check_invariance([&c](const FourierCoefficients& x) { return apply(c, x); }, p);
  EXPECT_TRUE(r.verdict);
  for (double q : {0.5, 1.0, 2.0}) {
    EXPECT_LT(oracle::rel_err(schatten(c, q).value, schatten(s, q).value), 1e-10);
  }
  EXPECT_LT(oracle::rel_err(l2_bound(c), l2_bound(s)), 1e-10);
}

TEST(Compose, IdentityAndSpectral) {
  Rng rng(6);
  const PartitionPtr p = torus(2, 8.0);
  const Symbol s = oracle::random_symbol(rng, p);
  const Symbol id = Symbol::Identity(p);
  const Symbol c = compose(s, id);
  for (std::size_t l = 0; l < p->size(); ++l) EXPECT_EQ(c[l], s[l]);
  const Symbol f = from_spectral_function(p, [](double x) { return Complex(1.0 + x); });
  const Symbol g = from_spectral_function(p, [](double x) { return Complex(0.0, x); });
  const Symbol fg = compose(f, g);
  for (std::size_t l = 0; l < p->size(); ++l) {
    const double x = p->level(l).lambda;
    EXPECT_EQ(fg[l], from_spectral_function(p, [](double y) { return Complex(1.0 + y) * Complex(0.0, y); })[l]) << x;
  }
  EXPECT_THROW(compose(s, Symbol::Identity(torus(2, 4.0))), ValidationError);
}

TEST(Compose, Associativity) {
  Rng rng(7);
  const PartitionPtr p = torus(2, 10.0);
  const Symbol a = oracle::random_symbol(rng, p), b = oracle::random_symbol(rng, p);
  FourierCoefficients c(p);
  for (Complex& z : c.flat()) z = oracle::gaussian(rng);
  const FourierCoefficients lhs = apply(compose(a, b), c), rhs = apply(a, apply(b, c));
  for (std::size_t i = 0; i < c.flat().size(); ++i) EXPECT_LT(std::abs(lhs.flat()[i] - rhs.flat()[i]), 1e-12);
}

TEST(L2Bound, Examples) {
  Rng rng(8);
  const PartitionPtr p = torus(2, 10.0);
  EXPECT_NEAR(l2_bound(Symbol::Identity(p)), 1.0, 1e-15);
  EXPECT_NEAR(l2_bound(power_symbol(p, 2.0)), 1.0, 1e-15);
  const Symbol s = oracle::random_symbol(rng, p);
  const double want = oracle::singular_values(oracle::assemble_transposed(s))[0];
  EXPECT_LT(oracle::rel_err(l2_bound(s), want), 1e-10);
}

TEST(Schatten, Examples) {
  EXPECT_NEAR(schatten(Symbol::Identity(torus(1, 4.0)), 1.0).value, 5.0, 1e-14);
  EXPECT_THROW(schatten(Symbol::Identity(torus(1, 4.0)), 0.0), ValidationError);
}

TEST(Schatten, MatchesDenseSvdOnSupportedLevels) {
  Rng rng(9);
  const PartitionPtr p = torus(2, 10.0);
  std::vector<CMatrix> blocks;
  for (std::size_t l = 0; l < p->size(); ++l) {
    const std::size_t d = p->level(l).dim;
    blocks.push_back(l == 1 || l == 3 || l == 5 ? oracle::random_matrix(rng, d, d) : CMatrix(d, d));
  }
  const Symbol s(p, blocks);
  std::vector<double> sv = oracle::singular_values(oracle::assemble_transposed(s));
  // The dense eigensolver leaves rounding-level values where the exact ones
  // are zero; at r < 1 they would dominate the comparison.
  std::erase_if(sv, [&](double v) { return v < 1e-12 * sv.front(); });
  for (double r : {0.5, 1.0, 2.0}) {
    const double want = std::pow(oracle::schatten_sum_pow(sv, r), 1.0 / r);
    EXPECT_LT(oracle::rel_err(schatten(s, r).value, want), 1e-10);
  }
}

TEST(Schatten, MonotoneInTruncation) {
  const double alpha = 1.0;
  double prev = 0.0;
  for (double cut : {5.0, 20.0, 80.0}) {
    const double v = schatten(power_symbol(torus(2, cut), alpha), 1.0).value;
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(Trace, Examples) {
  const PartitionPtr p = torus(2, 10.0);
  EXPECT_EQ(trace_formula(Symbol::Identity(p)).value, Complex(static_cast<double>(p->total_dim())));
  EXPECT_FALSE(trace_formula(Symbol::Identity(p)).warnings.empty());
  Rng rng(10);
  std::vector<CMatrix> blocks;
  for (const Level& lv : p->levels()) blocks.emplace_back(lv.dim, lv.dim);
  blocks[2] = oracle::random_matrix(rng, 4, 4);
  const TraceResult t = trace_formula(Symbol(p, blocks));
  EXPECT_LT(std::abs(t.value - mat_trace(blocks[2])), 1e-14);
  EXPECT_TRUE(trace_formula(power_symbol(torus(2, 400.0), 8.0)).warnings.empty());
}

TEST(Trace, MatchesDenseTrace) {
  Rng rng(11);
  const PartitionPtr p = torus(2, 20.0);
  const Symbol s = oracle::random_symbol(rng, p, 2.0);
  EXPECT_LT(std::abs(trace_formula(s).value - oracle::dense_trace(oracle::assemble_transposed(s))),
            1e-12);
}

TEST(SobolevOrder, PowerLaws) {
  const PartitionPtr p = torus(2, 200.0);
  EXPECT_NEAR(sobolev_order(Symbol::Identity(p)).m_est, 0.0, 0.05);
  const Symbol up = from_spectral_function(p, [](double x) { return Complex(1.0 + x); });
  EXPECT_NEAR(sobolev_order(up).m_est, 2.0, 0.05);
  const Symbol half = from_spectral_function(p, [](double x) { return Complex(std::sqrt(1.0 + x)); });
  const SobolevOrder h = sobolev_order(half);
  EXPECT_NEAR(h.m_est, 1.0, 0.05);
  EXPECT_NEAR(h.C_est, 1.0, 1e-6);
}

TEST(SobolevOrder, Rejections) {
  EXPECT_THROW(sobolev_order(Symbol::Identity(torus(1, 16.0))), ValidationError);
  const PartitionPtr p = torus(2, 100.0);
  EXPECT_THROW(sobolev_order(Symbol(p)), ValidationError);
}

}  // namespace
}  // namespace specmult
