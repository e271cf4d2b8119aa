// SPDX-License-Identifier: Apache-2.0
#include "specmult/fourier.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.h"
#include "specmult/error.h"

namespace specmult {
namespace {

struct Fixture {
  PartitionPtr partition;
  GridPtr grid;
  FourierTransform transform;
};

Fixture make(ManifoldId id, double cutoff) {
  PartitionPtr p = enumerate_partition(id, 2.0, cutoff);
  GridPtr g = build_quadrature(*p, p->max_lambda());
  return {p, g, FourierTransform(p, g)};
}

FourierCoefficients random_coefficients(oracle::Rng& rng, const PartitionPtr& p) {
  FourierCoefficients c(p);
  for (Complex& z : c.flat()) z = oracle::gaussian(rng);
  return c;
}

TEST(Forward, BasisFunctionGivesDelta) {
  for (ManifoldId id : {ManifoldId::Torus(2), ManifoldId::SU2()}) {
    Fixture s = make(id, id.is_su2() ? 2.0 : 8.0);
    for (std::size_t l = 0; l < s.partition->size(); ++l) {
      for (std::size_t k = 0; k < s.partition->level(l).dim; ++k) {
        const FourierCoefficients unit = FourierCoefficients::Unit(s.partition, l, k);
        GridFunction f{s.grid, std::vector<Complex>(s.grid->size())};
        for (std::size_t i = 0; i < s.grid->size(); ++i) {
          f.values[i] = eval_basis(*s.partition, l, k, s.grid->nodes[i]);
        }
        const FourierCoefficients c = s.transform.forward(f);
        for (std::size_t b = 0; b < c.flat().size(); ++b) {
          EXPECT_NEAR(std::abs(c.flat()[b] - unit.flat()[b]), 0.0, 1e-12);
        }
      }
    }
  }
}

TEST(Forward, ConstantOnTorus) {
  Fixture s = make(ManifoldId::Torus(1), 16.0);
  GridFunction one{s.grid, std::vector<Complex>(s.grid->size(), 1.0)};
  const FourierCoefficients c = s.transform.forward(one);
  EXPECT_NEAR(std::abs(c.flat()[0] - 1.0), 0.0, 1e-15);
  for (std::size_t b = 1; b < c.flat().size(); ++b) EXPECT_LT(std::abs(c.flat()[b]), 1e-15);
}

TEST(Plancherel, RandomBandLimitedFunctions) {
  oracle::Rng rng(101);
  for (auto [id, cut] : {std::pair{ManifoldId::Torus(1), 256.0}, {ManifoldId::Torus(2), 64.0},
                         {ManifoldId::Torus(3), 6.0}, {ManifoldId::SU2(), su2_casimir(5)}}) {
    Fixture s = make(id, cut);
    for (int trial = 0; trial < 10; ++trial) {
      const FourierCoefficients c = random_coefficients(rng, s.partition);
      const GridFunction f = s.transform.inverse(c);
      const double lhs = f.l2_norm();
      EXPECT_LT(oracle::rel_err(lhs * lhs, c.l2_norm() * c.l2_norm()), 1e-11) << id.name();
      const FourierCoefficients back = s.transform.forward(f);
      double err = 0.0;
      for (std::size_t b = 0; b < c.flat().size(); ++b) {
        err = std::max(err, std::abs(back.flat()[b] - c.flat()[b]));
      }
      EXPECT_LT(err, 1e-11) << id.name();
    }
  }
}

TEST(Inverse, UnitCoefficientSynthesizesBasisFunction) {
  Fixture s = make(ManifoldId::SU2(), 2.0);
  const GridFunction f = s.transform.inverse(FourierCoefficients::Unit(s.partition, 2, 7));
  for (std::size_t i = 0; i < s.grid->size(); ++i) {
    EXPECT_LT(std::abs(f.values[i] - eval_basis(*s.partition, 2, 7, s.grid->nodes[i])), 1e-14);
  }
}

TEST(Inverse, RealEvenTorusFunction) {
  Fixture s = make(ManifoldId::Torus(2), 20.0);
  // Coefficients with c(j) = c(-j) real give a real function.
  oracle::Rng rng(4);
  FourierCoefficients c(s.partition);
  std::normal_distribution<double> n;
  for (std::size_t l = 0; l < s.partition->size(); ++l) {
    const Level& lv = s.partition->level(l);
    for (std::size_t k = 0; k < lv.dim; ++k) {
      const auto& j = std::get<TorusLabel>(lv.labels[k]);
      if (j > TorusLabel(j.size(), 0) || lv.lambda == 0.0) c.level(l)[k] = n(rng);
    }
    for (std::size_t k = 0; k < lv.dim; ++k) {
      const auto& j = std::get<TorusLabel>(lv.labels[k]);
      // Lexicographic order is symmetric: -j sits at dim - 1 - k.
      if (j < TorusLabel(j.size(), 0)) c.level(l)[k] = c.level(l)[lv.dim - 1 - k];
    }
  }
  const GridFunction f = s.transform.inverse(c);
  for (const Complex& v : f.values) EXPECT_LT(std::abs(v.imag()), 1e-12);
}

TEST(Forward, Linearity) {
  oracle::Rng rng(6);
  Fixture s = make(ManifoldId::Torus(2), 10.0);
  GridFunction f{s.grid, {}}, g{s.grid, {}}, h{s.grid, {}};
  const Complex a(0.3, -1.2), b(2.0, 0.5);
  for (std::size_t i = 0; i < s.grid->size(); ++i) {
    f.values.push_back(oracle::gaussian(rng));
    g.values.push_back(oracle::gaussian(rng));
    h.values.push_back(a * f.values.back() + b * g.values.back());
  }
  const FourierCoefficients cf = s.transform.forward(f), cg = s.transform.forward(g),
                            ch = s.transform.forward(h);
  for (std::size_t k = 0; k < ch.flat().size(); ++k) {
    EXPECT_LT(std::abs(ch.flat()[k] - a * cf.flat()[k] - b * cg.flat()[k]), 1e-12);
  }
}

TEST(Evaluate, MatchesGridSynthesis) {
  oracle::Rng rng(12);
  Fixture s = make(ManifoldId::SU2(), su2_casimir(3));
  const FourierCoefficients c = random_coefficients(rng, s.partition);
  const GridFunction f = s.transform.inverse(c);
  for (std::size_t i = 0; i < s.grid->size(); i += 7) {
    EXPECT_LT(std::abs(s.transform.evaluate(c, s.grid->nodes[i]) - f.values[i]), 1e-12);
  }
}

TEST(Sobolev, Examples) {
  oracle::Rng rng(14);
  Fixture s = make(ManifoldId::Torus(2), 20.0);
  const FourierCoefficients c = random_coefficients(rng, s.partition);
  EXPECT_NEAR(sobolev_norm(c, 0.0), c.l2_norm(), 1e-14 * c.l2_norm());
  const FourierCoefficients e = FourierCoefficients::Unit(s.partition, 3, 1);
  EXPECT_NEAR(sobolev_norm(e, 1.5), std::pow(1.0 + s.partition->level(3).lambda, 0.75), 1e-14);
}

TEST(Sobolev, MatchesDirectSummation) {
  // f^(j) = (1 + |j|^2)^{-2} on T^2.
  const PartitionPtr p = enumerate_partition(ManifoldId::Torus(2), 2.0, 100.0);
  FourierCoefficients c(p);
  for (std::size_t l = 0; l < p->size(); ++l) {
    for (Complex& z : c.level(l)) z = std::pow(1.0 + p->level(l).lambda, -2.0);
  }
  for (double s : {0.0, 1.0, 2.5}) {
    double direct = 0.0;
    for (int a = -10; a <= 10; ++a) {
      for (int b = -10; b <= 10; ++b) {
        const int n2 = a * a + b * b;
        if (n2 > 100) continue;
        direct += std::pow(1.0 + n2, s) * std::pow(1.0 + n2, -4.0);
      }
    }
    EXPECT_LT(oracle::rel_err(sobolev_norm(c, s), std::sqrt(direct)), 1e-12);
  }
}

TEST(Transform, Mismatches) {
  const PartitionPtr p = enumerate_partition(ManifoldId::Torus(1), 2.0, 16.0);
  const GridPtr small = build_quadrature(*enumerate_partition(ManifoldId::Torus(1), 2.0, 4.0), 4.0);
  EXPECT_THROW(FourierTransform(p, small), ValidationError);
  const GridPtr su2 = build_quadrature(*enumerate_partition(ManifoldId::SU2(), 2.0, 20.0), 20.0);
  EXPECT_THROW(FourierTransform(p, su2), ValidationError);
  const PartitionPtr q = enumerate_partition(ManifoldId::Torus(1), 2.0, 9.0);
  FourierTransform t(p, build_quadrature(*p, 16.0));
  EXPECT_THROW(t.inverse(FourierCoefficients(q)), ValidationError);
  EXPECT_THROW(FourierCoefficients(p, std::vector<Complex>(3)), ValidationError);
}

}  // namespace
}  // namespace specmult
