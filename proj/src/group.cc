// SPDX-License-Identifier: Apache-2.0
#include "specmult/group.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "specmult/error.h"

namespace specmult {

namespace {

void require_su2(const Partition& p, const char* who) {
  if (!p.manifold().is_su2()) {
    throw ValidationError(std::string(who) + ": requires the SU(2) partition");
  }
}

// Level index of irrep 2l in an SU(2) partition.
std::size_t level_of_rep(const Partition& p, int two_l) {
  const auto l = static_cast<std::size_t>(two_l);
  if (l >= p.size() || p.level(l).two_l != two_l) {
    throw ValidationError("irrep 2l = " + std::to_string(two_l) +
                          " is not a level of the partition");
  }
  return l;
}

int max_rep_in_band(double band_limit) {
  int two_l = 0;
  while (su2_casimir(two_l + 1) <= band_limit) ++two_l;
  return two_l;
}

}  // namespace

int gamma_index(int d, int j, int k) {
  if (d < 1 || j < 1 || j > d || k < 1 || k > d) {
    throw ValidationError("gamma_index: need 1 <= j, k <= d, got d=" + std::to_string(d) +
                          " j=" + std::to_string(j) + " k=" + std::to_string(k));
  }
  return (j - 1) * d + k;
}

PhiPsi phi_psi(int t, int d) {
  if (d < 1 || t < 1 || t > d * d) {
    throw ValidationError("phi_psi: need 1 <= t <= d^2, got t=" + std::to_string(t) +
                          " d=" + std::to_string(d));
  }
  const int q = (t - 1) / d;
  return {t - q * d, q + 1};
}

RepMatrices::RepMatrices(std::vector<CMatrix> by_rep) : by_rep_(std::move(by_rep)) {
  for (std::size_t two_l = 0; two_l < by_rep_.size(); ++two_l) {
    const std::size_t d = two_l + 1;
    if (by_rep_[two_l].rows() != d || by_rep_[two_l].cols() != d) {
      throw ValidationError("irrep 2l = " + std::to_string(two_l) + " needs a " +
                            std::to_string(d) + "x" + std::to_string(d) + " matrix");
    }
    if (!by_rep_[two_l].all_finite()) {
      throw ValidationError("irrep 2l = " + std::to_string(two_l) +
                            " has non-finite entries");
    }
  }
}

GroupSymbol GroupSymbol::Identity(int max_two_l) {
  std::vector<CMatrix> m;
  for (int two_l = 0; two_l <= max_two_l; ++two_l) m.push_back(CMatrix::Identity(two_l + 1));
  return GroupSymbol(std::move(m));
}

Symbol tau_to_sigma(const GroupSymbol& tau, PartitionPtr partition) {
  require_su2(*partition, "tau_to_sigma");
  if (tau.size() != partition->size()) {
    throw ValidationError("tau_to_sigma: group symbol has " + std::to_string(tau.size()) +
                          " irreps, partition has " + std::to_string(partition->size()) +
                          " levels");
  }
  Symbol sigma(partition);
  for (int two_l = 0; two_l <= tau.max_two_l(); ++two_l) {
    const std::size_t l = level_of_rep(*partition, two_l);
    const int d = two_l + 1;
    CMatrix& s = sigma[l];
    for (int m = 1; m <= d * d; ++m) {
      const PhiPsi pm = phi_psi(m, d);
      for (int i = 1; i <= d * d; ++i) {
        const PhiPsi pi = phi_psi(i, d);
        if (pm.psi == pi.psi) s(m - 1, i - 1) = tau[two_l](pm.phi - 1, pi.phi - 1);
      }
    }
  }
  return sigma;
}

GroupSymbol sigma_to_tau(const Symbol& sigma) {
  const Partition& p = sigma.partition();
  require_su2(p, "sigma_to_tau");
  std::vector<CMatrix> taus;
  for (std::size_t l = 0; l < p.size(); ++l) {
    const int two_l = p.level(l).two_l;
    const int d = two_l + 1;
    const CMatrix& s = sigma[l];
    CMatrix tau(d, d);
    for (int m = 0; m < d; ++m) {
      for (int i = 0; i < d; ++i) tau(m, i) = s(m, i);
    }
    const double scale = std::max(1.0, s.max_abs());
    double deviation = 0.0;
    for (int m = 1; m <= d * d; ++m) {
      const PhiPsi pm = phi_psi(m, d);
      for (int i = 1; i <= d * d; ++i) {
        const PhiPsi pi = phi_psi(i, d);
        const Complex expected =
            pm.psi == pi.psi ? tau(pm.phi - 1, pi.phi - 1) : Complex(0.0, 0.0);
        deviation = std::max(deviation, std::abs(s(m - 1, i - 1) - expected));
      }
    }
    if (deviation > kBlockStructureTolerance * scale) {
      throw ValidationError("sigma_to_tau: level 2l = " + std::to_string(two_l) +
                            " lacks the repeated-block structure (max deviation " +
                            std::to_string(deviation) + ")");
    }
    taus.push_back(std::move(tau));
  }
  return GroupSymbol(std::move(taus));
}

SchattenConsistencyReport schatten_consistency(const GroupSymbol& tau,
                                               const Symbol& sigma,
                                               const std::vector<double>& rs,
                                               double tol) {
  const Partition& p = sigma.partition();
  require_su2(p, "schatten_consistency");
  if (tau.size() != p.size()) {
    throw ValidationError("schatten_consistency: irrep count mismatch");
  }
  SchattenConsistencyReport report;
  auto rel = [](double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
  };
  for (double r : rs) {
    SchattenConsistencyReport::Aggregate agg{r, 0.0, 0.0, 0.0};
    for (int two_l = 0; two_l <= tau.max_two_l(); ++two_l) {
      const std::size_t l = level_of_rep(p, two_l);
      const double lhs = std::pow(schatten_q(sigma[l], r), r);
      const double rhs = (two_l + 1) * std::pow(schatten_q(tau[two_l], r), r);
      const double err = rel(lhs, rhs);
      report.rows.push_back({two_l, r, lhs, rhs, err});
      report.max_rel_err = std::max(report.max_rel_err, err);
      agg.sigma_side += lhs;
      agg.tau_side += rhs;
    }
    agg.rel_err = rel(agg.sigma_side, agg.tau_side);
    report.max_rel_err = std::max(report.max_rel_err, agg.rel_err);
    report.aggregates.push_back(agg);
  }
  report.ok = report.max_rel_err <= tol;
  return report;
}

GroupTransform::GroupTransform(GridPtr grid)
    : GroupTransform(grid, max_rep_in_band(grid->band_limit)) {}

GroupTransform::GroupTransform(GridPtr grid, int max_two_l)
    : grid_(std::move(grid)), max_two_l_(max_two_l) {
  if (!grid_->manifold.is_su2()) {
    throw ValidationError("GroupTransform: requires an SU(2) grid");
  }
  if (max_two_l_ < 0 || su2_casimir(max_two_l_) > grid_->band_limit) {
    throw ValidationError("GroupTransform: irreps up to 2l = " + std::to_string(max_two_l_) +
                          " exceed the grid band limit " +
                          std::to_string(grid_->band_limit));
  }
  wigner_.reserve(grid_->size());
  for (const Point& x : grid_->nodes) {
    std::vector<CMatrix> at_node;
    at_node.reserve(max_two_l_ + 1);
    for (int two_l = 0; two_l <= max_two_l_; ++two_l) {
      at_node.push_back(wigner_d_matrix(two_l, x));
    }
    wigner_.push_back(std::move(at_node));
  }
}

void GroupTransform::check_function(const GridFunction& f, const char* who) const {
  if (f.values.size() != grid_->size() || !(f.grid->manifold == grid_->manifold)) {
    throw ValidationError(std::string(who) + ": function is not sampled on this grid");
  }
}

MatrixFourier GroupTransform::forward(const GridFunction& f) const {
  check_function(f, "group_fourier");
  std::vector<CMatrix> out;
  for (int two_l = 0; two_l <= max_two_l_; ++two_l) out.emplace_back(two_l + 1, two_l + 1);
  for (std::size_t node = 0; node < grid_->size(); ++node) {
    const Complex wf = grid_->weights[node] * f.values[node];
    for (int two_l = 0; two_l <= max_two_l_; ++two_l) {
      const CMatrix& xi = wigner_[node][two_l];
      CMatrix& acc = out[two_l];
      // xi(x)^*_{ij} = conj(xi_{ji}(x))
      for (std::size_t i = 0; i < xi.rows(); ++i) {
        for (std::size_t j = 0; j < xi.cols(); ++j) acc(i, j) += wf * std::conj(xi(j, i));
      }
    }
  }
  return MatrixFourier(std::move(out));
}

GridFunction GroupTransform::inverse(const MatrixFourier& fhat) const {
  if (fhat.max_two_l() > max_two_l_) {
    throw ValidationError("group inverse: coefficients beyond the grid band");
  }
  return synthesize(fhat.matrices());
}

GridFunction GroupTransform::synthesize(const std::vector<CMatrix>& by_rep) const {
  GridFunction out{grid_, std::vector<Complex>(grid_->size())};
  const int top = static_cast<int>(by_rep.size()) - 1;
  for (std::size_t node = 0; node < grid_->size(); ++node) {
    Complex acc = 0.0;
    for (int two_l = 0; two_l <= top; ++two_l) {
      // Tr(xi(x) B) = sum_{ij} xi_{ij} B_{ji}
      const CMatrix& xi = wigner_[node][two_l];
      const CMatrix& b = by_rep[two_l];
      Complex tr = 0.0;
      for (std::size_t i = 0; i < xi.rows(); ++i) {
        for (std::size_t j = 0; j < xi.cols(); ++j) tr += xi(i, j) * b(j, i);
      }
      acc += static_cast<double>(two_l + 1) * tr;
    }
    out.values[node] = acc;
  }
  return out;
}

GridFunction GroupTransform::quantize(const GroupSymbol& tau, const GridFunction& f) const {
  check_function(f, "group_quantize");
  if (tau.max_two_l() > max_two_l_) {
    throw ValidationError("group_quantize: symbol has irreps beyond the grid band");
  }
  const MatrixFourier fhat = forward(f);
  std::vector<CMatrix> products;
  for (int two_l = 0; two_l <= max_two_l_; ++two_l) {
    // Irreps the symbol does not cover are annihilated.
    products.push_back(two_l <= tau.max_two_l() ? tau[two_l] * fhat[two_l]
                                                : CMatrix(two_l + 1, two_l + 1));
  }
  return synthesize(products);
}

MatrixFourier group_fourier(const GridFunction& f) {
  return GroupTransform(f.grid).forward(f);
}

GridFunction group_quantize(const GroupSymbol& tau, const GridFunction& f) {
  return GroupTransform(f.grid).quantize(tau, f);
}

Symbol coarsen(const std::vector<FineBlock>& pieces, PartitionPtr partition) {
  std::vector<const FineBlock*> sorted;
  sorted.reserve(pieces.size());
  for (const FineBlock& b : pieces) {
    if (!b.block.is_square()) throw ValidationError("coarsen: pieces must be square");
    sorted.push_back(&b);
  }
  std::stable_sort(sorted.begin(), sorted.end(), [](const FineBlock* a, const FineBlock* b) {
    return a->lambda != b->lambda ? a->lambda < b->lambda : a->key < b->key;
  });
  std::vector<CMatrix> levels;
  std::size_t cursor = 0;
  for (std::size_t l = 0; l < partition->size(); ++l) {
    const Level& lv = partition->level(l);
    std::vector<CMatrix> group;
    std::size_t dim = 0;
    while (cursor < sorted.size() && sorted[cursor]->lambda == lv.lambda) {
      dim += sorted[cursor]->block.rows();
      group.push_back(sorted[cursor]->block);
      ++cursor;
    }
    if (dim != lv.dim) {
      throw ValidationError("coarsen: pieces at lambda = " + std::to_string(lv.lambda) +
                            " have total dimension " + std::to_string(dim) +
                            ", level needs " + std::to_string(lv.dim));
    }
    levels.push_back(block_diagonal(group));
  }
  if (cursor != sorted.size()) {
    throw ValidationError("coarsen: pieces at eigenvalues outside the partition");
  }
  return Symbol(std::move(partition), std::move(levels));
}

}  // namespace specmult
