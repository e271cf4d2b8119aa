// SPDX-License-Identifier: Apache-2.0
#include "specmult/fourier.h"

#include <cmath>
#include <string>

#include "specmult/error.h"

namespace specmult {

FourierCoefficients::FourierCoefficients(PartitionPtr partition)
    : partition_(std::move(partition)),
      values_(partition_->total_dim(), Complex(0.0, 0.0)) {}

FourierCoefficients::FourierCoefficients(PartitionPtr partition,
                                         std::vector<Complex> flat)
    : partition_(std::move(partition)), values_(std::move(flat)) {
  if (values_.size() != partition_->total_dim()) {
    throw ValidationError("FourierCoefficients: expected " +
                          std::to_string(partition_->total_dim()) +
                          " coefficients, got " + std::to_string(values_.size()));
  }
}

FourierCoefficients FourierCoefficients::Unit(PartitionPtr partition,
                                              std::size_t level, std::size_t k) {
  FourierCoefficients c(std::move(partition));
  if (level >= c.partition().size() || k >= c.partition().level(level).dim) {
    throw ValidationError("FourierCoefficients::Unit: index out of range");
  }
  c.level(level)[k] = 1.0;
  return c;
}

std::span<Complex> FourierCoefficients::level(std::size_t i) {
  return std::span<Complex>(values_).subspan(partition_->offset(i),
                                             partition_->level(i).dim);
}

std::span<const Complex> FourierCoefficients::level(std::size_t i) const {
  return std::span<const Complex>(values_).subspan(partition_->offset(i),
                                                   partition_->level(i).dim);
}

double FourierCoefficients::l2_norm() const {
  double acc = 0.0;
  for (const Complex& z : values_) acc += std::norm(z);
  return std::sqrt(acc);
}

double GridFunction::l2_norm() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    acc += grid->weights[i] * std::norm(values[i]);
  }
  return std::sqrt(acc);
}

void require_band_compatible(const Partition& partition,
                             const QuadratureGrid& grid, const char* who) {
  if (!(partition.manifold() == grid.manifold)) {
    throw ValidationError(std::string(who) + ": grid is on " + grid.manifold.name() +
                          " but partition is on " + partition.manifold().name());
  }
  if (grid.band_limit < partition.max_lambda()) {
    throw ValidationError(std::string(who) + ": grid band limit " +
                          std::to_string(grid.band_limit) +
                          " is below the partition's largest eigenvalue " +
                          std::to_string(partition.max_lambda()));
  }
}

CMatrix tabulate_basis(const Partition& partition, const QuadratureGrid& grid) {
  require_band_compatible(partition, grid, "tabulate_basis");
  CMatrix table(grid.size(), partition.total_dim());
  for (std::size_t node = 0; node < grid.size(); ++node) {
    const Point& x = grid.nodes[node];
    for (std::size_t l = 0; l < partition.size(); ++l) {
      const Level& lv = partition.level(l);
      const std::size_t base = partition.offset(l);
      if (lv.two_l >= 0) {
        // One Wigner matrix per level and node; labels are its entries in
        // row-major order.
        const CMatrix dmat = wigner_d_matrix(lv.two_l, x);
        const double scale = std::sqrt(static_cast<double>(lv.two_l + 1));
        for (std::size_t k = 0; k < lv.dim; ++k) {
          table(node, base + k) = scale * dmat.data()[k];
        }
      } else {
        for (std::size_t k = 0; k < lv.dim; ++k) {
          table(node, base + k) = eval_basis(partition, l, k, x);
        }
      }
    }
  }
  return table;
}

FourierTransform::FourierTransform(PartitionPtr partition, GridPtr grid)
    : partition_(std::move(partition)),
      grid_(std::move(grid)),
      basis_(tabulate_basis(*partition_, *grid_)) {}

FourierCoefficients FourierTransform::forward(const GridFunction& f) const {
  if (f.grid.get() != grid_.get() &&
      (f.grid->size() != grid_->size() || !(f.grid->manifold == grid_->manifold))) {
    throw ValidationError("forward: function is sampled on a different grid");
  }
  if (f.values.size() != grid_->size()) {
    throw ValidationError("forward: expected " + std::to_string(grid_->size()) +
                          " samples, got " + std::to_string(f.values.size()));
  }
  std::vector<Complex> weighted(f.values.size());
  for (std::size_t i = 0; i < weighted.size(); ++i) {
    weighted[i] = f.values[i] * grid_->weights[i];
  }
  std::vector<Complex> out(basis_.cols(), Complex(0.0, 0.0));
  for (std::size_t node = 0; node < basis_.rows(); ++node) {
    const Complex w = weighted[node];
    if (w == Complex(0.0, 0.0)) continue;
    const auto row = basis_.row(node);
    for (std::size_t b = 0; b < out.size(); ++b) out[b] += w * std::conj(row[b]);
  }
  return FourierCoefficients(partition_, std::move(out));
}

GridFunction FourierTransform::inverse(const FourierCoefficients& c) const {
  if (!c.partition().same_structure(*partition_)) {
    throw ValidationError("inverse: coefficients belong to a different partition");
  }
  return GridFunction{grid_, basis_ * c.flat()};
}

Complex FourierTransform::evaluate(const FourierCoefficients& c,
                                   const Point& x) const {
  if (!c.partition().same_structure(*partition_)) {
    throw ValidationError("evaluate: coefficients belong to a different partition");
  }
  Complex acc = 0.0;
  for (std::size_t l = 0; l < partition_->size(); ++l) {
    const Level& lv = partition_->level(l);
    const auto coeffs = c.level(l);
    if (lv.two_l >= 0) {
      const CMatrix dmat = wigner_d_matrix(lv.two_l, x);
      const double scale = std::sqrt(static_cast<double>(lv.two_l + 1));
      for (std::size_t k = 0; k < lv.dim; ++k) acc += coeffs[k] * scale * dmat.data()[k];
    } else {
      for (std::size_t k = 0; k < lv.dim; ++k) {
        acc += coeffs[k] * eval_basis(*partition_, l, k, x);
      }
    }
  }
  return acc;
}

FourierCoefficients forward(const GridFunction& f, PartitionPtr partition) {
  return FourierTransform(std::move(partition), f.grid).forward(f);
}

GridFunction inverse(const FourierCoefficients& c, GridPtr grid) {
  return FourierTransform(c.partition_ptr(), std::move(grid)).inverse(c);
}

double sobolev_norm(const FourierCoefficients& c, double s) {
  const Partition& p = c.partition();
  double acc = 0.0;
  for (std::size_t l = 0; l < p.size(); ++l) {
    const double weight = std::pow(1.0 + p.level(l).lambda, 2.0 * s / p.order_nu());
    for (const Complex& z : c.level(l)) acc += weight * std::norm(z);
  }
  return std::sqrt(acc);
}

}  // namespace specmult
