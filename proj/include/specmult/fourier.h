// SPDX-License-Identifier: Apache-2.0
#ifndef SPECMULT_FOURIER_H_
#define SPECMULT_FOURIER_H_

#include <span>
#include <vector>

#include "specmult/linalg.h"
#include "specmult/manifold.h"

namespace specmult {

// Coefficients f^(l, k) = (f, e_l^k), stored level by level in label order.
// Each level is a column vector of length d_l.
class FourierCoefficients {
 public:
  explicit FourierCoefficients(PartitionPtr partition);
  FourierCoefficients(PartitionPtr partition, std::vector<Complex> flat);

  // Coefficients of the single basis function e_level^k.
  static FourierCoefficients Unit(PartitionPtr partition, std::size_t level,
                                  std::size_t k);

  const Partition& partition() const { return *partition_; }
  const PartitionPtr& partition_ptr() const { return partition_; }

  std::span<Complex> level(std::size_t i);
  std::span<const Complex> level(std::size_t i) const;
  std::span<Complex> flat() { return values_; }
  std::span<const Complex> flat() const { return values_; }

  double l2_norm() const;

 private:
  PartitionPtr partition_;
  std::vector<Complex> values_;
};

// Samples of a function at the nodes of a quadrature grid.
struct GridFunction {
  GridPtr grid;
  std::vector<Complex> values;

  double l2_norm() const;
};

// Values of every retained basis function at every node: row = node,
// column = flat basis index of the partition.
CMatrix tabulate_basis(const Partition& partition, const QuadratureGrid& grid);

// Forward and inverse transforms for one (partition, grid) pair with the basis
// tabulated once. Direct dense summation.
class FourierTransform {
 public:
  FourierTransform(PartitionPtr partition, GridPtr grid);

  const PartitionPtr& partition() const { return partition_; }
  const GridPtr& grid() const { return grid_; }
  const CMatrix& basis() const { return basis_; }

  FourierCoefficients forward(const GridFunction& f) const;
  GridFunction inverse(const FourierCoefficients& c) const;
  // Band-limited synthesis at an arbitrary point.
  Complex evaluate(const FourierCoefficients& c, const Point& x) const;

 private:
  PartitionPtr partition_;
  GridPtr grid_;
  CMatrix basis_;
};

FourierCoefficients forward(const GridFunction& f, PartitionPtr partition);
GridFunction inverse(const FourierCoefficients& c, GridPtr grid);

// (sum (1 + lambda_l)^{2s/nu} |f^(l,k)|^2)^{1/2} over retained levels.
double sobolev_norm(const FourierCoefficients& c, double s);

// Throws unless the grid integrates the partition's basis exactly.
void require_band_compatible(const Partition& partition,
                             const QuadratureGrid& grid, const char* who);

}  // namespace specmult

#endif  // SPECMULT_FOURIER_H_
