// SPDX-License-Identifier: Apache-2.0
#ifndef SPECMULT_SYMBOL_H_
#define SPECMULT_SYMBOL_H_

#include <functional>
#include <string>
#include <vector>

#include "specmult/fourier.h"
#include "specmult/linalg.h"
#include "specmult/manifold.h"

namespace specmult {

// Matrix symbol of an invariant operator: one d_l x d_l matrix per level,
// acting on coefficient columns, so that (Tf)^(l) = sigma(l) f^(l) and
// T e_l^k = sum_m sigma(l)_{mk} e_l^m. The restriction of T to H_l, written
// in the row convention, is sigma(l)^T.
class Symbol {
 public:
  explicit Symbol(PartitionPtr partition);
  Symbol(PartitionPtr partition, std::vector<CMatrix> blocks);

  static Symbol Identity(PartitionPtr partition);

  const Partition& partition() const { return *partition_; }
  const PartitionPtr& partition_ptr() const { return partition_; }
  std::size_t size() const { return blocks_.size(); }

  const CMatrix& operator[](std::size_t level) const { return blocks_.at(level); }
  CMatrix& operator[](std::size_t level) { return blocks_.at(level); }
  const std::vector<CMatrix>& blocks() const { return blocks_; }

 private:
  PartitionPtr partition_;
  std::vector<CMatrix> blocks_;
};

using SpectralFunction = std::function<Complex(double lambda)>;

// sigma(l) = F(lambda_l) I_{d_l}.
Symbol from_spectral_function(PartitionPtr partition, const SpectralFunction& f);

// (I + E)^{-alpha/nu}, the model power operator.
Symbol power_symbol(PartitionPtr partition, double alpha);

FourierCoefficients apply(const Symbol& sigma, const FourierCoefficients& c);

// A linear operator seen through its action on coefficient vectors.
using CoefficientMap = std::function<FourierCoefficients(const FourierCoefficients&)>;

// sigma(j)_{mk} = m-th coefficient at level j of op(e_j^k). Off-block output
// is ignored here; use check_invariance to measure it.
Symbol extract(const CoefficientMap& op, PartitionPtr partition);

inline constexpr double kDefaultInvarianceTolerance = 1e-9;

struct InvarianceReport {
  double max_offblock = 0.0;
  double tolerance = kDefaultInvarianceTolerance;
  bool verdict = false;
  Symbol extracted;
};

// Applies op to every basis vector and records the largest coefficient that
// lands outside the source level.
InvarianceReport check_invariance(const CoefficientMap& op, PartitionPtr partition,
                                  double tol = kDefaultInvarianceTolerance);

Symbol compose(const Symbol& a, const Symbol& b);

// sup_l ||sigma(l)||_op, the L^2 operator norm.
double l2_bound(const Symbol& sigma);

struct SchattenValue {
  double value = 0.0;
  bool finite_on_truncation = true;
};

// (sum_l ||sigma(l)||_{S_r}^r)^{1/r} over retained levels.
SchattenValue schatten(const Symbol& sigma, double r);

struct TraceResult {
  Complex value;
  // Non-empty when the top retained level still carries a noticeable share
  // of the S_1 mass, i.e. the truncated sum is unlikely to have settled.
  std::vector<std::string> warnings;
};

TraceResult trace_formula(const Symbol& sigma);

struct SobolevOrder {
  double m_est = 0.0;
  double C_est = 0.0;
};

// Least-squares fit of log ||sigma(l)||_op against log(1 + lambda_l) / nu over
// the upper half of the levels with lambda > 0.
SobolevOrder sobolev_order(const Symbol& sigma);

// Matrix of the operator in the flat eigenbasis, columns = images of basis
// vectors (block-diagonal with blocks sigma(l)).
CMatrix assemble_dense(const Symbol& sigma);

}  // namespace specmult

#endif  // SPECMULT_SYMBOL_H_
