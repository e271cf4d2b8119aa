// SPDX-License-Identifier: Apache-2.0
#ifndef SPECMULT_KERNEL_H_
#define SPECMULT_KERNEL_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "specmult/fourier.h"
#include "specmult/linalg.h"
#include "specmult/manifold.h"
#include "specmult/symbol.h"

namespace specmult {

// Node caps for dense kernels: 64^2 nodes on a torus, a 20^3 Euler grid on
// SU(2). SPECMULT_MAX_KERNEL_NODES overrides both.
inline constexpr std::size_t kDefaultMaxKernelNodesTorus = 4096;
inline constexpr std::size_t kDefaultMaxKernelNodesSU2 = 8000;

std::size_t max_kernel_nodes(const ManifoldId& id);

// K(x, y) sampled on grid x grid; values(i, j) = K(node_i, node_j).
struct GridKernel {
  GridPtr grid;
  CMatrix values;

  std::size_t size() const { return values.rows(); }
  // K^T(x, y) = K(y, x).
  GridKernel transposed() const;
};

// K(x,y) = sum_l sum_{m,k} sigma(l)_{mk} e_l^m(x) conj(e_l^k(y)).
GridKernel synthesize(const Symbol& sigma, GridPtr grid);

// (T_K f)(x) = int K(x, y) f(y) dy by quadrature.
GridFunction apply_kernel(const GridKernel& k, const GridFunction& f);

// int K(x, x) dx by quadrature.
Complex kernel_trace(const GridKernel& k);

// Double Fourier coefficients
// C(l m, l' m') = int int K(x,y) conj(e_l^m(x)) e_{l'}^{m'}(y) dx dy
// in flat basis indices.
class KernelCoefficients {
 public:
  KernelCoefficients(PartitionPtr partition, CMatrix table);

  const Partition& partition() const { return *partition_; }
  const CMatrix& table() const { return table_; }
  Complex operator()(std::size_t l, std::size_t m, std::size_t lp,
                     std::size_t mp) const;

  CMatrix diagonal_block(std::size_t l) const;
  // Symbol read off the diagonal blocks.
  Symbol diagonal_symbol() const;
  // Largest entry with l != l'.
  double max_offblock() const;

 private:
  PartitionPtr partition_;
  CMatrix table_;
};

KernelCoefficients kernel_coefficients(const GridKernel& k, PartitionPtr partition);

// Invariance test for a sampled kernel.
InvarianceReport check_invariance(const GridKernel& k, PartitionPtr partition,
                                  double tol = kDefaultInvarianceTolerance);

struct MixedNorm {
  double xy = 0.0;     // || ||K(x, .)||_{L^p2_y} ||_{L^p1_x}
  double yx = 0.0;     // || ||K(., y)||_{L^p2_x} ||_{L^p1_y}
  double lp1p2 = 0.0;  // max(xy, yx)
};

// p = infinity takes the max over grid nodes.
MixedNorm mixed_norm(const GridKernel& k, double p1, double p2);

// (sum_l ||sigma(l)||_{S_q}^q)^{1/q}; q = infinity gives sup_l ||sigma(l)||_op.
double symbol_lp_norm(const Symbol& sigma, double q);

inline constexpr double kFfb2FlagFactor = 1.0 + 1e-6;

struct Ffb2Report {
  double p = 0.0;
  double p_dual = 0.0;
  double lhs = 0.0;  // ||sigma_K||_{l^{p'}(Sigma)}
  double rhs = 0.0;  // ||K||_{L^{(p', p)}}
  double ratio = 0.0;
  bool holds = false;  // lhs <= rhs * kFfb2FlagFactor
  double invariance_offblock = 0.0;
};

// Hausdorff-Young bound ||sigma_K||_{l^{p'}} <= ||K||_{L^{(p', p)}} for
// 1 <= p <= 2. Requires an invariant kernel; throws ValidationError otherwise.
Ffb2Report ffb2_check(const GridKernel& k, PartitionPtr partition, double p,
                      double invariance_tol = kDefaultInvarianceTolerance);

// Q_l(x, y) = conj(e_l(y)) e_l(x)^T, a rank-one d_l x d_l matrix, so that
// K(x, y) = sum_l Tr(sigma(l) Q_l(x, y)).
CMatrix q_matrix(const Partition& partition, std::size_t level, const Point& x,
                 const Point& y);

// Binary export: "SPMKRN01", uint32 version, uint32 manifold kind, uint32 n,
// uint64 node count, float64 band limit, then per node 3 float64 coordinates, the float64
// weights, and row-major (re, im) float64 values. Little-endian.
void write_kernel(std::ostream& out, const GridKernel& k);
GridKernel read_kernel(std::istream& in);

}  // namespace specmult

#endif  // SPECMULT_KERNEL_H_
