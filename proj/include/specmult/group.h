// SPDX-License-Identifier: Apache-2.0
#ifndef SPECMULT_GROUP_H_
#define SPECMULT_GROUP_H_

#include <vector>

#include "specmult/fourier.h"
#include "specmult/linalg.h"
#include "specmult/manifold.h"
#include "specmult/symbol.h"

namespace specmult {

// Index maps between matrix entries (j, k) in {1..d}^2 and flat indices
// t in {1..d^2}. All three are 1-based, matching the row-major flattening
// used for SU(2) level labels (shifted by one).
int gamma_index(int d, int j, int k);

struct PhiPsi {
  int phi;  // column: t - floor((t-1)/d) d
  int psi;  // row: floor((t-1)/d) + 1
};

PhiPsi phi_psi(int t, int d);

// One (2l+1) x (2l+1) matrix per SU(2) irrep, indexed by 2l = 0, 1, ...
class RepMatrices {
 public:
  RepMatrices() = default;
  explicit RepMatrices(std::vector<CMatrix> by_rep);

  int max_two_l() const { return static_cast<int>(by_rep_.size()) - 1; }
  std::size_t size() const { return by_rep_.size(); }
  const CMatrix& operator[](int two_l) const { return by_rep_.at(two_l); }
  CMatrix& operator[](int two_l) { return by_rep_.at(two_l); }
  const std::vector<CMatrix>& matrices() const { return by_rep_; }

 private:
  std::vector<CMatrix> by_rep_;
};

// tau(xi) = (A xi)(e) of a left-invariant operator, so that A xi = xi tau(xi).
class GroupSymbol : public RepMatrices {
 public:
  using RepMatrices::RepMatrices;
  static GroupSymbol Identity(int max_two_l);
};

// f^(xi) = int_G f(x) xi(x)^* dx.
class MatrixFourier : public RepMatrices {
 public:
  using RepMatrices::RepMatrices;
};

// sigma(l)_{mi} = tau(xi_l)_{phi(m), phi(i)} when psi(m) = psi(i), else 0:
// d copies of tau along the diagonal. The partition must be the SU(2)
// partition with the same irreps.
Symbol tau_to_sigma(const GroupSymbol& tau, PartitionPtr partition);

inline constexpr double kBlockStructureTolerance = 1e-10;

// Top-left d x d block of each sigma(l), after checking that sigma has the
// block structure produced by tau_to_sigma (deviation relative to
// max(1, max |sigma|)).
GroupSymbol sigma_to_tau(const Symbol& sigma);

struct SchattenConsistencyReport {
  struct Row {
    int two_l;
    double r;
    double sigma_side;  // ||sigma(l)||_{S_r}^r
    double tau_side;    // d_xi ||tau(xi_l)||_{S_r}^r
    double rel_err;
  };
  std::vector<Row> rows;
  struct Aggregate {
    double r;
    double sigma_side;
    double tau_side;
    double rel_err;
  };
  std::vector<Aggregate> aggregates;
  double max_rel_err = 0.0;
  bool ok = false;
};

// Checks ||sigma(l)||_{S_r}^r = d_xi ||tau(xi_l)||_{S_r}^r per level and summed,
// for each r in rs (default 0.5, 1, 2).
SchattenConsistencyReport schatten_consistency(
    const GroupSymbol& tau, const Symbol& sigma,
    const std::vector<double>& rs = {0.5, 1.0, 2.0}, double tol = 1e-10);

// Group Fourier analysis on one SU(2) grid, Wigner matrices tabulated once.
class GroupTransform {
 public:
  // Irreps up to the largest 2l allowed by the grid's band limit.
  explicit GroupTransform(GridPtr grid);
  GroupTransform(GridPtr grid, int max_two_l);

  int max_two_l() const { return max_two_l_; }
  const GridPtr& grid() const { return grid_; }

  MatrixFourier forward(const GridFunction& f) const;
  // f(x) = sum_xi d_xi Tr(xi(x) f^(xi)).
  GridFunction inverse(const MatrixFourier& fhat) const;
  // Af(x) = sum_xi d_xi Tr(xi(x) tau(xi) f^(xi)).
  GridFunction quantize(const GroupSymbol& tau, const GridFunction& f) const;

 private:
  void check_function(const GridFunction& f, const char* who) const;
  GridFunction synthesize(const std::vector<CMatrix>& by_rep) const;

  GridPtr grid_;
  int max_two_l_;
  // wigner_[node][two_l]
  std::vector<std::vector<CMatrix>> wigner_;
};

MatrixFourier group_fourier(const GridFunction& f);
GridFunction group_quantize(const GroupSymbol& tau, const GridFunction& f);

// A symbol piece on one fine-partition component (an irrep, or a single
// character on the torus), tagged with its eigenvalue and an ordering key.
struct FineBlock {
  double lambda;
  int key;
  CMatrix block;
};

// Groups fine pieces by eigenvalue and assembles each coarse level as the
// block-diagonal sum of its pieces in key order.
Symbol coarsen(const std::vector<FineBlock>& pieces, PartitionPtr partition);

}  // namespace specmult

#endif  // SPECMULT_GROUP_H_
