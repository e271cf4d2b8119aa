// SPDX-License-Identifier: Apache-2.0
#ifndef SPECMULT_MANIFOLD_H_
#define SPECMULT_MANIFOLD_H_

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "specmult/linalg.h"

namespace specmult {

// Which backend a partition or grid lives on.
class ManifoldId {
 public:
  enum class Kind { kTorus, kSU2 };

  static ManifoldId Torus(int n);
  static ManifoldId SU2() { return ManifoldId(Kind::kSU2, 3); }
  // Accepts "torus1", "torus2", "torus3", "su2".
  static ManifoldId Parse(const std::string& name);

  Kind kind() const { return kind_; }
  bool is_torus() const { return kind_ == Kind::kTorus; }
  bool is_su2() const { return kind_ == Kind::kSU2; }
  // Manifold dimension n (torus: n, SU(2): 3).
  int dim() const { return dim_; }
  std::string name() const;

  friend bool operator==(const ManifoldId&, const ManifoldId&) = default;

 private:
  ManifoldId(Kind kind, int dim) : kind_(kind), dim_(dim) {}
  Kind kind_;
  int dim_;
};

// A lattice vector j in Z^n labelling e^{2 pi i j.x}.
using TorusLabel = std::vector<int>;

// Matrix entry (row, col) of the irrep with index 2l = two_l; rows and cols
// are 0-based and ordered by descending magnetic number m = l - row.
struct WignerLabel {
  int two_l = 0;
  int row = 0;
  int col = 0;
  friend bool operator==(const WignerLabel&, const WignerLabel&) = default;
};

using BasisLabel = std::variant<TorusLabel, WignerLabel>;

struct Level {
  double lambda = 0.0;
  std::size_t dim = 0;
  std::vector<BasisLabel> labels;
  // Irrep index 2l for SU(2) levels, -1 on the torus.
  int two_l = -1;
};

// Eigenvalue levels of the reference Laplacian up to a cutoff. Immutable once
// built; shared between coefficients, symbols and grids via shared_ptr.
class Partition {
 public:
  Partition(ManifoldId id, double order_nu, double cutoff,
            std::vector<Level> levels);

  const ManifoldId& manifold() const { return id_; }
  double order_nu() const { return order_nu_; }
  int dim_n() const { return id_.dim(); }
  double cutoff() const { return cutoff_; }

  std::size_t size() const { return levels_.size(); }
  const Level& level(std::size_t i) const { return levels_.at(i); }
  const std::vector<Level>& levels() const { return levels_; }

  // Total number of retained basis functions.
  std::size_t total_dim() const { return offsets_.back(); }
  // Flat index of the first basis function of level i.
  std::size_t offset(std::size_t i) const { return offsets_.at(i); }
  double max_lambda() const { return levels_.back().lambda; }

  // Same manifold and identical level structure.
  bool same_structure(const Partition& other) const;

 private:
  ManifoldId id_;
  double order_nu_;
  double cutoff_;
  std::vector<Level> levels_;
  std::vector<std::size_t> offsets_;
};

using PartitionPtr = std::shared_ptr<const Partition>;

// Levels of E with lambda <= lambda_cutoff. The torus uses
// E = -(2 pi)^-2 Laplacian (eigenvalue |j|^2); SU(2) uses the Casimir with
// eigenvalue l(l+1) on the irrep of dimension 2l+1. Only order_nu = 2 is
// supported on either backend.
PartitionPtr enumerate_partition(const ManifoldId& id, double order_nu,
                                 double lambda_cutoff);

// Eigenvalue l(l+1) of the SU(2) Casimir for two_l = 2l, computed from the
// exact integer two_l * (two_l + 2) / 4.
double su2_casimir(int two_l);

// A point on the manifold: torus coordinates in [0,1)^n (unused trailing
// entries zero) or z-y-z Euler angles (alpha, beta, gamma) on SU(2).
using Point = std::array<double, 3>;

// Value of the k-th (0-based) basis function of a level at a point.
Complex eval_basis(const Partition& partition, std::size_t level_index,
                   std::size_t k, const Point& point);

// Wigner D-matrix of the irrep 2l = two_j at Euler angles (z-y-z), rows and
// columns ordered by descending magnetic number. D^{1/2} is the defining
// representation, see su2_element().
CMatrix wigner_d_matrix(int two_j, const Point& euler);

// Wigner's small-d matrix d^j(beta) in the same ordering.
std::vector<double> wigner_small_d(int two_j, double beta);

// Largest 2l the Wigner tables support.
inline constexpr int kMaxTwoL = 60;

// exp(-i a s_z/2) exp(-i b s_y/2) exp(-i c s_z/2).
CMatrix su2_element(const Point& euler);

// Euler angles reproducing a given SU(2) matrix exactly.
Point su2_euler_angles(const CMatrix& g);

// g1 * g2 on SU(2) in Euler angles.
Point su2_multiply(const Point& g1, const Point& g2);
Point su2_inverse(const Point& g);

struct QuadratureGrid {
  ManifoldId manifold = ManifoldId::SU2();
  std::vector<Point> nodes;
  std::vector<double> weights;
  double band_limit = 0.0;
  // Per-axis sizes: torus {N, N, ...}, SU(2) {n_alpha, n_beta, n_gamma}.
  std::vector<std::size_t> axis_sizes;

  std::size_t size() const { return nodes.size(); }
};

using GridPtr = std::shared_ptr<const QuadratureGrid>;

struct QuadratureOptions {
  // Maximum number of nodes. Defaults to SPECMULT_MAX_GRID when set,
  // otherwise kDefaultMaxGridNodes.
  std::size_t max_nodes = 0;
};

inline constexpr std::size_t kDefaultMaxGridNodes = 8000;

// Node cap from SPECMULT_MAX_GRID, or the fallback.
std::size_t max_grid_nodes_from_env(std::size_t fallback = kDefaultMaxGridNodes);

// Product grid, normalized to total mass 1, integrating products
// f * conj(g) exactly for f, g spanned by levels with lambda <= band_limit.
// Torus: uniform with 2*ceil(sqrt(B))+1 points per axis. SU(2): uniform
// alpha on [0, 2pi), Gauss-Legendre in cos(beta), uniform gamma on [0, 4pi).
GridPtr build_quadrature(const Partition& partition, double band_limit,
                         QuadratureOptions options = {});

enum class Summability { kConvergent, kDivergent };

struct WeylReport {
  double fitted_C = 0.0;
  bool exponent_ok = false;
  double exponent = 0.0;  // n / nu
  // Counting function ratio N(L) / L^{n/nu} over the last decade of retained
  // eigenvalues.
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  struct Entry {
    Summability verdict;
    double partial_sum;
  };
  std::map<double, Entry> summability;
};

// Checks d_j <= C (1 + lambda_j)^{n/nu} and classifies
// sum_j d_j (1 + lambda_j)^{-q} for each q by q > n/nu.
WeylReport weyl_check(const Partition& partition, const std::vector<double>& qs);

// Eigenvalue counting function N(L) = sum_{lambda_j <= L} d_j at each level.
std::vector<std::pair<double, double>> counting_function(const Partition& p);

}  // namespace specmult

#endif  // SPECMULT_MANIFOLD_H_
