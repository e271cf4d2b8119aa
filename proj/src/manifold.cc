// SPDX-License-Identifier: Apache-2.0
#include "specmult/manifold.h"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

#include "specmult/error.h"

namespace specmult {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int ceil_sqrt(double b) {
  auto m = static_cast<long>(std::floor(std::sqrt(b)));
  while (static_cast<double>(m) * static_cast<double>(m) < b) ++m;
  while (m > 0 && static_cast<double>(m - 1) * static_cast<double>(m - 1) >= b) --m;
  return static_cast<int>(m);
}

// Factorials as doubles, exact up to 22! and correctly rounded beyond.
const std::vector<double>& factorials() {
  static const std::vector<double> table = [] {
    std::vector<double> f(kMaxTwoL + 2, 1.0);
    for (std::size_t i = 1; i < f.size(); ++i) f[i] = f[i - 1] * static_cast<double>(i);
    return f;
  }();
  return table;
}

void check_two_j(int two_j) {
  if (two_j < 0 || two_j > kMaxTwoL) {
    throw ValidationError("Wigner matrices are supported for 0 <= 2l <= " +
                          std::to_string(kMaxTwoL) + ", got 2l = " +
                          std::to_string(two_j));
  }
}

// d^j_{m'm}(beta) with m' = j - row, m = j - col.
double small_d_entry(int two_j, int row, int col, double cos_half,
                     double sin_half) {
  const auto& f = factorials();
  const double prefactor =
      std::sqrt(f[two_j - row] * f[row] * f[two_j - col] * f[col]);
  const int s_min = std::max(0, row - col);
  const int s_max = std::min(two_j - col, row);
  double acc = 0.0;
  for (int s = s_min; s <= s_max; ++s) {
    const double denom =
        f[two_j - col - s] * f[s] * f[col - row + s] * f[row - s];
    const int cos_power = two_j + row - col - 2 * s;
    const int sin_power = col - row + 2 * s;
    const double sign = ((col - row + s) % 2 == 0) ? 1.0 : -1.0;
    acc += sign / denom * std::pow(cos_half, cos_power) *
           std::pow(sin_half, sin_power);
  }
  return prefactor * acc;
}

Complex wigner_entry(int two_j, int row, int col, const Point& euler) {
  const double cos_half = std::cos(0.5 * euler[1]);
  const double sin_half = std::sin(0.5 * euler[1]);
  const double d = small_d_entry(two_j, row, col, cos_half, sin_half);
  const double m_row = 0.5 * (two_j - 2 * row);
  const double m_col = 0.5 * (two_j - 2 * col);
  return std::polar(d, -(m_row * euler[0] + m_col * euler[2]));
}

}  // namespace

ManifoldId ManifoldId::Torus(int n) {
  if (n < 1 || n > 3) {
    throw ValidationError("torus dimension must be 1, 2 or 3, got " +
                          std::to_string(n));
  }
  return ManifoldId(Kind::kTorus, n);
}

ManifoldId ManifoldId::Parse(const std::string& name) {
  if (name == "torus1") return Torus(1);
  if (name == "torus2") return Torus(2);
  if (name == "torus3") return Torus(3);
  if (name == "su2") return SU2();
  throw ValidationError("unsupported manifold '" + name +
                        "'; supported backends: torus1, torus2, torus3, su2");
}

std::string ManifoldId::name() const {
  return is_su2() ? "su2" : "torus" + std::to_string(dim_);
}

Partition::Partition(ManifoldId id, double order_nu, double cutoff,
                     std::vector<Level> levels)
    : id_(id), order_nu_(order_nu), cutoff_(cutoff), levels_(std::move(levels)) {
  if (levels_.empty()) throw ValidationError("Partition: no levels");
  if (levels_.front().lambda != 0.0) {
    throw ValidationError("Partition: first eigenvalue must be 0");
  }
  offsets_.reserve(levels_.size() + 1);
  offsets_.push_back(0);
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    const Level& lv = levels_[i];
    if (lv.dim == 0 || lv.labels.size() != lv.dim) {
      throw ValidationError("Partition: level " + std::to_string(i) +
                            " has inconsistent dimension");
    }
    if (i > 0 && !(levels_[i - 1].lambda < lv.lambda)) {
      throw ValidationError("Partition: eigenvalues must be strictly increasing");
    }
    offsets_.push_back(offsets_.back() + lv.dim);
  }
}

bool Partition::same_structure(const Partition& other) const {
  if (this == &other) return true;
  if (!(id_ == other.id_) || levels_.size() != other.levels_.size()) return false;
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i].lambda != other.levels_[i].lambda ||
        levels_[i].dim != other.levels_[i].dim) {
      return false;
    }
  }
  return true;
}

double su2_casimir(int two_l) {
  // l(l+1) = 2l (2l + 2) / 4, exact in integers before the division.
  const long numerator = static_cast<long>(two_l) * (two_l + 2);
  return static_cast<double>(numerator) / 4.0;
}

PartitionPtr enumerate_partition(const ManifoldId& id, double order_nu,
                                 double lambda_cutoff) {
  if (order_nu != 2.0) {
    throw ValidationError("only the Laplacian (order nu = 2) is supported");
  }
  if (!(lambda_cutoff >= 0.0) || !std::isfinite(lambda_cutoff)) {
    throw ValidationError("lambda cutoff must be a finite non-negative number");
  }
  std::vector<Level> levels;
  if (id.is_torus()) {
    const int n = id.dim();
    const auto radius = static_cast<int>(std::floor(std::sqrt(lambda_cutoff)));
    std::map<long, std::vector<BasisLabel>> by_norm;
    TorusLabel j(n, -radius);
    // Odometer over [-radius, radius]^n in lexicographic order.
    while (true) {
      long norm = 0;
      for (int v : j) norm += static_cast<long>(v) * v;
      if (static_cast<double>(norm) <= lambda_cutoff) by_norm[norm].push_back(j);
      int axis = n - 1;
      while (axis >= 0 && j[axis] == radius) {
        j[axis] = -radius;
        --axis;
      }
      if (axis < 0) break;
      ++j[axis];
    }
    for (auto& [norm, labels] : by_norm) {
      Level lv;
      lv.lambda = static_cast<double>(norm);
      lv.dim = labels.size();
      lv.labels = std::move(labels);
      levels.push_back(std::move(lv));
    }
  } else {
    for (int two_l = 0; su2_casimir(two_l) <= lambda_cutoff; ++two_l) {
      if (two_l > kMaxTwoL) {
        throw ValidationError("SU(2) cutoff too large: irreps beyond 2l = " +
                              std::to_string(kMaxTwoL) + " are not supported");
      }
      Level lv;
      lv.lambda = su2_casimir(two_l);
      lv.two_l = two_l;
      const int d = two_l + 1;
      lv.dim = static_cast<std::size_t>(d * d);
      for (int row = 0; row < d; ++row) {
        for (int col = 0; col < d; ++col) lv.labels.push_back(WignerLabel{two_l, row, col});
      }
      levels.push_back(std::move(lv));
    }
  }
  return std::make_shared<const Partition>(id, order_nu, lambda_cutoff,
                                           std::move(levels));
}

std::vector<double> wigner_small_d(int two_j, double beta) {
  check_two_j(two_j);
  const int d = two_j + 1;
  const double c = std::cos(0.5 * beta);
  const double s = std::sin(0.5 * beta);
  std::vector<double> out(static_cast<std::size_t>(d * d));
  for (int row = 0; row < d; ++row) {
    for (int col = 0; col < d; ++col) out[row * d + col] = small_d_entry(two_j, row, col, c, s);
  }
  return out;
}

CMatrix wigner_d_matrix(int two_j, const Point& euler) {
  check_two_j(two_j);
  const auto d = static_cast<std::size_t>(two_j + 1);
  const std::vector<double> small = wigner_small_d(two_j, euler[1]);
  CMatrix out(d, d);
  for (std::size_t row = 0; row < d; ++row) {
    const double m_row = 0.5 * (two_j - 2.0 * static_cast<double>(row));
    for (std::size_t col = 0; col < d; ++col) {
      const double m_col = 0.5 * (two_j - 2.0 * static_cast<double>(col));
      out(row, col) = std::polar(small[row * d + col],
                                 -(m_row * euler[0] + m_col * euler[2]));
    }
  }
  return out;
}

CMatrix su2_element(const Point& euler) { return wigner_d_matrix(1, euler); }

Point su2_euler_angles(const CMatrix& g) {
  if (g.rows() != 2 || g.cols() != 2) {
    throw ValidationError("su2_euler_angles: expected a 2x2 matrix");
  }
  const Complex a = g(0, 0);
  const Complex c = g(1, 0);
  const double beta = 2.0 * std::atan2(std::abs(c), std::abs(a));
  const double arg_a = std::abs(a) > 0.0 ? std::arg(a) : 0.0;
  const double arg_c = std::abs(c) > 0.0 ? std::arg(c) : 0.0;
  return Point{arg_c - arg_a, beta, -arg_a - arg_c};
}

Point su2_multiply(const Point& g1, const Point& g2) {
  return su2_euler_angles(su2_element(g1) * su2_element(g2));
}

Point su2_inverse(const Point& g) {
  return su2_euler_angles(su2_element(g).adjoint());
}

Complex eval_basis(const Partition& partition, std::size_t level_index,
                   std::size_t k, const Point& point) {
  if (level_index >= partition.size()) {
    throw ValidationError("eval_basis: level index " + std::to_string(level_index) +
                          " out of range (" + std::to_string(partition.size()) +
                          " levels)");
  }
  const Level& lv = partition.level(level_index);
  if (k >= lv.dim) {
    throw ValidationError("eval_basis: basis index " + std::to_string(k) +
                          " out of range for level of dimension " +
                          std::to_string(lv.dim));
  }
  if (const auto* j = std::get_if<TorusLabel>(&lv.labels[k])) {
    double phase = 0.0;
    for (std::size_t axis = 0; axis < j->size(); ++axis) phase += (*j)[axis] * point[axis];
    return std::polar(1.0, kTwoPi * phase);
  }
  const auto& w = std::get<WignerLabel>(lv.labels[k]);
  return std::sqrt(static_cast<double>(w.two_l + 1)) *
         wigner_entry(w.two_l, w.row, w.col, point);
}

std::size_t max_grid_nodes_from_env(std::size_t fallback) {
  if (const char* env = std::getenv("SPECMULT_MAX_GRID")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return fallback;
}

GridPtr build_quadrature(const Partition& partition, double band_limit,
                         QuadratureOptions options) {
  if (!(band_limit >= partition.max_lambda()) || !std::isfinite(band_limit)) {
    throw ValidationError("build_quadrature: band limit must be finite and at "
                          "least the largest retained eigenvalue");
  }
  const std::size_t cap =
      options.max_nodes > 0 ? options.max_nodes : max_grid_nodes_from_env();
  auto grid = std::make_shared<QuadratureGrid>();
  grid->manifold = partition.manifold();
  grid->band_limit = band_limit;

  if (partition.manifold().is_torus()) {
    const int n = partition.dim_n();
    const std::size_t per_axis = 2 * static_cast<std::size_t>(ceil_sqrt(band_limit)) + 1;
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= per_axis;
    if (total > cap) {
      throw ValidationError("band limit " + std::to_string(band_limit) +
                            " needs a grid of " + std::to_string(total) +
                            " nodes, above the configured maximum of " +
                            std::to_string(cap) + " (SPECMULT_MAX_GRID)");
    }
    grid->axis_sizes.assign(n, per_axis);
    grid->nodes.reserve(total);
    const double w = 1.0 / static_cast<double>(total);
    std::vector<std::size_t> idx(n, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
      Point p{0.0, 0.0, 0.0};
      for (int axis = 0; axis < n; ++axis) {
        p[axis] = static_cast<double>(idx[axis]) / static_cast<double>(per_axis);
      }
      grid->nodes.push_back(p);
      for (int axis = n - 1; axis >= 0; --axis) {
        if (++idx[axis] < per_axis) break;
        idx[axis] = 0;
      }
    }
    grid->weights.assign(total, w);
    return grid;
  }

  int two_l_max = 0;
  while (su2_casimir(two_l_max + 1) <= band_limit) ++two_l_max;
  check_two_j(two_l_max);
  const auto n_alpha = static_cast<std::size_t>(two_l_max + 1);
  const auto n_beta = static_cast<std::size_t>(two_l_max / 2 + 1);
  const auto n_gamma = static_cast<std::size_t>(2 * two_l_max + 1);
  const std::size_t total = n_alpha * n_beta * n_gamma;
  if (total > cap) {
    throw ValidationError("band limit " + std::to_string(band_limit) +
                          " needs an Euler grid of " + std::to_string(total) +
                          " nodes, above the configured maximum of " +
                          std::to_string(cap) + " (SPECMULT_MAX_GRID)");
  }
  grid->axis_sizes = {n_alpha, n_beta, n_gamma};
  grid->nodes.reserve(total);
  grid->weights.reserve(total);
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(n_beta);
  for (std::size_t ia = 0; ia < n_alpha; ++ia) {
    const double alpha = kTwoPi * static_cast<double>(ia) / static_cast<double>(n_alpha);
    for (std::size_t ib = 0; ib < n_beta; ++ib) {
      double x = 0.0;
      double wx = 0.0;
      gsl_integration_glfixed_point(-1.0, 1.0, ib, &x, &wx, table);
      const double beta = std::acos(x);
      for (std::size_t ig = 0; ig < n_gamma; ++ig) {
        const double gamma =
            2.0 * kTwoPi * static_cast<double>(ig) / static_cast<double>(n_gamma);
        grid->nodes.push_back(Point{alpha, beta, gamma});
        // dg = dalpha d(cos beta) dgamma / (16 pi^2) over [0,2pi) x [-1,1] x [0,4pi).
        grid->weights.push_back(
            wx / (2.0 * static_cast<double>(n_alpha) * static_cast<double>(n_gamma)));
      }
    }
  }
  gsl_integration_glfixed_table_free(table);
  return grid;
}

std::vector<std::pair<double, double>> counting_function(const Partition& p) {
  std::vector<std::pair<double, double>> out;
  double count = 0.0;
  for (const Level& lv : p.levels()) {
    count += static_cast<double>(lv.dim);
    out.emplace_back(lv.lambda, count);
  }
  return out;
}

WeylReport weyl_check(const Partition& partition, const std::vector<double>& qs) {
  constexpr std::size_t kMinLevels = 10;
  if (partition.size() < kMinLevels) {
    throw ValidationError("weyl_check: need at least " + std::to_string(kMinLevels) +
                          " levels, partition has " + std::to_string(partition.size()));
  }
  WeylReport report;
  report.exponent = partition.dim_n() / partition.order_nu();
  const std::size_t half = partition.size() / 2;
  double lower_max = 0.0;
  double upper_max = 0.0;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    const Level& lv = partition.level(i);
    const double ratio =
        static_cast<double>(lv.dim) * std::pow(1.0 + lv.lambda, -report.exponent);
    double& bucket = i < half ? lower_max : upper_max;
    bucket = std::max(bucket, ratio);
  }
  report.fitted_C = std::max(lower_max, upper_max);
  report.exponent_ok = upper_max <= lower_max;

  const double top = partition.max_lambda();
  report.ratio_min = std::numeric_limits<double>::infinity();
  report.ratio_max = 0.0;
  for (const auto& [lambda, count] : counting_function(partition)) {
    if (lambda <= 0.0 || lambda < 0.1 * top) continue;
    const double r = count / std::pow(lambda, report.exponent);
    report.ratio_min = std::min(report.ratio_min, r);
    report.ratio_max = std::max(report.ratio_max, r);
  }

  for (double q : qs) {
    double partial = 0.0;
    for (const Level& lv : partition.levels()) {
      partial += static_cast<double>(lv.dim) * std::pow(1.0 + lv.lambda, -q);
    }
    report.summability[q] = {q > report.exponent ? Summability::kConvergent
                                                 : Summability::kDivergent,
                             partial};
  }
  return report;
}

}  // namespace specmult
