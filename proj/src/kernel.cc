// SPDX-License-Identifier: Apache-2.0
#include "specmult/kernel.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "specmult/error.h"

namespace specmult {

namespace {

constexpr char kMagic[8] = {'S', 'P', 'M', 'K', 'R', 'N', '0', '1'};
constexpr std::uint32_t kKernelVersion = 1;

void require_kernel_size(const QuadratureGrid& grid) {
  const std::size_t cap = max_kernel_nodes(grid.manifold);
  if (grid.size() > cap) {
    throw ValidationError("kernel on " + std::to_string(grid.size()) +
                          " nodes exceeds the kernel node cap of " +
                          std::to_string(cap));
  }
}

void require_valid_kernel(const GridKernel& k, const char* who) {
  if (!k.grid) throw ValidationError(std::string(who) + ": kernel has no grid");
  const std::size_t n = k.grid->size();
  if (k.values.rows() != n || k.values.cols() != n) {
    throw ValidationError(std::string(who) + ": kernel shape does not match the grid");
  }
  if (!k.values.all_finite()) {
    throw ValidationError(std::string(who) + ": kernel has non-finite values");
  }
}

// ||v||_{L^p} with weights w; p = infinity is the max.
double weighted_norm(std::span<const double> abs_values, std::span<const double> w,
                     double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double a : abs_values) m = std::max(m, a);
    return m;
  }
  double scale = 0.0;
  for (double a : abs_values) scale = std::max(scale, a);
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < abs_values.size(); ++i) {
    acc += w[i] * std::pow(abs_values[i] / scale, p);
  }
  return scale * std::pow(acc, 1.0 / p);
}

void require_exponent(double p, const char* who) {
  if (!(p >= 1.0)) throw ValidationError(std::string(who) + ": exponent must lie in [1, inf]");
}

template <typename T>
void put(std::ostream& out, T v) {
  static_assert(std::endian::native == std::endian::little,
                "kernel export assumes a little-endian host");
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ValidationError("read_kernel: truncated kernel file");
  return v;
}

}  // namespace

std::size_t max_kernel_nodes(const ManifoldId& id) {
  if (const char* env = std::getenv("SPECMULT_MAX_KERNEL_NODES")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return id.is_su2() ? kDefaultMaxKernelNodesSU2 : kDefaultMaxKernelNodesTorus;
}

GridKernel GridKernel::transposed() const { return {grid, values.transpose()}; }

GridKernel synthesize(const Symbol& sigma, GridPtr grid) {
  require_kernel_size(*grid);
  const CMatrix basis = tabulate_basis(sigma.partition(), *grid);
  return {std::move(grid), basis * assemble_dense(sigma) * basis.adjoint()};
}

GridFunction apply_kernel(const GridKernel& k, const GridFunction& f) {
  require_valid_kernel(k, "apply_kernel");
  if (f.values.size() != k.size()) {
    throw ValidationError("apply_kernel: function is sampled on a different grid");
  }
  std::vector<Complex> weighted(f.values.size());
  for (std::size_t i = 0; i < weighted.size(); ++i) {
    weighted[i] = k.grid->weights[i] * f.values[i];
  }
  return {k.grid, k.values * std::span<const Complex>(weighted)};
}

Complex kernel_trace(const GridKernel& k) {
  require_valid_kernel(k, "kernel_trace");
  Complex acc = 0.0;
  for (std::size_t i = 0; i < k.size(); ++i) acc += k.grid->weights[i] * k.values(i, i);
  return acc;
}

KernelCoefficients::KernelCoefficients(PartitionPtr partition, CMatrix table)
    : partition_(std::move(partition)), table_(std::move(table)) {
  const std::size_t n = partition_->total_dim();
  if (table_.rows() != n || table_.cols() != n) {
    throw ValidationError("KernelCoefficients: table does not match the partition");
  }
}

Complex KernelCoefficients::operator()(std::size_t l, std::size_t m, std::size_t lp,
                                       std::size_t mp) const {
  if (m >= partition_->level(l).dim || mp >= partition_->level(lp).dim) {
    throw ValidationError("KernelCoefficients: index out of range");
  }
  return table_(partition_->offset(l) + m, partition_->offset(lp) + mp);
}

CMatrix KernelCoefficients::diagonal_block(std::size_t l) const {
  const std::size_t d = partition_->level(l).dim;
  const std::size_t base = partition_->offset(l);
  CMatrix b(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) b(i, j) = table_(base + i, base + j);
  }
  return b;
}

Symbol KernelCoefficients::diagonal_symbol() const {
  std::vector<CMatrix> blocks;
  blocks.reserve(partition_->size());
  for (std::size_t l = 0; l < partition_->size(); ++l) blocks.push_back(diagonal_block(l));
  return Symbol(partition_, std::move(blocks));
}

double KernelCoefficients::max_offblock() const {
  double worst = 0.0;
  for (std::size_t l = 0; l < partition_->size(); ++l) {
    const std::size_t r0 = partition_->offset(l);
    const std::size_t r1 = r0 + partition_->level(l).dim;
    for (std::size_t i = r0; i < r1; ++i) {
      for (std::size_t j = 0; j < table_.cols(); ++j) {
        if (j >= r0 && j < r1) continue;
        worst = std::max(worst, std::abs(table_(i, j)));
      }
    }
  }
  return worst;
}

KernelCoefficients kernel_coefficients(const GridKernel& k, PartitionPtr partition) {
  require_valid_kernel(k, "kernel_coefficients");
  CMatrix weighted = tabulate_basis(*partition, *k.grid);
  for (std::size_t node = 0; node < weighted.rows(); ++node) {
    for (std::size_t b = 0; b < weighted.cols(); ++b) {
      weighted(node, b) *= k.grid->weights[node];
    }
  }
  // B^* W K W B, with W B precomputed.
  CMatrix table = weighted.adjoint() * k.values * weighted;
  return KernelCoefficients(std::move(partition), std::move(table));
}

InvarianceReport check_invariance(const GridKernel& k, PartitionPtr partition,
                                  double tol) {
  if (!(tol > 0.0)) throw ValidationError("check_invariance: tolerance must be positive");
  const KernelCoefficients coeffs = kernel_coefficients(k, partition);
  InvarianceReport report{coeffs.max_offblock(), tol, false, coeffs.diagonal_symbol()};
  report.verdict = report.max_offblock < tol;
  return report;
}

MixedNorm mixed_norm(const GridKernel& k, double p1, double p2) {
  require_exponent(p1, "mixed_norm");
  require_exponent(p2, "mixed_norm");
  require_valid_kernel(k, "mixed_norm");
  const std::size_t n = k.size();
  const std::span<const double> w = k.grid->weights;
  std::vector<double> line(n);
  std::vector<double> inner_x(n);
  std::vector<double> inner_y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) line[j] = std::abs(k.values(i, j));
    inner_x[i] = weighted_norm(line, w, p2);
    for (std::size_t j = 0; j < n; ++j) line[j] = std::abs(k.values(j, i));
    inner_y[i] = weighted_norm(line, w, p2);
  }
  MixedNorm out;
  out.xy = weighted_norm(inner_x, w, p1);
  out.yx = weighted_norm(inner_y, w, p1);
  out.lp1p2 = std::max(out.xy, out.yx);
  return out;
}

double symbol_lp_norm(const Symbol& sigma, double q) {
  if (std::isinf(q)) return l2_bound(sigma);
  return schatten(sigma, q).value;
}

Ffb2Report ffb2_check(const GridKernel& k, PartitionPtr partition, double p,
                      double invariance_tol) {
  if (!(p >= 1.0 && p <= 2.0)) {
    throw ValidationError("ffb2_check: p must lie in [1, 2]");
  }
  const InvarianceReport inv = check_invariance(k, partition, invariance_tol);
  if (!inv.verdict) {
    throw ValidationError("ffb2_check: kernel is not invariant (off-block mass " +
                          std::to_string(inv.max_offblock) + ")");
  }
  Ffb2Report r;
  r.p = p;
  r.p_dual = p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
  r.lhs = symbol_lp_norm(inv.extracted, r.p_dual);
  r.rhs = mixed_norm(k, r.p_dual, p).lp1p2;
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : (r.lhs > 0.0 ? INFINITY : 0.0);
  r.holds = r.lhs <= r.rhs * kFfb2FlagFactor;
  r.invariance_offblock = inv.max_offblock;
  return r;
}

CMatrix q_matrix(const Partition& partition, std::size_t level, const Point& x,
                 const Point& y) {
  const std::size_t d = partition.level(level).dim;
  std::vector<Complex> ex(d);
  std::vector<Complex> ey(d);
  for (std::size_t k = 0; k < d; ++k) {
    ex[k] = eval_basis(partition, level, k, x);
    ey[k] = eval_basis(partition, level, k, y);
  }
  // Tr(sigma Q) = sum_{m,k} sigma_{mk} Q_{km} = sum sigma_{mk} e^m(x) conj(e^k(y)).
  CMatrix q(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) q(i, j) = std::conj(ey[i]) * ex[j];
  }
  return q;
}

void write_kernel(std::ostream& out, const GridKernel& k) {
  require_valid_kernel(k, "write_kernel");
  const QuadratureGrid& g = *k.grid;
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kKernelVersion);
  put<std::uint32_t>(out, g.manifold.is_su2() ? 1u : 0u);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.manifold.dim()));
  put<std::uint64_t>(out, g.size());
  put<double>(out, g.band_limit);
  for (const Point& p : g.nodes) {
    for (double c : p) put<double>(out, c);
  }
  for (double w : g.weights) put<double>(out, w);
  for (const Complex& z : k.values.data()) {
    put<double>(out, z.real());
    put<double>(out, z.imag());
  }
  if (!out) throw ValidationError("write_kernel: write failed");
}

GridKernel read_kernel(std::istream& in) {
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw ValidationError("read_kernel: not a kernel file");
  }
  if (get<std::uint32_t>(in) != kKernelVersion) {
    throw ValidationError("read_kernel: unsupported kernel file version");
  }
  const std::uint32_t kind = get<std::uint32_t>(in);
  const std::uint32_t n = get<std::uint32_t>(in);
  const std::uint64_t count = get<std::uint64_t>(in);
  auto grid = std::make_shared<QuadratureGrid>();
  grid->band_limit = get<double>(in);
  if (kind > 1 || (kind == 0 && (n < 1 || n > 3))) {
    throw ValidationError("read_kernel: unknown manifold in header");
  }
  grid->manifold = kind == 1 ? ManifoldId::SU2() : ManifoldId::Torus(static_cast<int>(n));
  if (count > max_kernel_nodes(grid->manifold)) {
    throw ValidationError("read_kernel: node count exceeds the kernel node cap");
  }
  grid->nodes.resize(count);
  for (Point& p : grid->nodes) {
    for (double& c : p) c = get<double>(in);
  }
  grid->weights.resize(count);
  for (double& w : grid->weights) w = get<double>(in);
  CMatrix values(count, count);
  for (Complex& z : values.data()) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    z = Complex(re, im);
  }
  GridKernel k{std::move(grid), std::move(values)};
  require_valid_kernel(k, "read_kernel");
  return k;
}

}  // namespace specmult
