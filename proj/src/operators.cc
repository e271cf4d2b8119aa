// SPDX-License-Identifier: Apache-2.0
#include "specmult/operators.h"

#include <cmath>
#include <functional>
#include <numbers>

#include "specmult/error.h"

namespace specmult {

namespace {

// Resamples the band-limited synthesis of c at moved(node) for every node.
CoefficientMap resample(std::shared_ptr<const FourierTransform> transform,
                        std::function<Point(const Point&)> moved) {
  return [transform = std::move(transform),
          moved = std::move(moved)](const FourierCoefficients& c) {
    const QuadratureGrid& grid = *transform->grid();
    GridFunction f{transform->grid(), std::vector<Complex>(grid.size())};
    for (std::size_t i = 0; i < grid.size(); ++i) {
      f.values[i] = transform->evaluate(c, moved(grid.nodes[i]));
    }
    return transform->forward(f);
  };
}

void require_torus(const FourierTransform& t, std::size_t dim, const char* who) {
  const ManifoldId& id = t.partition()->manifold();
  if (!id.is_torus() || static_cast<std::size_t>(id.dim()) != dim) {
    throw ValidationError(std::string(who) + ": needs a torus of dimension " +
                          std::to_string(dim));
  }
}

void require_su2(const FourierTransform& t, const char* who) {
  if (!t.partition()->manifold().is_su2()) {
    throw ValidationError(std::string(who) + ": needs SU(2)");
  }
}

}  // namespace

CoefficientMap torus_translation(std::shared_ptr<const FourierTransform> transform,
                                 std::vector<double> shift) {
  require_torus(*transform, shift.size(), "torus_translation");
  return resample(std::move(transform), [shift = std::move(shift)](const Point& x) {
    Point y = x;
    for (std::size_t a = 0; a < shift.size(); ++a) y[a] -= shift[a];
    return y;
  });
}

CoefficientMap pointwise_multiplication(
    std::shared_ptr<const FourierTransform> transform, std::vector<Complex> g) {
  if (g.size() != transform->grid()->size()) {
    throw ValidationError("pointwise_multiplication: multiplier has the wrong length");
  }
  return [transform = std::move(transform), g = std::move(g)](const FourierCoefficients& c) {
    GridFunction f = transform->inverse(c);
    for (std::size_t i = 0; i < g.size(); ++i) f.values[i] *= g[i];
    return transform->forward(f);
  };
}

CoefficientMap character_multiplication(
    std::shared_ptr<const FourierTransform> transform, std::vector<int> j) {
  require_torus(*transform, j.size(), "character_multiplication");
  const QuadratureGrid& grid = *transform->grid();
  std::vector<Complex> g(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double phase = 0.0;
    for (std::size_t a = 0; a < j.size(); ++a) phase += j[a] * grid.nodes[i][a];
    g[i] = std::polar(1.0, 2.0 * std::numbers::pi * phase);
  }
  return pointwise_multiplication(std::move(transform), std::move(g));
}

CoefficientMap su2_left_translation(std::shared_ptr<const FourierTransform> transform,
                                    Point g) {
  require_su2(*transform, "su2_left_translation");
  const Point g_inv = su2_inverse(g);
  return resample(std::move(transform),
                  [g_inv](const Point& x) { return su2_multiply(g_inv, x); });
}

CoefficientMap su2_right_translation(std::shared_ptr<const FourierTransform> transform,
                                     Point g) {
  require_su2(*transform, "su2_right_translation");
  return resample(std::move(transform),
                  [g](const Point& x) { return su2_multiply(x, g); });
}

}  // namespace specmult
