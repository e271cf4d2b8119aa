// SPDX-License-Identifier: Apache-2.0
#ifndef SPECMULT_OPERATORS_H_
#define SPECMULT_OPERATORS_H_

#include <memory>
#include <vector>

#include "specmult/fourier.h"
#include "specmult/symbol.h"

namespace specmult {

// Concrete operators realized in physical space: coefficients are synthesized
// on the grid (or at shifted points), transformed there, and analysed again
// by quadrature. Used as black boxes for check_invariance.

// f(x) -> f(x - shift) on the torus.
CoefficientMap torus_translation(std::shared_ptr<const FourierTransform> transform,
                                 std::vector<double> shift);

// f(x) -> e^{2 pi i j.x} f(x) on the torus.
CoefficientMap character_multiplication(
    std::shared_ptr<const FourierTransform> transform, std::vector<int> j);

// f(x) -> g(x) f(x) for sampled g.
CoefficientMap pointwise_multiplication(
    std::shared_ptr<const FourierTransform> transform, std::vector<Complex> g);

// f(x) -> f(g^{-1} x) on SU(2); commutes with right translations.
CoefficientMap su2_left_translation(std::shared_ptr<const FourierTransform> transform,
                                    Point g);

// f(x) -> f(x g) on SU(2); left-invariant with group symbol tau(xi) = xi(g).
CoefficientMap su2_right_translation(std::shared_ptr<const FourierTransform> transform,
                                     Point g);

}  // namespace specmult

#endif  // SPECMULT_OPERATORS_H_
