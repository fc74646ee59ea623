#pragma once

// Constants fixed by calibration against normative series routes, pinned here
// and asserted by regression tests. Do not edit without re-running the
// calibration checks in the test suite.

#include "common.hpp"

namespace harmosc::calibrated {

// Prefactor of the closed-form twisted heat kernel on C^d. The eigenfunction
// series (2 pi)^{-d} sum_k e^{-(2k+d)t} phi_k sums to (4 pi)^{-d} (sinh t)^{-d}
// exp(-|z|^2 coth(t)/4); calibration reproduces (4 pi)^{-d} to 1e-12.
inline double special_heat_prefactor(int d) { return std::pow(4.0 * pi, -d); }

// Transference constant linking the d-dimensional oscillator semigroup acting
// on g(|x|) Y_m(x/|x|) to the half-line semigroup of type alpha + m acting on
// |x|^{-m} g. With the orthonormal kernel conventions used throughout this
// library the calibrated value is exactly 1.
inline double hecke_bochner_constant(int /*d*/) { return 1.0; }

}  // namespace harmosc::calibrated
