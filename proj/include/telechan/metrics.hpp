// Copyright 2026 The Telechan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TELECHAN_METRICS_HPP
#define TELECHAN_METRICS_HPP

#include <array>

#include "telechan/dynamics.hpp"
#include "telechan/qcore.hpp"

namespace telechan {

/// Square roots of the eigenvalues of R = rho (sy sy) rho* (sy sy), in
/// decreasing order. Computed as the singular values of
/// sqrt(rho) (sy sy) conj(sqrt(rho)), which avoids square roots of round-off.
std::array<double, 4> wootters_lambdas(const DensityMatrix& rho);

/// Eigenvalues of R from a general eigen-solver. Throws NumericalFailure when
/// any eigenvalue has an imaginary part above 1e-7.
std::array<double, 4> spin_flip_eigenvalues(const DensityMatrix& rho);

/// lambda1 - lambda2 - lambda3 - lambda4 before clamping at zero.
double concurrence_signed(const DensityMatrix& rho);

/// Wootters concurrence max(0, lambda1 - lambda2 - lambda3 - lambda4).
double concurrence(const DensityMatrix& rho);

/// 2 max(|r14| - sqrt(r22 r33), |r23| - sqrt(r11 r44)) without the clamp at zero.
double concurrence_x_signed(const XStateElements& x);

/// X-state shortcut; agrees with concurrence() on the full matrix.
double concurrence_x(const XStateElements& x);

/// Tr rho^2.
double purity(const DensityMatrix& rho);

}  // namespace telechan

#endif  // TELECHAN_METRICS_HPP
