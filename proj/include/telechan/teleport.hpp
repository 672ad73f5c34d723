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

#ifndef TELECHAN_TELEPORT_HPP
#define TELECHAN_TELEPORT_HPP

#include <array>
#include <optional>

#include "telechan/qcore.hpp"

namespace telechan {

/// Bell-basis populations chi_i = <Bell_i| rho |Bell_i> of a two-qubit resource.
struct BellOverlaps {
  std::array<double, 4> chi{};

  double operator[](int i) const { return chi[static_cast<std::size_t>(i)]; }
  /// chi_k^{(m)} = chi_{(k + m) mod 4}.
  double shifted(int k, int m) const { return chi[static_cast<std::size_t>((k + m) % 4)]; }
};

BellOverlaps bell_overlaps(const DensityMatrix& rho_c);

/// Output of the standard protocol on Pauli branch m:
/// sum_k chi_{(k+m) mod 4} sigma^k rho_in sigma^k.
Mat2 output_state(const BellOverlaps& chi, const PureQubit& input, int m);
Mat2 output_state(const DensityMatrix& rho_c, const PureQubit& input, int m);

/// <phi_in| rho_out |phi_in>.
double fidelity(const PureQubit& input, const Mat2& rho_out);

/// (2 chi_m + 1) / 3.
double average_fidelity(const BellOverlaps& chi, int m);

struct FullyEntangledFraction {
  double value = 0.0;
  int m_star = 0;  // smallest index attaining the maximum
};

FullyEntangledFraction fully_entangled_fraction(const BellOverlaps& chi);

/// (2 fef + 1) / 3.
double max_average_fidelity(const BellOverlaps& chi);

/// Signed Bloch scaling coefficients (x, y, z) of the branch-m channel.
std::array<double, 3> bloch_coefficients(const BellOverlaps& chi, int m);

/// |bloch_coefficients|, i.e. (delta_x, delta_y, delta_z).
std::array<double, 3> shrink_factors(const BellOverlaps& chi, int m);

/// Average of fidelity over the Bloch sphere using a midpoint grid that is
/// uniform in cos(theta) and phi. Brute-force counterpart of average_fidelity.
double average_fidelity_quadrature(const DensityMatrix& rho_c, int m, int n_theta = 64, int n_phi = 64);

struct TeleportReport {
  BellOverlaps chi;
  int m_star = 0;
  int m_used = 0;  // m_star unless overridden
  std::array<double, 4> avg_fidelity_per_m{};
  double max_avg_fidelity = 0.0;
  double fef = 0.0;
  std::array<double, 3> bloch_coeffs{};
  std::array<double, 3> shrink{};
};

/// Full protocol summary. Bloch coefficients and shrink factors are taken on
/// branch m_override when given, otherwise on m_star.
TeleportReport teleport_report(const DensityMatrix& rho_c, std::optional<int> m_override = std::nullopt);

}  // namespace telechan

#endif  // TELECHAN_TELEPORT_HPP
