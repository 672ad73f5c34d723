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

#include "telechan/teleport.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace telechan {

namespace {

void check_branch(int m) {
  if (m < 0 || m > 3) throw std::invalid_argument("Pauli branch out of range: " + std::to_string(m));
}

// Fixed-order pairwise sum so quadrature totals do not depend on accumulation order.
double pairwise_sum(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

}  // namespace

BellOverlaps bell_overlaps(const DensityMatrix& rho_c) {
  BellOverlaps out;
  for (int i = 0; i < 4; ++i) {
    out.chi[static_cast<std::size_t>(i)] = (bell(i) * rho_c.mat()).trace().real();
  }
  return out;
}

Mat2 output_state(const BellOverlaps& chi, const PureQubit& input, int m) {
  check_branch(m);
  const Mat2 rho_in = pure_to_density(input);
  Mat2 out = Mat2::Zero();
  for (int k = 0; k < 4; ++k) {
    const Mat2 s = pauli(k);
    out += chi.shifted(k, m) * (s * rho_in * s);
  }
  return out;
}

Mat2 output_state(const DensityMatrix& rho_c, const PureQubit& input, int m) {
  return output_state(bell_overlaps(rho_c), input, m);
}

double fidelity(const PureQubit& input, const Mat2& rho_out) {
  const Eigen::Vector2cd k = input.ket();
  return (k.adjoint() * rho_out * k)(0, 0).real();
}

double average_fidelity(const BellOverlaps& chi, int m) {
  check_branch(m);
  return (2.0 * chi[m] + 1.0) / 3.0;
}

FullyEntangledFraction fully_entangled_fraction(const BellOverlaps& chi) {
  FullyEntangledFraction f{chi[0], 0};
  for (int m = 1; m < 4; ++m) {
    if (chi[m] > f.value) f = {chi[m], m};
  }
  return f;
}

double max_average_fidelity(const BellOverlaps& chi) {
  return (2.0 * fully_entangled_fraction(chi).value + 1.0) / 3.0;
}

std::array<double, 3> bloch_coefficients(const BellOverlaps& chi, int m) {
  check_branch(m);
  const double c0 = chi.shifted(0, m);
  const double c1 = chi.shifted(1, m);
  const double c2 = chi.shifted(2, m);
  const double c3 = chi.shifted(3, m);
  return {c0 + c1 - c2 - c3, c0 - c1 + c2 - c3, c0 - c1 - c2 + c3};
}

std::array<double, 3> shrink_factors(const BellOverlaps& chi, int m) {
  const auto c = bloch_coefficients(chi, m);
  return {std::abs(c[0]), std::abs(c[1]), std::abs(c[2])};
}

double average_fidelity_quadrature(const DensityMatrix& rho_c, int m, int n_theta, int n_phi) {
  check_branch(m);
  if (n_theta < 8 || n_phi < 8) throw std::invalid_argument("quadrature grid must be at least 8x8");
  const BellOverlaps chi = bell_overlaps(rho_c);
  const double du = 2.0 / n_theta;
  const double dphi = 2.0 * std::numbers::pi / n_phi;
  std::vector<double> rows(static_cast<std::size_t>(n_theta));
  std::vector<double> cells(static_cast<std::size_t>(n_phi));
  for (int i = 0; i < n_theta; ++i) {
    const double u = -1.0 + (i + 0.5) * du;
    const double theta = std::acos(u);
    for (int j = 0; j < n_phi; ++j) {
      const PureQubit q(theta, (j + 0.5) * dphi);
      cells[static_cast<std::size_t>(j)] = fidelity(q, output_state(chi, q, m));
    }
    rows[static_cast<std::size_t>(i)] = pairwise_sum(cells.data(), cells.size());
  }
  // Area element: du dphi / (4 pi).
  return pairwise_sum(rows.data(), rows.size()) * du * dphi / (4.0 * std::numbers::pi);
}

TeleportReport teleport_report(const DensityMatrix& rho_c, std::optional<int> m_override) {
  TeleportReport r;
  r.chi = bell_overlaps(rho_c);
  const FullyEntangledFraction f = fully_entangled_fraction(r.chi);
  r.fef = f.value;
  r.m_star = f.m_star;
  r.m_used = m_override.value_or(f.m_star);
  check_branch(r.m_used);
  for (int m = 0; m < 4; ++m) r.avg_fidelity_per_m[static_cast<std::size_t>(m)] = average_fidelity(r.chi, m);
  r.max_avg_fidelity = (2.0 * f.value + 1.0) / 3.0;
  r.bloch_coeffs = bloch_coefficients(r.chi, r.m_used);
  r.shrink = shrink_factors(r.chi, r.m_used);
  return r;
}

}  // namespace telechan
