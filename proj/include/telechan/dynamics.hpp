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

#ifndef TELECHAN_DYNAMICS_HPP
#define TELECHAN_DYNAMICS_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "telechan/qcore.hpp"

namespace telechan {

/// Exchange coupling J and xy-anisotropy Delta of the XY chain, in units of inverse time.
struct ChannelParams {
  double j = 0.0;
  double delta = 0.0;
};

enum class Environment { Dissipative, Noisy, Dephasing };

std::string_view to_string(Environment env);
/// Parses "dissipative", "noisy" or "dephasing"; throws std::invalid_argument.
Environment parse_environment(std::string_view name);

/// Environment kind plus the per-qubit coupling rate gamma >= 0.
struct EnvironmentSpec {
  Environment kind = Environment::Dissipative;
  double gamma = 0.0;

  EnvironmentSpec() = default;
  EnvironmentSpec(Environment k, double g);
};

/// The eight entries of a two-qubit X state (diagonal plus anti-diagonal),
/// indexed 1..4 over |00>,|01>,|10>,|11>.
struct XStateElements {
  Complex r11, r22, r33, r44;
  Complex r14, r41, r23, r32;

  /// Extracts the X entries; throws InvalidState if any off-X entry exceeds kStateTolerance.
  static XStateElements from_matrix(const Mat4& m);
  Mat4 to_matrix() const;
  double max_abs_diff(const XStateElements& other) const;
};

/// Closed-form propagator coefficients for one environment branch at time t.
/// Dissipative and noisy branches fill c1, c2, b1, b2 and decayed_a; the
/// dephasing branch fills kappa, nu, d[0..3] and e[0..3].
struct AnalyticCoefficients {
  Environment kind = Environment::Dissipative;
  double rate = 0.0;  // gamma for dissipative, 2 gamma for noisy
  Complex c1, c2, b1, b2;
  Complex decayed_a;  // a(t) * exp(-2 rate t), i.e. rho11(t)
  Complex kappa, nu;
  std::array<Complex, 4> d{};
  std::array<Complex, 4> e{};
};

/// H = (J+Delta)/2 sx sx + (J-Delta)/2 sy sy; entries (1,4),(4,1) = Delta and (2,3),(3,2) = J.
Mat4 build_hamiltonian(const ChannelParams& p);

/// Jump operators of one environment kind, each already embedded on site A or B.
std::vector<Mat4> jump_operators(Environment kind);

/// Lindblad generator  -i[H, rho] + (gamma/2) sum_sites sum_n (2 c rho c^+ - {c^+ c, rho}).
Mat4 lindblad_rhs(const Mat4& rho, const ChannelParams& p, const EnvironmentSpec& env);
Mat4 lindblad_rhs(const DensityMatrix& rho, const ChannelParams& p, const EnvironmentSpec& env);

/// 16x16 matrix of the generator acting on row-major vec(rho).
using Liouvillian = Eigen::Matrix<Complex, 16, 16>;
Liouvillian build_liouvillian(const ChannelParams& p, const EnvironmentSpec& env);

/// 1e-3 / max(1, |J| + |Delta|, gamma).
double default_step(const ChannelParams& p, const EnvironmentSpec& env);

/// The integrated state failed density-matrix validation.
class IntegrationDiverged : public std::runtime_error {
 public:
  IntegrationDiverged(const std::string& what, double max_violation, double time)
      : std::runtime_error(what), max_violation_(max_violation), time_(time) {}
  double max_violation() const { return max_violation_; }
  double time() const { return time_; }

 private:
  double max_violation_;
  double time_;
};

/// Fixed-step classical RK4 on the 16 complex entries of rho. The requested
/// step is shortened so that an integer number of steps lands exactly on t.
DensityMatrix integrate(const DensityMatrix& rho0, const ChannelParams& p, const EnvironmentSpec& env,
                        double t, std::optional<double> step = std::nullopt);

/// Integrates through an increasing time grid in one pass, returning the
/// state at each grid time. Grid must be non-negative and non-decreasing.
std::vector<DensityMatrix> integrate_grid(const DensityMatrix& rho0, const ChannelParams& p,
                                          const EnvironmentSpec& env, std::span<const double> times,
                                          std::optional<double> step = std::nullopt);

AnalyticCoefficients analytic_coefficients(const XStateElements& x0, const ChannelParams& p,
                                           const EnvironmentSpec& env, double t);

/// Closed-form X-state evolution for the three environments.
XStateElements evolve_analytic(const XStateElements& x0, const ChannelParams& p, const EnvironmentSpec& env,
                               double t);

}  // namespace telechan

#endif  // TELECHAN_DYNAMICS_HPP
