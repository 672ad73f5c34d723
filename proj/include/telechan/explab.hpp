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

#ifndef TELECHAN_EXPLAB_HPP
#define TELECHAN_EXPLAB_HPP

#include <array>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "telechan/dynamics.hpp"
#include "telechan/qcore.hpp"
#include "telechan/teleport.hpp"

namespace telechan {

enum class Engine { Analytic, Integrator, Both };

std::string_view to_string(Engine engine);
Engine parse_engine(std::string_view name);

/// Channel state rho^c(t) grown from one Bell state, evaluated either by the
/// closed-form X-state propagator or by the RK4 integrator. Engine::Both
/// evaluates through the integrator.
class ChannelModel {
 public:
  ChannelModel(int initial_bell, EnvironmentSpec env, ChannelParams params, Engine engine = Engine::Analytic,
               std::optional<double> step = std::nullopt);

  DensityMatrix state_at(double t) const;
  /// States on a non-decreasing time grid; the integrator walks the grid in one pass.
  std::vector<DensityMatrix> states_on(std::span<const double> times) const;
  /// State at t given the state rho_a at an earlier time t_a.
  DensityMatrix state_from(double t_a, const DensityMatrix& rho_a, double t) const;

  DensityMatrix analytic_state(double t) const;
  DensityMatrix integrated_state(double t) const;

  /// Pre-clamp concurrence: X-state shortcut on the analytic path, Wootters lambdas otherwise.
  double entanglement_signed(const DensityMatrix& rho) const;

  int initial_bell() const { return bell_; }
  const EnvironmentSpec& env() const { return env_; }
  const ChannelParams& params() const { return params_; }
  Engine engine() const { return engine_; }
  std::optional<double> step() const { return step_; }

 private:
  int bell_;
  EnvironmentSpec env_;
  ChannelParams params_;
  Engine engine_;
  std::optional<double> step_;
  DensityMatrix rho0_;
  XStateElements x0_;
};

enum class Quantity { F, C, P, Chi, Shrink, BlochCoeff };

std::string_view to_string(Quantity q);
Quantity parse_quantity(std::string_view name);
std::vector<Quantity> all_quantities();

struct SweepSpec {
  int initial_bell = 0;
  EnvironmentSpec env;
  ChannelParams params;
  std::vector<double> t_grid;
  std::vector<double> delta_grid;  // empty: sweep only params.delta
  Engine engine = Engine::Analytic;
  std::vector<Quantity> quantities = all_quantities();
  std::optional<int> m_override;
  std::optional<double> step;

  /// Throws std::invalid_argument on empty or non-increasing grids and bad indices.
  void validate() const;
  std::vector<double> deltas() const;
};

/// One (delta, t) grid point. F is the average fidelity on the branch in use
/// (m_override if set, otherwise m_star, which gives the maximum).
struct SweepRecord {
  double delta = 0.0;
  double t = 0.0;
  double F = 0.0;
  double C = 0.0;
  double P = 0.0;
  std::array<double, 4> chi{};
  int m_star = 0;
  double delta_x = 0.0;
  double delta_y = 0.0;
  double delta_z = 0.0;
  double coeff_x = 0.0;
  double coeff_y = 0.0;
  double coeff_z = 0.0;
  double engine_disagreement = 0.0;

  bool operator==(const SweepRecord&) const = default;
};

SweepRecord make_record(double delta, double t, const DensityMatrix& rho, std::optional<int> m_override);

/// A grid point failed numerically; carries the offending (delta, t).
class SweepError : public std::runtime_error {
 public:
  SweepError(const std::string& what, double delta, double t) : std::runtime_error(what), delta_(delta), t_(t) {}
  double delta() const { return delta_; }
  double t() const { return t_; }

 private:
  double delta_;
  double t_;
};

/// Records in delta-major, then t, order. Delta values run concurrently.
std::vector<SweepRecord> sweep(const SweepSpec& spec);

enum class CriticalKind { ClassicalCrossing, FidelityMinimum, EntanglementSuddenDeath, ShrinkMinimum };
enum class CriticalStatus { Found, NoneInBracket, EdgeMinimum };

std::string_view to_string(CriticalKind kind);
std::string_view to_string(CriticalStatus status);

struct CriticalTimeResult {
  CriticalKind kind = CriticalKind::ClassicalCrossing;
  CriticalStatus status = CriticalStatus::NoneInBracket;
  std::optional<double> t;  // empty when none-in-bracket
  double value_at_t = 0.0;
};

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

/// [0, 200 / gamma]; throws std::invalid_argument when gamma is zero.
Bracket default_bracket(const EnvironmentSpec& env);

struct CriticalOptions {
  std::optional<Bracket> bracket;
  std::optional<int> m_override;  // fix the Pauli branch instead of maximizing
  int axis = 0;                    // 0,1,2 = x,y,z for ShrinkMinimum
  std::optional<long> samples;     // scan resolution; chosen from the rates when empty
};

/// First time F drops strictly below 2/3, by scan then bisection.
CriticalTimeResult find_classical_crossing(const ChannelModel& model, const CriticalOptions& opts = {});

/// Interior minimum of F by scan then golden-section search; edge-minimum if F is monotone.
CriticalTimeResult find_fidelity_minimum(const ChannelModel& model, const CriticalOptions& opts = {});

/// Smallest root of the pre-clamp concurrence.
CriticalTimeResult find_esd_time(const ChannelModel& model, const CriticalOptions& opts = {});

/// Interior minimum of the shrink factor along opts.axis.
CriticalTimeResult find_shrink_minimum(const ChannelModel& model, const CriticalOptions& opts = {});

struct BlochPoint {
  double theta = 0.0;
  double phi = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct BlochMesh {
  int n_theta = 0;
  int n_phi = 0;
  int m_used = 0;
  std::array<double, 3> semi_axes{};
  std::vector<BlochPoint> points;  // row-major: theta outer, phi inner
};

/// Images of input Bloch vectors under the branch-m teleportation channel.
/// theta spans [0, pi] inclusive; phi spans [0, 2 pi) in n_phi equal steps.
BlochMesh bloch_mesh(const ChannelModel& model, double t, std::optional<int> m, int n_theta, int n_phi);

}  // namespace telechan

#endif  // TELECHAN_EXPLAB_HPP
