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

#include "telechan/explab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <thread>

#include "telechan/metrics.hpp"

namespace telechan {

namespace {

void check_bell(int i) {
  if (i < 0 || i > 3) throw std::invalid_argument("initial Bell index out of range: " + std::to_string(i));
}

void check_strictly_increasing(const std::vector<double>& g, const char* name) {
  if (g.empty()) throw std::invalid_argument(std::string(name) + " must not be empty");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) throw std::invalid_argument(std::string(name) + " contains a non-finite value");
    if (i > 0 && !(g[i] > g[i - 1])) throw std::invalid_argument(std::string(name) + " must be strictly increasing");
  }
}

using StateValue = std::function<double(const DensityMatrix&)>;

constexpr double kRootConfirm = 1e-12;

struct Samples {
  std::vector<double> t;
  std::vector<double> v;
  std::vector<DensityMatrix> states;  // integrator only: anchors for refinement
};

long choose_samples(const ChannelModel& model, const Bracket& b, const CriticalOptions& opts) {
  if (opts.samples) return std::max(*opts.samples, 3L);
  const double rate = std::max({model.env().gamma, 2.0 * std::abs(model.params().delta),
                                2.0 * std::abs(model.params().j), 1e-12});
  const double wanted = std::ceil((b.hi - b.lo) * rate * 16.0);
  if (model.engine() == Engine::Analytic) return static_cast<long>(std::clamp(wanted, 4096.0, 4.0e6));
  return static_cast<long>(std::clamp(wanted, 512.0, 20000.0));
}

Samples sample(const ChannelModel& model, const Bracket& b, long n, const StateValue& value) {
  Samples s;
  s.t.resize(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) {
    s.t[static_cast<std::size_t>(k)] = b.lo + (b.hi - b.lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  }
  s.t.back() = b.hi;
  s.v.reserve(s.t.size());
  if (model.engine() == Engine::Analytic) {
    for (double t : s.t) s.v.push_back(value(model.state_at(t)));
  } else {
    s.states = model.states_on(s.t);
    for (const auto& rho : s.states) s.v.push_back(value(rho));
  }
  return s;
}

// Evaluates value(rho(t)) for t at or after sample index `anchor`.
std::function<double(double)> evaluator(const ChannelModel& model, const Samples& s, std::size_t anchor,
                                        const StateValue& value) {
  if (model.engine() == Engine::Analytic) {
    return [&model, value](double t) { return value(model.state_at(t)); };
  }
  const double ta = s.t[anchor];
  const DensityMatrix rho_a = s.states[anchor];
  return [&model, value, ta, rho_a](double t) { return value(model.state_from(ta, rho_a, t)); };
}

Bracket resolve_bracket(const ChannelModel& model, const CriticalOptions& opts) {
  const Bracket b = opts.bracket.value_or(default_bracket(model.env()));
  if (!(b.lo >= 0.0) || !(b.hi > b.lo) || !std::isfinite(b.hi)) {
    throw std::invalid_argument("bracket must satisfy 0 <= lo < hi < inf");
  }
  return b;
}

// First sign change, refined by bisection between the bracketing samples.
CriticalTimeResult first_root(const ChannelModel& model, const CriticalOptions& opts, CriticalKind kind,
                              const StateValue& value, const std::function<bool(double)>& below) {
  const Bracket b = resolve_bracket(model, opts);
  const Samples s = sample(model, b, choose_samples(model, b, opts), value);
  CriticalTimeResult r;
  r.kind = kind;
  // A root counts once the value is clearly past it; round-off hovering at
  // zero far out in a decay does not.
  const auto confirmed = std::find_if(s.v.begin(), s.v.end(), [](double v) { return v < -kRootConfirm; });
  if (confirmed == s.v.end()) {
    r.status = CriticalStatus::NoneInBracket;
    r.value_at_t = s.v.back();
    return r;
  }
  auto k = static_cast<std::size_t>(confirmed - s.v.begin());
  while (k > 0 && below(s.v[k - 1])) --k;
  r.status = CriticalStatus::Found;
  if (k == 0) {
    r.t = s.t[0];
    r.value_at_t = s.v[0];
    return r;
  }
  const auto f = evaluator(model, s, k - 1, value);
  double lo = s.t[k - 1];
  double hi = s.t[k];
  const double tol = 1e-10 * (hi - lo);
  for (int it = 0; it < 60 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (below(f(mid))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  r.t = 0.5 * (lo + hi);
  r.value_at_t = f(*r.t);
  return r;
}

double golden_section(const std::function<double(double)>& f, double a, double b, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

// Interior minimum, or the lower edge when no interior local minimum reaches
// within 1e-9 of the edge values. A local minimum must rise on both sides;
// flat round-off plateaus at late times are not minima.
CriticalTimeResult minimum(const ChannelModel& model, const CriticalOptions& opts, CriticalKind kind,
                           const StateValue& value) {
  const Bracket b = resolve_bracket(model, opts);
  const Samples s = sample(model, b, choose_samples(model, b, opts), value);
  const std::size_t n = s.v.size();
  constexpr double kRise = 1e-12;

  std::vector<double> suffix_max(n);
  suffix_max[n - 1] = s.v[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) suffix_max[i] = std::max(suffix_max[i + 1], s.v[i]);

  std::optional<std::size_t> best;
  double prefix_max = s.v[0];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double v = s.v[i];
    const bool local = v <= s.v[i - 1] && v <= s.v[i + 1] && (v < s.v[i - 1] || v < s.v[i + 1]);
    if (local && prefix_max > v + kRise && suffix_max[i + 1] > v + kRise && (!best || v < s.v[*best])) best = i;
    prefix_max = std::max(prefix_max, v);
  }

  CriticalTimeResult r;
  r.kind = kind;
  const bool hi_edge = s.v[n - 1] <= s.v[0];
  const double edge_value = hi_edge ? s.v[n - 1] : s.v[0];
  if (best) {
    const auto f = evaluator(model, s, *best - 1, value);
    const double t = golden_section(f, s.t[*best - 1], s.t[*best + 1], 1e-8);
    const double ft = f(t);
    if (ft <= edge_value + 1e-9) {
      r.status = CriticalStatus::Found;
      r.t = t;
      r.value_at_t = ft;
      return r;
    }
  }
  r.status = CriticalStatus::EdgeMinimum;
  r.t = hi_edge ? s.t[n - 1] : s.t[0];
  r.value_at_t = edge_value;
  return r;
}

int branch_for(const BellOverlaps& chi, std::optional<int> m_override) {
  return m_override.value_or(fully_entangled_fraction(chi).m_star);
}

// F - 2/3 written as (2 chi - 1)/3 to keep the sign exact near the classical limit.
double fidelity_excess(const DensityMatrix& rho, std::optional<int> m_override) {
  const BellOverlaps chi = bell_overlaps(rho);
  const double top = m_override ? chi[*m_override] : fully_entangled_fraction(chi).value;
  return (2.0 * top - 1.0) / 3.0;
}

void check_branch_override(std::optional<int> m) {
  if (m && (*m < 0 || *m > 3)) throw std::invalid_argument("Pauli branch out of range: " + std::to_string(*m));
}

}  // namespace

std::string_view to_string(Engine engine) {
  switch (engine) {
    case Engine::Analytic: return "analytic";
    case Engine::Integrator: return "integrator";
    case Engine::Both: return "both";
  }
  return "unknown";
}

Engine parse_engine(std::string_view name) {
  if (name == "analytic") return Engine::Analytic;
  if (name == "integrator") return Engine::Integrator;
  if (name == "both") return Engine::Both;
  throw std::invalid_argument("unknown engine: " + std::string(name));
}

ChannelModel::ChannelModel(int initial_bell, EnvironmentSpec env, ChannelParams params, Engine engine,
                           std::optional<double> step)
    : bell_((check_bell(initial_bell), initial_bell)),
      env_(env),
      params_(params),
      engine_(engine),
      step_(step),
      rho0_(DensityMatrix::from_bell(initial_bell)),
      x0_(XStateElements::from_matrix(bell(initial_bell))) {
  if (step && !(*step > 0.0)) throw std::invalid_argument("integration step must be > 0");
}

DensityMatrix ChannelModel::analytic_state(double t) const {
  return DensityMatrix(evolve_analytic(x0_, params_, env_, t).to_matrix());
}

DensityMatrix ChannelModel::integrated_state(double t) const { return integrate(rho0_, params_, env_, t, step_); }

DensityMatrix ChannelModel::state_at(double t) const {
  return engine_ == Engine::Analytic ? analytic_state(t) : integrated_state(t);
}

std::vector<DensityMatrix> ChannelModel::states_on(std::span<const double> times) const {
  if (engine_ != Engine::Analytic) return integrate_grid(rho0_, params_, env_, times, step_);
  std::vector<DensityMatrix> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(analytic_state(t));
  return out;
}

DensityMatrix ChannelModel::state_from(double t_a, const DensityMatrix& rho_a, double t) const {
  if (engine_ == Engine::Analytic) return analytic_state(t);
  if (t < t_a) throw std::invalid_argument("state_from: target time precedes the anchor");
  return integrate(rho_a, params_, env_, t - t_a, step_);
}

double ChannelModel::entanglement_signed(const DensityMatrix& rho) const {
  if (engine_ == Engine::Analytic) return concurrence_x_signed(XStateElements::from_matrix(rho.mat()));
  return concurrence_signed(rho);
}

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::F: return "F";
    case Quantity::C: return "C";
    case Quantity::P: return "P";
    case Quantity::Chi: return "chi";
    case Quantity::Shrink: return "shrink";
    case Quantity::BlochCoeff: return "blochcoeff";
  }
  return "unknown";
}

Quantity parse_quantity(std::string_view name) {
  for (Quantity q : all_quantities()) {
    if (to_string(q) == name) return q;
  }
  throw std::invalid_argument("unknown quantity: " + std::string(name));
}

std::vector<Quantity> all_quantities() {
  return {Quantity::F, Quantity::C, Quantity::P, Quantity::Chi, Quantity::Shrink, Quantity::BlochCoeff};
}

void SweepSpec::validate() const {
  check_bell(initial_bell);
  check_branch_override(m_override);
  check_strictly_increasing(t_grid, "t_grid");
  if (t_grid.front() < 0.0) throw std::invalid_argument("t_grid must be non-negative");
  if (!delta_grid.empty()) check_strictly_increasing(delta_grid, "delta_grid");
  if (step && !(*step > 0.0)) throw std::invalid_argument("step must be > 0");
  if (quantities.empty()) throw std::invalid_argument("at least one quantity is required");
}

std::vector<double> SweepSpec::deltas() const {
  return delta_grid.empty() ? std::vector<double>{params.delta} : delta_grid;
}

SweepRecord make_record(double delta, double t, const DensityMatrix& rho, std::optional<int> m_override) {
  check_branch_override(m_override);
  SweepRecord r;
  r.delta = delta;
  r.t = t;
  const BellOverlaps chi = bell_overlaps(rho);
  const FullyEntangledFraction fef = fully_entangled_fraction(chi);
  const int m = m_override.value_or(fef.m_star);
  r.chi = chi.chi;
  r.m_star = fef.m_star;
  r.F = average_fidelity(chi, m);
  r.C = concurrence(rho);
  r.P = purity(rho);
  const auto coeff = bloch_coefficients(chi, m);
  r.coeff_x = coeff[0];
  r.coeff_y = coeff[1];
  r.coeff_z = coeff[2];
  r.delta_x = std::abs(coeff[0]);
  r.delta_y = std::abs(coeff[1]);
  r.delta_z = std::abs(coeff[2]);
  return r;
}

namespace {

std::vector<SweepRecord> sweep_one_delta(const SweepSpec& spec, double delta) {
  ChannelParams p = spec.params;
  p.delta = delta;
  std::vector<SweepRecord> out;
  out.reserve(spec.t_grid.size());

  std::vector<DensityMatrix> analytic;
  std::vector<DensityMatrix> integrated;
  if (spec.engine != Engine::Integrator) {
    const ChannelModel model(spec.initial_bell, spec.env, p, Engine::Analytic, spec.step);
    for (double t : spec.t_grid) {
      try {
        analytic.push_back(model.analytic_state(t));
      } catch (const InvalidState& e) {
        throw SweepError(std::string("analytic state invalid: ") + e.what(), delta, t);
      }
    }
  }
  if (spec.engine != Engine::Analytic) {
    const ChannelModel model(spec.initial_bell, spec.env, p, Engine::Integrator, spec.step);
    try {
      integrated = model.states_on(spec.t_grid);
    } catch (const IntegrationDiverged& e) {
      throw SweepError(e.what(), delta, e.time());
    }
  }

  for (std::size_t k = 0; k < spec.t_grid.size(); ++k) {
    const double t = spec.t_grid[k];
    const DensityMatrix& rho = spec.engine == Engine::Analytic ? analytic[k] : integrated[k];
    try {
      SweepRecord r = make_record(delta, t, rho, spec.m_override);
      if (spec.engine == Engine::Both) {
        r.engine_disagreement = (analytic[k].mat() - integrated[k].mat()).cwiseAbs().maxCoeff();
      }
      out.push_back(r);
    } catch (const NumericalFailure& e) {
      throw SweepError(e.what(), delta, t);
    }
  }
  return out;
}

}  // namespace

std::vector<SweepRecord> sweep(const SweepSpec& spec) {
  spec.validate();
  const std::vector<double> deltas = spec.deltas();
  std::vector<std::vector<SweepRecord>> per_delta(deltas.size());
  std::vector<std::exception_ptr> errors(deltas.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < deltas.size(); i = next++) {
      try {
        per_delta[i] = sweep_one_delta(spec, deltas[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_workers =
      std::min<std::size_t>(deltas.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::jthread> pool;
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  pool.clear();

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<SweepRecord> out;
  out.reserve(deltas.size() * spec.t_grid.size());
  for (auto& block : per_delta) out.insert(out.end(), block.begin(), block.end());
  return out;
}

std::string_view to_string(CriticalKind kind) {
  switch (kind) {
    case CriticalKind::ClassicalCrossing: return "classical";
    case CriticalKind::FidelityMinimum: return "fmin";
    case CriticalKind::EntanglementSuddenDeath: return "esd";
    case CriticalKind::ShrinkMinimum: return "shrinkmin";
  }
  return "unknown";
}

std::string_view to_string(CriticalStatus status) {
  switch (status) {
    case CriticalStatus::Found: return "found";
    case CriticalStatus::NoneInBracket: return "none-in-bracket";
    case CriticalStatus::EdgeMinimum: return "edge-minimum";
  }
  return "unknown";
}

Bracket default_bracket(const EnvironmentSpec& env) {
  if (!(env.gamma > 0.0)) throw std::invalid_argument("default bracket needs gamma > 0; pass an explicit bracket");
  return {0.0, 200.0 / env.gamma};
}

CriticalTimeResult find_classical_crossing(const ChannelModel& model, const CriticalOptions& opts) {
  check_branch_override(opts.m_override);
  const auto m = opts.m_override;
  return first_root(
      model, opts, CriticalKind::ClassicalCrossing, [m](const DensityMatrix& rho) { return fidelity_excess(rho, m); },
      [](double v) { return v < 0.0; });
}

CriticalTimeResult find_fidelity_minimum(const ChannelModel& model, const CriticalOptions& opts) {
  check_branch_override(opts.m_override);
  const auto m = opts.m_override;
  return minimum(model, opts, CriticalKind::FidelityMinimum, [m](const DensityMatrix& rho) {
    const BellOverlaps chi = bell_overlaps(rho);
    return average_fidelity(chi, branch_for(chi, m));
  });
}

CriticalTimeResult find_esd_time(const ChannelModel& model, const CriticalOptions& opts) {
  return first_root(
      model, opts, CriticalKind::EntanglementSuddenDeath,
      [&model](const DensityMatrix& rho) { return model.entanglement_signed(rho); },
      [](double v) { return v <= 0.0; });
}

CriticalTimeResult find_shrink_minimum(const ChannelModel& model, const CriticalOptions& opts) {
  check_branch_override(opts.m_override);
  if (opts.axis < 0 || opts.axis > 2) throw std::invalid_argument("shrink axis must be 0, 1 or 2");
  const auto m = opts.m_override;
  const auto axis = static_cast<std::size_t>(opts.axis);
  return minimum(model, opts, CriticalKind::ShrinkMinimum, [m, axis](const DensityMatrix& rho) {
    const BellOverlaps chi = bell_overlaps(rho);
    return shrink_factors(chi, branch_for(chi, m))[axis];
  });
}

BlochMesh bloch_mesh(const ChannelModel& model, double t, std::optional<int> m, int n_theta, int n_phi) {
  check_branch_override(m);
  if (n_theta < 2 || n_phi < 3) throw std::invalid_argument("Bloch mesh needs at least 2 x 3 points");
  const BellOverlaps chi = bell_overlaps(model.state_at(t));
  BlochMesh mesh;
  mesh.n_theta = n_theta;
  mesh.n_phi = n_phi;
  mesh.m_used = branch_for(chi, m);
  const auto coeff = bloch_coefficients(chi, mesh.m_used);
  mesh.semi_axes = {std::abs(coeff[0]), std::abs(coeff[1]), std::abs(coeff[2])};
  mesh.points.reserve(static_cast<std::size_t>(n_theta) * static_cast<std::size_t>(n_phi));
  for (int i = 0; i < n_theta; ++i) {
    const double theta = std::numbers::pi * i / (n_theta - 1);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / n_phi;
      const BlochVector in = bloch_of(PureQubit(theta, phi));
      mesh.points.push_back({theta, phi, coeff[0] * in.x, coeff[1] * in.y, coeff[2] * in.z});
    }
  }
  return mesh;
}

}  // namespace telechan
