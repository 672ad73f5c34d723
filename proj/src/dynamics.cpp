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

#include "telechan/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace telechan {

namespace {

constexpr Complex kI{0.0, 1.0};

Mat2 sigma_minus() { return 0.5 * (pauli(1) - kI * pauli(2)); }
Mat2 sigma_plus() { return 0.5 * (pauli(1) + kI * pauli(2)); }

using Vec16 = Eigen::Matrix<Complex, 16, 1>;

Vec16 vec(const Mat4& m) {
  Vec16 v;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) v(4 * r + c) = m(r, c);
  return v;
}

Mat4 unvec(const Vec16& v) {
  Mat4 m;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m(r, c) = v(4 * r + c);
  return m;
}

// One classical RK4 step of a linear autonomous system y' = L y is exactly
// y <- (I + hL + (hL)^2/2 + (hL)^3/6 + (hL)^4/24) y.
Liouvillian rk4_step_matrix(const Liouvillian& gen, double h) {
  const Liouvillian hl = h * gen;
  const Liouvillian id = Liouvillian::Identity();
  return id + hl * (id + hl * (id + hl * (id + hl / 4.0) / 3.0) / 2.0);
}

void check_integration_args(double t, double step) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("integration time must be finite and >= 0");
  if (!(step > 0.0) || !std::isfinite(step)) throw std::invalid_argument("integration step must be finite and > 0");
}

Vec16 advance(const Vec16& v, const Liouvillian& gen, double span, double step) {
  if (span <= 0.0) return v;
  const double n_real = std::ceil(span / step - 1e-9);
  const long n = std::max(1L, static_cast<long>(n_real));
  const Liouvillian s = rk4_step_matrix(gen, span / static_cast<double>(n));
  Vec16 y = v;
  for (long k = 0; k < n; ++k) y = s * y;
  return y;
}

DensityMatrix checked_state(const Mat4& m, double t) {
  const StateViolation v = measure_violation(m);
  if (!v.within(kStateTolerance)) {
    throw IntegrationDiverged("integrated state at t=" + std::to_string(t) +
                                  " violates density-matrix constraints by " + std::to_string(v.worst()),
                              v.worst(), t);
  }
  return DensityMatrix(m);
}

// sinh(k t) / k * exp(-damp), with the removable singularity at k = 0 filled in.
Complex damped_sinhc(Complex k, double t, double damp) {
  const Complex kt = k * t;
  if (std::abs(kt) < 1e-4) {
    const Complex k2t2 = kt * kt;
    return t * (1.0 + k2t2 / 6.0 + k2t2 * k2t2 / 120.0) * std::exp(-damp);
  }
  return (std::exp(kt - damp) - std::exp(-kt - damp)) / (2.0 * k);
}

// Dephasing coefficient set (d or e) for the 2x2 block driven by coupling g.
// Returns {cosh+, coupling term, coupling term, cosh-} each times exp(-gamma t / 2),
// together with the root k = sqrt(gamma^2 - 16 g^2) / 2.
std::array<Complex, 4> dephasing_block(double gamma, double g, double t, Complex& root) {
  root = std::sqrt(Complex{gamma * gamma - 16.0 * g * g, 0.0}) / 2.0;
  const Complex kt = root * t;
  const double half = gamma * t / 2.0;
  // cosh(kt) e^{-gt/2} and sinh(kt)/k e^{-gt/2}, evaluated without overflow.
  const Complex ch = 0.5 * (std::exp(kt - half) + std::exp(-kt - half));
  const Complex sh = damped_sinhc(root, t, half);
  const Complex d1 = ch + 0.5 * gamma * sh;
  const Complex d2 = 2.0 * kI * g * sh;
  const Complex d4 = ch - 0.5 * gamma * sh;
  return {d1, d2, d2, d4};
}

}  // namespace

std::string_view to_string(Environment env) {
  switch (env) {
    case Environment::Dissipative: return "dissipative";
    case Environment::Noisy: return "noisy";
    case Environment::Dephasing: return "dephasing";
  }
  return "unknown";
}

Environment parse_environment(std::string_view name) {
  if (name == "dissipative") return Environment::Dissipative;
  if (name == "noisy") return Environment::Noisy;
  if (name == "dephasing") return Environment::Dephasing;
  throw std::invalid_argument("unknown environment: " + std::string(name));
}

EnvironmentSpec::EnvironmentSpec(Environment k, double g) : kind(k), gamma(g) {
  if (!(g >= 0.0) || !std::isfinite(g)) throw std::invalid_argument("gamma must be finite and >= 0");
}

XStateElements XStateElements::from_matrix(const Mat4& m) {
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const bool on_x = (r == c) || (r + c == 3);
      if (!on_x && std::abs(m(r, c)) > kStateTolerance) {
        throw InvalidState("matrix is not an X state: entry (" + std::to_string(r + 1) + "," +
                           std::to_string(c + 1) + ") is nonzero");
      }
    }
  }
  return {m(0, 0), m(1, 1), m(2, 2), m(3, 3), m(0, 3), m(3, 0), m(1, 2), m(2, 1)};
}

Mat4 XStateElements::to_matrix() const {
  Mat4 m = Mat4::Zero();
  m(0, 0) = r11;
  m(1, 1) = r22;
  m(2, 2) = r33;
  m(3, 3) = r44;
  m(0, 3) = r14;
  m(3, 0) = r41;
  m(1, 2) = r23;
  m(2, 1) = r32;
  return m;
}

double XStateElements::max_abs_diff(const XStateElements& o) const {
  return std::max({std::abs(r11 - o.r11), std::abs(r22 - o.r22), std::abs(r33 - o.r33), std::abs(r44 - o.r44),
                   std::abs(r14 - o.r14), std::abs(r41 - o.r41), std::abs(r23 - o.r23), std::abs(r32 - o.r32)});
}

Mat4 build_hamiltonian(const ChannelParams& p) {
  return 0.5 * (p.j + p.delta) * kron(pauli(1), pauli(1)) + 0.5 * (p.j - p.delta) * kron(pauli(2), pauli(2));
}

std::vector<Mat4> jump_operators(Environment kind) {
  std::vector<Mat2> local;
  switch (kind) {
    case Environment::Dissipative: local = {sigma_minus()}; break;
    case Environment::Noisy: local = {sigma_minus(), sigma_plus()}; break;
    case Environment::Dephasing: local = {sigma_plus() * sigma_minus()}; break;
  }
  const Mat2 id = Mat2::Identity();
  std::vector<Mat4> ops;
  for (const Mat2& c : local) {
    ops.push_back(kron(c, id));
    ops.push_back(kron(id, c));
  }
  return ops;
}

Mat4 lindblad_rhs(const Mat4& rho, const ChannelParams& p, const EnvironmentSpec& env) {
  const Mat4 h = build_hamiltonian(p);
  Mat4 out = -kI * (h * rho - rho * h);
  if (env.gamma == 0.0) return out;
  for (const Mat4& c : jump_operators(env.kind)) {
    const Mat4 cd = c.adjoint();
    const Mat4 cdc = cd * c;
    out += 0.5 * env.gamma * (2.0 * c * rho * cd - cdc * rho - rho * cdc);
  }
  return out;
}

Mat4 lindblad_rhs(const DensityMatrix& rho, const ChannelParams& p, const EnvironmentSpec& env) {
  return lindblad_rhs(rho.mat(), p, env);
}

Liouvillian build_liouvillian(const ChannelParams& p, const EnvironmentSpec& env) {
  Liouvillian gen;
  for (int k = 0; k < 16; ++k) {
    Mat4 basis = Mat4::Zero();
    basis(k / 4, k % 4) = 1.0;
    gen.col(k) = vec(lindblad_rhs(basis, p, env));
  }
  return gen;
}

double default_step(const ChannelParams& p, const EnvironmentSpec& env) {
  return 1e-3 / std::max({1.0, std::abs(p.j) + std::abs(p.delta), env.gamma});
}

DensityMatrix integrate(const DensityMatrix& rho0, const ChannelParams& p, const EnvironmentSpec& env, double t,
                        std::optional<double> step) {
  const double h = step.value_or(default_step(p, env));
  check_integration_args(t, h);
  if (t == 0.0) return rho0;
  const Vec16 y = advance(vec(rho0.mat()), build_liouvillian(p, env), t, h);
  return checked_state(unvec(y), t);
}

std::vector<DensityMatrix> integrate_grid(const DensityMatrix& rho0, const ChannelParams& p,
                                          const EnvironmentSpec& env, std::span<const double> times,
                                          std::optional<double> step) {
  const double h = step.value_or(default_step(p, env));
  const Liouvillian gen = build_liouvillian(p, env);
  std::vector<DensityMatrix> out;
  out.reserve(times.size());
  Vec16 y = vec(rho0.mat());
  double now = 0.0;
  for (double t : times) {
    check_integration_args(t, h);
    if (t < now) throw std::invalid_argument("integrate_grid: times must be non-decreasing");
    y = advance(y, gen, t - now, h);
    now = t;
    out.push_back(t == 0.0 ? rho0 : checked_state(unvec(y), t));
  }
  return out;
}

AnalyticCoefficients analytic_coefficients(const XStateElements& x0, const ChannelParams& p,
                                           const EnvironmentSpec& env, double t) {
  AnalyticCoefficients co;
  co.kind = env.kind;
  const double g = env.gamma;
  const double dl = p.delta;
  const double s2 = std::sin(2.0 * dl * t);
  const double c2d = std::cos(2.0 * dl * t);

  switch (env.kind) {
    case Environment::Dissipative: {
      co.rate = g;
      const double den = 4.0 * dl * dl + g * g;
      // gamma = Delta = 0 is the closed, non-interacting limit: c1 -> 0, c2 -> 1.
      co.c1 = den > 0.0 ? dl / den : 0.0;
      co.c2 = den > 0.0 ? g * g / den : 1.0;
      co.b1 = x0.r14 - x0.r41 + 2.0 * kI * g * co.c1;
      co.b2 = x0.r11 - x0.r44 + co.c2;
      const double e1 = std::exp(-g * t);
      const double e2 = std::exp(-2.0 * g * t);
      // a(t) e^{-2 gamma t}, multiplied through so large gamma t cannot overflow.
      co.decayed_a = (x0.r11 - (2.0 * co.b2 + 1.0) * dl * co.c1 - kI * g * co.b1 * co.c1) * e2 +
                     ((2.0 * kI * dl * co.b1 - g * co.b2) * s2 + (2.0 * dl * co.b2 + kI * g * co.b1) * c2d) *
                         co.c1 * e1 +
                     dl * co.c1;
      break;
    }
    case Environment::Noisy: {
      co.rate = 2.0 * g;
      co.c1 = 0.0;
      co.c2 = 0.0;
      co.b1 = x0.r14 - x0.r41;
      co.b2 = x0.r11 - x0.r44;
      co.decayed_a = 0.5 * (kI * co.b1 * s2 + co.b2 * c2d) * std::exp(-2.0 * g * t) + 0.25 +
                     0.25 * (2.0 * (x0.r11 + x0.r44) - 1.0) * std::exp(-4.0 * g * t);
      break;
    }
    case Environment::Dephasing: {
      co.rate = g;
      co.d = dephasing_block(g, dl, t, co.kappa);
      co.e = dephasing_block(g, p.j, t, co.nu);
      break;
    }
  }
  return co;
}

XStateElements evolve_analytic(const XStateElements& x0, const ChannelParams& p, const EnvironmentSpec& env,
                               double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("evolution time must be finite and >= 0");
  const AnalyticCoefficients co = analytic_coefficients(x0, p, env, t);
  XStateElements x;

  if (env.kind == Environment::Dephasing) {
    const double decay = std::exp(-env.gamma * t);
    const Complex pop = x0.r11 + x0.r44;
    const Complex u = x0.r11 - x0.r44;
    const Complex v = x0.r14 - x0.r41;
    const Complex coh = x0.r14 + x0.r41;
    x.r11 = 0.5 * (pop + co.d[0] * u + co.d[1] * v);
    x.r44 = 0.5 * (pop - co.d[0] * u - co.d[1] * v);
    x.r14 = 0.5 * (coh * decay + co.d[2] * u + co.d[3] * v);
    x.r41 = 0.5 * (coh * decay - co.d[2] * u - co.d[3] * v);

    const Complex pop_b = x0.r22 + x0.r33;
    const Complex ub = x0.r22 - x0.r33;
    const Complex vb = x0.r23 - x0.r32;
    const Complex coh_b = x0.r23 + x0.r32;
    x.r22 = 0.5 * (pop_b + co.e[0] * ub + co.e[1] * vb);
    x.r33 = 0.5 * (pop_b - co.e[0] * ub - co.e[1] * vb);
    x.r23 = 0.5 * (coh_b * decay + co.e[2] * ub + co.e[3] * vb);
    x.r32 = 0.5 * (coh_b * decay - co.e[2] * ub - co.e[3] * vb);
    return x;
  }

  // Dissipative and noisy share one functional form; noisy runs at rate 2 gamma.
  const double rate = co.rate;
  const double decay = std::exp(-rate * t);
  const double s2d = std::sin(2.0 * p.delta * t);
  const double c2d = std::cos(2.0 * p.delta * t);
  const double s2j = std::sin(2.0 * p.j * t);
  const double c2j = std::cos(2.0 * p.j * t);

  x.r11 = co.decayed_a;
  x.r44 = x.r11 - (co.b2 * c2d + kI * co.b1 * s2d) * decay + co.c2;
  const Complex coh = x0.r14 + x0.r41;
  x.r14 = 0.5 * (coh + kI * co.b2 * s2d + co.b1 * c2d) * decay - kI * rate * co.c1;
  x.r41 = 0.5 * (coh - kI * co.b2 * s2d - co.b1 * c2d) * decay + kI * rate * co.c1;

  const Complex ub = x0.r22 - x0.r33;
  const Complex vb = x0.r23 - x0.r32;
  const Complex coh_b = x0.r23 + x0.r32;
  const Complex rest = 1.0 - x.r11 - x.r44;
  const Complex split = (ub * c2j + kI * vb * s2j) * decay;
  x.r22 = 0.5 * (rest + split);
  x.r33 = 0.5 * (rest - split);
  x.r23 = 0.5 * (coh_b + kI * ub * s2j + vb * c2j) * decay;
  x.r32 = 0.5 * (coh_b - kI * ub * s2j - vb * c2j) * decay;
  return x;
}

}  // namespace telechan
