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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "telechan/explab.hpp"
#include "telechan/metrics.hpp"
#include "test_util.hpp"

namespace telechan {
namespace {

constexpr double kGamma = 0.05;

SweepSpec spec_for(int b, Environment kind, std::vector<double> times, Engine engine = Engine::Analytic) {
  SweepSpec s;
  s.initial_bell = b;
  s.env = EnvironmentSpec(kind, kGamma);
  s.t_grid = std::move(times);
  s.engine = engine;
  return s;
}

std::vector<double> even_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int k = 0; k < n; ++k) g.push_back(lo + (hi - lo) * k / (n - 1));
  return g;
}

TEST(Sweep, PerfectChannelAtZero) {
  const auto r = sweep(spec_for(0, Environment::Dissipative, {0.0}));
  ASSERT_EQ(r.size(), 1u);
  EXPECT_NEAR(r[0].F, 1.0, 1e-12);
  EXPECT_NEAR(r[0].C, 1.0, 1e-12);
  EXPECT_NEAR(r[0].P, 1.0, 1e-12);
}

TEST(Sweep, DissipativeBell0AtT8) {
  const auto r = sweep(spec_for(0, Environment::Dissipative, {8.0}));
  EXPECT_NEAR(r[0].F, 0.816443, 1e-6);
  EXPECT_NEAR(r[0].C, 0.449329, 1e-6);
  EXPECT_NEAR(r[0].P, 0.606855, 1e-6);
}

TEST(Sweep, NoisyBell0AtT5) {
  const auto r = sweep(spec_for(0, Environment::Noisy, {5.0}));
  EXPECT_NEAR(r[0].F, (3 + 2 * std::exp(-0.5) + std::exp(-1.0)) / 6, 1e-12);
  EXPECT_NEAR(r[0].F, 0.763490, 1e-6);
  EXPECT_NEAR(r[0].C, 0.290470, 1e-6);
  EXPECT_NEAR(r[0].P, 0.467774, 1e-6);
}

TEST(Sweep, GridOrderIsDeltaMajorAndDeterministic) {
  SweepSpec s = spec_for(1, Environment::Dissipative, {1.0, 2.0, 3.0});
  s.delta_grid = {-0.5, 0.0, 0.5, 1.0};
  const auto a = sweep(s);
  const auto b = sweep(s);
  ASSERT_EQ(a.size(), 12u);
  EXPECT_EQ(a, b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].delta, s.delta_grid[i / 3]);
    EXPECT_EQ(a[i].t, s.t_grid[i % 3]);
  }
}

TEST(Sweep, RecordsStayInPhysicalRanges) {
  for (Environment kind : {Environment::Dissipative, Environment::Noisy, Environment::Dephasing}) {
    SweepSpec s = spec_for(2, kind, even_grid(0.0, 100.0, 21));
    s.params.j = 1.0;
    s.delta_grid = {-1.0, 0.2, 3.0};
    for (const auto& r : sweep(s)) {
      EXPECT_GE(r.F, 0.0);
      EXPECT_LE(r.F, 1.0);
      EXPECT_GE(r.C, 0.0);
      EXPECT_LE(r.C, 1.0);
      EXPECT_GE(r.P, 0.25 - 1e-12);
      EXPECT_LE(r.P, 1.0 + 1e-12);
    }
  }
}

TEST(Sweep, BothEnginesAgree) {
  for (Environment kind : {Environment::Dissipative, Environment::Noisy, Environment::Dephasing}) {
    SweepSpec s = spec_for(0, kind, {0.5, 8.0, 20.0}, Engine::Both);
    s.params.j = 1.0;
    s.delta_grid = {-0.5, 0.1};
    for (const auto& r : sweep(s)) EXPECT_LE(r.engine_disagreement, 1e-6);
  }
}

TEST(Sweep, OnlyBothReportsDisagreement) {
  const auto r = sweep(spec_for(0, Environment::Noisy, {3.0}, Engine::Integrator));
  EXPECT_EQ(r[0].engine_disagreement, 0.0);
}

TEST(Sweep, EvenInDelta) {
  const std::vector<double> deltas{-1.0, -0.5, -0.1, 0.1, 0.5, 1.0};
  for (Environment kind : {Environment::Dissipative, Environment::Noisy, Environment::Dephasing}) {
    SweepSpec s = spec_for(1, kind, even_grid(0.5, 60.0, 9));
    s.params.j = 1.0;
    s.delta_grid = deltas;
    const auto r = sweep(s);
    const std::size_t nt = s.t_grid.size();
    for (std::size_t d = 0; d < 3; ++d) {
      for (std::size_t k = 0; k < nt; ++k) {
        const SweepRecord& a = r[d * nt + k];
        const SweepRecord& b = r[(5 - d) * nt + k];
        EXPECT_NEAR(a.F, b.F, 1e-9);
        EXPECT_NEAR(a.C, b.C, 1e-9);
        EXPECT_NEAR(a.P, b.P, 1e-9);
        EXPECT_NEAR(a.delta_x, b.delta_x, 1e-9);
        EXPECT_NEAR(a.delta_y, b.delta_y, 1e-9);
        EXPECT_NEAR(a.delta_z, b.delta_z, 1e-9);
      }
    }
  }
}

TEST(Sweep, FidelityConcurrenceRelations) {
  const auto times = even_grid(0.0, 80.0, 161);
  for (const auto& r : sweep(spec_for(0, Environment::Dissipative, times))) {
    EXPECT_NEAR(r.F, (2 + r.C) / 3, 1e-12) << r.t;
  }
  const double t3 = std::log(3.0) / kGamma;
  for (const auto& r : sweep(spec_for(1, Environment::Dissipative, times))) {
    const double expect = r.t <= t3 ? (1 + 2 * r.C) / 3 : (2 - r.C) / 3;
    EXPECT_NEAR(r.F, expect, 1e-12) << r.t;
  }
  const double esd = std::log(std::sqrt(2.0) + 1) / (2 * kGamma);
  for (const auto& r : sweep(spec_for(0, Environment::Noisy, times))) {
    if (r.t < esd) EXPECT_NEAR(r.F, (2 + r.C) / 3, 1e-12) << r.t;
  }
}

TEST(Sweep, ShrinkFactorCurves) {
  const auto times = even_grid(0.0, 80.0, 161);
  for (const auto& r : sweep(spec_for(0, Environment::Dissipative, times))) {
    const double e = std::exp(-kGamma * r.t);
    EXPECT_NEAR(r.delta_x, e, 1e-12);
    EXPECT_NEAR(r.delta_y, e, 1e-12);
    EXPECT_NEAR(r.delta_z, 1 - 2 * e + 2 * e * e, 1e-12);
    EXPECT_GE(r.delta_z, 0.5 - 1e-12);
  }
  SweepSpec s = spec_for(1, Environment::Dissipative, times);
  s.m_override = 1;
  for (const auto& r : sweep(s)) {
    EXPECT_NEAR(r.delta_x, std::abs(2 * std::exp(-kGamma * r.t) - 1), 1e-12);
  }
}

TEST(Sweep, MOverrideDrivesFColumn) {
  SweepSpec s = spec_for(1, Environment::Dissipative, {30.0});
  s.m_override = 1;
  const auto r = sweep(s);
  EXPECT_NEAR(r[0].F, (2 * std::exp(-1.5) + 1) / 3, 1e-12);
  EXPECT_EQ(r[0].m_star, 0);
}

TEST(Sweep, ValidationRejectsBadSpecs) {
  EXPECT_THROW(sweep(spec_for(0, Environment::Noisy, {})), std::invalid_argument);
  EXPECT_THROW(sweep(spec_for(0, Environment::Noisy, {1.0, 1.0})), std::invalid_argument);
  EXPECT_THROW(sweep(spec_for(0, Environment::Noisy, {-1.0, 1.0})), std::invalid_argument);
  EXPECT_THROW(sweep(spec_for(4, Environment::Noisy, {1.0})), std::invalid_argument);
  SweepSpec s = spec_for(0, Environment::Noisy, {1.0});
  s.delta_grid = {0.5, 0.1};
  EXPECT_THROW(sweep(s), std::invalid_argument);
  s.delta_grid.clear();
  s.quantities.clear();
  EXPECT_THROW(sweep(s), std::invalid_argument);
}

TEST(Sweep, DivergenceCarriesGridPoint) {
  SweepSpec s = spec_for(0, Environment::Dissipative, {10.0, 400.0}, Engine::Integrator);
  s.env.gamma = 1.0;
  s.step = 4.0;
  s.delta_grid = {0.25};
  try {
    sweep(s);
    FAIL() << "expected a SweepError";
  } catch (const SweepError& e) {
    EXPECT_EQ(e.delta(), 0.25);
    EXPECT_TRUE(e.t() == 10.0 || e.t() == 400.0);
  }
}

TEST(Critical, DefaultBracket) {
  const Bracket b = default_bracket({Environment::Noisy, 0.05});
  EXPECT_EQ(b.lo, 0.0);
  EXPECT_DOUBLE_EQ(b.hi, 4000.0);
  EXPECT_THROW(default_bracket({Environment::Noisy, 0.0}), std::invalid_argument);
}

TEST(Critical, Bell1ClassicalCrossing) {
  const ChannelModel m(1, {Environment::Dissipative, kGamma}, {});
  const auto r = find_classical_crossing(m);
  ASSERT_EQ(r.status, CriticalStatus::Found);
  EXPECT_NEAR(*r.t, std::log(2.0) / kGamma, 1e-6);
  EXPECT_NEAR(*r.t, 13.862944, 1e-6);
  EXPECT_LE(std::abs(r.value_at_t), 1e-9);
}

TEST(Critical, Bell0NeverCrosses) {
  const ChannelModel m(0, {Environment::Dissipative, kGamma}, {});
  EXPECT_EQ(find_classical_crossing(m).status, CriticalStatus::NoneInBracket);
  CriticalOptions o;
  o.bracket = Bracket{0.0, 50.0};
  EXPECT_FALSE(find_classical_crossing(m, o).t.has_value());
}

TEST(Critical, LargeAnisotropyCrossing) {
  const ChannelModel m(1, {Environment::Dissipative, kGamma}, {0.0, 100 * kGamma});
  const auto r = find_classical_crossing(m);
  ASSERT_EQ(r.status, CriticalStatus::Found);
  EXPECT_NEAR(*r.t, std::log(std::sqrt(2.0) + 1) / kGamma, 1e-2);
}

TEST(Critical, IntegratorCrossingMatches) {
  const ChannelModel m(1, {Environment::Dissipative, kGamma}, {}, Engine::Integrator);
  CriticalOptions o;
  o.bracket = Bracket{0.0, 30.0};
  const auto r = find_classical_crossing(m, o);
  ASSERT_EQ(r.status, CriticalStatus::Found);
  EXPECT_NEAR(*r.t, std::log(2.0) / kGamma, 1e-6);
}

TEST(Critical, Bell1FidelityMinimum) {
  const ChannelModel m(1, {Environment::Dissipative, kGamma}, {});
  const auto r = find_fidelity_minimum(m);
  ASSERT_EQ(r.status, CriticalStatus::Found);
  EXPECT_NEAR(*r.t, std::log(3.0) / kGamma, 1e-6);
  EXPECT_NEAR(r.value_at_t, 5.0 / 9.0, 1e-9);
}

TEST(Critical, MonotoneFidelityIsEdgeMinimum) {
  const ChannelModel dis(0, {Environment::Dissipative, kGamma}, {});
  const auto a = find_fidelity_minimum(dis);
  EXPECT_EQ(a.status, CriticalStatus::EdgeMinimum);
  EXPECT_DOUBLE_EQ(*a.t, 200 / kGamma);
  const ChannelModel deph(0, {Environment::Dephasing, kGamma}, {});
  CriticalOptions o;
  o.bracket = Bracket{0.0, 60.0};
  const auto b = find_fidelity_minimum(deph, o);
  EXPECT_EQ(b.status, CriticalStatus::EdgeMinimum);
  EXPECT_EQ(*b.t, 60.0);
}

TEST(Critical, SuddenDeath) {
  const ChannelModel noisy(0, {Environment::Noisy, kGamma}, {});
  const auto a = find_esd_time(noisy);
  ASSERT_EQ(a.status, CriticalStatus::Found);
  EXPECT_NEAR(*a.t, 8.81374, 1e-5);
  EXPECT_NEAR(*a.t, std::log(std::sqrt(2.0) + 1) / (2 * kGamma), 1e-9);
  EXPECT_LE(std::abs(a.value_at_t), 1e-9);

  const ChannelModel fast(0, {Environment::Noisy, 0.1}, {});
  EXPECT_NEAR(*find_esd_time(fast).t, 4.40687, 1e-5);

  const ChannelModel deph(0, {Environment::Dephasing, kGamma}, {});
  EXPECT_EQ(find_esd_time(deph).status, CriticalStatus::NoneInBracket);
  const ChannelModel dis(0, {Environment::Dissipative, kGamma}, {});
  EXPECT_EQ(find_esd_time(dis).status, CriticalStatus::NoneInBracket);
}

TEST(Critical, SuddenDeathViaIntegrator) {
  const ChannelModel noisy(2, {Environment::Noisy, kGamma}, {1.0, 0.0}, Engine::Integrator);
  CriticalOptions o;
  o.bracket = Bracket{0.0, 20.0};
  const auto r = find_esd_time(noisy, o);
  ASSERT_EQ(r.status, CriticalStatus::Found);
  EXPECT_NEAR(*r.t, std::log(std::sqrt(2.0) + 1) / (2 * kGamma), 1e-6);
}

TEST(Critical, ShrinkMinima) {
  const double t2 = std::log(2.0) / kGamma;
  CriticalOptions z;
  z.axis = 2;
  const auto a = find_shrink_minimum(ChannelModel(0, {Environment::Dissipative, kGamma}, {}), z);
  ASSERT_EQ(a.status, CriticalStatus::Found);
  EXPECT_NEAR(*a.t, t2, 1e-6);
  EXPECT_NEAR(a.value_at_t, 0.5, 1e-9);

  CriticalOptions x;
  x.axis = 0;
  x.m_override = 1;
  const auto b = find_shrink_minimum(ChannelModel(1, {Environment::Dissipative, kGamma}, {}), x);
  ASSERT_EQ(b.status, CriticalStatus::Found);
  EXPECT_NEAR(*b.t, t2, 1e-6);
  EXPECT_LE(b.value_at_t, 1e-9);
}

TEST(Critical, RejectsBadOptions) {
  const ChannelModel m(0, {Environment::Noisy, kGamma}, {});
  CriticalOptions o;
  o.bracket = Bracket{5.0, 1.0};
  EXPECT_THROW(find_esd_time(m, o), std::invalid_argument);
  CriticalOptions a;
  a.axis = 3;
  EXPECT_THROW(find_shrink_minimum(m, a), std::invalid_argument);
}

TEST(BlochMeshTest, PerfectChannelIsUnitSphere) {
  const ChannelModel m(0, {Environment::Dissipative, kGamma}, {});
  const BlochMesh mesh = bloch_mesh(m, 0.0, std::nullopt, 5, 8);
  ASSERT_EQ(mesh.points.size(), 40u);
  for (const auto& p : mesh.points) EXPECT_NEAR(std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z), 1.0, 1e-12);
  EXPECT_EQ(mesh.points[0].theta, 0.0);
  EXPECT_EQ(mesh.points[1].theta, 0.0);
  EXPECT_DOUBLE_EQ(mesh.points[8].theta, std::numbers::pi / 4);
  EXPECT_DOUBLE_EQ(mesh.points.back().theta, std::numbers::pi);
}

TEST(BlochMeshTest, DephasingRugbyBall) {
  const ChannelModel m(0, {Environment::Dephasing, kGamma}, {});
  const BlochMesh mesh = bloch_mesh(m, 16.0, std::nullopt, 9, 12);
  EXPECT_NEAR(mesh.semi_axes[0], std::exp(-0.8), 1e-12);
  EXPECT_NEAR(mesh.semi_axes[1], std::exp(-0.8), 1e-12);
  EXPECT_NEAR(mesh.semi_axes[2], 1.0, 1e-12);
  EXPECT_NEAR(mesh.semi_axes[0], 0.449, 1e-3);
}

TEST(BlochMeshTest, NoisyFlyingSaucer) {
  const ChannelModel m(0, {Environment::Noisy, kGamma}, {});
  const BlochMesh mesh = bloch_mesh(m, 5.0, std::nullopt, 9, 12);
  EXPECT_NEAR(mesh.semi_axes[0], std::exp(-0.5), 1e-12);
  EXPECT_NEAR(mesh.semi_axes[1], std::exp(-0.5), 1e-12);
  EXPECT_NEAR(mesh.semi_axes[2], std::exp(-1.0), 1e-12);
  for (const auto& p : mesh.points) {
    const double r = p.x * p.x / (mesh.semi_axes[0] * mesh.semi_axes[0]) +
                     p.y * p.y / (mesh.semi_axes[1] * mesh.semi_axes[1]) +
                     p.z * p.z / (mesh.semi_axes[2] * mesh.semi_axes[2]);
    EXPECT_NEAR(r, 1.0, 1e-12);
  }
}

TEST(BlochMeshTest, RejectsTinyGrid) {
  const ChannelModel m(0, {Environment::Noisy, kGamma}, {});
  EXPECT_THROW(bloch_mesh(m, 1.0, std::nullopt, 1, 8), std::invalid_argument);
  EXPECT_THROW(bloch_mesh(m, 1.0, std::nullopt, 4, 2), std::invalid_argument);
}

TEST(Names, RoundTrip) {
  for (Engine e : {Engine::Analytic, Engine::Integrator, Engine::Both}) EXPECT_EQ(parse_engine(to_string(e)), e);
  for (Quantity q : all_quantities()) EXPECT_EQ(parse_quantity(to_string(q)), q);
  EXPECT_THROW(parse_engine("euler"), std::invalid_argument);
  EXPECT_THROW(parse_quantity("negativity"), std::invalid_argument);
}

}  // namespace
}  // namespace telechan
