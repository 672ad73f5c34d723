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

#include "telechan/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace telechan {

namespace {

void check_index(int k, const char* what) {
  if (k < 0 || k > 3) {
    throw std::invalid_argument(std::string(what) + " index out of range: " + std::to_string(k));
  }
}

}  // namespace

Mat4 kron(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

Mat2 pauli(int k) {
  check_index(k, "pauli");
  const Complex i{0.0, 1.0};
  Mat2 m;
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

Mat4 bell(int i) {
  check_index(i, "bell");
  const double s = 1.0 / std::numbers::sqrt2;
  Eigen::Vector4cd psi = Eigen::Vector4cd::Zero();
  switch (i) {
    case 0: psi(0) = s; psi(3) = s; break;
    case 1: psi(1) = s; psi(2) = s; break;
    case 2: psi(1) = s; psi(2) = -s; break;
    default: psi(0) = s; psi(3) = -s; break;
  }
  return psi * psi.adjoint();
}

std::array<double, 4> eigvals_hermitian(const Mat4& m) {
  Eigen::SelfAdjointEigenSolver<Mat4> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalFailure("hermitian eigen-solver did not converge");
  const auto& ev = solver.eigenvalues();
  return {ev(0), ev(1), ev(2), ev(3)};
}

std::array<Complex, 4> eigvals_general(const Mat4& m) {
  Eigen::ComplexEigenSolver<Mat4> solver(m, false);
  if (solver.info() != Eigen::Success) throw NumericalFailure("general eigen-solver did not converge");
  const auto& ev = solver.eigenvalues();
  return {ev(0), ev(1), ev(2), ev(3)};
}

double StateViolation::worst() const {
  if (!finite) return std::numeric_limits<double>::infinity();
  return std::max({hermiticity, trace, positivity});
}

StateViolation measure_violation(const Mat4& m) {
  StateViolation v;
  v.finite = m.allFinite();
  if (!v.finite) return v;
  v.hermiticity = (m - m.adjoint()).cwiseAbs().maxCoeff();
  v.trace = std::abs(m.trace() - Complex{1.0, 0.0});
  // Symmetrize so the eigen-solver sees a Hermitian matrix even if m is slightly off.
  const Mat4 herm = 0.5 * (m + m.adjoint());
  v.positivity = std::max(0.0, -eigvals_hermitian(herm)[0]);
  return v;
}

DensityMatrix::DensityMatrix(const Mat4& m, double tol) : mat_(m) {
  const StateViolation v = measure_violation(m);
  if (!v.within(tol)) {
    throw InvalidState("not a density matrix: hermiticity=" + std::to_string(v.hermiticity) +
                       " trace=" + std::to_string(v.trace) + " positivity=" + std::to_string(v.positivity) +
                       (v.finite ? "" : " (non-finite entries)"));
  }
}

DensityMatrix DensityMatrix::maximally_mixed() { return DensityMatrix(Mat4::Identity() / 4.0); }

DensityMatrix DensityMatrix::from_bell(int i) { return DensityMatrix(bell(i)); }

PureQubit::PureQubit(double theta, double phi) : theta_(theta), phi_(phi) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw std::invalid_argument("theta must lie in [0, pi], got " + std::to_string(theta));
  }
  if (!(phi >= 0.0 && phi < 2.0 * std::numbers::pi)) {
    throw std::invalid_argument("phi must lie in [0, 2pi), got " + std::to_string(phi));
  }
}

Eigen::Vector2cd PureQubit::ket() const {
  Eigen::Vector2cd v;
  v << std::cos(theta_ / 2.0), std::polar(std::sin(theta_ / 2.0), phi_);
  return v;
}

double BlochVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

Mat2 pure_to_density(const PureQubit& q) {
  const Eigen::Vector2cd k = q.ket();
  return k * k.adjoint();
}

BlochVector bloch_of(const PureQubit& q) {
  const double st = std::sin(q.theta());
  return {st * std::cos(q.phi()), st * std::sin(q.phi()), std::cos(q.theta())};
}

BlochVector bloch_of(const Mat2& rho) {
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  const double tr = std::abs(rho.trace() - Complex{1.0, 0.0});
  if (!rho.allFinite() || herm > kStateTolerance || tr > kStateTolerance) {
    throw InvalidState("bloch_of: input is not a Hermitian unit-trace 2x2 matrix");
  }
  return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(), 2.0 * rho(0, 0).real() - 1.0};
}

}  // namespace telechan
