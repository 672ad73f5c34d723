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

#include "telechan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace telechan {

namespace {

// Eigenvalues of rho below this are round-off around an exact zero.
constexpr double kNullEigenvalue = 1e-14;

Mat4 spin_flip_operator() { return kron(pauli(2), pauli(2)); }

Mat4 hermitian_sqrt(const Mat4& m) {
  Eigen::SelfAdjointEigenSolver<Mat4> solver(m);
  if (solver.info() != Eigen::Success) throw NumericalFailure("eigen-decomposition of rho did not converge");
  Eigen::Vector4d roots;
  for (int i = 0; i < 4; ++i) {
    const double ev = solver.eigenvalues()(i);
    roots(i) = ev > kNullEigenvalue ? std::sqrt(ev) : 0.0;
  }
  return solver.eigenvectors() * roots.cast<Complex>().asDiagonal() * solver.eigenvectors().adjoint();
}

double clamped_sqrt(double v) { return v > 0.0 ? std::sqrt(v) : 0.0; }

}  // namespace

std::array<double, 4> wootters_lambdas(const DensityMatrix& rho) {
  const Mat4 root = hermitian_sqrt(rho.mat());
  const Mat4 yy = spin_flip_operator();
  const Mat4 a = root * yy * root.conjugate();
  Eigen::JacobiSVD<Mat4> svd(a);
  const auto& sv = svd.singularValues();  // already decreasing
  if (!sv.allFinite()) throw NumericalFailure("non-finite singular values in concurrence");
  return {sv(0), sv(1), sv(2), sv(3)};
}

std::array<double, 4> spin_flip_eigenvalues(const DensityMatrix& rho) {
  const Mat4 yy = spin_flip_operator();
  const Mat4 r = rho.mat() * yy * rho.mat().conjugate() * yy;
  const auto ev = eigvals_general(r);
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (std::abs(ev[i].imag()) > 1e-7) {
      throw NumericalFailure("spin-flip eigenvalue has imaginary part " + std::to_string(ev[i].imag()));
    }
    out[i] = ev[i].real();
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double concurrence_signed(const DensityMatrix& rho) {
  const auto l = wootters_lambdas(rho);
  return l[0] - l[1] - l[2] - l[3];
}

double concurrence(const DensityMatrix& rho) { return std::clamp(concurrence_signed(rho), 0.0, 1.0); }

double concurrence_x_signed(const XStateElements& x) {
  for (const Complex& d : {x.r11, x.r22, x.r33, x.r44}) {
    if (d.real() < -kStateTolerance) throw InvalidState("X state has a negative diagonal entry");
  }
  const double a = std::abs(x.r14) - clamped_sqrt(x.r22.real()) * clamped_sqrt(x.r33.real());
  const double b = std::abs(x.r23) - clamped_sqrt(x.r11.real()) * clamped_sqrt(x.r44.real());
  return 2.0 * std::max(a, b);
}

double concurrence_x(const XStateElements& x) { return std::clamp(concurrence_x_signed(x), 0.0, 1.0); }

double purity(const DensityMatrix& rho) {
  // Tr rho^2 = sum |rho_ij|^2 for Hermitian rho.
  return rho.mat().cwiseAbs2().sum();
}

}  // namespace telechan
