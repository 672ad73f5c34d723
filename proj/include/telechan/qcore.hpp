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

#ifndef TELECHAN_QCORE_HPP
#define TELECHAN_QCORE_HPP

#include <array>
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace telechan {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;

/// Absolute tolerance used to gate Hermiticity, unit trace and positivity.
inline constexpr double kStateTolerance = 1e-9;

/// A matrix that should describe a physical state does not.
class InvalidState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An eigen-solver or similar numerical kernel produced an unusable result.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Entrywise comparison with an explicit absolute tolerance.
template <typename Derived, typename OtherDerived>
bool approx_equal(const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixBase<OtherDerived>& b,
                  double abs_tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).cwiseAbs().maxCoeff() <= abs_tol;
}

Mat4 kron(const Mat2& a, const Mat2& b);

/// Pauli operator sigma^k; k = 0 is the identity, 1..3 are x, y, z.
Mat2 pauli(int k);

/// Projector onto Bell state i in the |00>,|01>,|10>,|11> ordering:
/// 0,3 = (|00> +- |11>)/sqrt2 and 1,2 = (|01> +- |10>)/sqrt2.
Mat4 bell(int i);

/// Ascending eigenvalues of a Hermitian 4x4 matrix (only the lower triangle is read).
std::array<double, 4> eigvals_hermitian(const Mat4& m);

/// Eigenvalues of a general complex 4x4 matrix, in solver order.
std::array<Complex, 4> eigvals_general(const Mat4& m);

/// Worst-case departures of a 4x4 matrix from a physical density matrix.
struct StateViolation {
  double hermiticity = 0.0;  // max |M - M^dagger|
  double trace = 0.0;        // |Tr M - 1|
  double positivity = 0.0;   // max(0, -lambda_min)
  bool finite = true;

  double worst() const;
  bool within(double tol) const { return finite && worst() <= tol; }
};

StateViolation measure_violation(const Mat4& m);

/// Two-qubit density matrix. Construction validates Hermiticity, unit trace
/// and positivity against kStateTolerance; the held matrix is immutable.
class DensityMatrix {
 public:
  explicit DensityMatrix(const Mat4& m, double tol = kStateTolerance);

  static DensityMatrix maximally_mixed();
  static DensityMatrix from_bell(int i);

  const Mat4& mat() const { return mat_; }
  Complex operator()(int row, int col) const { return mat_(row, col); }

 private:
  Mat4 mat_;
};

/// Pure single-qubit input cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
/// theta in [0, pi], phi in [0, 2 pi).
class PureQubit {
 public:
  PureQubit(double theta, double phi);

  double theta() const { return theta_; }
  double phi() const { return phi_; }
  Eigen::Vector2cd ket() const;

 private:
  double theta_;
  double phi_;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
};

Mat2 pure_to_density(const PureQubit& q);

/// Spherical-angle map (sin th cos ph, sin th sin ph, cos th).
BlochVector bloch_of(const PureQubit& q);

/// x = 2 Re rho12, y = -2 Im rho12, z = 2 rho11 - 1. Throws InvalidState if
/// rho is not Hermitian with unit trace.
BlochVector bloch_of(const Mat2& rho);

}  // namespace telechan

#endif  // TELECHAN_QCORE_HPP
