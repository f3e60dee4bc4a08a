// Copyright 2026 The camimu Authors
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

#pragma once

// Rotation algebra shared by every calibration stage.
//
// Quaternions follow the Hamilton convention and are stored scalar-first
// (w, x, y, z). Composition order matches matrix products:
// quat_to_rot(a * b) == quat_to_rot(a) * quat_to_rot(b).

#include "camimu/types.hpp"

namespace camimu {

class UnitQuaternion {
 public:
  UnitQuaternion() : wxyz_(1.0, 0.0, 0.0, 0.0) {}

  /// Normalizes the input. Throws kInvalidInput on non-finite or zero-norm input.
  UnitQuaternion(double w, double x, double y, double z);
  explicit UnitQuaternion(const Vec4& wxyz);

  static UnitQuaternion identity() { return {}; }
  static UnitQuaternion from_axis_angle(const Vec3& axis, double angle);
  /// Quaternion of the rotation vector `theta` (axis * angle).
  static UnitQuaternion exp(const Vec3& theta);

  double w() const { return wxyz_[0]; }
  double x() const { return wxyz_[1]; }
  double y() const { return wxyz_[2]; }
  double z() const { return wxyz_[3]; }
  Vec3 vec() const { return wxyz_.tail<3>(); }
  const Vec4& coeffs() const { return wxyz_; }

  UnitQuaternion conjugate() const;
  UnitQuaternion inverse() const { return conjugate(); }
  /// Same rotation with w >= 0; when w == 0 the first nonzero of x, y, z is made positive.
  UnitQuaternion canonical() const;
  UnitQuaternion operator-() const;

  /// Rotation angle in [0, pi].
  double angle() const;
  /// Rotation vector (axis * angle), angle in [0, pi].
  Vec3 log() const;
  Vec3 rotate(const Vec3& v) const;

 private:
  struct NoNormalize {};
  UnitQuaternion(const Vec4& wxyz, NoNormalize) : wxyz_(wxyz) {}

  Vec4 wxyz_;
};

UnitQuaternion quat_mul(const UnitQuaternion& a, const UnitQuaternion& b);
inline UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
  return quat_mul(a, b);
}

/// Angle of the rotation a^-1 * b, in [0, pi].
double angular_distance(const UnitQuaternion& a, const UnitQuaternion& b);

/// [q]_L with quat_left_matrix(a) * b.coeffs() == (a * b).coeffs().
Mat4 quat_left_matrix(const UnitQuaternion& q);
/// [q]_R with quat_right_matrix(b) * a.coeffs() == (a * b).coeffs().
Mat4 quat_right_matrix(const UnitQuaternion& q);

/// Cross-product matrix: skew(w) * v == w.cross(v).
Mat3 skew(const Vec3& w);

/// Omega(w) = [[-skew(w), w], [-w^T, 0]].
///
/// The block layout acts on quaternions stored vector-first (x, y, z, w):
/// for q laid out that way, 0.5 * omega_matrix(w) * q is the derivative
/// 0.5 * q * (0, w) of a body-rate driven quaternion.
Mat4 omega_matrix(const Vec3& w);

Mat3 quat_to_rot(const UnitQuaternion& q);
/// Largest-pivot extraction. Throws kInvalidRotation if R is not
/// orthonormal within 1e-6 or has negative determinant.
UnitQuaternion rot_to_quat(const Mat3& R);

bool is_rotation(const Mat3& R, double tol = 1e-10);
/// Closest rotation matrix in the Frobenius sense.
Mat3 project_to_so3(const Mat3& M);

Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);
Mat3 exp_so3(const Vec3& theta);

/// Rotation angle of R in [0, pi]. Uses atan2 of the skew and trace parts,
/// which equals acos((tr R - 1) / 2) but keeps full precision near 0 and pi.
double rotation_angle(const Mat3& R);

/// Residual angle of the hand-eye constraint R_imu * R_est = R_est * R_cam:
/// the angle of R_est^T R_imu^T R_est R_cam, in [0, pi].
double rotation_angle_residual(const Mat3& R_est, const Mat3& R_imu, const Mat3& R_cam);

}  // namespace camimu
