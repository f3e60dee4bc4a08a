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

#include "camimu/geometry.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "camimu/error.hpp"

namespace camimu {

namespace {

Vec4 checked_normalize(const Vec4& v) {
  if (!v.allFinite()) throw Error(ErrorCode::kInvalidInput, "quaternion has non-finite components");
  const double n = v.norm();
  if (n < 1e-300) throw Error(ErrorCode::kInvalidInput, "quaternion has zero norm");
  return v / n;
}

}  // namespace

UnitQuaternion::UnitQuaternion(double w, double x, double y, double z)
    : wxyz_(checked_normalize(Vec4(w, x, y, z))) {}

UnitQuaternion::UnitQuaternion(const Vec4& wxyz) : wxyz_(checked_normalize(wxyz)) {}

UnitQuaternion UnitQuaternion::from_axis_angle(const Vec3& axis, double angle) {
  const double n = axis.norm();
  if (!axis.allFinite() || !std::isfinite(angle) || n < 1e-300) {
    throw Error(ErrorCode::kInvalidInput, "axis-angle needs a finite nonzero axis");
  }
  return exp(axis / n * angle);
}

UnitQuaternion UnitQuaternion::exp(const Vec3& theta) {
  if (!theta.allFinite()) throw Error(ErrorCode::kInvalidInput, "rotation vector is not finite");
  const double angle = theta.norm();
  const double half = 0.5 * angle;
  // sin(angle/2)/angle, series below 1e-4 keeps it exact to double precision.
  const double k = angle < 1e-4 ? 0.5 - angle * angle / 48.0 : std::sin(half) / angle;
  Vec4 q;
  q << std::cos(half), k * theta;
  return UnitQuaternion(q);
}

UnitQuaternion UnitQuaternion::conjugate() const {
  return UnitQuaternion(Vec4(w(), -x(), -y(), -z()), NoNormalize{});
}

UnitQuaternion UnitQuaternion::operator-() const { return UnitQuaternion(-wxyz_, NoNormalize{}); }

UnitQuaternion UnitQuaternion::canonical() const {
  if (w() > 0.0) return *this;
  if (w() < 0.0) return -*this;
  for (int i = 1; i < 4; ++i) {
    if (wxyz_[i] > 0.0) return *this;
    if (wxyz_[i] < 0.0) return -*this;
  }
  return *this;
}

double UnitQuaternion::angle() const { return 2.0 * std::atan2(vec().norm(), std::abs(w())); }

Vec3 UnitQuaternion::log() const {
  const UnitQuaternion c = canonical();
  const double s = c.vec().norm();
  if (s < 1e-300) return Vec3::Zero();
  const double angle = 2.0 * std::atan2(s, c.w());
  return c.vec() * (angle / s);
}

Vec3 UnitQuaternion::rotate(const Vec3& v) const { return quat_to_rot(*this) * v; }

UnitQuaternion quat_mul(const UnitQuaternion& a, const UnitQuaternion& b) {
  const double aw = a.w(), ax = a.x(), ay = a.y(), az = a.z();
  const double bw = b.w(), bx = b.x(), by = b.y(), bz = b.z();
  return UnitQuaternion(aw * bw - ax * bx - ay * by - az * bz,
                        aw * bx + ax * bw + ay * bz - az * by,
                        aw * by - ax * bz + ay * bw + az * bx,
                        aw * bz + ax * by - ay * bx + az * bw);
}

double angular_distance(const UnitQuaternion& a, const UnitQuaternion& b) {
  return quat_mul(a.conjugate(), b).angle();
}

Mat4 quat_left_matrix(const UnitQuaternion& q) {
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  Mat4 L;
  L << w, -x, -y, -z,
       x,  w, -z,  y,
       y,  z,  w, -x,
       z, -y,  x,  w;
  return L;
}

Mat4 quat_right_matrix(const UnitQuaternion& q) {
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  Mat4 R;
  R << w, -x, -y, -z,
       x,  w,  z, -y,
       y, -z,  w,  x,
       z,  y, -x,  w;
  return R;
}

Mat3 skew(const Vec3& w) {
  Mat3 S;
  S << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return S;
}

Mat4 omega_matrix(const Vec3& w) {
  Mat4 O = Mat4::Zero();
  O.topLeftCorner<3, 3>() = -skew(w);
  O.topRightCorner<3, 1>() = w;
  O.bottomLeftCorner<1, 3>() = -w.transpose();
  return O;
}

Mat3 quat_to_rot(const UnitQuaternion& q) {
  const double w = q.w(), x = q.x(), y = q.y(), z = q.z();
  Mat3 R;
  R << 1.0 - 2.0 * (y * y + z * z), 2.0 * (x * y - w * z), 2.0 * (x * z + w * y),
       2.0 * (x * y + w * z), 1.0 - 2.0 * (x * x + z * z), 2.0 * (y * z - w * x),
       2.0 * (x * z - w * y), 2.0 * (y * z + w * x), 1.0 - 2.0 * (x * x + y * y);
  return R;
}

UnitQuaternion rot_to_quat(const Mat3& R) {
  if (!R.allFinite() || !is_rotation(R, 1e-6)) {
    throw Error(ErrorCode::kInvalidRotation, "matrix is not orthonormal with det +1 (tol 1e-6)");
  }
  const double tr = R.trace();
  const double pivots[4] = {tr, R(0, 0), R(1, 1), R(2, 2)};
  const int k = static_cast<int>(std::max_element(pivots, pivots + 4) - pivots);
  Vec4 q;
  if (k == 0) {
    const double s = 2.0 * std::sqrt(1.0 + tr);
    q << 0.25 * s, (R(2, 1) - R(1, 2)) / s, (R(0, 2) - R(2, 0)) / s, (R(1, 0) - R(0, 1)) / s;
  } else if (k == 1) {
    const double s = 2.0 * std::sqrt(1.0 + R(0, 0) - R(1, 1) - R(2, 2));
    q << (R(2, 1) - R(1, 2)) / s, 0.25 * s, (R(0, 1) + R(1, 0)) / s, (R(0, 2) + R(2, 0)) / s;
  } else if (k == 2) {
    const double s = 2.0 * std::sqrt(1.0 - R(0, 0) + R(1, 1) - R(2, 2));
    q << (R(0, 2) - R(2, 0)) / s, (R(0, 1) + R(1, 0)) / s, 0.25 * s, (R(1, 2) + R(2, 1)) / s;
  } else {
    const double s = 2.0 * std::sqrt(1.0 - R(0, 0) - R(1, 1) + R(2, 2));
    q << (R(1, 0) - R(0, 1)) / s, (R(0, 2) + R(2, 0)) / s, (R(1, 2) + R(2, 1)) / s, 0.25 * s;
  }
  return UnitQuaternion(q).canonical();
}

bool is_rotation(const Mat3& R, double tol) {
  const double ortho = (R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff();
  return ortho < tol && std::abs(R.determinant() - 1.0) < tol;
}

Mat3 project_to_so3(const Mat3& M) {
  Eigen::JacobiSVD<Mat3> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 D = Mat3::Identity();
  D(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return svd.matrixU() * D * svd.matrixV().transpose();
}

Mat3 rot_x(double a) {
  Mat3 R;
  R << 1, 0, 0, 0, std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a);
  return R;
}

Mat3 rot_y(double a) {
  Mat3 R;
  R << std::cos(a), 0, std::sin(a), 0, 1, 0, -std::sin(a), 0, std::cos(a);
  return R;
}

Mat3 rot_z(double a) {
  Mat3 R;
  R << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
  return R;
}

Mat3 exp_so3(const Vec3& theta) { return quat_to_rot(UnitQuaternion::exp(theta)); }

double rotation_angle(const Mat3& R) {
  const Vec3 axis_part(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1));
  const double s = 0.5 * axis_part.norm();
  const double c = std::clamp(0.5 * (R.trace() - 1.0), -1.0, 1.0);
  return std::atan2(s, c);
}

double rotation_angle_residual(const Mat3& R_est, const Mat3& R_imu, const Mat3& R_cam) {
  return rotation_angle(R_est.transpose() * R_imu.transpose() * R_est * R_cam);
}

}  // namespace camimu
