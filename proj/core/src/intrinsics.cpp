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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "camimu/camera_model.hpp"
#include "camimu/error.hpp"
#include "camimu/geometry.hpp"
#include "camimu/least_squares.hpp"

namespace camimu {

namespace {

// Row v_ij with h_i^T B h_j = v_ij . (B11, B12, B22, B13, B23, B33).
Eigen::Matrix<double, 1, 6> constraint_row(const Mat3& H, int i, int j) {
  const Vec3 a = H.col(i);
  const Vec3 b = H.col(j);
  Eigen::Matrix<double, 1, 6> v;
  v << a[0] * b[0], a[0] * b[1] + a[1] * b[0], a[1] * b[1], a[2] * b[0] + a[0] * b[2],
      a[2] * b[1] + a[1] * b[2], a[2] * b[2];
  return v;
}

// Similarity taking pixels near the image of the target origin to O(1) values.
Mat3 pixel_normalization(std::span<const Mat3> homographies) {
  Vec2 c = Vec2::Zero();
  for (const auto& H : homographies) {
    if (std::abs(H(2, 2)) < 1e-12) continue;
    c += H.col(2).head<2>() / H(2, 2);
  }
  c /= static_cast<double>(homographies.size());
  const double s = 1.0 / (c.norm() + 1.0);
  Mat3 N;
  N << s, 0.0, -s * c.x(), 0.0, s, -s * c.y(), 0.0, 0.0, 1.0;
  return N;
}

}  // namespace

CameraIntrinsics intrinsics_from_b(const BMatrix& bm) {
  const double B11 = bm.b11(), B12 = bm.b12(), B13 = bm.b13();
  const double B22 = bm.b22(), B23 = bm.b23(), B33 = bm.b33();
  if (!(B11 > 0.0)) throw Error(ErrorCode::kDegenerateGeometry, "B11 <= 0");
  const double den = B11 * B22 - B12 * B12;
  if (!(den > 0.0)) throw Error(ErrorCode::kDegenerateGeometry, "B11*B22 - B12^2 <= 0");

  const double cy = (B12 * B13 - B11 * B23) / den;
  const double lambda = B33 - (B13 * B13 + cy * (B12 * B13 - B11 * B23)) / B11;
  const double fx2 = lambda / B11;
  const double fy2 = lambda * B11 / den;
  if (!(fx2 > 0.0) || !(fy2 > 0.0)) {
    throw Error(ErrorCode::kDegenerateGeometry, "negative value under a square root");
  }
  CameraIntrinsics k;
  k.fx = std::sqrt(fx2);
  k.fy = std::sqrt(fy2);
  k.gamma = -B12 * k.fx * k.fx * k.fy / lambda;
  k.cy = cy;
  k.cx = k.gamma * cy / k.fy - B13 * k.fx * k.fx / lambda;
  return k;
}

IntrinsicsSolution solve_intrinsics(std::span<const Mat3> homographies) {
  if (homographies.size() < 3) {
    throw Error(ErrorCode::kInsufficientData, "closed-form intrinsics need at least 3 views");
  }
  const Mat3 N = pixel_normalization(homographies);
  const auto n = static_cast<Eigen::Index>(homographies.size());
  Eigen::Matrix<double, Eigen::Dynamic, 6> V(2 * n, 6);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Mat3 H = N * homographies[static_cast<std::size_t>(k)];
    V.row(2 * k) = constraint_row(H, 0, 1);
    V.row(2 * k + 1) = constraint_row(H, 0, 0) - constraint_row(H, 1, 1);
  }
  // Unit rows make the system independent of the target's length unit.
  for (Eigen::Index r = 0; r < V.rows(); ++r) {
    const double norm = V.row(r).norm();
    if (norm > 0.0) V.row(r) /= norm;
  }
  Eigen::JacobiSVD<MatX> svd(V, Eigen::ComputeFullV);
  const VecX& s = svd.singularValues();
  if (!(s[0] > 0.0) || s[4] / s[0] < 1e-10) {
    throw Error(ErrorCode::kDegenerateGeometry, "views do not constrain B (near-parallel views)");
  }
  VecX b = svd.matrixV().col(5);
  if (b[0] < 0.0) b = -b;

  Mat3 Bn;
  Bn << b[0], b[1], b[3], b[1], b[2], b[4], b[3], b[4], b[5];
  BMatrix bm;
  bm.entries = N.transpose() * Bn * N;

  IntrinsicsSolution out;
  out.intrinsics = intrinsics_from_b(bm);
  const Mat3 Kinv = out.intrinsics.matrix(true).inverse();
  out.b.entries = Kinv.transpose() * Kinv;
  out.singular_values = s;
  return out;
}

IntrinsicsSolution solve_intrinsics(std::span<const PlanarView> views) {
  std::vector<Mat3> hs;
  hs.reserve(views.size());
  for (const auto& v : views) {
    validate_view(v);
    hs.push_back(estimate_homography(v));
  }
  return solve_intrinsics(std::span<const Mat3>(hs));
}

TargetPose pose_from_homography(const Mat3& H, const CameraIntrinsics& intr) {
  intr.validate();
  const Mat3 Kinv = intr.matrix(false).inverse();
  const Vec3 a1 = Kinv * H.col(0);
  const Vec3 a2 = Kinv * H.col(1);
  const Vec3 a3 = Kinv * H.col(2);
  const double n1 = a1.norm(), n2 = a2.norm();
  if (!(n1 > 0.0) || !(n2 > 0.0)) throw Error(ErrorCode::kDegenerateView, "homography has a zero column");
  double scale = 2.0 / (n1 + n2);
  if (a3.z() * scale < 0.0) scale = -scale;  // target in front of the camera
  const Vec3 r1 = scale * a1;
  const Vec3 r2 = scale * a2;
  Mat3 R;
  R.col(0) = r1;
  R.col(1) = r2;
  R.col(2) = r1.cross(r2);
  TargetPose pose;
  pose.R = project_to_so3(R);
  pose.t = scale * a3;
  return pose;
}

DistortionCoeffs fit_distortion(std::span<const PlanarView> views, const CameraIntrinsics& intr,
                                std::span<const TargetPose> poses) {
  if (views.size() != poses.size()) {
    throw Error(ErrorCode::kInvalidInput, "distortion fit needs one pose per view");
  }
  std::size_t count = 0;
  for (const auto& v : views) count += v.points.size();
  if (count < 4) throw Error(ErrorCode::kInsufficientData, "distortion fit needs at least 4 points");

  MatX A(2 * static_cast<Eigen::Index>(count), 4);
  VecX rhs(A.rows());
  Eigen::Index row = 0;
  for (std::size_t k = 0; k < views.size(); ++k) {
    for (const auto& c : views[k].points) {
      const Vec3 p = poses[k].R * Vec3(c.target.x(), c.target.y(), 0.0) + poses[k].t;
      if (!(p.z() > 0.0)) throw Error(ErrorCode::kBehindCamera, "target point behind the camera");
      const double x = p.x() / p.z(), y = p.y() / p.z();
      const double r2 = x * x + y * y;
      // Pixel-unit residual rows, linear in (k1, k2, p1, p2).
      A.row(row) << intr.fx * x * r2, intr.fx * x * r2 * r2, intr.fx * 2.0 * x * y,
          intr.fx * (r2 + 2.0 * x * x);
      rhs[row++] = c.pixel.x() - (intr.fx * x + intr.cx);
      A.row(row) << intr.fy * y * r2, intr.fy * y * r2 * r2, intr.fy * (r2 + 2.0 * y * y),
          intr.fy * 2.0 * x * y;
      rhs[row++] = c.pixel.y() - (intr.fy * y + intr.cy);
    }
  }
  const Vec4 k = A.colPivHouseholderQr().solve(rhs);
  return {k[0], k[1], k[2], k[3]};
}

namespace {

std::vector<PlanarView> undistorted_views(std::span<const PlanarView> views,
                                          const CameraIntrinsics& intr,
                                          const DistortionCoeffs& dist) {
  std::vector<PlanarView> out(views.begin(), views.end());
  for (auto& v : out) {
    for (auto& c : v.points) {
      const Vec2 xd((c.pixel.x() - intr.cx) / intr.fx, (c.pixel.y() - intr.cy) / intr.fy);
      const Vec2 x = undistort_point(xd, dist, 1e-14, 100);
      c.pixel = Vec2(intr.fx * x.x() + intr.cx, intr.fy * x.y() + intr.cy);
    }
  }
  return out;
}

}  // namespace

CameraCalibration calibrate_camera(std::span<const PlanarView> views,
                                   const CameraCalibrationOptions& options) {
  for (const auto& v : views) validate_view(v);

  CameraCalibration cal;
  {
    std::vector<Mat3> hs;
    hs.reserve(views.size());
    for (const auto& v : views) hs.push_back(estimate_homography(v));
    const IntrinsicsSolution sol = solve_intrinsics(std::span<const Mat3>(hs));
    cal.intrinsics = sol.intrinsics;
    cal.b = sol.b;
    for (const auto& H : hs) cal.poses.push_back(pose_from_homography(H, sol.intrinsics));
  }

  if (options.estimate_distortion) {
    auto unpack = [&](const VecX& x, CameraIntrinsics& k, DistortionCoeffs& d) {
      k = cal.intrinsics;
      k.fx = x[0], k.fy = x[1], k.cx = x[2], k.cy = x[3];
      d = {x[4], x[5], x[6], x[7]};
    };
    // Poses for a given (K, d): closed-form homographies of the views
    // undistorted with that (K, d).
    auto poses_for = [&](const CameraIntrinsics& k, const DistortionCoeffs& d) {
      std::vector<TargetPose> poses;
      for (const auto& v : undistorted_views(views, k, d)) {
        poses.push_back(pose_from_homography(estimate_homography(v), k));
      }
      return poses;
    };
    std::size_t count = 0;
    for (const auto& v : views) count += v.points.size();

    auto residuals = [&](const VecX& x, VecX& r) {
      r.resize(2 * static_cast<Eigen::Index>(count));
      CameraIntrinsics k;
      DistortionCoeffs d;
      unpack(x, k, d);
      try {
        const auto report = reprojection_errors(views, k, d, poses_for(k, d));
        for (std::size_t i = 0; i < report.residuals.size(); ++i) {
          r.segment<2>(2 * static_cast<Eigen::Index>(i)) = report.residuals[i].residual;
        }
      } catch (const Error&) {
        // Trial point outside the model's domain; the solver rejects it.
        r.setConstant(std::numeric_limits<double>::quiet_NaN());
      }
    };

    const DistortionCoeffs d0 = fit_distortion(views, cal.intrinsics, cal.poses);
    VecX x0(8);
    x0 << cal.intrinsics.fx, cal.intrinsics.fy, cal.intrinsics.cx, cal.intrinsics.cy, d0.k1, d0.k2,
        d0.p1, d0.p2;
    LmOptions lm;
    lm.max_iterations = options.max_iterations;
    const LmResult res = levenberg_marquardt(
        [&](const VecX& x, VecX& r, MatX* J) {
          residuals(x, r);
          if (J) *J = numeric_jacobian(residuals, x);
        },
        x0, lm);
    unpack(res.x, cal.intrinsics, cal.distortion);
    cal.intrinsics.validate();
    cal.poses = poses_for(cal.intrinsics, cal.distortion);
    const Mat3 Kinv = cal.intrinsics.matrix(true).inverse();
    cal.b.entries = Kinv.transpose() * Kinv;
    cal.iterations = res.iterations;
  }
  cal.reprojection = reprojection_errors(views, cal.intrinsics, cal.distortion, cal.poses);
  return cal;
}

}  // namespace camimu
