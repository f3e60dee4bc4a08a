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

#include "camimu/camera_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include <Eigen/SVD>

namespace camimu {

Mat3 CameraIntrinsics::matrix(bool include_skew) const {
  Mat3 K;
  K << fx, include_skew ? gamma : 0.0, cx,
       0.0, fy, cy,
       0.0, 0.0, 1.0;
  return K;
}

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0) || !std::isfinite(fx) || !std::isfinite(fy) ||
      !std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(gamma)) {
    throw Error(ErrorCode::kInvalidInput, "intrinsics need finite fx, fy > 0 and finite cx, cy");
  }
}

Mat2 DistortionCoeffs::as_matrix() const {
  Mat2 U;
  U << k1, k2, p1, p2;
  return U;
}

void validate_view(const PlanarView& view) {
  std::set<std::pair<double, double>> seen;
  for (const auto& c : view.points) {
    if (!c.target.allFinite() || !c.pixel.allFinite()) {
      throw Error(ErrorCode::kInvalidInput,
                  "view " + std::to_string(view.view_id) + " has non-finite coordinates");
    }
    if (!seen.emplace(c.target.x(), c.target.y()).second) {
      throw Error(ErrorCode::kInvalidInput,
                  "view " + std::to_string(view.view_id) + " repeats a target point");
    }
  }
}

Vec2 project_to_pixel(const Vec3& p, const CameraIntrinsics& intr) {
  if (!(p.z() > 0.0)) throw Error(ErrorCode::kBehindCamera, "point is not in front of the camera");
  if (p.z() < 1e-12) throw Error(ErrorCode::kDegenerateDepth, "point depth below 1e-12");
  return {intr.fx * p.x() / p.z() + intr.cx, intr.fy * p.y() / p.z() + intr.cy};
}

Vec2 apply_distortion(const Vec2& p, const DistortionCoeffs& d) {
  const double x = p.x(), y = p.y();
  const double r2 = x * x + y * y;
  const double radial = 1.0 + d.k1 * r2 + d.k2 * r2 * r2;
  return {x * radial + 2.0 * d.p1 * x * y + d.p2 * (r2 + 2.0 * x * x),
          y * radial + d.p1 * (r2 + 2.0 * y * y) + 2.0 * d.p2 * x * y};
}

UndistortError::UndistortError(const Vec2& last_iterate, double residual)
    : Error(ErrorCode::kConvergenceFailure,
            "undistortion did not converge (residual " + std::to_string(residual) + ")"),
      last_(last_iterate),
      residual_(residual) {}

Vec2 undistort_point(const Vec2& p_distorted, const DistortionCoeffs& dist, double tol,
                     int max_iter) {
  Vec2 x = p_distorted;
  double residual = 0.0;
  for (int i = 0; i <= max_iter; ++i) {
    const Vec2 mismatch = apply_distortion(x, dist) - p_distorted;
    residual = mismatch.norm();
    if (!std::isfinite(residual)) break;
    if (residual <= tol) return x;
    if (i == max_iter) break;
    x -= mismatch;
  }
  throw UndistortError(x, residual);
}

Vec2 world_to_pixel(const Vec3& p_world, const Mat3& R, const Vec3& t,
                    const CameraIntrinsics& intr, const DistortionCoeffs& dist) {
  const Vec3 p = R * p_world + t;
  if (!(p.z() > 0.0)) throw Error(ErrorCode::kBehindCamera, "point is not in front of the camera");
  if (p.z() < 1e-12) throw Error(ErrorCode::kDegenerateDepth, "point depth below 1e-12");
  const Vec2 d = apply_distortion(Vec2(p.x() / p.z(), p.y() / p.z()), dist);
  return {intr.fx * d.x() + intr.cx, intr.fy * d.y() + intr.cy};
}

namespace {

// Similarity moving the centroid to the origin with mean distance sqrt(2).
Mat3 normalizing_transform(std::span<const Vec2> pts) {
  Vec2 c = Vec2::Zero();
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  double mean_dist = 0.0;
  for (const auto& p : pts) mean_dist += (p - c).norm();
  mean_dist /= static_cast<double>(pts.size());
  if (!(mean_dist > 0.0)) throw Error(ErrorCode::kDegenerateView, "all points coincide");
  const double s = std::sqrt(2.0) / mean_dist;
  Mat3 T;
  T << s, 0.0, -s * c.x(), 0.0, s, -s * c.y(), 0.0, 0.0, 1.0;
  return T;
}

bool nearly_collinear(std::span<const Vec2> pts) {
  Vec2 c = Vec2::Zero();
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  Mat2 scatter = Mat2::Zero();
  for (const auto& p : pts) scatter += (p - c) * (p - c).transpose();
  Eigen::JacobiSVD<Mat2> svd(scatter);
  const auto& s = svd.singularValues();
  return !(s[0] > 0.0) || s[1] / s[0] < 1e-12;
}

}  // namespace

Mat3 estimate_homography(const PlanarView& view) {
  const std::size_t n = view.points.size();
  if (n < 4) {
    throw Error(ErrorCode::kDegenerateView,
                "view " + std::to_string(view.view_id) + " has fewer than 4 points");
  }
  std::vector<Vec2> target(n), pixel(n);
  for (std::size_t i = 0; i < n; ++i) {
    target[i] = view.points[i].target;
    pixel[i] = view.points[i].pixel;
  }
  if (nearly_collinear(target) || nearly_collinear(pixel)) {
    throw Error(ErrorCode::kDegenerateView,
                "view " + std::to_string(view.view_id) + " has collinear points");
  }
  const Mat3 Tt = normalizing_transform(target);
  const Mat3 Tp = normalizing_transform(pixel);

  MatX A(2 * n, 9);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3 X = Tt * target[i].homogeneous();
    const Vec3 u = Tp * pixel[i].homogeneous();
    const auto r = static_cast<Eigen::Index>(2 * i);
    A.row(r) << -X.x(), -X.y(), -1.0, 0.0, 0.0, 0.0, u.x() * X.x(), u.x() * X.y(), u.x();
    A.row(r + 1) << 0.0, 0.0, 0.0, -X.x(), -X.y(), -1.0, u.y() * X.x(), u.y() * X.y(), u.y();
  }
  Eigen::JacobiSVD<MatX> svd(A, Eigen::ComputeFullV);
  const VecX& s = svd.singularValues();
  if (s.size() >= 8 && s[7] / s[0] < 1e-12) {
    throw Error(ErrorCode::kDegenerateView,
                "view " + std::to_string(view.view_id) + " is rank deficient");
  }
  const VecX h = svd.matrixV().col(8);
  Mat3 Hn;
  Hn << h[0], h[1], h[2], h[3], h[4], h[5], h[6], h[7], h[8];
  Mat3 H = Tp.inverse() * Hn * Tt;
  if (std::abs(H(2, 2)) > 1e-9) {
    H /= H(2, 2);
  } else {
    H /= H.norm();
  }
  return H;
}

ReprojectionReport reprojection_errors(std::span<const PlanarView> views,
                                       const CameraIntrinsics& intr, const DistortionCoeffs& dist,
                                       std::span<const TargetPose> poses) {
  if (views.size() != poses.size()) {
    throw Error(ErrorCode::kInvalidInput, "reprojection needs one pose per view");
  }
  ReprojectionReport report;
  double sum_sq = 0.0;
  for (std::size_t v = 0; v < views.size(); ++v) {
    const auto& view = views[v];
    for (std::size_t i = 0; i < view.points.size(); ++i) {
      const auto& c = view.points[i];
      const Vec2 predicted =
          world_to_pixel(Vec3(c.target.x(), c.target.y(), 0.0), poses[v].R, poses[v].t, intr, dist);
      const Vec2 r = c.pixel - predicted;
      report.residuals.push_back({view.view_id, i, r});
      report.max_px = std::max(report.max_px, r.norm());
      sum_sq += r.squaredNorm();
    }
  }
  if (!report.residuals.empty()) {
    report.rms_px = std::sqrt(sum_sq / (2.0 * static_cast<double>(report.residuals.size())));
  }
  return report;
}

}  // namespace camimu
