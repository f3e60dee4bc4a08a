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

// Pinhole projection with radial-tangential distortion, and closed-form
// intrinsics estimation from views of a planar target.

#include <cstddef>
#include <span>
#include <vector>

#include "camimu/error.hpp"
#include "camimu/types.hpp"

namespace camimu {

struct CameraIntrinsics {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  /// Skew from the closed-form solve. Reported, but only placed in K on request.
  double gamma = 0.0;

  Mat3 matrix(bool include_skew = false) const;
  void validate() const;
};

/// Radial (k1, k2) and tangential (p1, p2) coefficients on normalized coordinates.
struct DistortionCoeffs {
  double k1 = 0.0;
  double k2 = 0.0;
  double p1 = 0.0;
  double p2 = 0.0;

  /// [[k1, k2], [p1, p2]]
  Mat2 as_matrix() const;
  bool is_zero() const { return k1 == 0.0 && k2 == 0.0 && p1 == 0.0 && p2 == 0.0; }
};

struct Correspondence {
  Vec2 target;  // metres on the target plane (Z = 0)
  Vec2 pixel;
};

struct PlanarView {
  int view_id = 0;
  std::vector<Correspondence> points;
};

/// Throws kInvalidInput on non-finite values or duplicate target points.
void validate_view(const PlanarView& view);

/// B = K^-T K^-1 (up to the scale fixed by the solve).
struct BMatrix {
  Mat3 entries = Mat3::Identity();

  double b11() const { return entries(0, 0); }
  double b12() const { return entries(0, 1); }
  double b13() const { return entries(0, 2); }
  double b22() const { return entries(1, 1); }
  double b23() const { return entries(1, 2); }
  double b33() const { return entries(2, 2); }
};

/// Target-to-camera transform: P_cam = R * P_target + t.
struct TargetPose {
  Mat3 R = Mat3::Identity();
  Vec3 t = Vec3::Zero();
};

/// Throws kBehindCamera for Z <= 0 and kDegenerateDepth for 0 < Z < 1e-12.
Vec2 project_to_pixel(const Vec3& p_cam, const CameraIntrinsics& intr);

Vec2 apply_distortion(const Vec2& p, const DistortionCoeffs& dist);

/// Thrown when undistort_point does not reach tolerance.
class UndistortError : public Error {
 public:
  UndistortError(const Vec2& last_iterate, double residual);

  const Vec2& last_iterate() const { return last_; }
  double residual() const { return residual_; }

 private:
  Vec2 last_;
  double residual_;
};

/// Inverts apply_distortion by the fixed-point iteration x <- p - (distort(x) - x).
/// Contracts on the documented domain |p| <= 1.5, |k1|,|k2|,|p1|,|p2| <= 0.5.
Vec2 undistort_point(const Vec2& p_distorted, const DistortionCoeffs& dist, double tol = 1e-10,
                     int max_iter = 50);

/// World point -> pixel: rigid transform, normalization, distortion, then K.
Vec2 world_to_pixel(const Vec3& p_world, const Mat3& R, const Vec3& t,
                    const CameraIntrinsics& intr, const DistortionCoeffs& dist);

/// Normalized DLT homography mapping (X, Y, 1) on the target to pixels.
/// Scaled so H(2,2) == 1 when |H(2,2)| > 1e-9, otherwise to unit Frobenius norm.
Mat3 estimate_homography(const PlanarView& view);

struct IntrinsicsSolution {
  CameraIntrinsics intrinsics;
  BMatrix b;
  /// Singular values of the stacked constraint system, descending.
  VecX singular_values;
};

IntrinsicsSolution solve_intrinsics(std::span<const Mat3> homographies);
IntrinsicsSolution solve_intrinsics(std::span<const PlanarView> views);

/// Closed-form intrinsics from B (K^-T K^-1 up to scale).
/// Throws kDegenerateGeometry when B11 <= 0 or a square root argument is negative.
CameraIntrinsics intrinsics_from_b(const BMatrix& b);

/// Target pose from a homography and known intrinsics (skew ignored).
TargetPose pose_from_homography(const Mat3& H, const CameraIntrinsics& intr);

/// Linear least-squares fit of (k1, k2, p1, p2) to the pixel residuals of
/// the undistorted projection model.
DistortionCoeffs fit_distortion(std::span<const PlanarView> views, const CameraIntrinsics& intr,
                                std::span<const TargetPose> poses);

struct ReprojectionResidual {
  int view_id = 0;
  std::size_t point_index = 0;
  Vec2 residual = Vec2::Zero();  // observed - predicted, pixels
};

struct ReprojectionReport {
  std::vector<ReprojectionResidual> residuals;
  /// Largest residual norm.
  double max_px = 0.0;
  /// Root mean square over all u and v components.
  double rms_px = 0.0;
};

ReprojectionReport reprojection_errors(std::span<const PlanarView> views,
                                       const CameraIntrinsics& intr, const DistortionCoeffs& dist,
                                       std::span<const TargetPose> poses);

struct CameraCalibrationOptions {
  bool estimate_distortion = true;
  /// With distortion, (fx, fy, cx, cy, k1, k2, p1, p2) are fitted to the
  /// reprojection residuals. Poses are not free parameters: each comes from
  /// the closed-form homography of its view undistorted with the current
  /// parameters.
  int max_iterations = 100;
};

struct CameraCalibration {
  CameraIntrinsics intrinsics;
  DistortionCoeffs distortion;
  BMatrix b;
  std::vector<TargetPose> poses;
  ReprojectionReport reprojection;
  int iterations = 0;  // solver iterations, 0 without distortion
};

CameraCalibration calibrate_camera(std::span<const PlanarView> views,
                                   const CameraCalibrationOptions& options = {});

}  // namespace camimu
