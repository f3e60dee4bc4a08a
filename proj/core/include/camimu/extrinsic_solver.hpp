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

// Camera-to-IMU extrinsic rotation from paired relative rotations
// (Huber-weighted quaternion constraints solved by SVD), plus a linear
// translation solve.

#include <optional>
#include <span>
#include <vector>

#include "camimu/geometry.hpp"
#include "camimu/preintegration.hpp"

namespace camimu {

struct RelativeRotationPair {
  UnitQuaternion q_imu;        // q_{b_k b_k+1}
  UnitQuaternion q_cam;        // q_{c_k c_k+1}
  std::optional<Vec3> t_cam;   // camera translation in c_k, m
  int interval_id = 0;
};

struct RotationSolverConfig {
  double r_thr = deg2rad(5.0);   // rad
  int max_rounds = 10;
  double min_rotation_deg = 0.5;
  double sv_ratio_threshold = 100.0;
  double change_tolerance_deg = 0.01;
};

struct RoundRecord {
  int round = 0;
  UnitQuaternion q_bc;
  Vec4 singular_values = Vec4::Zero();
  double change_deg = 0.0;          // rotation change from the previous round
  double weighted_residual = 0.0;   // sum of w * r^2 with this round's weights and residuals
  std::vector<double> residuals;    // rad, per used pair
  std::vector<double> weights;      // weights used in this round's solve
};

struct ExtrinsicResult {
  UnitQuaternion q_bc;
  Mat3 R_bc = Mat3::Identity();
  std::optional<Vec3> t_bc;
  double translation_rms = 0.0;
  /// interval_id of the pairs kept after the small-rotation filter.
  std::vector<int> pair_ids;
  std::vector<int> dropped_ids;
  std::vector<double> residuals;  // rad, final estimate
  std::vector<double> weights;    // final Huber weights
  /// Descending; the last one belongs to the solution.
  Vec4 singular_values = Vec4::Zero();
  int iterations = 0;
  bool excitation_ok = false;
  bool converged = false;
  std::vector<RoundRecord> history;
};

/// [q_imu]_L - [q_cam]_R, so that Q * q_bc = 0 for the true extrinsic rotation.
Mat4 constraint_block(const RelativeRotationPair& pair);

/// 1 when residual <= r_thr, r_thr / residual otherwise.
double huber_weight(double residual, double r_thr);

/// Iteratively reweighted SVD solve. Throws kInsufficientData with fewer
/// than 4 pairs left after dropping near-zero rotations. Under-excited data
/// is returned with converged = false.
ExtrinsicResult solve_rotation(std::span<const RelativeRotationPair> pairs,
                               const RotationSolverConfig& config = {});

struct TranslationResult {
  Vec3 t_bc = Vec3::Zero();
  double rms = 0.0;  // m
  Vec3 singular_values = Vec3::Zero();
};

/// Stacks (R_imu_k - I) t_bc = R_bc t_cam_k - t_imu_k, with t_imu_k from
/// alpha compensated by the start velocity and gravity of `start_states`.
/// Throws kUnobservableTranslation when the system has rank < 3.
TranslationResult solve_translation(std::span<const RelativeRotationPair> pairs,
                                    std::span<const PreintegratedDelta> deltas,
                                    std::span<const NavState> start_states, const Mat3& R_bc,
                                    const Vec3& g_w);

enum class PoseConvention { kCameraToWorld, kWorldToCamera };

struct CameraPose {
  double t = 0.0;
  UnitQuaternion q;        // rotation part of the pose as given
  Vec3 p = Vec3::Zero();   // translation part of the pose as given
};

/// Rotation and camera position in the world (camera-to-world form).
CameraPose to_camera_to_world(const CameraPose& pose, PoseConvention convention);

/// Pair from two camera poses and the IMU delta over the same interval.
/// Throws kAlignment when the delta interval and the pose times differ by
/// more than half a frame period.
RelativeRotationPair pair_from_camera_poses(const CameraPose& pose_k, const CameraPose& pose_k1,
                                            const PreintegratedDelta& delta,
                                            PoseConvention convention, double frame_period,
                                            int interval_id = 0);

}  // namespace camimu
