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

// Synthetic ground truth: smooth rig trajectories with analytic
// derivatives, IMU and camera streams derived from them, multi-position
// IMU calibration recordings, and relative-rotation benchmark sets.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "camimu/camera_model.hpp"
#include "camimu/extrinsic_solver.hpp"
#include "camimu/imu_calibration.hpp"
#include "camimu/imu_model.hpp"
#include "camimu/preintegration.hpp"

namespace camimu {

/// Independent generator for a named stream, so streams never share draws.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream);

enum Stream : std::uint64_t {
  kStreamTrajectory = 1,
  kStreamAccelNoise = 2,
  kStreamGyroNoise = 3,
  kStreamAccelWalk = 4,
  kStreamGyroWalk = 5,
  kStreamPixelNoise = 6,
  kStreamPoseNoise = 7,
  kStreamViews = 8,
  kStreamMotions = 9,
  kStreamPairs = 10,
};

struct TrajectorySpec {
  double duration = 20.0;   // s
  double imu_rate = 200.0;  // Hz
  double cam_rate = 10.0;   // Hz
  /// p_i(t) = origin_i + amp_i sin(2 pi f_i t + phase_i)
  Vec3 origin = Vec3::Zero();
  Vec3 pos_amplitude = Vec3::Zero();  // m
  Vec3 pos_frequency = Vec3::Zero();  // Hz
  Vec3 pos_phase = Vec3::Zero();      // rad
  /// R_wb = base * Rz(yaw) * Ry(pitch) * Rx(roll); angles are sinusoids like p.
  Mat3 base_attitude = Mat3::Identity();
  Vec3 rot_amplitude = Vec3::Zero();  // rad, (roll, pitch, yaw)
  Vec3 rot_frequency = Vec3::Zero();  // Hz
  Vec3 rot_phase = Vec3::Zero();      // rad
  std::uint64_t seed = 42;

  void validate() const;
};

/// Hand-held style excitation with phases drawn from `seed`.
TrajectorySpec default_trajectory_spec(std::uint64_t seed, double duration = 20.0);

struct KinematicState {
  double t = 0.0;
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 a = Vec3::Zero();      // world-frame acceleration
  Mat3 R_wb = Mat3::Identity();
  Vec3 omega = Vec3::Zero();  // body-frame angular rate
};

class Trajectory {
 public:
  explicit Trajectory(const TrajectorySpec& spec);

  KinematicState at(double t) const;
  NavState nav(double t) const;
  const TrajectorySpec& spec() const { return spec_; }

 private:
  TrajectorySpec spec_;
};

struct ImuEmissionOptions {
  Vec3 g_w = Vec3(0.0, 0.0, kDefaultGravity);
  ImuDeterministicParams det;
  ImuNoiseParams noise;
  BiasState initial_bias;
  bool add_noise = true;
};

/// Samples at k / imu_rate for k = 0 .. duration * imu_rate.
std::vector<ImuSample> emit_imu(const Trajectory& traj, const ImuEmissionOptions& options,
                                std::uint64_t seed);

/// rows x cols corners at (c * spacing, r * spacing) on the target plane.
struct TargetGrid {
  int rows = 6;
  int cols = 6;
  double spacing = 0.04;  // m

  std::vector<Vec2> points() const;
  Vec2 center() const;
};

struct CameraEmissionOptions {
  Mat3 R_bc = Mat3::Identity();
  Vec3 t_bc = Vec3::Zero();
  CameraIntrinsics intrinsics;
  DistortionCoeffs distortion;
  TargetGrid grid;
  int width = 1280;
  int height = 720;
  double pixel_noise = 0.0;       // px, per component
  double target_distance = 1.25;  // m along the optical axis in the rest pose
};

struct CameraEmission {
  std::vector<CameraPose> poses;   // camera-to-world, every frame
  std::vector<PlanarView> views;   // frames with the whole target in the image
  std::vector<std::string> log;
  Mat3 R_wt = Mat3::Identity();    // target pose in the world
  Vec3 t_wt = Vec3::Zero();
};

/// Frames at k / cam_rate. Camera pose T_wc = T_wb * T_bc.
CameraEmission emit_camera(const Trajectory& traj, const CameraEmissionOptions& options,
                           std::uint64_t seed);

/// Views of a target at random tilts in front of a fixed camera.
struct CalibrationViewSet {
  std::vector<PlanarView> views;
  std::vector<TargetPose> poses;
};

CalibrationViewSet generate_calibration_views(const CameraIntrinsics& intr,
                                              const DistortionCoeffs& dist, const TargetGrid& grid,
                                              int n_views, double pixel_noise, std::uint64_t seed,
                                              int width = 1280, int height = 720);

struct StaticMotionSpec {
  double imu_rate = 200.0;
  double initial_static = 50.0;  // s
  int motions = 50;
  double motion_duration = 3.0;  // s
  double static_duration = 1.0;  // s after each motion
  double min_angle_deg = 60.0;
  double max_angle_deg = 150.0;
  Vec3 g_w = Vec3(0.0, 0.0, kDefaultGravity);
  ImuDeterministicParams det;
  ImuNoiseParams noise;
  bool add_noise = false;
};

struct StaticMotionRecording {
  std::vector<ImuSample> samples;
  std::vector<StaticInterval> truth;  // static intervals
  std::vector<Mat3> orientations;     // R_wb of each static interval
};

/// Stationary start, then rotations about random body axes with a
/// raised-cosine rate profile, each followed by a static pause.
StaticMotionRecording generate_static_motion_recording(const StaticMotionSpec& spec,
                                                       std::uint64_t seed);

struct RotationPairSpec {
  int count = 200;
  double noise_deg = 0.5;          // per-axis rotation noise on the camera side
  double outlier_fraction = 0.2;
  double outlier_deg = 30.0;
  double min_angle_deg = 10.0;
  double max_angle_deg = 60.0;
  Mat3 R_bc = Mat3::Identity();
  /// Rotation axis for every pair when set (under-excited data).
  std::optional<Vec3> fixed_axis;
};

struct RotationPairSet {
  std::vector<RelativeRotationPair> pairs;
  std::vector<bool> is_outlier;
};

/// q_cam = q_bc^-1 * q_imu * q_bc, perturbed by noise and planted outliers.
RotationPairSet generate_rotation_pairs(const RotationPairSpec& spec, std::uint64_t seed);

/// Rotation matrix printed in the reference extrinsic, projected onto SO(3).
Mat3 reference_extrinsic_rotation();
Vec3 reference_extrinsic_translation();
CameraIntrinsics reference_intrinsics();
DistortionCoeffs reference_distortion();
/// Noise densities and random walks of the reference IMU.
ImuNoiseParams reference_noise();
/// Small scale, misalignment and bias errors for calibration recordings.
ImuDeterministicParams example_deterministic_params();

struct RigDataset {
  TrajectorySpec trajectory;
  std::vector<ImuSample> imu;
  std::vector<CameraPose> cam_poses;  // camera-to-world
  std::vector<PlanarView> views;
  std::vector<NavState> frame_states;
  std::vector<double> frame_times;
  CameraEmission camera;
  ImuEmissionOptions imu_options;
  CameraEmissionOptions camera_options;
  std::vector<std::string> log;
};

RigDataset generate_rig_dataset(const TrajectorySpec& trajectory, const ImuEmissionOptions& imu,
                                const CameraEmissionOptions& camera);

}  // namespace camimu
