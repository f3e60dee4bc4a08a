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

// Multi-position deterministic IMU calibration: static-interval detection,
// accelerometer fit against gravity magnitude, gyroscope fit against the
// gravity direction seen before and after each motion.

#include <cstddef>
#include <span>
#include <vector>

#include "camimu/imu_model.hpp"
#include "camimu/least_squares.hpp"

namespace camimu {

struct StaticInterval {
  double t_start = 0.0;
  double t_end = 0.0;
  std::size_t first = 0;  // sample indices, inclusive
  std::size_t last = 0;
};

struct StaticDetectorOptions {
  double window = 0.5;            // s
  double threshold_factor = 4.0;  // times the baseline windowed variance
  double init_duration = 30.0;    // s of leading data used for the baseline
  double min_duration = 1.0;      // s
  /// Lower bound on the baseline, in (m/s^2)^2, so noise-free data still has a threshold.
  double variance_floor = 1e-8;
  /// Also require the gyro to stay near its leading-segment mean; rotations
  /// about the gravity axis barely move the accel.
  bool use_gyro = true;
  double gyro_variance_floor = 1e-12;  // (rad/s)^2
  /// The leading segment counts as moving when the RMS gyro deviation from
  /// its mean exceeds this, in rad/s.
  double max_leading_gyro_rms = 0.2;
};

/// Throws kCalibrationData when the leading segment is not static or no
/// interval survives.
std::vector<StaticInterval> detect_static_intervals(std::span<const ImuSample> samples,
                                                    const StaticDetectorOptions& options = {});

/// Mean accel over each interval after dropping min(trim, duration / 4)
/// seconds at both ends.
std::vector<Vec3> static_accel_means(std::span<const ImuSample> samples,
                                     std::span<const StaticInterval> intervals, double trim);

struct SensorCalibration {
  SensorErrorModel model;
  double loss = 0.0;
  int iterations = 0;
  std::vector<double> loss_trace;
};

/// Loss sum_k (g^2 - |M S (a_k - b)|^2)^2 of a candidate model.
double accelerometer_loss(std::span<const Vec3> static_means, const SensorErrorModel& model,
                          double g);

/// Throws kObservability for fewer than 9 orientations or a rank-deficient
/// Jacobian, kConvergenceFailure when the iteration limit is hit with the
/// loss still above 1e-6 * M * g^4.
SensorCalibration calibrate_accelerometer(std::span<const Vec3> static_means, double g,
                                          const LmOptions& options = {});

/// Gravity direction carried through a rotation measured by the gyro:
/// integrates q' = q * (0, w/2) with midpoint rates and returns R(q)^T u.
Vec3 propagate_gravity_direction(std::span<const ImuSample> samples, const Vec3& u_start);

/// Fits gyro scale and misalignment so integrated rotations carry the
/// calibrated gravity direction of static interval k-1 onto that of k.
/// Gyro bias is the raw mean over the first static interval.
SensorCalibration calibrate_gyroscope(std::span<const ImuSample> samples,
                                      std::span<const StaticInterval> intervals,
                                      const SensorErrorModel& accel, double trim,
                                      const LmOptions& options = {});

struct ImuCalibrationResult {
  ImuDeterministicParams params;
  std::vector<StaticInterval> intervals;
  double accel_loss = 0.0;
  double gyro_loss = 0.0;
  std::vector<double> accel_loss_trace;
  std::vector<double> gyro_loss_trace;
};

ImuCalibrationResult calibrate_imu(std::span<const ImuSample> samples, double g,
                                   const StaticDetectorOptions& detector = {});

}  // namespace camimu
