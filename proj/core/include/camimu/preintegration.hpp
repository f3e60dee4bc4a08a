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

// IMU pre-integration between camera frames: position, velocity and
// rotation deltas (alpha, beta, gamma) expressed in the first body frame.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "camimu/geometry.hpp"
#include "camimu/imu_model.hpp"

namespace camimu {

struct PreintegratedDelta {
  Vec3 alpha = Vec3::Zero();  // m
  Vec3 beta = Vec3::Zero();   // m/s
  UnitQuaternion gamma;       // rotation b_i -> b_j
  double t_start = 0.0;
  double t_end = 0.0;
  double dt_total = 0.0;
  Vec3 bias_accel = Vec3::Zero();
  Vec3 bias_gyro = Vec3::Zero();
  std::size_t sample_count = 0;
  std::vector<std::string> warnings;
};

struct NavState {
  Vec3 p = Vec3::Zero();  // p_wb, m
  Vec3 v = Vec3::Zero();  // v_wb, m/s
  UnitQuaternion q;       // q_wb
};

/// Integrates consecutive samples. Each step holds the endpoint-averaged,
/// bias-corrected rates constant and integrates them in closed form.
/// Throws kInvalidInput for fewer than 2 samples or non-increasing time;
/// a step longer than 10x the median step adds a warning.
PreintegratedDelta preintegrate(std::span<const ImuSample> samples, const Vec3& b_a,
                                const Vec3& b_w);

/// Linear interpolation of accel and gyro at time t between a and b.
ImuSample interpolate_sample(const ImuSample& a, const ImuSample& b, double t);

/// Samples of `recording` clipped to [t0, t1], with interpolated samples at
/// both boundaries. Throws kAlignment when the recording does not cover the interval.
std::vector<ImuSample> slice_interval(std::span<const ImuSample> recording, double t0, double t1);

PreintegratedDelta preintegrate_interval(std::span<const ImuSample> recording, double t0,
                                         double t1, const Vec3& b_a, const Vec3& b_w);

/// Delta over A followed by B (B starts where A ends).
PreintegratedDelta compose(const PreintegratedDelta& a, const PreintegratedDelta& b);

/// p_j = p_i + v_i dt - g dt^2 / 2 + R_i alpha, v_j = v_i - g dt + R_i beta, q_j = q_i * gamma.
NavState predict_state(const NavState& start, const PreintegratedDelta& delta, const Vec3& g_w);

/// gamma with canonical sign.
UnitQuaternion relative_rotation(const PreintegratedDelta& delta);

}  // namespace camimu
