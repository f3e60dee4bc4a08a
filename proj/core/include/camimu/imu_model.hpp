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

// IMU measurement and bias models, noise discretization, and the
// deterministic error model h(a) = M * S * (a - b).

#include <limits>
#include <span>
#include <vector>

#include "camimu/types.hpp"

namespace camimu {

struct ImuSample {
  double t = 0.0;            // s
  Vec3 accel = Vec3::Zero();  // m/s^2
  Vec3 gyro = Vec3::Zero();   // rad/s
};

struct ImuNoiseParams {
  double sigma_a = 0.0;   // accel noise density, m/s^2/sqrt(Hz)
  double sigma_w = 0.0;   // gyro noise density, rad/s/sqrt(Hz)
  double sigma_ba = 0.0;  // accel random walk, m/s^3/sqrt(Hz)
  double sigma_bw = 0.0;  // gyro random walk, rad/s^2/sqrt(Hz)
  /// Accel bias time constant in seconds; infinity means a pure random walk.
  double tau = std::numeric_limits<double>::infinity();

  void validate() const;
};

/// Scale is the diagonal of S, misalignment the upper-unitriangular M.
struct SensorErrorModel {
  Vec3 bias = Vec3::Zero();
  Vec3 scale = Vec3::Ones();
  Mat3 misalign = Mat3::Identity();

  /// M * S
  Mat3 correction() const;
  /// h(raw) = M * S * (raw - bias)
  Vec3 correct(const Vec3& raw) const;
  /// Inverse of correct().
  Vec3 corrupt(const Vec3& clean) const;
  /// Throws kInvalidInput unless scale > 0 and M is upper-unitriangular.
  void validate() const;
};

struct ImuDeterministicParams {
  SensorErrorModel accel;
  SensorErrorModel gyro;
};

struct BiasState {
  Vec3 accel = Vec3::Zero();
  Vec3 gyro = Vec3::Zero();
};

/// Forward model. With R_bw the world-to-body rotation and g_w = (0, 0, g),
/// a stationary level sensor reads (0, 0, +g):
///   clean = a_body + R_bw * g_w,  accel = corrupt(clean) + bias.accel + n_a
///   gyro  = corrupt(w_body) + bias.gyro + n_w
/// n_a and n_w are the discrete per-sample noise values.
ImuSample apply_measurement_model(double t, const Vec3& true_accel, const Vec3& true_gyro,
                                  const Mat3& R_bw, const Vec3& g_w,
                                  const ImuDeterministicParams& det, const BiasState& bias,
                                  const Vec3& n_a = Vec3::Zero(), const Vec3& n_w = Vec3::Zero());

/// Applies the calibrated deterministic model to a raw sample.
ImuSample correct_deterministic(const ImuSample& sample, const ImuDeterministicParams& det);

/// One bias step of length dt. xi_a and xi_w are standard-normal draws.
/// Finite tau uses the exact exponential-decay discretization.
BiasState propagate_bias(const BiasState& bias, double dt, const ImuNoiseParams& params,
                         const Vec3& xi_a = Vec3::Zero(), const Vec3& xi_w = Vec3::Zero());

enum class NoiseKind { kWhite, kWalk };

/// Discrete standard deviation: white -> sigma / sqrt(dt), walk -> sigma * sqrt(dt).
double discretize_noise(double sigma, double dt, NoiseKind kind);

/// Throws kInvalidInput on non-finite values or non-increasing timestamps.
void validate_recording(std::span<const ImuSample> samples);

/// Median spacing between consecutive timestamps.
double median_dt(std::span<const ImuSample> samples);

}  // namespace camimu
