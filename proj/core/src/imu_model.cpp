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

#include "camimu/imu_model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "camimu/error.hpp"

namespace camimu {

void ImuNoiseParams::validate() const {
  for (double s : {sigma_a, sigma_w, sigma_ba, sigma_bw}) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
      throw Error(ErrorCode::kInvalidInput, "noise parameters must be finite and >= 0");
    }
  }
  if (!(tau > 0.0)) throw Error(ErrorCode::kInvalidInput, "bias time constant must be > 0");
}

Mat3 SensorErrorModel::correction() const { return misalign * scale.asDiagonal(); }

Vec3 SensorErrorModel::correct(const Vec3& raw) const { return correction() * (raw - bias); }

Vec3 SensorErrorModel::corrupt(const Vec3& clean) const {
  // M S is upper triangular, so the inverse is a back substitution.
  return correction().triangularView<Eigen::Upper>().solve(clean) + bias;
}

void SensorErrorModel::validate() const {
  if (!bias.allFinite() || !scale.allFinite() || !misalign.allFinite()) {
    throw Error(ErrorCode::kInvalidInput, "deterministic parameters must be finite");
  }
  if ((scale.array() <= 0.0).any()) {
    throw Error(ErrorCode::kInvalidInput, "scale diagonal must be > 0");
  }
  for (int i = 0; i < 3; ++i) {
    if (misalign(i, i) != 1.0) throw Error(ErrorCode::kInvalidInput, "misalignment needs unit diagonal");
    for (int j = 0; j < i; ++j) {
      if (misalign(i, j) != 0.0) {
        throw Error(ErrorCode::kInvalidInput, "misalignment must be upper triangular");
      }
    }
  }
}

ImuSample apply_measurement_model(double t, const Vec3& true_accel, const Vec3& true_gyro,
                                  const Mat3& R_bw, const Vec3& g_w,
                                  const ImuDeterministicParams& det, const BiasState& bias,
                                  const Vec3& n_a, const Vec3& n_w) {
  ImuSample s;
  s.t = t;
  s.accel = det.accel.corrupt(true_accel + R_bw * g_w) + bias.accel + n_a;
  s.gyro = det.gyro.corrupt(true_gyro) + bias.gyro + n_w;
  return s;
}

ImuSample correct_deterministic(const ImuSample& sample, const ImuDeterministicParams& det) {
  return {sample.t, det.accel.correct(sample.accel), det.gyro.correct(sample.gyro)};
}

BiasState propagate_bias(const BiasState& bias, double dt, const ImuNoiseParams& params,
                         const Vec3& xi_a, const Vec3& xi_w) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidInput, "bias step needs dt > 0");
  BiasState out;
  if (std::isinf(params.tau)) {
    out.accel = bias.accel + params.sigma_ba * std::sqrt(dt) * xi_a;
  } else {
    // Ornstein-Uhlenbeck transition over dt.
    const double decay = std::exp(-dt / params.tau);
    const double sd =
        params.sigma_ba * std::sqrt(0.5 * params.tau * (1.0 - std::exp(-2.0 * dt / params.tau)));
    out.accel = decay * bias.accel + sd * xi_a;
  }
  out.gyro = bias.gyro + params.sigma_bw * std::sqrt(dt) * xi_w;
  return out;
}

double discretize_noise(double sigma, double dt, NoiseKind kind) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidInput, "discretization needs dt > 0");
  if (!(sigma >= 0.0)) throw Error(ErrorCode::kInvalidInput, "noise sigma must be >= 0");
  return kind == NoiseKind::kWhite ? sigma / std::sqrt(dt) : sigma * std::sqrt(dt);
}

void validate_recording(std::span<const ImuSample> samples) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!std::isfinite(s.t) || !s.accel.allFinite() || !s.gyro.allFinite()) {
      throw Error(ErrorCode::kInvalidInput, "IMU sample " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(s.t > samples[i - 1].t)) {
      throw Error(ErrorCode::kInvalidInput,
                  "IMU timestamps not strictly increasing at sample " + std::to_string(i));
    }
  }
}

double median_dt(std::span<const ImuSample> samples) {
  if (samples.size() < 2) throw Error(ErrorCode::kInsufficientData, "need at least 2 IMU samples");
  std::vector<double> dts(samples.size() - 1);
  for (std::size_t i = 1; i < samples.size(); ++i) dts[i - 1] = samples[i].t - samples[i - 1].t;
  auto mid = dts.begin() + static_cast<std::ptrdiff_t>(dts.size() / 2);
  std::nth_element(dts.begin(), mid, dts.end());
  return *mid;
}

}  // namespace camimu
