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

// Overlapping Allan variance and white-noise / random-walk identification.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "camimu/imu_model.hpp"

namespace camimu {

struct AllanPoint {
  double tau = 0.0;        // cluster time, s
  double avar = 0.0;       // signal units^2
  std::size_t count = 0;   // non-overlapping clusters in the record
};

struct AllanCurve {
  std::vector<AllanPoint> points;
  /// Requested cluster sizes that were dropped because the record is too short.
  std::vector<std::string> warnings;
};

/// Points with fewer clusters than this are not reported.
inline constexpr std::size_t kMinClusters = 9;

/// Log-spaced cluster sizes (in samples) between tau_min and tau_max,
/// `per_decade` points per decade, rounded and deduplicated. tau_max <= 0
/// means the longest cluster that still leaves kMinClusters clusters.
std::vector<std::size_t> log_spaced_cluster_sizes(std::size_t n_samples, double dt,
                                                  double tau_min = 0.0, double tau_max = 0.0,
                                                  int per_decade = 20);

/// Overlapping Allan variance, tau = m * dt. Throws kInsufficientData when
/// no requested cluster size fits the record.
AllanCurve allan_variance(std::span<const double> series, double dt,
                          std::span<const std::size_t> cluster_sizes);
AllanCurve allan_variance(std::span<const double> series, double dt);

/// Least-squares slope of log(adev) against log(tau) over [tau_lo, tau_hi].
double deviation_slope(const AllanCurve& curve, double tau_lo, double tau_hi);

struct AxisNoiseFit {
  std::string axis;
  /// Deviation of the fitted -1/2 line at tau = 1 s.
  double density = 0.0;
  /// Deviation of the white-corrected +1/2 line at tau = 3 s, when identified.
  std::optional<double> walk;
  double white_fit_rms = 0.0;  // log space
  double walk_fit_rms = 0.0;   // log space, count weighted
  double white_tau_lo = 0.0, white_tau_hi = 0.0;
  double walk_tau_lo = 0.0, walk_tau_hi = 0.0;
};

struct NoiseFitOptions {
  double slope_tolerance = 0.1;
  double max_fit_rms = 0.1;
  std::size_t min_points = 3;
};

/// Throws kUnidentifiableRegime naming `axis` when no -1/2 segment exists or
/// its fit residual exceeds the threshold. A missing +1/2 regime only leaves
/// `walk` empty.
AxisNoiseFit fit_axis_noise(const AllanCurve& curve, const std::string& axis,
                            const NoiseFitOptions& options = {});

struct NoiseReport {
  std::array<AxisNoiseFit, 3> gyro;
  std::array<AxisNoiseFit, 3> accel;
  /// Mean over axes; walks are zero when any axis lacks the regime.
  ImuNoiseParams mean;
  bool gyro_walk_identified = false;
  bool accel_walk_identified = false;
};

/// Curves ordered gx, gy, gz and ax, ay, az.
NoiseReport fit_noise_params(std::span<const AllanCurve, 3> gyro_curves,
                             std::span<const AllanCurve, 3> accel_curves,
                             const NoiseFitOptions& options = {});

}  // namespace camimu
