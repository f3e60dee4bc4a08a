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

#include "camimu/preintegration.hpp"

#include <algorithm>
#include <cmath>

#include "camimu/error.hpp"

namespace camimu {

namespace {

// Coefficients of the rotation integrals for S = skew(phi):
//   int_0^1 Exp(s S) ds     = I + c1 S + c2 S^2
//   int_0^1 (1-s) Exp(s S) ds = I/2 + c2 S + c3 S^2
struct StepCoefficients {
  double c1, c2, c3;
};

StepCoefficients step_coefficients(double phi) {
  const double p2 = phi * phi;
  if (phi < 1e-3) {
    return {0.5 - p2 / 24.0 + p2 * p2 / 720.0, 1.0 / 6.0 - p2 / 120.0 + p2 * p2 / 5040.0,
            1.0 / 24.0 - p2 / 720.0 + p2 * p2 / 40320.0};
  }
  const double s = std::sin(phi), c = std::cos(phi);
  return {(1.0 - c) / p2, (phi - s) / (p2 * phi), (0.5 * p2 - 1.0 + c) / (p2 * p2)};
}

}  // namespace

PreintegratedDelta preintegrate(std::span<const ImuSample> samples, const Vec3& b_a,
                                const Vec3& b_w) {
  if (samples.size() < 2) throw Error(ErrorCode::kInvalidInput, "pre-integration needs at least 2 samples");
  if (!b_a.allFinite() || !b_w.allFinite()) throw Error(ErrorCode::kInvalidInput, "bias must be finite");
  validate_recording(samples);

  PreintegratedDelta d;
  d.t_start = samples.front().t;
  d.t_end = samples.back().t;
  d.bias_accel = b_a;
  d.bias_gyro = b_w;
  d.sample_count = samples.size();

  const double gap_limit = 10.0 * median_dt(samples);
  Mat3 R = Mat3::Identity();
  for (std::size_t k = 1; k < samples.size(); ++k) {
    const double dt = samples[k].t - samples[k - 1].t;
    if (dt > gap_limit) {
      d.warnings.push_back("gap of " + std::to_string(dt) + " s at t = " +
                           std::to_string(samples[k - 1].t));
    }
    const Vec3 w = 0.5 * (samples[k - 1].gyro + samples[k].gyro) - b_w;
    const Vec3 a = 0.5 * (samples[k - 1].accel + samples[k].accel) - b_a;
    const Vec3 phi = w * dt;
    const Mat3 S = skew(phi);
    const Mat3 S2 = S * S;
    const auto c = step_coefficients(phi.norm());
    const Mat3 G1 = Mat3::Identity() + c.c1 * S + c.c2 * S2;
    const Mat3 G2 = 0.5 * Mat3::Identity() + c.c2 * S + c.c3 * S2;

    d.alpha += d.beta * dt + R * (G2 * a) * (dt * dt);
    d.beta += R * (G1 * a) * dt;
    d.gamma = d.gamma * UnitQuaternion::exp(phi);
    d.dt_total += dt;
    R = quat_to_rot(d.gamma);
  }
  return d;
}

ImuSample interpolate_sample(const ImuSample& a, const ImuSample& b, double t) {
  const double span = b.t - a.t;
  const double s = span > 0.0 ? (t - a.t) / span : 0.0;
  return {t, a.accel + s * (b.accel - a.accel), a.gyro + s * (b.gyro - a.gyro)};
}

std::vector<ImuSample> slice_interval(std::span<const ImuSample> recording, double t0, double t1) {
  if (!(t1 > t0)) throw Error(ErrorCode::kInvalidInput, "interval end must follow its start");
  if (recording.size() < 2 || t0 < recording.front().t || t1 > recording.back().t) {
    throw Error(ErrorCode::kAlignment, "IMU recording does not cover [" + std::to_string(t0) +
                                           ", " + std::to_string(t1) + "]");
  }
  auto by_time = [](const ImuSample& s, double t) { return s.t < t; };
  auto lo = std::lower_bound(recording.begin(), recording.end(), t0, by_time);
  auto hi = std::lower_bound(recording.begin(), recording.end(), t1, by_time);

  std::vector<ImuSample> out;
  if (lo->t == t0) {
    out.push_back(*lo);
    ++lo;
  } else {
    out.push_back(interpolate_sample(*(lo - 1), *lo, t0));
  }
  for (auto it = lo; it != hi; ++it) out.push_back(*it);
  if (hi->t == t1) {
    out.push_back(*hi);
  } else {
    out.push_back(interpolate_sample(*(hi - 1), *hi, t1));
  }
  return out;
}

PreintegratedDelta preintegrate_interval(std::span<const ImuSample> recording, double t0,
                                         double t1, const Vec3& b_a, const Vec3& b_w) {
  const auto samples = slice_interval(recording, t0, t1);
  return preintegrate(samples, b_a, b_w);
}

PreintegratedDelta compose(const PreintegratedDelta& a, const PreintegratedDelta& b) {
  PreintegratedDelta out;
  const Mat3 Ra = quat_to_rot(a.gamma);
  out.alpha = a.alpha + a.beta * b.dt_total + Ra * b.alpha;
  out.beta = a.beta + Ra * b.beta;
  out.gamma = a.gamma * b.gamma;
  out.t_start = a.t_start;
  out.t_end = b.t_end;
  out.dt_total = a.dt_total + b.dt_total;
  out.bias_accel = a.bias_accel;
  out.bias_gyro = a.bias_gyro;
  out.sample_count = a.sample_count + b.sample_count - 1;
  out.warnings = a.warnings;
  out.warnings.insert(out.warnings.end(), b.warnings.begin(), b.warnings.end());
  return out;
}

NavState predict_state(const NavState& start, const PreintegratedDelta& delta, const Vec3& g_w) {
  const Mat3 R = quat_to_rot(start.q);
  const double dt = delta.dt_total;
  NavState out;
  out.p = start.p + start.v * dt - 0.5 * g_w * dt * dt + R * delta.alpha;
  out.v = start.v - g_w * dt + R * delta.beta;
  out.q = start.q * delta.gamma;
  return out;
}

UnitQuaternion relative_rotation(const PreintegratedDelta& delta) { return delta.gamma.canonical(); }

}  // namespace camimu
