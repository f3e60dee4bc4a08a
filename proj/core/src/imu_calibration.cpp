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

#include "camimu/imu_calibration.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <optional>
#include <string>

#include "camimu/error.hpp"
#include "camimu/geometry.hpp"

namespace camimu {

namespace {

using Channel = Vec3 ImuSample::*;

Vec3 window_mean(std::span<const ImuSample> s, std::size_t begin, std::size_t end, Channel ch) {
  Vec3 mean = Vec3::Zero();
  for (std::size_t i = begin; i < end; ++i) mean += s[i].*ch;
  return mean / static_cast<double>(end - begin);
}

// Mean squared deviation from `center`, or from the window's own mean when absent.
double window_variance(std::span<const ImuSample> s, std::size_t begin, std::size_t end,
                       Channel ch, const std::optional<Vec3>& center = std::nullopt) {
  const Vec3 mean = center ? *center : window_mean(s, begin, end, ch);
  double acc = 0.0;
  for (std::size_t i = begin; i < end; ++i) acc += (s[i].*ch - mean).squaredNorm();
  return acc / static_cast<double>(end - begin);
}

// Windowed variance of one channel and its threshold from the leading segment.
struct ChannelActivity {
  std::vector<double> var;
  double threshold = 0.0;
};

ChannelActivity channel_activity(std::span<const ImuSample> samples, std::size_t w,
                                 std::size_t n_init, Channel ch, double floor, double factor,
                                 const char* name, bool about_leading_mean) {
  ChannelActivity out;
  std::optional<Vec3> center;
  if (about_leading_mean) center = window_mean(samples, 0, n_init, ch);
  out.var.resize(samples.size() - w + 1);
  for (std::size_t i = 0; i < out.var.size(); ++i) {
    out.var[i] = window_variance(samples, i, i + w, ch, center);
  }
  double baseline = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + w <= n_init; ++i, ++count) baseline += out.var[i];
  baseline /= static_cast<double>(count);
  const double whole = window_variance(samples, 0, n_init, ch);
  if (whole > std::max(4.0 * baseline, floor)) {
    throw Error(ErrorCode::kCalibrationData,
                std::string("no static segment: leading ") + name + " data is in motion");
  }
  out.threshold = factor * std::max(baseline, floor);
  return out;
}

std::string trace_tail(const std::vector<double>& trace) {
  std::ostringstream os;
  os << "loss trace:";
  const std::size_t from = trace.size() > 5 ? trace.size() - 5 : 0;
  for (std::size_t i = from; i < trace.size(); ++i) os << ' ' << trace[i];
  return os.str();
}

// Parameter layout shared by both fits: (m01, m02, m12, s0, s1, s2[, b0, b1, b2]).
SensorErrorModel unpack(const VecX& x, const Vec3& bias) {
  SensorErrorModel m;
  m.misalign(0, 1) = x[0];
  m.misalign(0, 2) = x[1];
  m.misalign(1, 2) = x[2];
  m.scale = x.segment<3>(3);
  m.bias = x.size() >= 9 ? Vec3(x.segment<3>(6)) : bias;
  return m;
}

}  // namespace

std::vector<StaticInterval> detect_static_intervals(std::span<const ImuSample> samples,
                                                    const StaticDetectorOptions& options) {
  validate_recording(samples);
  const double dt = median_dt(samples);
  const std::size_t n = samples.size();
  const auto w = std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(options.window / dt)));
  if (n < w) throw Error(ErrorCode::kCalibrationData, "recording shorter than one window");

  const double t0 = samples.front().t;
  std::size_t n_init = 0;
  while (n_init < n && samples[n_init].t <= t0 + options.init_duration) ++n_init;
  if (n_init < w) throw Error(ErrorCode::kCalibrationData, "leading segment shorter than one window");
  if (std::sqrt(window_variance(samples, 0, n_init, &ImuSample::gyro, std::nullopt)) >
      options.max_leading_gyro_rms) {
    throw Error(ErrorCode::kCalibrationData, "no static segment: leading gyro data is rotating");
  }

  const auto accel = channel_activity(samples, w, n_init, &ImuSample::accel, options.variance_floor,
                                      options.threshold_factor, "accel", false);
  std::optional<ChannelActivity> gyro;
  if (options.use_gyro) {
    gyro = channel_activity(samples, w, n_init, &ImuSample::gyro, options.gyro_variance_floor,
                            options.threshold_factor, "gyro", true);
  }
  std::vector<bool> is_static(n, false);
  for (std::size_t i = 0; i < accel.var.size(); ++i) {
    const bool quiet = accel.var[i] < accel.threshold && (!gyro || gyro->var[i] < gyro->threshold);
    if (quiet) std::fill_n(is_static.begin() + static_cast<std::ptrdiff_t>(i), w, true);
  }

  std::vector<StaticInterval> out;
  std::size_t i = 0;
  while (i < n) {
    if (!is_static[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && is_static[j + 1]) ++j;
    if (samples[j].t - samples[i].t + dt >= options.min_duration) {
      out.push_back({samples[i].t, samples[j].t, i, j});
    }
    i = j + 1;
  }
  if (out.empty()) throw Error(ErrorCode::kCalibrationData, "no static interval found");
  return out;
}

std::vector<Vec3> static_accel_means(std::span<const ImuSample> samples,
                                     std::span<const StaticInterval> intervals, double trim) {
  std::vector<Vec3> means;
  means.reserve(intervals.size());
  for (const auto& iv : intervals) {
    std::size_t a = iv.first, b = iv.last;
    const double cut = std::min(trim, 0.25 * (iv.t_end - iv.t_start));
    while (a < b && samples[a].t < iv.t_start + cut) ++a;
    while (b > a && samples[b].t > iv.t_end - cut) --b;
    Vec3 m = Vec3::Zero();
    for (std::size_t i = a; i <= b; ++i) m += samples[i].accel;
    means.push_back(m / static_cast<double>(b - a + 1));
  }
  return means;
}

double accelerometer_loss(std::span<const Vec3> static_means, const SensorErrorModel& model,
                          double g) {
  double loss = 0.0;
  for (const auto& a : static_means) {
    const double r = g * g - model.correct(a).squaredNorm();
    loss += r * r;
  }
  return loss;
}

SensorCalibration calibrate_accelerometer(std::span<const Vec3> static_means, double g,
                                          const LmOptions& options) {
  const std::size_t m = static_means.size();
  if (m < 9) {
    throw Error(ErrorCode::kObservability,
                "accelerometer fit needs at least 9 static orientations, got " + std::to_string(m));
  }
  auto residuals = [&](const VecX& x, VecX& r, MatX* J) {
    const SensorErrorModel model = unpack(x, Vec3::Zero());
    const Mat3 MS = model.correction();
    r.resize(static_cast<Eigen::Index>(m));
    if (J) J->resize(r.size(), 9);
    for (std::size_t k = 0; k < m; ++k) {
      const Vec3 d = static_means[k] - model.bias;
      const Vec3 e = model.scale.cwiseProduct(d);
      const Vec3 h = MS * d;
      const auto row = static_cast<Eigen::Index>(k);
      r[row] = g * g - h.squaredNorm();
      if (!J) continue;
      Eigen::Matrix<double, 3, 9> dh = Eigen::Matrix<double, 3, 9>::Zero();
      dh(0, 0) = e[1];
      dh(0, 1) = e[2];
      dh(1, 2) = e[2];
      for (int i = 0; i < 3; ++i) dh.col(3 + i) = model.misalign.col(i) * d[i];
      dh.block<3, 3>(0, 6) = -MS;
      J->row(row) = -2.0 * h.transpose() * dh;
    }
  };
  VecX x0(9);
  x0 << 0, 0, 0, 1, 1, 1, 0, 0, 0;
  const LmResult lm = levenberg_marquardt(residuals, x0, options);
  const auto& sv = lm.jacobian_singular_values;
  if (sv.size() < 9 || !(sv[0] > 0.0) || sv[8] / sv[0] < 1e-9) {
    throw Error(ErrorCode::kObservability, "static orientations do not determine the accelerometer model");
  }
  const double limit = 1e-6 * static_cast<double>(m) * std::pow(g, 4);
  if (!lm.converged && lm.loss > limit) {
    throw ConvergenceError("accelerometer fit did not converge; " + trace_tail(lm.loss_trace),
                           lm.loss_trace);
  }
  return {unpack(lm.x, Vec3::Zero()), lm.loss, lm.iterations, lm.loss_trace};
}

Vec3 propagate_gravity_direction(std::span<const ImuSample> samples, const Vec3& u_start) {
  UnitQuaternion q;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double dt = samples[i].t - samples[i - 1].t;
    q = q * UnitQuaternion::exp(0.5 * (samples[i - 1].gyro + samples[i].gyro) * dt);
  }
  return quat_to_rot(q).transpose() * u_start;
}

SensorCalibration calibrate_gyroscope(std::span<const ImuSample> samples,
                                      std::span<const StaticInterval> intervals,
                                      const SensorErrorModel& accel, double trim,
                                      const LmOptions& options) {
  if (intervals.size() < 2) {
    throw Error(ErrorCode::kCalibrationData, "gyroscope fit needs motions bracketed by static intervals");
  }
  Vec3 bias = Vec3::Zero();
  const auto& first = intervals.front();
  for (std::size_t i = first.first; i <= first.last; ++i) bias += samples[i].gyro;
  bias /= static_cast<double>(first.last - first.first + 1);

  const auto means = static_accel_means(samples, intervals, trim);
  std::vector<Vec3> u(means.size());
  for (std::size_t k = 0; k < means.size(); ++k) u[k] = accel.correct(means[k]).normalized();

  // Each motion runs from the middle of one static interval to the middle of the next.
  std::vector<std::pair<std::size_t, std::size_t>> segments;
  for (std::size_t k = 1; k < intervals.size(); ++k) {
    segments.emplace_back((intervals[k - 1].first + intervals[k - 1].last) / 2,
                          (intervals[k].first + intervals[k].last) / 2);
  }
  std::vector<ImuSample> buffer;
  auto eval = [&](const VecX& x, VecX& r) {
    const SensorErrorModel model = unpack(x, bias);
    r.resize(static_cast<Eigen::Index>(3 * segments.size()));
    for (std::size_t k = 0; k < segments.size(); ++k) {
      const auto [a, b] = segments[k];
      buffer.resize(b - a + 1);
      for (std::size_t i = a; i <= b; ++i) buffer[i - a] = {samples[i].t, Vec3::Zero(), model.correct(samples[i].gyro)};
      r.segment<3>(static_cast<Eigen::Index>(3 * k)) = u[k + 1] - propagate_gravity_direction(buffer, u[k]);
    }
  };
  auto residuals = [&](const VecX& x, VecX& r, MatX* J) {
    eval(x, r);
    if (J) *J = numeric_jacobian(eval, x);
  };
  VecX x0(6);
  x0 << 0, 0, 0, 1, 1, 1;
  const LmResult lm = levenberg_marquardt(residuals, x0, options);
  const auto& sv = lm.jacobian_singular_values;
  if (sv.size() < 6 || !(sv[0] > 0.0) || sv[5] / sv[0] < 1e-9) {
    throw Error(ErrorCode::kObservability, "motions do not determine the gyroscope model");
  }
  if (!lm.converged && lm.loss > 1e-6 * static_cast<double>(segments.size())) {
    throw ConvergenceError("gyroscope fit did not converge; " + trace_tail(lm.loss_trace),
                           lm.loss_trace);
  }
  return {unpack(lm.x, bias), lm.loss, lm.iterations, lm.loss_trace};
}

ImuCalibrationResult calibrate_imu(std::span<const ImuSample> samples, double g,
                                   const StaticDetectorOptions& detector) {
  ImuCalibrationResult out;
  out.intervals = detect_static_intervals(samples, detector);
  const auto means = static_accel_means(samples, out.intervals, detector.window);
  const SensorCalibration acc = calibrate_accelerometer(means, g);
  const SensorCalibration gyr = calibrate_gyroscope(samples, out.intervals, acc.model, detector.window);
  out.params.accel = acc.model;
  out.params.gyro = gyr.model;
  out.accel_loss = acc.loss;
  out.gyro_loss = gyr.loss;
  out.accel_loss_trace = acc.loss_trace;
  out.gyro_loss_trace = gyr.loss_trace;
  return out;
}

}  // namespace camimu
