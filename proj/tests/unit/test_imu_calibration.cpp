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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "camimu/error.hpp"
#include "camimu/geometry.hpp"
#include "camimu/synthetic.hpp"
#include "oracles.hpp"

namespace camimu {
namespace {

constexpr double kG = 9.81;

SensorErrorModel injected_accel() {
  SensorErrorModel m;
  m.scale = Vec3(0.98, 1.01, 0.99);
  m.bias = Vec3(0.1, -0.05, 0.2);
  m.misalign << 1, 0.01, -0.008, 0, 1, 0.006, 0, 0, 1;
  return m;
}

std::vector<Vec3> static_readings(const SensorErrorModel& m, int count, std::mt19937_64& rng) {
  std::vector<Vec3> out;
  for (int i = 0; i < count; ++i) {
    const Mat3 R_bw = testing::quaternion_matrix(testing::random_unit_quaternion(rng));
    out.push_back(m.corrupt(R_bw * Vec3(0, 0, kG)));
  }
  return out;
}

void expect_model_near(const SensorErrorModel& a, const SensorErrorModel& b, double tol) {
  EXPECT_LT((a.scale - b.scale).cwiseAbs().maxCoeff(), tol);
  EXPECT_LT((a.bias - b.bias).cwiseAbs().maxCoeff(), tol);
  EXPECT_LT((a.misalign - b.misalign).cwiseAbs().maxCoeff(), tol);
}

StaticMotionSpec recording_spec(int motions) {
  StaticMotionSpec spec;
  spec.motions = motions;
  spec.initial_static = motions == 50 ? 50.0 : 10.0;
  return spec;
}

TEST(DetectStatic, FullyStaticRecording) {
  auto spec = recording_spec(0);
  spec.initial_static = 60.0;
  spec.add_noise = true;
  spec.noise = reference_noise();
  const auto rec = generate_static_motion_recording(spec, 61);
  const auto iv = detect_static_intervals(rec.samples);
  ASSERT_EQ(iv.size(), 1u);
  EXPECT_LT(iv[0].t_start - rec.samples.front().t, 0.5);
  EXPECT_LT(rec.samples.back().t - iv[0].t_end, 0.5);
}

TEST(DetectStatic, CalibrationProcedurePattern) {
  for (bool noisy : {false, true}) {
    auto spec = recording_spec(50);
    spec.add_noise = noisy;
    spec.noise = reference_noise();
    const auto rec = generate_static_motion_recording(spec, 62);
    const StaticDetectorOptions opt;
    const auto iv = detect_static_intervals(rec.samples, opt);
    ASSERT_EQ(iv.size(), 51u) << "noisy=" << noisy;
    ASSERT_EQ(rec.truth.size(), 51u);
    for (std::size_t i = 0; i < iv.size(); ++i) {
      EXPECT_LT(std::abs(iv[i].t_start - rec.truth[i].t_start), 2.0 * opt.window) << i;
      EXPECT_LT(std::abs(iv[i].t_end - rec.truth[i].t_end), 2.0 * opt.window) << i;
    }
  }
}

TEST(DetectStatic, MovingFromTheStartIsRejected) {
  std::vector<ImuSample> s;
  for (int i = 0; i < 12000; ++i) {
    const double t = 0.005 * i;
    s.push_back({t, Vec3(std::sin(3.0 * t), std::cos(2.0 * t), kG + std::sin(t)), Vec3::Zero()});
  }
  try {
    detect_static_intervals(s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCalibrationData);
  }
}

TEST(CalibrateAccelerometer, IdealSensor) {
  std::mt19937_64 rng(63);
  const auto means = static_readings(SensorErrorModel{}, 12, rng);
  const auto cal = calibrate_accelerometer(means, kG);
  expect_model_near(cal.model, SensorErrorModel{}, 1e-8);
  EXPECT_LT(cal.loss, 1e-16);
}

TEST(CalibrateAccelerometer, NoiseFreeRecovery) {
  std::mt19937_64 rng(64);
  const auto truth = injected_accel();
  const auto means = static_readings(truth, 30, rng);
  EXPECT_LT(accelerometer_loss(means, truth, kG), 1e-16);
  const auto cal = calibrate_accelerometer(means, kG);
  expect_model_near(cal.model, truth, 1e-6);
  ASSERT_FALSE(cal.loss_trace.empty());
  for (std::size_t i = 1; i < cal.loss_trace.size(); ++i) {
    EXPECT_LE(cal.loss_trace[i], cal.loss_trace[i - 1]);
  }
}

TEST(CalibrateAccelerometer, NoisyMeansMonteCarlo) {
  std::mt19937_64 rng(65);
  std::normal_distribution<double> n(0.0, 0.02);
  const auto truth = injected_accel();
  double worst_scale = 0.0, worst_bias = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    auto means = static_readings(truth, 50, rng);
    for (auto& m : means) m += Vec3(n(rng), n(rng), n(rng));
    const auto cal = calibrate_accelerometer(means, kG);
    worst_scale = std::max(worst_scale, (cal.model.scale.cwiseQuotient(truth.scale) - Vec3::Ones()).cwiseAbs().maxCoeff());
    worst_bias = std::max(worst_bias, (cal.model.bias - truth.bias).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst_scale, 0.01);
  EXPECT_LT(worst_bias, 0.02);
}

TEST(CalibrateAccelerometer, TooFewOrientations) {
  std::mt19937_64 rng(66);
  const auto means = static_readings(injected_accel(), 8, rng);
  try {
    calibrate_accelerometer(means, kG);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kObservability);
  }
}

TEST(CalibrateAccelerometer, ClusteredOrientations) {
  std::vector<Vec3> means(20, Vec3(0.0, 0.0, kG));
  try {
    calibrate_accelerometer(means, kG);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kObservability);
  }
}

TEST(GravityPropagation, QuarterTurnAboutZ) {
  std::vector<ImuSample> s;
  for (int i = 0; i <= 200; ++i) s.push_back({0.005 * i, Vec3::Zero(), Vec3(0, 0, kPi / 2.0)});
  const Vec3 u = propagate_gravity_direction(s, Vec3(1, 0, 0));
  EXPECT_LT((u - Vec3(0, -1, 0)).norm(), 1e-9);
}

TEST(GravityPropagation, MatchesClosedFormAxisAngle) {
  std::mt19937_64 rng(67);
  for (int i = 0; i < 20; ++i) {
    const Vec3 w = testing::random_vector(rng, 1.0);
    std::vector<ImuSample> s;
    for (int k = 0; k <= 300; ++k) s.push_back({0.005 * k, Vec3::Zero(), w});
    const Vec3 u0 = testing::random_vector(rng, 1.0).normalized();
    const Vec3 expected = testing::rodrigues(w * 1.5).transpose() * u0;
    EXPECT_LT((propagate_gravity_direction(s, u0) - expected).norm(), 1e-9);
  }
}

TEST(CalibrateGyroscope, IdealGyro) {
  const auto rec = generate_static_motion_recording(recording_spec(19), 68);
  ASSERT_EQ(rec.truth.size(), 20u);
  const auto cal = calibrate_gyroscope(rec.samples, rec.truth, SensorErrorModel{}, 0.1);
  EXPECT_LT((cal.model.scale - Vec3::Ones()).cwiseAbs().maxCoeff(), 1e-7);
  EXPECT_LT((cal.model.misalign - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-7);
  EXPECT_LT(cal.loss, 1e-14);
}

TEST(CalibrateGyroscope, InjectedScaleAndMisalignment) {
  auto spec = recording_spec(19);
  spec.det.accel = injected_accel();
  spec.det.gyro.scale = Vec3(1.02, 0.97, 1.01);
  spec.det.gyro.misalign << 1, -0.005, 0.002, 0, 1, 0.008, 0, 0, 1;
  spec.det.gyro.bias = Vec3(0.002, -0.001, 0.003);
  const auto rec = generate_static_motion_recording(spec, 69);
  const auto cal = calibrate_gyroscope(rec.samples, rec.truth, spec.det.accel, 0.1);
  EXPECT_LT((cal.model.scale - spec.det.gyro.scale).cwiseAbs().maxCoeff(), 1e-5);
  EXPECT_LT((cal.model.misalign - spec.det.gyro.misalign).cwiseAbs().maxCoeff(), 1e-5);
  EXPECT_LT((cal.model.bias - spec.det.gyro.bias).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CalibrateGyroscope, NeedsStaticBrackets) {
  const auto rec = generate_static_motion_recording(recording_spec(3), 70);
  std::vector<StaticInterval> one(rec.truth.begin(), rec.truth.begin() + 1);
  try {
    calibrate_gyroscope(rec.samples, one, SensorErrorModel{}, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kCalibrationData);
  }
}

TEST(CalibrateImu, EndToEndNoiseFree) {
  auto spec = recording_spec(50);
  spec.det.accel = injected_accel();
  spec.det.gyro.scale = Vec3(1.02, 0.97, 1.01);
  spec.det.gyro.bias = Vec3(0.002, -0.001, 0.003);
  const auto rec = generate_static_motion_recording(spec, 71);
  const auto res = calibrate_imu(rec.samples, kG);
  EXPECT_EQ(res.intervals.size(), 51u);
  expect_model_near(res.params.accel, spec.det.accel, 1e-6);
  EXPECT_LT((res.params.gyro.scale - spec.det.gyro.scale).cwiseAbs().maxCoeff(), 1e-4);
  EXPECT_LT((res.params.gyro.misalign - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-4);
}

}  // namespace
}  // namespace camimu
