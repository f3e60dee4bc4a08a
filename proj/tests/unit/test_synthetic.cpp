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

#include "camimu/synthetic.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "camimu/allan.hpp"
#include "camimu/camera_model.hpp"
#include "camimu/extrinsic_solver.hpp"
#include "camimu/geometry.hpp"
#include "camimu/preintegration.hpp"
#include "oracles.hpp"

namespace camimu {
namespace {

const Vec3 kGw(0.0, 0.0, kDefaultGravity);

ImuEmissionOptions clean_options() {
  ImuEmissionOptions opt;
  opt.add_noise = false;
  return opt;
}

TEST(Trajectory, ZeroAmplitudesAreStatic) {
  TrajectorySpec spec;
  spec.origin = Vec3(1, 2, 3);
  const Trajectory traj(spec);
  for (double t : {0.0, 3.3, 17.0}) {
    const auto k = traj.at(t);
    EXPECT_EQ(k.p, spec.origin);
    EXPECT_EQ(k.v, Vec3::Zero());
    EXPECT_EQ(k.a, Vec3::Zero());
    EXPECT_EQ(k.omega, Vec3::Zero());
    EXPECT_LT((k.R_wb - Mat3::Identity()).norm(), 1e-15);
  }
}

TEST(Trajectory, DerivativesMatchFiniteDifferences) {
  const Trajectory traj(default_trajectory_spec(101, 20.0));
  const double h = 1e-6;
  for (double t = 0.5; t < 20.0; t += 0.77) {
    const auto k = traj.at(t), kp = traj.at(t + h), km = traj.at(t - h);
    EXPECT_LT(((kp.p - km.p) / (2 * h) - k.v).norm(), 1e-6) << t;
    EXPECT_LT(((kp.v - km.v) / (2 * h) - k.a).norm(), 1e-6) << t;
    const Mat3 W = k.R_wb.transpose() * (kp.R_wb - km.R_wb) / (2 * h);
    EXPECT_LT((Vec3(W(2, 1), W(0, 2), W(1, 0)) - k.omega).norm(), 1e-6) << t;
  }
}

TEST(Trajectory, QuaternionRateMatchesBodyRate) {
  // q' = q * (0, w) / 2, so w = 2 * vec(q^-1 * q').
  const Trajectory traj(default_trajectory_spec(102, 20.0));
  const double h = 1e-6;
  for (double t = 1.0; t < 20.0; t += 1.9) {
    const Vec4 q = traj.nav(t).q.coeffs();
    Vec4 qp = traj.nav(t + h).q.coeffs(), qm = traj.nav(t - h).q.coeffs();
    if (qp.dot(q) < 0) qp = -qp;
    if (qm.dot(q) < 0) qm = -qm;
    const Vec4 dq = (qp - qm) / (2 * h);
    const Vec4 conj(q[0], -q[1], -q[2], -q[3]);
    const Vec4 w = 2.0 * testing::hamilton_product(conj, dq);
    EXPECT_LT((w.tail<3>() - traj.at(t).omega).norm(), 1e-6) << t;
  }
}

TEST(Trajectory, RejectsInvalidSpec) {
  TrajectorySpec spec;
  spec.cam_rate = 500.0;
  EXPECT_THROW(spec.validate(), Error);
  spec = TrajectorySpec{};
  spec.duration = 0.0;
  EXPECT_THROW(spec.validate(), Error);
}

TEST(EmitImu, StationaryLevelRig) {
  TrajectorySpec spec;
  spec.duration = 2.0;
  const auto s = emit_imu(Trajectory(spec), clean_options(), 1);
  ASSERT_EQ(s.size(), 401u);
  for (const auto& x : s) {
    EXPECT_LT((x.accel - Vec3(0, 0, 9.81)).norm(), 1e-12);
    EXPECT_EQ(x.gyro, Vec3::Zero());
  }
}

TEST(EmitImu, SamplesMatchReDifferentiatedPoses) {
  const Trajectory traj(default_trajectory_spec(103, 10.0));
  const auto s = emit_imu(traj, clean_options(), 1);
  const double h = 1e-4;
  for (std::size_t i = 1; i + 1 < s.size(); i += 37) {
    const double t = s[i].t;
    const auto prev = traj.nav(t - h), cur = traj.nav(t), next = traj.nav(t + h);
    const Vec3 a_w = (next.p - 2.0 * cur.p + prev.p) / (h * h);
    const Mat3 R = quat_to_rot(cur.q);
    EXPECT_LT((R.transpose() * (a_w + kGw) - s[i].accel).norm(), 1e-5) << i;
    // Central difference on the manifold: Log(R(t-h)^T R(t+h)) / 2h.
    const Vec3 w = (prev.q.conjugate() * next.q).log() / (2.0 * h);
    EXPECT_LT((w - s[i].gyro).norm(), 1e-5) << i;
  }
}

struct FrameErrors {
  double gamma = 0.0;  // rad
  double alpha = 0.0;  // m
};

FrameErrors worst_frame_errors(double imu_rate) {
  auto spec = default_trajectory_spec(104, 10.0);
  spec.imu_rate = imu_rate;
  const Trajectory traj(spec);
  const auto s = emit_imu(traj, clean_options(), 1);
  FrameErrors worst;
  for (int k = 0; k < 99; ++k) {
    const double t0 = 0.1 * k, t1 = t0 + 0.1;
    const auto d = preintegrate_interval(s, t0, t1, Vec3::Zero(), Vec3::Zero());
    const auto a = traj.at(t0), b = traj.at(t1);
    const Vec3 alpha = a.R_wb.transpose() * (b.p - a.p - a.v * 0.1 + 0.5 * kGw * 0.01);
    worst.gamma = std::max(worst.gamma, rotation_angle(quat_to_rot(d.gamma).transpose() * a.R_wb.transpose() * b.R_wb));
    worst.alpha = std::max(worst.alpha, (d.alpha - alpha).norm());
  }
  return worst;
}

TEST(EmitImu, FramePreintegrationMatchesGroundTruth) {
  // Second-order discretization: 200 Hz leaves a few 1e-6 on this trajectory, 400 Hz a quarter of it.
  const auto at200 = worst_frame_errors(200.0);
  EXPECT_LT(at200.gamma, 5e-6);
  EXPECT_LT(at200.alpha, 3e-6);
  const auto at400 = worst_frame_errors(400.0);
  EXPECT_LT(at400.gamma, 1e-6);
  EXPECT_LT(at400.alpha, 1e-6);
  EXPECT_NEAR(at200.gamma / at400.gamma, 4.0, 0.2);
}

TEST(EmitImu, DeterministicCorruptionIsInvertible) {
  auto opt = clean_options();
  opt.det.accel.scale = Vec3(0.98, 1.01, 0.99);
  opt.det.accel.bias = Vec3(0.1, 0.0, -0.1);
  opt.det.gyro.misalign(0, 2) = 0.01;
  const Trajectory traj(default_trajectory_spec(105, 2.0));
  const auto raw = emit_imu(traj, opt, 1);
  const auto clean = emit_imu(traj, clean_options(), 1);
  for (std::size_t i = 0; i < raw.size(); i += 13) {
    const auto c = correct_deterministic(raw[i], opt.det);
    EXPECT_LT((c.accel - clean[i].accel).norm(), 1e-12);
    EXPECT_LT((c.gyro - clean[i].gyro).norm(), 1e-12);
  }
}

TEST(EmitImu, NoiseReproducesAllanDensities) {
  TrajectorySpec spec;
  spec.duration = 7200.0;
  ImuEmissionOptions opt;
  opt.noise = reference_noise();
  const auto s = emit_imu(Trajectory(spec), opt, 7);
  const double dt = 1.0 / spec.imu_rate;
  std::array<AllanCurve, 3> gyro, accel;
  std::vector<double> series(s.size());
  for (int axis = 0; axis < 3; ++axis) {
    for (std::size_t i = 0; i < s.size(); ++i) series[i] = s[i].gyro[axis];
    gyro[axis] = allan_variance(series, dt);
    for (std::size_t i = 0; i < s.size(); ++i) series[i] = s[i].accel[axis];
    accel[axis] = allan_variance(series, dt);
  }
  const auto report = fit_noise_params(gyro, accel);
  EXPECT_NEAR(report.mean.sigma_w / opt.noise.sigma_w, 1.0, 0.1);
  EXPECT_NEAR(report.mean.sigma_a / opt.noise.sigma_a, 1.0, 0.1);
}

TEST(EmitImu, StreamsAreIndependent) {
  const Trajectory traj(default_trajectory_spec(106, 1.0));
  ImuEmissionOptions a;
  a.noise = reference_noise();
  auto b = a;
  b.noise.sigma_a *= 2.0;
  const auto sa = emit_imu(traj, a, 3), sb = emit_imu(traj, b, 3);
  for (std::size_t i = 0; i < sa.size(); ++i) EXPECT_EQ(sa[i].gyro, sb[i].gyro);
}

TEST(EmitCamera, IdentityExtrinsicFollowsBody) {
  const Trajectory traj(default_trajectory_spec(107, 5.0));
  CameraEmissionOptions opt;
  opt.intrinsics = reference_intrinsics();
  const auto cam = emit_camera(traj, opt, 1);
  ASSERT_EQ(cam.poses.size(), 51u);
  for (const auto& p : cam.poses) {
    const auto nav = traj.nav(p.t);
    EXPECT_LT(angular_distance(p.q, nav.q), 1e-12);
    EXPECT_LT((p.p - nav.p).norm(), 1e-12);
  }
}

TEST(EmitCamera, ViewsRecoverIntrinsics) {
  const Trajectory traj(default_trajectory_spec(108, 20.0));
  CameraEmissionOptions opt;
  opt.intrinsics = reference_intrinsics();
  opt.R_bc = reference_extrinsic_rotation();
  opt.t_bc = reference_extrinsic_translation();
  const auto cam = emit_camera(traj, opt, 1);
  EXPECT_GE(cam.views.size(), 180u);
  const auto sol = solve_intrinsics(std::span<const PlanarView>(cam.views));
  const auto k = reference_intrinsics();
  EXPECT_NEAR(sol.intrinsics.fx / k.fx, 1.0, 1e-6);
  EXPECT_NEAR(sol.intrinsics.fy / k.fy, 1.0, 1e-6);
  EXPECT_NEAR(sol.intrinsics.cx / k.cx, 1.0, 1e-6);
  EXPECT_NEAR(sol.intrinsics.cy / k.cy, 1.0, 1e-6);
}

TEST(EmitCamera, DropsFramesOutsideTheImage) {
  auto spec = default_trajectory_spec(109, 5.0);
  spec.rot_amplitude = Vec3(0.0, 0.0, 0.0);
  spec.pos_amplitude = Vec3(2.0, 0.0, 0.0);
  CameraEmissionOptions opt;
  opt.intrinsics = reference_intrinsics();
  const auto cam = emit_camera(Trajectory(spec), opt, 1);
  EXPECT_LT(cam.views.size(), cam.poses.size());
  EXPECT_FALSE(cam.log.empty());
  EXPECT_NE(cam.log.back().find("90%"), std::string::npos);
}

TEST(RigDataset, RotationClosureThroughPreintegration) {
  // 1 kHz keeps the per-frame preintegration error well below the tolerance.
  auto spec = default_trajectory_spec(110, 20.0);
  spec.imu_rate = 1000.0;
  ImuEmissionOptions imu = clean_options();
  CameraEmissionOptions cam;
  cam.intrinsics = reference_intrinsics();
  cam.R_bc = reference_extrinsic_rotation();
  const auto rig = generate_rig_dataset(spec, imu, cam);
  std::vector<RelativeRotationPair> pairs;
  for (std::size_t k = 0; k + 1 < rig.frame_times.size(); ++k) {
    const auto d = preintegrate_interval(rig.imu, rig.frame_times[k], rig.frame_times[k + 1], Vec3::Zero(), Vec3::Zero());
    pairs.push_back(pair_from_camera_poses(rig.cam_poses[k], rig.cam_poses[k + 1], d,
                                           PoseConvention::kCameraToWorld, 0.1, static_cast<int>(k)));
  }
  const auto res = solve_rotation(pairs);
  EXPECT_LT(rotation_angle(res.R_bc.transpose() * cam.R_bc), 1e-6);
}

TEST(RigDataset, Deterministic) {
  ImuEmissionOptions imu;
  imu.noise = reference_noise();
  CameraEmissionOptions cam;
  cam.intrinsics = reference_intrinsics();
  cam.pixel_noise = 0.3;
  const auto a = generate_rig_dataset(default_trajectory_spec(111, 3.0), imu, cam);
  const auto b = generate_rig_dataset(default_trajectory_spec(111, 3.0), imu, cam);
  ASSERT_EQ(a.imu.size(), b.imu.size());
  for (std::size_t i = 0; i < a.imu.size(); ++i) {
    EXPECT_EQ(a.imu[i].accel, b.imu[i].accel);
    EXPECT_EQ(a.imu[i].gyro, b.imu[i].gyro);
  }
  ASSERT_EQ(a.views.size(), b.views.size());
  for (std::size_t i = 0; i < a.views.size(); ++i) {
    for (std::size_t j = 0; j < a.views[i].points.size(); ++j) {
      EXPECT_EQ(a.views[i].points[j].pixel, b.views[i].points[j].pixel);
    }
  }
}

TEST(CalibrationViews, InsideImageAndConsistent) {
  const auto set = generate_calibration_views(reference_intrinsics(), reference_distortion(), TargetGrid{}, 20, 0.0, 112);
  ASSERT_EQ(set.views.size(), 20u);
  for (std::size_t i = 0; i < set.views.size(); ++i) {
    ASSERT_EQ(set.views[i].points.size(), 36u);
    for (const auto& c : set.views[i].points) {
      EXPECT_GE(c.pixel.x(), 0.0);
      EXPECT_LT(c.pixel.x(), 1280.0);
      EXPECT_GE(c.pixel.y(), 0.0);
      EXPECT_LT(c.pixel.y(), 720.0);
      const Vec2 px = world_to_pixel(Vec3(c.target.x(), c.target.y(), 0.0), set.poses[i].R, set.poses[i].t,
                                     reference_intrinsics(), reference_distortion());
      EXPECT_LT((px - c.pixel).norm(), 1e-12);
    }
  }
}

TEST(RotationPairs, OutlierCountAndGeometry) {
  RotationPairSpec spec;
  spec.R_bc = reference_extrinsic_rotation();
  spec.noise_deg = 0.0;
  const auto set = generate_rotation_pairs(spec, 113);
  ASSERT_EQ(set.pairs.size(), 200u);
  const int outliers = static_cast<int>(std::count(set.is_outlier.begin(), set.is_outlier.end(), true));
  EXPECT_EQ(outliers, 40);
  const UnitQuaternion q_bc = rot_to_quat(spec.R_bc);
  for (std::size_t i = 0; i < set.pairs.size(); ++i) {
    const auto& p = set.pairs[i];
    const UnitQuaternion expected = q_bc.conjugate() * p.q_imu * q_bc;
    const double gap = rad2deg(angular_distance(p.q_cam, expected));
    if (set.is_outlier[i]) {
      EXPECT_NEAR(gap, 30.0, 1e-9);
    } else {
      EXPECT_LT(gap, 1e-10);
    }
    const double angle = rad2deg(p.q_imu.angle());
    EXPECT_GE(angle, 10.0 - 1e-9);
    EXPECT_LE(angle, 60.0 + 1e-9);
  }
}

TEST(ReferenceValues, PublishedNumbers) {
  const auto k = reference_intrinsics();
  EXPECT_DOUBLE_EQ(k.fx, 1091.635505127837);
  EXPECT_DOUBLE_EQ(k.cy, 336.08607722962415);
  EXPECT_DOUBLE_EQ(reference_distortion().k2, -0.04906947859369595);
  EXPECT_DOUBLE_EQ(reference_extrinsic_translation().y(), 0.254279370393975);
  EXPECT_DOUBLE_EQ(reference_noise().sigma_w, 1.8254576889106717e-3);
  EXPECT_DOUBLE_EQ(reference_noise().sigma_ba, 3.4229876539854489e-4);
}

}  // namespace
}  // namespace camimu
