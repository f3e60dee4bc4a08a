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

#include <algorithm>
#include <cmath>
#include <numeric>

#include "camimu/error.hpp"
#include "camimu/geometry.hpp"

namespace camimu {

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x5eedu};
  return std::mt19937_64(seq);
}

namespace {

Vec3 normal3(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double x = n(rng), y = n(rng), z = n(rng);
  return {x, y, z};
}

Vec3 random_unit(std::mt19937_64& rng) {
  Vec3 v;
  do {
    v = normal3(rng);
  } while (v.norm() < 1e-6);
  return v.normalized();
}

std::size_t sample_count(double duration, double rate) {
  return static_cast<std::size_t>(std::floor(duration * rate + 1e-9)) + 1;
}

}  // namespace

void TrajectorySpec::validate() const {
  if (!(duration > 0.0) || !(imu_rate > 0.0) || !(cam_rate > 0.0) || imu_rate < cam_rate) {
    throw Error(ErrorCode::kInvalidInput, "trajectory needs duration > 0 and imu_rate >= cam_rate > 0");
  }
  for (const Vec3* v : {&origin, &pos_amplitude, &pos_frequency, &pos_phase, &rot_amplitude,
                        &rot_frequency, &rot_phase}) {
    if (!v->allFinite()) throw Error(ErrorCode::kInvalidInput, "trajectory parameters must be finite");
  }
  if (!is_rotation(base_attitude, 1e-9)) {
    throw Error(ErrorCode::kInvalidRotation, "base attitude is not a rotation");
  }
}

TrajectorySpec default_trajectory_spec(std::uint64_t seed, double duration) {
  TrajectorySpec s;
  s.duration = duration;
  s.seed = seed;
  s.pos_amplitude = Vec3(0.05, 0.05, 0.08);
  s.pos_frequency = Vec3(0.31, 0.23, 0.37);
  s.rot_amplitude = Vec3(0.15, 0.15, 0.4);
  s.rot_frequency = Vec3(0.7, 0.6, 0.35);
  auto rng = make_stream(seed, kStreamTrajectory);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  for (int i = 0; i < 3; ++i) s.pos_phase[i] = phase(rng);
  for (int i = 0; i < 3; ++i) s.rot_phase[i] = phase(rng);
  return s;
}

Trajectory::Trajectory(const TrajectorySpec& spec) : spec_(spec) { spec_.validate(); }

KinematicState Trajectory::at(double t) const {
  KinematicState k;
  k.t = t;
  Vec3 ang, ang_d;
  for (int i = 0; i < 3; ++i) {
    const double wp = 2.0 * kPi * spec_.pos_frequency[i];
    const double arg = wp * t + spec_.pos_phase[i];
    k.p[i] = spec_.origin[i] + spec_.pos_amplitude[i] * std::sin(arg);
    k.v[i] = spec_.pos_amplitude[i] * wp * std::cos(arg);
    k.a[i] = -spec_.pos_amplitude[i] * wp * wp * std::sin(arg);

    const double wr = 2.0 * kPi * spec_.rot_frequency[i];
    const double rarg = wr * t + spec_.rot_phase[i];
    ang[i] = spec_.rot_amplitude[i] * std::sin(rarg);
    ang_d[i] = spec_.rot_amplitude[i] * wr * std::cos(rarg);
  }
  const Mat3 Rx = rot_x(ang[0]), Ry = rot_y(ang[1]), Rz = rot_z(ang[2]);
  k.R_wb = spec_.base_attitude * Rz * Ry * Rx;
  k.omega = Rx.transpose() * Ry.transpose() * Vec3(0.0, 0.0, ang_d[2]) +
            Rx.transpose() * Vec3(0.0, ang_d[1], 0.0) + Vec3(ang_d[0], 0.0, 0.0);
  return k;
}

NavState Trajectory::nav(double t) const {
  const KinematicState k = at(t);
  return {k.p, k.v, rot_to_quat(k.R_wb)};
}

std::vector<ImuSample> emit_imu(const Trajectory& traj, const ImuEmissionOptions& options,
                                std::uint64_t seed) {
  options.noise.validate();
  options.det.accel.validate();
  options.det.gyro.validate();
  const auto& spec = traj.spec();
  const double dt = 1.0 / spec.imu_rate;
  const std::size_t n = sample_count(spec.duration, spec.imu_rate);

  auto accel_rng = make_stream(seed, kStreamAccelNoise);
  auto gyro_rng = make_stream(seed, kStreamGyroNoise);
  auto accel_walk_rng = make_stream(seed, kStreamAccelWalk);
  auto gyro_walk_rng = make_stream(seed, kStreamGyroWalk);
  const double sa = discretize_noise(options.noise.sigma_a, dt, NoiseKind::kWhite);
  const double sw = discretize_noise(options.noise.sigma_w, dt, NoiseKind::kWhite);

  std::vector<ImuSample> out;
  out.reserve(n);
  BiasState bias = options.initial_bias;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    const KinematicState k = traj.at(t);
    const Mat3 R_bw = k.R_wb.transpose();
    Vec3 na = Vec3::Zero(), nw = Vec3::Zero();
    if (options.add_noise) {
      na = sa * normal3(accel_rng);
      nw = sw * normal3(gyro_rng);
    }
    out.push_back(apply_measurement_model(t, R_bw * k.a, k.omega, R_bw, options.g_w, options.det,
                                          bias, na, nw));
    if (options.add_noise) {
      bias = propagate_bias(bias, dt, options.noise, normal3(accel_walk_rng), normal3(gyro_walk_rng));
    }
  }
  return out;
}

std::vector<Vec2> TargetGrid::points() const {
  std::vector<Vec2> pts;
  pts.reserve(static_cast<std::size_t>(rows * cols));
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) pts.emplace_back(c * spacing, r * spacing);
  }
  return pts;
}

Vec2 TargetGrid::center() const {
  return {0.5 * (cols - 1) * spacing, 0.5 * (rows - 1) * spacing};
}

namespace {

// Projects every grid point; empty when any point is behind the camera or off the image.
std::optional<PlanarView> render_view(int view_id, const std::vector<Vec2>& grid, const Mat3& R,
                                      const Vec3& t, const CameraIntrinsics& intr,
                                      const DistortionCoeffs& dist, int width, int height,
                                      double pixel_noise, std::mt19937_64& rng) {
  PlanarView view;
  view.view_id = view_id;
  std::normal_distribution<double> noise(0.0, 1.0);
  for (const auto& g : grid) {
    const Vec3 pc = R * Vec3(g.x(), g.y(), 0.0) + t;
    if (pc.z() < 1e-3) return std::nullopt;
    Vec2 px = world_to_pixel(Vec3(g.x(), g.y(), 0.0), R, t, intr, dist);
    if (px.x() < 0.0 || px.y() < 0.0 || px.x() > width - 1 || px.y() > height - 1) return std::nullopt;
    if (pixel_noise > 0.0) {
      const double nu = noise(rng);
      const double nv = noise(rng);
      px += pixel_noise * Vec2(nu, nv);
    }
    view.points.push_back({g, px});
  }
  return view;
}

}  // namespace

CameraEmission emit_camera(const Trajectory& traj, const CameraEmissionOptions& options,
                           std::uint64_t seed) {
  if (!is_rotation(options.R_bc, 1e-9)) throw Error(ErrorCode::kInvalidRotation, "R_bc is not a rotation");
  options.intrinsics.validate();
  const auto& spec = traj.spec();
  const std::size_t n = sample_count(spec.duration, spec.cam_rate);
  auto pixel_rng = make_stream(seed, kStreamPixelNoise);

  CameraEmission out;
  // Target faces the camera in the rig's rest pose (all sinusoids at zero),
  // centred on its optical axis.
  const Mat3 R_wc0 = spec.base_attitude * options.R_bc;
  const Vec3 p_wc0 = spec.origin + spec.base_attitude * options.t_bc;
  out.R_wt = R_wc0;
  const Vec2 c = options.grid.center();
  out.t_wt = p_wc0 + R_wc0 * Vec3(0.0, 0.0, options.target_distance) - R_wc0 * Vec3(c.x(), c.y(), 0.0);

  const auto grid = options.grid.points();
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / spec.cam_rate;
    const KinematicState k = traj.at(t);
    const Mat3 R_wc = k.R_wb * options.R_bc;
    const Vec3 p_wc = k.p + k.R_wb * options.t_bc;
    out.poses.push_back({t, rot_to_quat(R_wc), p_wc});

    const Mat3 R_ct = R_wc.transpose() * out.R_wt;
    const Vec3 t_ct = R_wc.transpose() * (out.t_wt - p_wc);
    auto view = render_view(static_cast<int>(i), grid, R_ct, t_ct, options.intrinsics,
                            options.distortion, options.width, options.height,
                            options.pixel_noise, pixel_rng);
    if (view) {
      out.views.push_back(std::move(*view));
    } else {
      out.log.push_back("frame " + std::to_string(i) + " dropped: target leaves the image");
    }
  }
  if (out.views.size() * 10 < n * 9) {
    out.log.push_back("warning: target visible in fewer than 90% of frames");
  }
  return out;
}

CalibrationViewSet generate_calibration_views(const CameraIntrinsics& intr,
                                              const DistortionCoeffs& dist, const TargetGrid& grid,
                                              int n_views, double pixel_noise, std::uint64_t seed,
                                              int width, int height) {
  auto rng = make_stream(seed, kStreamViews);
  auto pixel_rng = make_stream(seed, kStreamPixelNoise);
  std::uniform_real_distribution<double> tilt(-deg2rad(40.0), deg2rad(40.0));
  std::uniform_real_distribution<double> roll(-kPi, kPi);
  std::uniform_real_distribution<double> depth(0.45, 0.8);
  std::uniform_real_distribution<double> offset(-0.05, 0.05);
  const auto pts = grid.points();
  const Vec2 c = grid.center();

  CalibrationViewSet out;
  int attempts = 0;
  while (static_cast<int>(out.views.size()) < n_views) {
    if (++attempts > 1000 * std::max(1, n_views)) {
      throw Error(ErrorCode::kInvalidInput, "could not place the target inside the image");
    }
    const double a = tilt(rng), b = tilt(rng), r = roll(rng);
    const double d = depth(rng), ox = offset(rng), oy = offset(rng);
    TargetPose pose;
    pose.R = rot_z(r) * rot_y(b) * rot_x(a);
    pose.t = Vec3(ox, oy, d) - pose.R * Vec3(c.x(), c.y(), 0.0);
    auto view = render_view(static_cast<int>(out.views.size()), pts, pose.R, pose.t, intr, dist,
                            width, height, pixel_noise, pixel_rng);
    if (!view) continue;
    out.views.push_back(std::move(*view));
    out.poses.push_back(pose);
  }
  return out;
}

StaticMotionRecording generate_static_motion_recording(const StaticMotionSpec& spec,
                                                       std::uint64_t seed) {
  spec.det.accel.validate();
  spec.det.gyro.validate();
  const double dt = 1.0 / spec.imu_rate;
  const auto n0 = static_cast<std::size_t>(std::llround(spec.initial_static * spec.imu_rate));
  const auto nm = static_cast<std::size_t>(std::llround(spec.motion_duration * spec.imu_rate));
  const auto ns = static_cast<std::size_t>(std::llround(spec.static_duration * spec.imu_rate));
  if (nm < 2) throw Error(ErrorCode::kInvalidInput, "motion shorter than two samples");
  const std::size_t total = n0 + static_cast<std::size_t>(spec.motions) * (nm + ns) + 1;

  auto motion_rng = make_stream(seed, kStreamMotions);
  auto accel_rng = make_stream(seed, kStreamAccelNoise);
  auto gyro_rng = make_stream(seed, kStreamGyroNoise);
  auto accel_walk_rng = make_stream(seed, kStreamAccelWalk);
  auto gyro_walk_rng = make_stream(seed, kStreamGyroWalk);
  std::uniform_real_distribution<double> angle(deg2rad(spec.min_angle_deg), deg2rad(spec.max_angle_deg));
  const double sa = discretize_noise(spec.noise.sigma_a, dt, NoiseKind::kWhite);
  const double sw = discretize_noise(spec.noise.sigma_w, dt, NoiseKind::kWhite);

  struct Motion {
    std::size_t start;
    Vec3 axis;
    double angle;
  };
  std::vector<Motion> motions;
  StaticMotionRecording rec;
  Mat3 R = Mat3::Identity();
  rec.orientations.push_back(R);
  std::size_t cursor = n0;
  rec.truth.push_back({0.0, static_cast<double>(n0) * dt, 0, n0});
  for (int m = 0; m < spec.motions; ++m) {
    motions.push_back({cursor, random_unit(motion_rng), angle(motion_rng)});
    const std::size_t end = cursor + nm;
    const std::size_t next = end + ns;
    rec.truth.push_back({static_cast<double>(end) * dt, static_cast<double>(next) * dt, end, next});
    cursor = next;
  }

  const double T = static_cast<double>(nm) * dt;
  BiasState bias;
  std::size_t motion_index = 0;
  Mat3 R_start = Mat3::Identity();
  rec.samples.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    const double t = static_cast<double>(i) * dt;
    Vec3 omega = Vec3::Zero();
    while (motion_index < motions.size() && i >= motions[motion_index].start + nm) {
      const auto& mo = motions[motion_index];
      R_start = R_start * exp_so3(mo.axis * mo.angle);
      rec.orientations.push_back(R_start);
      ++motion_index;
    }
    R = R_start;
    if (motion_index < motions.size() && i > motions[motion_index].start) {
      const auto& mo = motions[motion_index];
      const double u = static_cast<double>(i - mo.start) / static_cast<double>(nm);
      const double progress = u - std::sin(2.0 * kPi * u) / (2.0 * kPi);
      R = R_start * exp_so3(mo.axis * (mo.angle * progress));
      omega = mo.axis * (mo.angle / T * (1.0 - std::cos(2.0 * kPi * u)));
    }
    Vec3 na = Vec3::Zero(), nw = Vec3::Zero();
    if (spec.add_noise) {
      na = sa * normal3(accel_rng);
      nw = sw * normal3(gyro_rng);
    }
    rec.samples.push_back(apply_measurement_model(t, Vec3::Zero(), omega, R.transpose(), spec.g_w,
                                                  spec.det, bias, na, nw));
    if (spec.add_noise) {
      bias = propagate_bias(bias, dt, spec.noise, normal3(accel_walk_rng), normal3(gyro_walk_rng));
    }
  }
  return rec;
}

RotationPairSet generate_rotation_pairs(const RotationPairSpec& spec, std::uint64_t seed) {
  if (spec.count < 0 || spec.outlier_fraction < 0.0 || spec.outlier_fraction > 1.0) {
    throw Error(ErrorCode::kInvalidInput, "invalid rotation pair spec");
  }
  auto rng = make_stream(seed, kStreamPairs);
  std::uniform_real_distribution<double> angle(deg2rad(spec.min_angle_deg), deg2rad(spec.max_angle_deg));
  const UnitQuaternion q_bc = rot_to_quat(spec.R_bc);
  const double sigma = deg2rad(spec.noise_deg);

  const auto n = static_cast<std::size_t>(spec.count);
  const auto n_out = static_cast<std::size_t>(std::llround(spec.outlier_fraction * spec.count));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  RotationPairSet out;
  out.is_outlier.assign(n, false);
  for (std::size_t k = 0; k < n_out; ++k) out.is_outlier[order[k]] = true;
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3 axis = spec.fixed_axis ? spec.fixed_axis->normalized() : random_unit(rng);
    const UnitQuaternion q_imu = UnitQuaternion::from_axis_angle(axis, angle(rng));
    UnitQuaternion q_cam = q_bc.conjugate() * q_imu * q_bc;
    if (sigma > 0.0) q_cam = q_cam * UnitQuaternion::exp(sigma * normal3(rng));
    if (out.is_outlier[k]) {
      q_cam = q_cam * UnitQuaternion::from_axis_angle(random_unit(rng), deg2rad(spec.outlier_deg));
    }
    out.pairs.push_back({q_imu.canonical(), q_cam.canonical(), std::nullopt, static_cast<int>(k)});
  }
  return out;
}

Mat3 reference_extrinsic_rotation() {
  Mat3 R;
  R << 0.99976023688788251, 0.012861567340825, -0.0177214227256832,
       0.0137597595321047, -0.998576606647093, -0.0515308613822358,
       -0.017033430526573, 0.0517623486978128, -0.99851415688601164;
  return project_to_so3(R);
}

Vec3 reference_extrinsic_translation() {
  return {0.05715507571041868, 0.254279370393975, 0.01424385318401530};
}

CameraIntrinsics reference_intrinsics() {
  CameraIntrinsics k;
  k.fx = 1091.635505127837;
  k.fy = 1094.097509334247;
  k.cx = 615.7646844724167;
  k.cy = 336.08607722962415;
  return k;
}

DistortionCoeffs reference_distortion() {
  return {0.0158121998824731, -0.04906947859369595, -0.007932332725861788, -0.0036593828274275953};
}

ImuNoiseParams reference_noise() {
  ImuNoiseParams p;
  p.sigma_w = 1.8254576889106717e-03;
  p.sigma_bw = 2.8986822146241081e-05;
  p.sigma_a = 2.0172282667446476e-02;
  p.sigma_ba = 3.4229876539854489e-04;
  return p;
}

ImuDeterministicParams example_deterministic_params() {
  ImuDeterministicParams det;
  det.accel.scale = Vec3(0.98, 1.01, 0.99);
  det.accel.misalign << 1, 0.01, -0.008, 0, 1, 0.006, 0, 0, 1;
  det.accel.bias = Vec3(0.1, -0.05, 0.2);
  det.gyro.scale = Vec3(1.02, 0.97, 1.01);
  det.gyro.misalign << 1, -0.005, 0.002, 0, 1, 0.008, 0, 0, 1;
  det.gyro.bias = Vec3(0.002, -0.001, 0.003);
  return det;
}

RigDataset generate_rig_dataset(const TrajectorySpec& trajectory, const ImuEmissionOptions& imu,
                                const CameraEmissionOptions& camera) {
  RigDataset ds;
  ds.trajectory = trajectory;
  ds.imu_options = imu;
  ds.camera_options = camera;
  const Trajectory traj(trajectory);
  ds.imu = emit_imu(traj, imu, trajectory.seed);
  ds.camera = emit_camera(traj, camera, trajectory.seed);
  ds.cam_poses = ds.camera.poses;
  ds.views = ds.camera.views;
  ds.log = ds.camera.log;
  for (const auto& p : ds.cam_poses) {
    ds.frame_times.push_back(p.t);
    ds.frame_states.push_back(traj.nav(p.t));
  }
  return ds;
}

}  // namespace camimu
