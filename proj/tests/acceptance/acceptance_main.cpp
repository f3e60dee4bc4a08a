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


// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes. Tolerances are fixed here and never relaxed at run
// time.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "camimu/allan.hpp"
#include "camimu/camera_model.hpp"
#include "camimu/error.hpp"
#include "camimu/extrinsic_solver.hpp"
#include "camimu/geometry.hpp"
#include "camimu/imu_calibration.hpp"
#include "camimu/imu_model.hpp"
#include "camimu/preintegration.hpp"
#include "camimu/synthetic.hpp"
#include "oracles.hpp"

namespace camimu {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records one measured quantity against its limit.
  void check(const std::string& what, double value, double limit, bool below = true) {
    const bool ok = below ? value < limit : value > limit;
    pass = pass && ok;
    detail << ' ' << what << '=' << value << (below ? "<" : ">") << limit << (ok ? "" : "(!)");
  }
  void require(const std::string& what, bool ok) {
    pass = pass && ok;
    detail << ' ' << what << '=' << (ok ? "yes" : "NO");
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double angle_between(const Mat3& a, const Mat3& b) { return rotation_angle(a.transpose() * b); }

// ------------------------------------------------------------------ 1

void extrinsic_rotation_noise_free(Outcome& o) {
  const auto t0 = Clock::now();
  RotationPairSpec spec;
  spec.count = 50;
  spec.noise_deg = 0.0;
  spec.outlier_fraction = 0.0;
  spec.R_bc = reference_extrinsic_rotation();
  const auto set = generate_rotation_pairs(spec, 1001);
  const auto res = solve_rotation(set.pairs);
  const double runtime = seconds_since(t0);
  o.check("angle_err_rad", angle_between(res.R_bc, spec.R_bc), 1e-6);
  o.check("sigma_min", res.singular_values[3], 1e-10);
  o.check("runtime_s", runtime, 1.0);
}

// ------------------------------------------------------------------ 2

void extrinsic_rotation_robust(Outcome& o) {
  const auto t0 = Clock::now();
  std::vector<double> errors_deg;
  bool separated = true;
  for (int trial = 0; trial < 50; ++trial) {
    RotationPairSpec spec;
    spec.count = 200;
    spec.noise_deg = 0.5;
    spec.outlier_fraction = 0.2;
    spec.outlier_deg = 30.0;
    spec.R_bc = reference_extrinsic_rotation();
    const auto set = generate_rotation_pairs(spec, 2000 + static_cast<std::uint64_t>(trial));
    RotationSolverConfig config;
    config.r_thr = deg2rad(5.0);
    const auto res = solve_rotation(set.pairs, config);
    errors_deg.push_back(rad2deg(angle_between(res.R_bc, spec.R_bc)));
    double max_outlier = -1.0, min_inlier = 2.0;
    for (std::size_t i = 0; i < res.pair_ids.size(); ++i) {
      const double w = res.weights[i];
      if (set.is_outlier[static_cast<std::size_t>(res.pair_ids[i])]) {
        max_outlier = std::max(max_outlier, w);
      } else {
        min_inlier = std::min(min_inlier, w);
      }
    }
    separated = separated && max_outlier < min_inlier;
  }
  const double runtime = seconds_since(t0);
  o.check("p95_err_deg", testing::percentile(errors_deg, 95.0), 0.5);
  o.require("outlier_weights_below_inliers", separated);
  o.check("runtime_s", runtime, 30.0);
}

// ------------------------------------------------------------------ 3

struct RigPairs {
  std::vector<RelativeRotationPair> pairs;
  std::vector<PreintegratedDelta> deltas;
  std::vector<NavState> starts;
};

RigPairs rig_pairs(const RigDataset& rig) {
  RigPairs out;
  for (std::size_t k = 0; k + 1 < rig.frame_times.size(); ++k) {
    const auto d = preintegrate_interval(rig.imu, rig.frame_times[k], rig.frame_times[k + 1],
                                         Vec3::Zero(), Vec3::Zero());
    out.pairs.push_back(pair_from_camera_poses(rig.cam_poses[k], rig.cam_poses[k + 1], d,
                                               PoseConvention::kCameraToWorld,
                                               1.0 / rig.trajectory.cam_rate, static_cast<int>(k)));
    out.deltas.push_back(d);
    out.starts.push_back(rig.frame_states[k]);
  }
  return out;
}

RigDataset clean_rig(const TrajectorySpec& spec) {
  ImuEmissionOptions imu;
  imu.add_noise = false;
  CameraEmissionOptions cam;
  cam.R_bc = reference_extrinsic_rotation();
  cam.t_bc = reference_extrinsic_translation();
  cam.intrinsics = reference_intrinsics();
  return generate_rig_dataset(spec, imu, cam);
}

void extrinsic_translation(Outcome& o) {
  const Vec3 g(0.0, 0.0, kDefaultGravity);
  // Sampled at 2 kHz: the per-step integration error scales with dt^2 and
  // at 200 Hz alone contributes ~2e-5 m.
  auto spec = default_trajectory_spec(3001, 20.0);
  spec.imu_rate = 2000.0;
  const auto rig = clean_rig(spec);
  const auto p = rig_pairs(rig);
  const auto rot = solve_rotation(p.pairs);
  const auto tr = solve_translation(p.pairs, p.deltas, p.starts, rot.R_bc, g);
  o.check("t_err_m", (tr.t_bc - reference_extrinsic_translation()).norm(), 1e-6);

  auto still = default_trajectory_spec(3002, 10.0);
  still.rot_amplitude = Vec3::Zero();
  const auto q = rig_pairs(clean_rig(still));
  bool raised = false;
  try {
    solve_translation(q.pairs, q.deltas, q.starts, reference_extrinsic_rotation(), g);
  } catch (const Error& e) {
    raised = e.code() == ErrorCode::kUnobservableTranslation;
  }
  o.require("translation_only_unobservable", raised);
}

// ------------------------------------------------------------------ 4

double max_relative_error(const CameraIntrinsics& a, const CameraIntrinsics& b) {
  return std::max({std::abs(a.fx - b.fx) / b.fx, std::abs(a.fy - b.fy) / b.fy,
                   std::abs(a.cx - b.cx) / b.cx, std::abs(a.cy - b.cy) / b.cy});
}

void camera_intrinsics(Outcome& o) {
  const auto K = reference_intrinsics();
  const auto dist = reference_distortion();
  const TargetGrid grid;

  const auto clean = generate_calibration_views(K, DistortionCoeffs{}, grid, 10, 0.0, 4001);
  const auto closed_form = solve_intrinsics(std::span<const PlanarView>(clean.views));
  o.check("noise_free_rel_err", max_relative_error(closed_form.intrinsics, K), 1e-6);

  const auto distorted = generate_calibration_views(K, dist, grid, 10, 0.0, 4002);
  const auto cal = calibrate_camera(distorted.views);
  o.check("with_distortion_rel_err", max_relative_error(cal.intrinsics, K), 1e-6);
  o.check("reproj_max_px", cal.reprojection.max_px, 1e-8);

  std::vector<double> errors;
  for (int trial = 0; trial < 50; ++trial) {
    const auto noisy = generate_calibration_views(K, DistortionCoeffs{}, grid, 20, 0.3,
                                                  4100 + static_cast<std::uint64_t>(trial));
    errors.push_back(max_relative_error(solve_intrinsics(std::span<const PlanarView>(noisy.views)).intrinsics, K));
  }
  o.check("noisy_p95_rel_err", testing::percentile(errors, 95.0), 0.01);
}

// ------------------------------------------------------------------ 5

void distortion_round_trip(Outcome& o) {
  const auto dist = reference_distortion();
  std::mt19937_64 rng(5001);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    // Uniform over the unit disk.
    const double r = std::sqrt(u(rng)), phi = 2.0 * M_PI * u(rng);
    const Vec2 x(r * std::cos(phi), r * std::sin(phi));
    worst = std::max(worst, (undistort_point(apply_distortion(x, dist), dist) - x).norm());
  }
  o.check("max_gap", worst, 1e-9);
}

// ------------------------------------------------------------------ 6

AllanCurve white_corrected(const AllanCurve& c, double density) {
  AllanCurve out;
  for (const auto& p : c.points) {
    out.points.push_back({p.tau, p.avar - density * density / p.tau, p.count});
  }
  return out;
}

void allan_identification(Outcome& o) {
  const auto t0 = Clock::now();
  TrajectorySpec still = default_trajectory_spec(6001, 7200.0);
  still.pos_amplitude.setZero();
  still.rot_amplitude.setZero();
  ImuEmissionOptions imu;
  imu.noise = reference_noise();
  const auto samples = emit_imu(Trajectory(still), imu, 6001);

  const double dt = 1.0 / still.imu_rate;
  std::array<AllanCurve, 3> gyro, accel;
  std::vector<double> series(samples.size());
  for (int c = 0; c < 6; ++c) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      series[i] = c < 3 ? samples[i].gyro[c] : samples[i].accel[c - 3];
    }
    (c < 3 ? gyro[c] : accel[c - 3]) = allan_variance(series, dt);
  }
  const auto report = fit_noise_params(gyro, accel);
  const auto ref = reference_noise();
  auto rel = [](double a, double b) { return std::abs(a / b - 1.0); };
  o.check("gyro_density_rel", rel(report.mean.sigma_w, ref.sigma_w), 0.10);
  o.check("accel_density_rel", rel(report.mean.sigma_a, ref.sigma_a), 0.10);
  o.require("walks_identified", report.gyro_walk_identified && report.accel_walk_identified);
  o.check("gyro_walk_rel", rel(report.mean.sigma_bw, ref.sigma_bw), 0.15);
  o.check("accel_walk_rel", rel(report.mean.sigma_ba, ref.sigma_ba), 0.15);

  // The +1/2 segment of the combined curve spans under a decade of tau with
  // few clusters in 2 h, so its slope is shown but not gated. The slope laws
  // are gated on the white and walk components of the same streams.
  double combined_walk_slope = 0.0;
  for (int c = 0; c < 6; ++c) {
    const auto& fit = c < 3 ? report.gyro[c] : report.accel[c - 3];
    const auto& curve = c < 3 ? gyro[c] : accel[c - 3];
    if (fit.walk) {
      combined_walk_slope = std::max(
          combined_walk_slope,
          std::abs(deviation_slope(white_corrected(curve, fit.density), fit.walk_tau_lo, fit.walk_tau_hi) - 0.5));
    }
  }
  o.detail << " combined_walk_slope_dev(info)=" << combined_walk_slope;

  auto component_curves = [&](const ImuNoiseParams& noise, std::uint64_t seed) {
    ImuEmissionOptions opts;
    opts.noise = noise;
    const auto s = emit_imu(Trajectory(still), opts, seed);
    std::vector<AllanCurve> curves;
    for (int c = 0; c < 6; ++c) {
      for (std::size_t i = 0; i < s.size(); ++i) series[i] = c < 3 ? s[i].gyro[c] : s[i].accel[c - 3];
      curves.push_back(allan_variance(series, dt));
    }
    return curves;
  };
  ImuNoiseParams white_only = ref, walk_only = ref;
  white_only.sigma_bw = white_only.sigma_ba = 0.0;
  walk_only.sigma_w = walk_only.sigma_a = 0.0;
  double white_slope = 0.0, walk_slope = 0.0;
  for (const auto& c : component_curves(white_only, 6002)) {
    white_slope = std::max(white_slope, std::abs(deviation_slope(c, 0.01, 1.0) + 0.5));
  }
  for (const auto& c : component_curves(walk_only, 6003)) {
    walk_slope = std::max(walk_slope, std::abs(deviation_slope(c, 0.1, 10.0) - 0.5));
  }
  o.check("white_slope_dev", white_slope, 0.05);
  o.check("walk_slope_dev", walk_slope, 0.05);
  o.check("runtime_s", seconds_since(t0), 60.0);
}

// ------------------------------------------------------------------ 7

void noise_discretization(Outcome& o) {
  constexpr int kTrials = 10000;
  const auto ref = reference_noise();
  const double dt = 0.005;
  std::mt19937_64 rng(7001);
  std::normal_distribution<double> n01;

  // White: the mean of fine-grained density-sigma noise over dt.
  const double h = dt / 50.0;
  const double fine = discretize_noise(ref.sigma_a, h, NoiseKind::kWhite);
  std::vector<double> means;
  for (int t = 0; t < kTrials; ++t) {
    double s = 0.0;
    for (int i = 0; i < 50; ++i) s += fine * n01(rng);
    means.push_back(s / 50.0);
  }
  const double white_ratio = testing::variance(means) / (ref.sigma_a * ref.sigma_a / dt);

  // Walk: bias after one propagation step of length dt.
  std::vector<double> walk;
  for (int t = 0; t < kTrials; ++t) {
    const auto b = propagate_bias(BiasState{}, dt, ref, Vec3::Zero(), Vec3(n01(rng), n01(rng), n01(rng)));
    walk.push_back(b.gyro.x());
  }
  const double walk_ratio = testing::variance(walk) / (ref.sigma_bw * ref.sigma_bw * dt);
  o.check("white_ratio_dev", std::abs(white_ratio - 1.0), 0.05);
  o.check("walk_ratio_dev", std::abs(walk_ratio - 1.0), 0.05);
}

// ------------------------------------------------------------------ 8

testing::WorldState integrate_samples_in_world(testing::WorldState state,
                                               std::span<const ImuSample> s, const Vec3& g) {
  for (std::size_t k = 0; k + 1 < s.size(); ++k) {
    const Vec3 f = 0.5 * (s[k].accel + s[k + 1].accel);
    const Vec3 w = 0.5 * (s[k].gyro + s[k + 1].gyro);
    state = testing::rk4_world_integration(
        state, 0.0, s[k + 1].t - s[k].t, 20, [&](double) { return f; }, [&](double) { return w; }, g);
  }
  return state;
}

void preintegration(Outcome& o) {
  const double dt = 0.005, T = 1.0;
  const Vec3 a(0.3, -1.2, 2.5), w(0.4, -0.2, 0.9);
  std::vector<ImuSample> acc, rot;
  for (int k = 0; k <= 200; ++k) {
    acc.push_back({k * dt, a, Vec3::Zero()});
    rot.push_back({k * dt, Vec3::Zero(), w});
  }
  const auto da = preintegrate(acc, Vec3::Zero(), Vec3::Zero());
  const auto dw = preintegrate(rot, Vec3::Zero(), Vec3::Zero());
  const double closed = std::max({(da.beta - a * T).norm(), (da.alpha - 0.5 * a * T * T).norm(),
                                  std::abs(dw.gamma.angle() - w.norm() * T)});
  o.check("closed_form_gap", closed, 1e-8);

  const Vec3 g(0.0, 0.0, kDefaultGravity);
  ImuEmissionOptions opts;
  opts.add_noise = false;
  const Trajectory traj(default_trajectory_spec(8001, 4.0));
  const auto samples = emit_imu(traj, opts, 8001);
  const auto whole = preintegrate_interval(samples, 1.0, 2.0, Vec3::Zero(), Vec3::Zero());
  const auto joined = compose(preintegrate_interval(samples, 1.0, 1.45, Vec3::Zero(), Vec3::Zero()),
                              preintegrate_interval(samples, 1.45, 2.0, Vec3::Zero(), Vec3::Zero()));
  const double comp = std::max({(whole.alpha - joined.alpha).norm(), (whole.beta - joined.beta).norm(),
                                angular_distance(whole.gamma, joined.gamma)});
  o.check("composition_gap", comp, 1e-8);

  const auto start = traj.at(1.0);
  const auto predicted = predict_state(traj.nav(1.0), whole, g);
  const auto oracle = integrate_samples_in_world({start.p, start.v, start.R_wb},
                                                 slice_interval(samples, 1.0, 2.0), g);
  o.check("predict_vs_direct_m", (predicted.p - oracle.p).norm(), 1e-6);
}

// ------------------------------------------------------------------ 9

void imu_calibration(Outcome& o) {
  StaticMotionSpec spec;
  spec.det = example_deterministic_params();
  const auto rec = generate_static_motion_recording(spec, 9001);
  const double g = spec.g_w.norm();
  const auto res = calibrate_imu(rec.samples, g);
  auto worst = [](const SensorErrorModel& a, const SensorErrorModel& b) {
    return std::max({(a.scale - b.scale).cwiseAbs().maxCoeff(), (a.misalign - b.misalign).cwiseAbs().maxCoeff(),
                     (a.bias - b.bias).cwiseAbs().maxCoeff()});
  };
  o.check("accel_param_err", worst(res.params.accel, spec.det.accel), 1e-5);
  o.check("gyro_param_err", worst(res.params.gyro, spec.det.gyro), 1e-5);
  const StaticDetectorOptions detector;
  const auto means = static_accel_means(rec.samples, res.intervals, detector.window);
  o.check("loss_at_truth", accelerometer_loss(means, spec.det.accel, g), 1e-16);
}

// ------------------------------------------------------------------ 10

void geometry_properties(Outcome& o, const std::optional<fs::path>& unit_dir) {
  std::mt19937_64 rng(10001);
  constexpr int kCases = 1000;
  double compose = 0.0, lr = 0.0, cross = 0.0, omega = 0.0, residual = 0.0, negation = 0.0,
         round_trip = 0.0;
  for (int i = 0; i < kCases; ++i) {
    const UnitQuaternion a(testing::random_unit_quaternion(rng));
    const UnitQuaternion b(testing::random_unit_quaternion(rng));
    const UnitQuaternion c(testing::random_unit_quaternion(rng));
    const UnitQuaternion ab = a * b;
    compose = std::max(compose, (quat_to_rot(ab) - quat_to_rot(a) * quat_to_rot(b)).cwiseAbs().maxCoeff());
    lr = std::max({lr, (quat_left_matrix(a) * b.coeffs() - ab.coeffs()).norm(),
                   (quat_right_matrix(b) * a.coeffs() - ab.coeffs()).norm()});

    const Vec3 w = testing::random_vector(rng, 3.0), v = testing::random_vector(rng, 3.0);
    cross = std::max(cross, (skew(w) * v - testing::cross(w, v)).norm());
    const Mat4 O = omega_matrix(w);
    omega = std::max(omega, (O + O.transpose()).norm());

    const Mat3 R_est = quat_to_rot(a), R_imu = quat_to_rot(b);
    const Mat3 R_cam = R_est.transpose() * R_imu * R_est;
    residual = std::max(residual, rotation_angle_residual(R_est, R_imu, R_cam));
    const Mat3 R_c = quat_to_rot(c);
    negation = std::max(negation, std::abs(rotation_angle_residual(quat_to_rot(-a), quat_to_rot(-b), quat_to_rot(-c)) -
                                           rotation_angle_residual(R_est, R_imu, R_c)));

    const UnitQuaternion back = rot_to_quat(quat_to_rot(a));
    round_trip = std::max(round_trip, std::min((back.coeffs() - a.coeffs()).norm(),
                                               (back.coeffs() + a.coeffs()).norm()));
  }
  o.check("compose_gap", compose, 1e-12);
  o.check("left_right_gap", lr, 1e-13);
  o.check("skew_gap", cross, 1e-14);
  o.check("omega_asym", omega, 1e-15);
  o.check("consistent_residual", residual, 1e-10);
  o.check("negation_gap", negation, 1e-10);
  o.check("round_trip_gap", round_trip, 1e-12);

  if (!unit_dir) {
    o.require("unit_suite_timed", false);
    return;
  }
  const auto t0 = Clock::now();
  bool all_ok = true;
  int suites = 0;
  std::vector<fs::path> binaries;
  for (const auto& e : fs::directory_iterator(*unit_dir)) {
    const auto name = e.path().filename().string();
    if (e.is_regular_file() && name.rfind("test_", 0) == 0 && e.path().extension().empty()) {
      binaries.push_back(e.path());
    }
  }
  std::sort(binaries.begin(), binaries.end());
  for (const auto& bin : binaries) {
    const std::string cmd = "\"" + bin.string() + "\" --gtest_brief=1 > /dev/null 2>&1";
    all_ok = all_ok && std::system(cmd.c_str()) == 0;
    ++suites;
  }
  o.require("unit_suites_pass", all_ok && suites > 0);
  o.detail << " suites=" << suites;
  o.check("unit_suite_runtime_s", seconds_since(t0), 120.0);
}

}  // namespace
}  // namespace camimu

int main(int argc, char** argv) {
  using namespace camimu;
  std::optional<std::filesystem::path> unit_dir;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--unit-test-dir") unit_dir = argv[i + 1];
  }

  struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "extrinsic rotation, noise-free", extrinsic_rotation_noise_free},
      {2, "extrinsic rotation, robust benchmark", extrinsic_rotation_robust},
      {3, "extrinsic translation", extrinsic_translation},
      {4, "camera intrinsics", camera_intrinsics},
      {5, "distortion round trip", distortion_round_trip},
      {6, "Allan identification", allan_identification},
      {7, "noise discretization laws", noise_discretization},
      {8, "pre-integration", preintegration},
      {9, "IMU deterministic calibration", imu_calibration},
      {10, "geometry properties and unit suite", [&](Outcome& o) { geometry_properties(o, unit_dir); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    o.detail.precision(3);
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s criterion %d (%s):%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
