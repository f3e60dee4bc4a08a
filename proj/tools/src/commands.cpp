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


#include "commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "camimu/allan.hpp"
#include "camimu/camera_model.hpp"
#include "camimu/error.hpp"
#include "camimu/extrinsic_solver.hpp"
#include "camimu/imu_calibration.hpp"
#include "camimu/io.hpp"
#include "camimu/preintegration.hpp"
#include "camimu/synthetic.hpp"

namespace camimu::app {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json to_json(const Mat3& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back(json::array({m(r, 0), m(r, 1), m(r, 2)}));
  return rows;
}

json to_json(const UnitQuaternion& q) { return json::array({q.w(), q.x(), q.y(), q.z()}); }

json to_json(const SensorErrorModel& m) {
  return {{"scale_matrix", to_json(Mat3(m.scale.asDiagonal()))},
          {"misalignment_matrix", to_json(m.misalign)},
          {"bias", to_json(m.bias)}};
}

json to_json(const CameraIntrinsics& k) {
  return {{"fx", k.fx}, {"fy", k.fy}, {"cx", k.cx}, {"cy", k.cy}, {"gamma", k.gamma}};
}

json to_json(const DistortionCoeffs& d) {
  return {{"k1", d.k1}, {"k2", d.k2}, {"p1", d.p1}, {"p2", d.p2},
          {"matrix", json::array({json::array({d.k1, d.k2}), json::array({d.p1, d.p2})})}};
}

json to_json(const ImuNoiseParams& n) {
  return {{"sigma_w", n.sigma_w}, {"sigma_bw", n.sigma_bw}, {"sigma_a", n.sigma_a},
          {"sigma_ba", n.sigma_ba}};
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "cannot create output directory " + dir.string());
  }
}

fs::path require(const std::optional<fs::path>& path, const char* flag) {
  if (!path) throw Error(ErrorCode::kInvalidInput, std::string("missing required input ") + flag);
  return *path;
}

void write_json(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

std::string f(double v) { return format_double(v); }

}  // namespace

// ---------------------------------------------------------------- simulate

void cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  prepare_out_dir(config.out);

  TrajectorySpec spec = default_trajectory_spec(config.seed, config.duration);
  spec.imu_rate = config.imu_rate;
  spec.cam_rate = config.cam_rate;
  if (config.zero_amplitude) {
    spec.pos_amplitude.setZero();
    spec.rot_amplitude.setZero();
  }
  spec.validate();

  const ImuNoiseParams noise = config.noisy ? reference_noise() : ImuNoiseParams{};
  const double pixel_noise = config.noisy ? 0.3 : 0.0;
  const Vec3 g_w(0.0, 0.0, config.gravity);

  ImuEmissionOptions imu;
  imu.g_w = g_w;
  imu.noise = noise;
  imu.add_noise = config.noisy;

  CameraEmissionOptions cam;
  cam.R_bc = reference_extrinsic_rotation();
  cam.t_bc = reference_extrinsic_translation();
  cam.intrinsics = reference_intrinsics();
  cam.distortion = reference_distortion();
  cam.pixel_noise = pixel_noise;

  const RigDataset rig = generate_rig_dataset(spec, imu, cam);
  const CalibrationViewSet views =
      generate_calibration_views(cam.intrinsics, cam.distortion, cam.grid, config.calibration_views,
                                 pixel_noise, config.seed, cam.width, cam.height);

  StaticMotionSpec sm;
  sm.imu_rate = config.imu_rate;
  sm.g_w = g_w;
  sm.det = example_deterministic_params();
  sm.noise = noise;
  sm.add_noise = config.noisy;
  const StaticMotionRecording calib = generate_static_motion_recording(sm, config.seed);

  std::vector<TimedNavState> states;
  for (std::size_t i = 0; i < rig.frame_times.size(); ++i) {
    states.push_back({rig.frame_times[i], rig.frame_states[i]});
  }

  write_text_file(config.out / "imu.csv", format_imu_csv(rig.imu));
  write_text_file(config.out / "cam_poses.csv", format_poses_csv(rig.cam_poses));
  write_text_file(config.out / "frames.csv", format_frames_csv(rig.frame_times));
  write_text_file(config.out / "nav_states.csv", format_nav_states_csv(states));
  write_text_file(config.out / "views.jsonl", format_views_jsonl(views.views));
  write_text_file(config.out / "imu_calib.csv", format_imu_csv(calib.samples));

  json frame_states = json::array();
  for (const auto& s : states) {
    frame_states.push_back({{"t", s.t},
                            {"p", to_json(s.state.p)},
                            {"v", to_json(s.state.v)},
                            {"q", to_json(s.state.q)}});
  }
  json intervals = json::array();
  for (const auto& iv : calib.truth) {
    intervals.push_back({{"t_start", iv.t_start}, {"t_end", iv.t_end}});
  }
  const UnitQuaternion q_bc = rot_to_quat(cam.R_bc);
  json truth = {
      {"seed", config.seed},
      {"gravity", config.gravity},
      {"trajectory",
       {{"duration", spec.duration}, {"imu_rate", spec.imu_rate}, {"cam_rate", spec.cam_rate},
        {"zero_amplitude", config.zero_amplitude}}},
      {"extrinsic", {{"R_bc", to_json(cam.R_bc)}, {"q_bc", to_json(q_bc)}, {"t_bc", to_json(cam.t_bc)}}},
      {"intrinsics", to_json(cam.intrinsics)},
      {"distortion", to_json(cam.distortion)},
      {"pixel_noise", pixel_noise},
      {"imu_deterministic",
       {{"file", "imu_calib.csv"},
        {"accelerometer", to_json(sm.det.accel)},
        {"gyroscope", to_json(sm.det.gyro)}}},
      {"noise", to_json(noise)},
      {"frame_states", frame_states},
      {"static_intervals", intervals},
  };
  write_json(config.out / "ground_truth.json", truth);

  for (const auto& line : rig.log) err << "warning: " << line << '\n';
  out << "imu_samples=" << rig.imu.size() << '\n'
      << "camera_frames=" << rig.cam_poses.size() << '\n'
      << "calibration_views=" << views.views.size() << '\n'
      << "imu_calib_samples=" << calib.samples.size() << '\n'
      << "out=" << config.out.string() << '\n';
}

// -------------------------------------------------------- calibrate-camera

void cmd_calibrate_camera(const RunConfig& config, std::ostream& out, std::ostream&) {
  const auto views = read_views_jsonl(require(config.views, "--views"));
  prepare_out_dir(config.out);
  const CameraCalibration cal = calibrate_camera(views);
  const auto& k = cal.intrinsics;

  json report = to_json(k);
  report["K"] = to_json(k.matrix(config.with_skew));
  report["skew_in_K"] = config.with_skew;
  report["distortion"] = to_json(cal.distortion);
  report["reprojection"] = {{"rms_px", cal.reprojection.rms_px},
                            {"max_px", cal.reprojection.max_px},
                            {"points", cal.reprojection.residuals.size()}};
  report["views"] = views.size();
  report["iterations"] = cal.iterations;
  write_json(config.out / "intrinsics.json", report);

  std::string csv = "view_id,point,du,dv\n";
  for (const auto& r : cal.reprojection.residuals) {
    csv += std::to_string(r.view_id) + ',' + std::to_string(r.point_index) + ',' +
           f(r.residual.x()) + ',' + f(r.residual.y()) + '\n';
  }
  write_text_file(config.out / "reproj_residuals.csv", csv);

  out << "fx=" << f(k.fx) << "\nfy=" << f(k.fy) << "\ncx=" << f(k.cx) << "\ncy=" << f(k.cy)
      << "\ngamma=" << f(k.gamma) << "\nk1=" << f(cal.distortion.k1)
      << "\nk2=" << f(cal.distortion.k2) << "\np1=" << f(cal.distortion.p1)
      << "\np2=" << f(cal.distortion.p2) << "\nreprojection_rms_px=" << f(cal.reprojection.rms_px)
      << "\nreprojection_max_px=" << f(cal.reprojection.max_px) << '\n';
}

// ------------------------------------------------------------------- allan

void cmd_allan(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto samples = read_imu_csv(require(config.imu, "--imu"));
  validate_recording(samples);
  if (samples.size() < 2) throw Error(ErrorCode::kInsufficientData, "need at least 2 samples");
  prepare_out_dir(config.out);
  const double dt = median_dt(samples);
  if (config.tau_max > 0.0 && config.tau_max < config.tau_min) {
    throw Error(ErrorCode::kInvalidInput, "tau_max is below tau_min");
  }
  const auto sizes = log_spaced_cluster_sizes(samples.size(), dt, config.tau_min, config.tau_max,
                                              config.tau_per_decade);

  static constexpr std::array<const char*, 6> kAxes = {"gx", "gy", "gz", "ax", "ay", "az"};
  std::array<AllanCurve, 3> gyro, accel;
  std::vector<double> series(samples.size());
  for (int c = 0; c < 6; ++c) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      series[i] = c < 3 ? samples[i].gyro[c] : samples[i].accel[c - 3];
    }
    AllanCurve curve = allan_variance(series, dt, sizes);
    (c < 3 ? gyro[c] : accel[c - 3]) = std::move(curve);
  }
  for (const auto& w : gyro[0].warnings) err << "warning: " << w << '\n';

  std::string csv = "axis,tau,adev,count\n";
  for (int c = 0; c < 6; ++c) {
    for (const auto& p : (c < 3 ? gyro[c] : accel[c - 3]).points) {
      csv += std::string(kAxes[c]) + ',' + f(p.tau) + ',' + f(std::sqrt(p.avar)) + ',' +
             std::to_string(p.count) + '\n';
    }
  }
  write_text_file(config.out / "allan.csv", csv);

  const NoiseReport report = fit_noise_params(gyro, accel);

  auto axis_json = [](const AxisNoiseFit& a) {
    return json{{"noise_density", a.density},
                {"random_walk", a.walk ? json(*a.walk) : json(nullptr)},
                {"white_tau_range", json::array({a.white_tau_lo, a.white_tau_hi})},
                {"walk_tau_range", a.walk ? json::array({a.walk_tau_lo, a.walk_tau_hi}) : json(nullptr)},
                {"white_fit_rms", a.white_fit_rms},
                {"walk_fit_rms", a.walk_fit_rms}};
  };
  auto sensor_json = [&](const std::array<AxisNoiseFit, 3>& axes, double density, double walk,
                         bool walk_ok) {
    json j;
    for (const auto& a : axes) j["axes"][a.axis] = axis_json(a);
    j["mean"] = {{"noise_density", density}, {"random_walk", walk_ok ? json(walk) : json(nullptr)}};
    j["walk_identified"] = walk_ok;
    return j;
  };
  json j = {{"samples", samples.size()},
            {"sample_period", dt},
            {"gyroscope", sensor_json(report.gyro, report.mean.sigma_w, report.mean.sigma_bw,
                                      report.gyro_walk_identified)},
            {"accelerometer", sensor_json(report.accel, report.mean.sigma_a, report.mean.sigma_ba,
                                          report.accel_walk_identified)}};
  write_json(config.out / "noise_params.json", j);

  if (!report.gyro_walk_identified) err << "warning: gyroscope random walk not identified\n";
  if (!report.accel_walk_identified) err << "warning: accelerometer random walk not identified\n";
  out << "gyro_noise_density=" << f(report.mean.sigma_w) << '\n'
      << "gyro_random_walk=" << f(report.mean.sigma_bw) << '\n'
      << "accel_noise_density=" << f(report.mean.sigma_a) << '\n'
      << "accel_random_walk=" << f(report.mean.sigma_ba) << '\n';
}

// ----------------------------------------------------------- calibrate-imu

namespace {

std::string loss_trace_csv(const std::vector<double>& accel, const std::vector<double>& gyro) {
  std::string csv = "stage,iteration,loss\n";
  for (std::size_t i = 0; i < accel.size(); ++i) {
    csv += "accel," + std::to_string(i) + ',' + f(accel[i]) + '\n';
  }
  for (std::size_t i = 0; i < gyro.size(); ++i) {
    csv += "gyro," + std::to_string(i) + ',' + f(gyro[i]) + '\n';
  }
  return csv;
}

}  // namespace

void cmd_calibrate_imu(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto samples = read_imu_csv(require(config.imu, "--imu"));
  validate_recording(samples);
  prepare_out_dir(config.out);
  const fs::path trace_path = config.out / "loss_trace.csv";

  ImuCalibrationResult r;
  try {
    r = calibrate_imu(samples, config.gravity);
  } catch (const ConvergenceError& e) {
    write_text_file(trace_path, loss_trace_csv(e.loss_trace(), {}));
    err << "loss trace written to " << trace_path.string() << '\n';
    throw;
  }
  write_text_file(trace_path, loss_trace_csv(r.accel_loss_trace, r.gyro_loss_trace));

  json intervals = json::array();
  for (const auto& iv : r.intervals) {
    intervals.push_back({{"t_start", iv.t_start}, {"t_end", iv.t_end}});
  }
  json accel = to_json(r.params.accel);
  accel["loss"] = r.accel_loss;
  json gyro = to_json(r.params.gyro);
  gyro["loss"] = r.gyro_loss;
  write_json(config.out / "imu_calib.json", {{"gravity", config.gravity},
                                             {"accelerometer", accel},
                                             {"gyroscope", gyro},
                                             {"static_intervals", intervals}});

  const auto& a = r.params.accel;
  const auto& g = r.params.gyro;
  out << "static_intervals=" << r.intervals.size() << '\n'
      << "accel_scale=" << f(a.scale.x()) << ',' << f(a.scale.y()) << ',' << f(a.scale.z()) << '\n'
      << "accel_bias=" << f(a.bias.x()) << ',' << f(a.bias.y()) << ',' << f(a.bias.z()) << '\n'
      << "gyro_scale=" << f(g.scale.x()) << ',' << f(g.scale.y()) << ',' << f(g.scale.z()) << '\n'
      << "gyro_bias=" << f(g.bias.x()) << ',' << f(g.bias.y()) << ',' << f(g.bias.z()) << '\n'
      << "accel_loss=" << f(r.accel_loss) << '\n'
      << "gyro_loss=" << f(r.gyro_loss) << '\n';
}

// ---------------------------------------------------- calibrate-extrinsics

namespace {

double median_spacing(const std::vector<CameraPose>& poses) {
  std::vector<double> d;
  for (std::size_t i = 1; i < poses.size(); ++i) d.push_back(poses[i].t - poses[i - 1].t);
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2), d.end());
  return d[d.size() / 2];
}

// Nearest state within `tol` of t, if any.
const TimedNavState* nearest_state(const std::vector<TimedNavState>& states, double t, double tol) {
  auto it = std::lower_bound(states.begin(), states.end(), t,
                             [](const TimedNavState& s, double v) { return s.t < v; });
  const TimedNavState* best = nullptr;
  if (it != states.end()) best = &*it;
  if (it != states.begin()) {
    const auto* prev = &*std::prev(it);
    if (!best || t - prev->t < best->t - t) best = prev;
  }
  return best && std::abs(best->t - t) <= tol ? best : nullptr;
}

}  // namespace

void cmd_calibrate_extrinsics(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto imu = read_imu_csv(require(config.imu, "--imu"));
  validate_recording(imu);
  const auto poses = read_poses_csv(require(config.poses, "--poses"));
  if (imu.size() < 2) throw Error(ErrorCode::kInsufficientData, "need at least 2 IMU samples");
  if (poses.size() < 5) {
    throw Error(ErrorCode::kInsufficientData,
                "need at least 5 camera frames, got " + std::to_string(poses.size()));
  }
  if (poses.back().t <= imu.front().t || poses.front().t >= imu.back().t) {
    throw Error(ErrorCode::kAlignment, "camera and IMU time ranges do not overlap");
  }
  std::vector<TimedNavState> states;
  if (config.states) states = read_nav_states_csv(*config.states);
  prepare_out_dir(config.out);

  const double period = median_spacing(poses);
  std::vector<RelativeRotationPair> pairs;
  std::vector<PreintegratedDelta> deltas;
  std::size_t skipped = 0;
  for (std::size_t k = 0; k + 1 < poses.size(); ++k) {
    const double t0 = poses[k].t, t1 = poses[k + 1].t;
    if (t0 < imu.front().t || t1 > imu.back().t) {
      ++skipped;
      continue;
    }
    auto delta = preintegrate_interval(imu, t0, t1, Vec3::Zero(), Vec3::Zero());
    for (const auto& w : delta.warnings) err << "warning: interval " << k << ": " << w << '\n';
    pairs.push_back(pair_from_camera_poses(poses[k], poses[k + 1], delta, config.pose_convention,
                                           period, static_cast<int>(k)));
    deltas.push_back(std::move(delta));
  }
  if (pairs.empty()) {
    throw Error(ErrorCode::kAlignment, "no camera interval is covered by the IMU recording");
  }
  if (skipped) err << "warning: " << skipped << " camera intervals outside the IMU recording\n";

  RotationSolverConfig rc;
  rc.r_thr = deg2rad(config.r_thr_deg);
  rc.max_rounds = config.max_rounds;
  rc.min_rotation_deg = config.min_rotation_deg;
  const ExtrinsicResult result = solve_rotation(pairs, rc);

  std::map<int, double> weight_of, residual_of;
  for (std::size_t i = 0; i < result.pair_ids.size(); ++i) {
    weight_of[result.pair_ids[i]] = result.weights[i];
    residual_of[result.pair_ids[i]] = result.residuals[i];
  }

  // Translation from inlier pairs, when start states are available.
  json translation = {{"status", "not-requested"}};
  std::optional<Vec3> t_bc;
  if (config.states) {
    std::vector<RelativeRotationPair> tp;
    std::vector<PreintegratedDelta> td;
    std::vector<NavState> ts;
    std::size_t missing = 0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto w = weight_of.find(pairs[i].interval_id);
      if (w != weight_of.end() && w->second < 1.0) continue;
      const auto* s = nearest_state(states, deltas[i].t_start, 0.5 * period);
      if (!s) {
        ++missing;
        continue;
      }
      tp.push_back(pairs[i]);
      td.push_back(deltas[i]);
      ts.push_back(s->state);
    }
    if (missing) err << "warning: " << missing << " intervals have no matching start state\n";
    try {
      const TranslationResult tr =
          solve_translation(tp, td, ts, result.R_bc, Vec3(0.0, 0.0, config.gravity));
      t_bc = tr.t_bc;
      translation = {{"status", "solved"},
                     {"rms", tr.rms},
                     {"pairs", tp.size()},
                     {"singular_values", to_json(tr.singular_values)}};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnobservableTranslation && e.code() != ErrorCode::kInsufficientData) {
        throw;
      }
      err << "warning: translation not solved: " << e.what() << '\n';
      translation = {{"status", std::string(to_string(e.code()))}, {"message", e.what()}};
    }
  }

  json pair_rows = json::array();
  std::string pair_csv = "interval_id,t_start,t_end,imu_angle_deg,residual_deg,weight\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const int id = pairs[i].interval_id;
    const double angle = rad2deg(pairs[i].q_imu.angle());
    const auto w = weight_of.find(id);
    json row = {{"interval_id", id}, {"t_start", deltas[i].t_start}, {"t_end", deltas[i].t_end},
                {"imu_angle_deg", angle}};
    pair_csv += std::to_string(id) + ',' + f(deltas[i].t_start) + ',' + f(deltas[i].t_end) + ',' +
                f(angle) + ',';
    if (w == weight_of.end()) {
      row["dropped"] = true;
      pair_csv += ",\n";
    } else {
      const double r = rad2deg(residual_of[id]);
      row["residual_deg"] = r;
      row["weight"] = w->second;
      pair_csv += f(r) + ',' + f(w->second) + '\n';
    }
    pair_rows.push_back(row);
  }
  write_text_file(config.out / "pair_residuals.csv", pair_csv);

  json rounds = json::array();
  std::string round_csv = "round,interval_id,residual_deg,weight\n";
  for (const auto& rec : result.history) {
    rounds.push_back({{"round", rec.round},
                      {"q_bc", to_json(rec.q_bc)},
                      {"change_deg", rec.change_deg},
                      {"weighted_residual", rec.weighted_residual},
                      {"singular_values", json::array({rec.singular_values[0], rec.singular_values[1],
                                                       rec.singular_values[2], rec.singular_values[3]})}});
    for (std::size_t i = 0; i < rec.residuals.size() && i < result.pair_ids.size(); ++i) {
      round_csv += std::to_string(rec.round) + ',' + std::to_string(result.pair_ids[i]) + ',' +
                   f(rad2deg(rec.residuals[i])) + ',' + f(rec.weights[i]) + '\n';
    }
  }
  write_text_file(config.out / "round_history.csv", round_csv);

  const auto& sv = result.singular_values;
  json report = {
      {"q_bc", to_json(result.q_bc)},
      {"R_bc", to_json(result.R_bc)},
      {"t_bc", t_bc ? to_json(*t_bc) : json(nullptr)},
      {"translation", translation},
      {"singular_values", json::array({sv[0], sv[1], sv[2], sv[3]})},
      {"converged", result.converged},
      {"excitation_ok", result.excitation_ok},
      {"iterations", result.iterations},
      {"r_thr_deg", config.r_thr_deg},
      {"pose_convention", config.pose_convention == PoseConvention::kCameraToWorld ? "c2w" : "w2c"},
      {"pairs_used", result.pair_ids.size()},
      {"pairs_dropped", result.dropped_ids.size()},
      {"intervals_skipped", skipped},
      {"pairs", pair_rows},
      {"rounds", rounds},
  };
  write_json(config.out / "extrinsics.json", report);

  const Mat3& R = result.R_bc;
  if (!result.excitation_ok || !result.converged) {
    out << "*** UNDER-EXCITED: rotations do not constrain the extrinsic; converged=false ***\n";
  }
  out << "converged=" << (result.converged ? "true" : "false") << '\n'
      << "q_bc=" << f(result.q_bc.w()) << ',' << f(result.q_bc.x()) << ',' << f(result.q_bc.y())
      << ',' << f(result.q_bc.z()) << '\n';
  for (int r = 0; r < 3; ++r) {
    out << "R_bc_row" << r << '=' << f(R(r, 0)) << ',' << f(R(r, 1)) << ',' << f(R(r, 2)) << '\n';
  }
  if (t_bc) out << "t_bc=" << f(t_bc->x()) << ',' << f(t_bc->y()) << ',' << f(t_bc->z()) << '\n';
  out << "pairs_used=" << result.pair_ids.size() << '\n';
}

// ------------------------------------------------------------ preintegrate

void cmd_preintegrate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const auto imu = read_imu_csv(require(config.imu, "--imu"));
  validate_recording(imu);
  const auto frames = read_frames_csv(require(config.frames, "--frames"));
  if (frames.size() < 2) throw Error(ErrorCode::kInsufficientData, "need at least 2 frame times");
  prepare_out_dir(config.out);

  std::string lines;
  for (std::size_t k = 0; k + 1 < frames.size(); ++k) {
    const auto d = preintegrate_interval(imu, frames[k], frames[k + 1], Vec3::Zero(), Vec3::Zero());
    for (const auto& w : d.warnings) err << "warning: interval " << k << ": " << w << '\n';
    const json j = {{"interval", k},
                    {"t_start", d.t_start},
                    {"t_end", d.t_end},
                    {"dt", d.dt_total},
                    {"alpha", to_json(d.alpha)},
                    {"beta", to_json(d.beta)},
                    {"gamma", to_json(d.gamma)},
                    {"samples", d.sample_count}};
    lines += j.dump() + '\n';
  }
  write_text_file(config.out / "deltas.jsonl", lines);
  out << "intervals=" << frames.size() - 1 << '\n';
}

}  // namespace camimu::app
