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

#include "camimu/extrinsic_solver.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "camimu/error.hpp"

namespace camimu {

Mat4 constraint_block(const RelativeRotationPair& pair) {
  return quat_left_matrix(pair.q_imu) - quat_right_matrix(pair.q_cam);
}

double huber_weight(double residual, double r_thr) {
  if (!(r_thr > 0.0)) throw Error(ErrorCode::kInvalidInput, "Huber threshold must be > 0");
  if (!(residual >= 0.0)) throw Error(ErrorCode::kInvalidInput, "residual must be >= 0");
  return residual <= r_thr ? 1.0 : r_thr / residual;
}

namespace {

struct WeightedSolve {
  UnitQuaternion q;
  Vec4 singular_values;
};

WeightedSolve weighted_null_vector(std::span<const Mat4> blocks, std::span<const double> weights) {
  MatX A(4 * static_cast<Eigen::Index>(blocks.size()), 4);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    A.block<4, 4>(4 * static_cast<Eigen::Index>(k), 0) = weights[k] * blocks[k];
  }
  Eigen::JacobiSVD<MatX> svd(A, Eigen::ComputeThinV);
  const Vec4 v = svd.matrixV().col(3);
  return {UnitQuaternion(v).canonical(), svd.singularValues()};
}

}  // namespace

ExtrinsicResult solve_rotation(std::span<const RelativeRotationPair> pairs,
                               const RotationSolverConfig& config) {
  if (!(config.r_thr > 0.0) || config.max_rounds < 1) {
    throw Error(ErrorCode::kInvalidInput, "solver needs r_thr > 0 and max_rounds >= 1");
  }
  ExtrinsicResult out;
  std::vector<Mat4> blocks;
  std::vector<Mat3> R_imu, R_cam;
  const double min_angle = deg2rad(config.min_rotation_deg);
  for (const auto& p : pairs) {
    const UnitQuaternion qi = p.q_imu.canonical();
    const UnitQuaternion qc = p.q_cam.canonical();
    if (qi.angle() < min_angle || qc.angle() < min_angle) {
      out.dropped_ids.push_back(p.interval_id);
      continue;
    }
    blocks.push_back(constraint_block({qi, qc, std::nullopt, p.interval_id}));
    R_imu.push_back(quat_to_rot(qi));
    R_cam.push_back(quat_to_rot(qc));
    out.pair_ids.push_back(p.interval_id);
  }
  if (blocks.size() < 4) {
    throw Error(ErrorCode::kInsufficientData,
                "rotation solve needs at least 4 pairs with rotation >= " +
                    std::to_string(config.min_rotation_deg) + " deg, got " +
                    std::to_string(blocks.size()));
  }

  const std::size_t n = blocks.size();
  auto residuals_for = [&](const UnitQuaternion& q) {
    const Mat3 R = quat_to_rot(q);
    std::vector<double> r(n);
    for (std::size_t k = 0; k < n; ++k) r[k] = rotation_angle_residual(R, R_imu[k], R_cam[k]);
    return r;
  };

  std::vector<double> weights(n, 1.0);
  bool settled = false;
  WeightedSolve solve;
  for (int round = 0; round < config.max_rounds; ++round) {
    solve = weighted_null_vector(blocks, weights);
    RoundRecord rec;
    rec.round = round;
    rec.q_bc = solve.q;
    rec.singular_values = solve.singular_values;
    rec.change_deg = out.history.empty()
                         ? std::numeric_limits<double>::quiet_NaN()
                         : rad2deg(angular_distance(solve.q, out.history.back().q_bc));
    rec.residuals = residuals_for(solve.q);
    rec.weights = weights;
    for (std::size_t k = 0; k < n; ++k) {
      rec.weighted_residual += weights[k] * rec.residuals[k] * rec.residuals[k];
    }
    for (std::size_t k = 0; k < n; ++k) weights[k] = huber_weight(rec.residuals[k], config.r_thr);
    out.history.push_back(rec);
    out.iterations = round + 1;
    if (round > 0 && rec.change_deg < config.change_tolerance_deg) {
      settled = true;
      break;
    }
  }

  out.q_bc = solve.q;
  out.R_bc = quat_to_rot(solve.q);
  out.singular_values = solve.singular_values;
  out.residuals = out.history.back().residuals;
  out.weights = weights;
  const double s3 = solve.singular_values[2], s4 = solve.singular_values[3];
  const double ratio = s4 > 0.0 ? s3 / s4 : (s3 > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  out.excitation_ok = ratio >= config.sv_ratio_threshold;
  out.converged = settled && out.excitation_ok;
  return out;
}

TranslationResult solve_translation(std::span<const RelativeRotationPair> pairs,
                                    std::span<const PreintegratedDelta> deltas,
                                    std::span<const NavState> start_states, const Mat3& R_bc,
                                    const Vec3& g_w) {
  if (pairs.size() != deltas.size() || pairs.size() != start_states.size()) {
    throw Error(ErrorCode::kInvalidInput, "translation solve needs one delta and state per pair");
  }
  if (pairs.empty()) throw Error(ErrorCode::kInsufficientData, "translation solve needs pairs");
  const auto n = static_cast<Eigen::Index>(pairs.size());
  MatX A(3 * n, 3);
  VecX b(3 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& pair = pairs[static_cast<std::size_t>(k)];
    const auto& d = deltas[static_cast<std::size_t>(k)];
    const auto& s = start_states[static_cast<std::size_t>(k)];
    if (!pair.t_cam) {
      throw Error(ErrorCode::kInvalidInput,
                  "pair " + std::to_string(pair.interval_id) + " has no camera translation");
    }
    const double dt = d.dt_total;
    const Vec3 t_imu = d.alpha + quat_to_rot(s.q).transpose() * (s.v * dt - 0.5 * g_w * dt * dt);
    A.block<3, 3>(3 * k, 0) = quat_to_rot(pair.q_imu) - Mat3::Identity();
    b.segment<3>(3 * k) = R_bc * *pair.t_cam - t_imu;
  }
  Eigen::JacobiSVD<MatX> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec3 sv = svd.singularValues();
  if (!(sv[0] > 0.0) || sv[2] / sv[0] < 1e-6) {
    throw Error(ErrorCode::kUnobservableTranslation,
                "rotations do not excite enough axes to determine the translation");
  }
  TranslationResult out;
  out.t_bc = svd.solve(b);
  out.singular_values = sv;
  out.rms = std::sqrt((A * out.t_bc - b).squaredNorm() / static_cast<double>(n));
  return out;
}

CameraPose to_camera_to_world(const CameraPose& pose, PoseConvention convention) {
  if (convention == PoseConvention::kCameraToWorld) return pose;
  const UnitQuaternion q = pose.q.conjugate();
  return {pose.t, q, -q.rotate(pose.p)};
}

RelativeRotationPair pair_from_camera_poses(const CameraPose& pose_k, const CameraPose& pose_k1,
                                            const PreintegratedDelta& delta,
                                            PoseConvention convention, double frame_period,
                                            int interval_id) {
  const double half = 0.5 * frame_period;
  if (std::abs(delta.t_start - pose_k.t) > half || std::abs(delta.t_end - pose_k1.t) > half) {
    throw Error(ErrorCode::kAlignment, "IMU interval [" + std::to_string(delta.t_start) + ", " +
                                           std::to_string(delta.t_end) +
                                           "] does not match camera frames at " +
                                           std::to_string(pose_k.t) + " and " +
                                           std::to_string(pose_k1.t));
  }
  const CameraPose a = to_camera_to_world(pose_k, convention);
  const CameraPose b = to_camera_to_world(pose_k1, convention);
  RelativeRotationPair pair;
  pair.q_imu = relative_rotation(delta);
  pair.q_cam = (a.q.conjugate() * b.q).canonical();
  pair.t_cam = a.q.conjugate().rotate(b.p - a.p);
  pair.interval_id = interval_id;
  return pair;
}

}  // namespace camimu
