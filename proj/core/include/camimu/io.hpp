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

// Plain-file formats: IMU CSV, camera pose CSV, frame list CSV, nav-state
// CSV and planar-view JSONL. Numbers are written in shortest round-trip form.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "camimu/camera_model.hpp"
#include "camimu/extrinsic_solver.hpp"
#include "camimu/imu_model.hpp"
#include "camimu/preintegration.hpp"

namespace camimu {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Throws kIo when the file cannot be opened.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

// Readers throw kInvalidInput with the 1-based line number on malformed input.

/// Header `t,ax,ay,az,gx,gy,gz`.
std::vector<ImuSample> parse_imu_csv(const std::string& text);
std::string format_imu_csv(std::span<const ImuSample> samples);
std::vector<ImuSample> read_imu_csv(const std::filesystem::path& path);

/// Header `t,qw,qx,qy,qz,tx,ty,tz`.
std::vector<CameraPose> parse_poses_csv(const std::string& text);
std::string format_poses_csv(std::span<const CameraPose> poses);
std::vector<CameraPose> read_poses_csv(const std::filesystem::path& path);

/// Header `t_frame`.
std::vector<double> parse_frames_csv(const std::string& text);
std::string format_frames_csv(std::span<const double> times);
std::vector<double> read_frames_csv(const std::filesystem::path& path);

struct TimedNavState {
  double t = 0.0;
  NavState state;
};

/// Header `t,px,py,pz,vx,vy,vz,qw,qx,qy,qz`.
std::vector<TimedNavState> parse_nav_states_csv(const std::string& text);
std::string format_nav_states_csv(std::span<const TimedNavState> states);
std::vector<TimedNavState> read_nav_states_csv(const std::filesystem::path& path);

/// One view per line: {"view_id": int, "points": [{"tx", "ty", "u", "v"}, ...]}.
std::vector<PlanarView> parse_views_jsonl(const std::string& text);
std::string format_views_jsonl(std::span<const PlanarView> views);
std::vector<PlanarView> read_views_jsonl(const std::filesystem::path& path);

}  // namespace camimu
