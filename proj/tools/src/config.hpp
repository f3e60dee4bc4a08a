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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "camimu/extrinsic_solver.hpp"

namespace camimu::app {

/// Settings shared by all subcommands. Built from defaults, then the
/// --config file, then command-line flags.
struct RunConfig {
  std::filesystem::path out = ".";
  std::uint64_t seed = 42;

  // Inputs
  std::optional<std::filesystem::path> views;
  std::optional<std::filesystem::path> imu;
  std::optional<std::filesystem::path> poses;
  std::optional<std::filesystem::path> frames;
  std::optional<std::filesystem::path> states;

  // Extrinsics
  double r_thr_deg = 5.0;
  double min_rotation_deg = 0.5;
  int max_rounds = 10;
  PoseConvention pose_convention = PoseConvention::kCameraToWorld;
  double gravity = kDefaultGravity;

  // Camera
  bool with_skew = false;

  // Allan
  double tau_min = 0.0;  // s, 0 = shortest
  double tau_max = 0.0;  // s, 0 = longest
  int tau_per_decade = 20;

  // Simulation
  double duration = 20.0;
  double imu_rate = 200.0;
  double cam_rate = 10.0;
  bool noisy = false;
  bool zero_amplitude = false;
  int calibration_views = 25;
};

/// key -> value, in the order they should be applied.
using Settings = std::map<std::string, std::string>;

/// `key = value` lines; `#` starts a comment. Throws kInvalidInput with the
/// line number for malformed lines, unknown keys and repeated keys.
Settings parse_config_text(const std::string& text);

/// Applies one setting with range checks. Throws kInvalidInput.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// True when `key` is a recognised setting.
bool is_known_key(const std::string& key);

}  // namespace camimu::app
