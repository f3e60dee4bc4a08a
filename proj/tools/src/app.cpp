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


#include "app.hpp"

#include <functional>
#include <ostream>

#include <CLI11.hpp>

#include "camimu/io.hpp"
#include "commands.hpp"
#include "config.hpp"

namespace camimu::app {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput:
    case ErrorCode::kInvalidRotation:
    case ErrorCode::kIo:
    case ErrorCode::kAlignment:
      return kExitInput;
    case ErrorCode::kObservability:
    case ErrorCode::kConvergenceFailure:
      return kExitConvergence;
    case ErrorCode::kBehindCamera:
    case ErrorCode::kDegenerateDepth:
    case ErrorCode::kDegenerateView:
    case ErrorCode::kDegenerateGeometry:
    case ErrorCode::kInsufficientData:
    case ErrorCode::kCalibrationData:
    case ErrorCode::kUnidentifiableRegime:
    case ErrorCode::kUnobservableTranslation:
      return kExitData;
  }
  return kExitInput;
}

namespace {

using Command = void (*)(const RunConfig&, std::ostream&, std::ostream&);

struct Subcommand {
  const char* name;
  const char* help;
  Command fn;
  std::vector<const char*> inputs;  // setting keys exposed as --flags
  std::vector<const char*> extras;
};

const std::vector<Subcommand>& subcommands() {
  static const std::vector<Subcommand> table = {
      {"simulate", "Write a synthetic dataset with ground truth", cmd_simulate, {},
       {"duration", "imu_rate", "cam_rate", "calibration_views"}},
      {"calibrate-camera", "Intrinsics and distortion from planar views", cmd_calibrate_camera,
       {"views"}, {}},
      {"allan", "Allan deviation curves and noise parameters", cmd_allan, {"imu"},
       {"tau_min", "tau_max", "tau_per_decade"}},
      {"calibrate-imu", "Accelerometer and gyroscope scale, misalignment and bias",
       cmd_calibrate_imu, {"imu"}, {}},
      {"calibrate-extrinsics", "Camera-IMU rotation and translation", cmd_calibrate_extrinsics,
       {"imu", "poses", "states"}, {"min_rotation_deg", "max_rounds"}},
      {"preintegrate", "Per-frame IMU deltas", cmd_preintegrate, {"imu", "frames"}, {}},
  };
  return table;
}

std::string flag_name(const std::string& key) {
  std::string s = "--" + key;
  for (char& c : s) c = c == '_' ? '-' : c;
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Camera and IMU calibration toolkit", "camimu"};
  app.require_subcommand(1);

  std::string config_path;
  Settings flags;
  const Subcommand* chosen = nullptr;

  auto add_setting = [&](CLI::App* sub, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        flag_name(key), [&flags, key](const std::string& v) { flags[key] = v; }, help);
  };
  auto add_switch = [&](CLI::App* sub, const std::string& key, const std::string& help) {
    sub->add_flag_callback(flag_name(key), [&flags, key] { flags[key] = "true"; }, help);
  };

  for (const auto& sc : subcommands()) {
    CLI::App* sub = app.add_subcommand(sc.name, sc.help);
    sub->add_option("--config", config_path, "key = value settings file; flags take precedence");
    add_setting(sub, "out", "Output directory");
    add_setting(sub, "seed", "Random seed");
    add_setting(sub, "r_thr_deg", "Huber threshold in degrees");
    add_setting(sub, "pose_convention", "c2w or w2c");
    add_setting(sub, "gravity", "Gravity magnitude, m/s^2");
    for (const char* key : sc.inputs) add_setting(sub, key, "Input file");
    for (const char* key : sc.extras) add_setting(sub, key, "");
    const std::string name = sc.name;
    if (name == "calibrate-camera") add_switch(sub, "with_skew", "Place the fitted skew in K");
    if (name == "simulate") {
      add_switch(sub, "noisy", "Add IMU noise and 0.3 px pixel noise");
      add_switch(sub, "zero_amplitude", "Stationary rig");
    }
    sub->callback([&chosen, &sc] { chosen = &sc; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    RunConfig config;
    if (!config_path.empty()) {
      for (const auto& [key, value] : parse_config_text(read_text_file(config_path))) {
        if (!flags.count(key)) apply_setting(config, key, value);
      }
    }
    for (const auto& [key, value] : flags) apply_setting(config, key, value);
    chosen->fn(config, out, err);
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

}  // namespace camimu::app
