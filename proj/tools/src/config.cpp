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


#include "config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>

#include "camimu/error.hpp"

namespace camimu::app {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

Error bad_value(const std::string& key, const std::string& value, const std::string& why) {
  return Error(ErrorCode::kInvalidInput, key + " = '" + value + "': " + why);
}

double to_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || res.ec != std::errc() || res.ptr != value.data() + value.size() ||
      !std::isfinite(v)) {
    throw bad_value(key, value, "not a finite number");
  }
  return v;
}

double in_range(const std::string& key, const std::string& value, double lo, double hi,
                bool open_lo = false) {
  const double v = to_double(key, value);
  if (v > hi || v < lo || (open_lo && v == lo)) {
    throw bad_value(key, value,
                    "must be in " + std::string(open_lo ? "(" : "[") + std::to_string(lo) + ", " +
                        std::to_string(hi) + "]");
  }
  return v;
}

long long to_integer(const std::string& key, const std::string& value, long long lo,
                     long long hi) {
  long long v = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw bad_value(key, value, "not an integer");
  }
  if (v < lo || v > hi) {
    throw bad_value(key, value,
                    "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw bad_value(key, value, "expected true or false");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"out", [](RunConfig& c, const auto&, const auto& v) { c.out = v; }},
      {"seed",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.seed = static_cast<std::uint64_t>(
             to_integer(k, v, 0, std::numeric_limits<long long>::max()));
       }},
      {"views", [](RunConfig& c, const auto&, const auto& v) { c.views = v; }},
      {"imu", [](RunConfig& c, const auto&, const auto& v) { c.imu = v; }},
      {"poses", [](RunConfig& c, const auto&, const auto& v) { c.poses = v; }},
      {"frames", [](RunConfig& c, const auto&, const auto& v) { c.frames = v; }},
      {"states", [](RunConfig& c, const auto&, const auto& v) { c.states = v; }},
      {"r_thr_deg",
       [](RunConfig& c, const auto& k, const auto& v) { c.r_thr_deg = in_range(k, v, 0.0, 180.0, true); }},
      {"min_rotation_deg",
       [](RunConfig& c, const auto& k, const auto& v) { c.min_rotation_deg = in_range(k, v, 0.0, 90.0); }},
      {"max_rounds",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.max_rounds = static_cast<int>(to_integer(k, v, 1, 1000));
       }},
      {"pose_convention",
       [](RunConfig& c, const auto& k, const auto& v) {
         if (v == "c2w") {
           c.pose_convention = PoseConvention::kCameraToWorld;
         } else if (v == "w2c") {
           c.pose_convention = PoseConvention::kWorldToCamera;
         } else {
           throw bad_value(k, v, "expected c2w or w2c");
         }
       }},
      {"gravity",
       [](RunConfig& c, const auto& k, const auto& v) { c.gravity = in_range(k, v, 0.0, 100.0, true); }},
      {"with_skew", [](RunConfig& c, const auto& k, const auto& v) { c.with_skew = to_bool(k, v); }},
      {"tau_min", [](RunConfig& c, const auto& k, const auto& v) { c.tau_min = in_range(k, v, 0.0, 1e9); }},
      {"tau_max", [](RunConfig& c, const auto& k, const auto& v) { c.tau_max = in_range(k, v, 0.0, 1e9); }},
      {"tau_per_decade",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.tau_per_decade = static_cast<int>(to_integer(k, v, 1, 1000));
       }},
      {"duration",
       [](RunConfig& c, const auto& k, const auto& v) { c.duration = in_range(k, v, 0.0, 1e6, true); }},
      {"imu_rate",
       [](RunConfig& c, const auto& k, const auto& v) { c.imu_rate = in_range(k, v, 0.0, 1e5, true); }},
      {"cam_rate",
       [](RunConfig& c, const auto& k, const auto& v) { c.cam_rate = in_range(k, v, 0.0, 1e3, true); }},
      {"noisy", [](RunConfig& c, const auto& k, const auto& v) { c.noisy = to_bool(k, v); }},
      {"zero_amplitude",
       [](RunConfig& c, const auto& k, const auto& v) { c.zero_amplitude = to_bool(k, v); }},
      {"calibration_views",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.calibration_views = static_cast<int>(to_integer(k, v, 3, 10000));
       }},
  };
  return table;
}

}  // namespace

bool is_known_key(const std::string& key) { return setters().count(key) > 0; }

void apply_setting(RunConfig& config, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw Error(ErrorCode::kInvalidInput, "unknown setting '" + key + "'");
  it->second(config, key, trim(value));
}

Settings parse_config_text(const std::string& text) {
  Settings out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto where = "config line " + std::to_string(line_no) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kInvalidInput, where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!is_known_key(key)) throw Error(ErrorCode::kInvalidInput, where + "unknown key '" + key + "'");
    if (!out.emplace(key, value).second) {
      throw Error(ErrorCode::kInvalidInput, where + "key '" + key + "' given twice");
    }
  }
  return out;
}

}  // namespace camimu::app
