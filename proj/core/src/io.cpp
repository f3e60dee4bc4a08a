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

#include "camimu/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "camimu/error.hpp"

namespace camimu {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

namespace {

std::vector<std::string_view> split_lines(const std::string& text) {
  std::vector<std::string_view> lines;
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    std::string_view line = rest.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    rest.remove_prefix(nl + 1);
  }
  return lines;
}

bool blank(std::string_view s) { return s.find_first_not_of(" \t") == std::string_view::npos; }

std::string_view trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

Error line_error(std::size_t line, const std::string& what) {
  return Error(ErrorCode::kInvalidInput, "line " + std::to_string(line) + ": " + what);
}

struct CsvRow {
  std::size_t line = 0;  // 1-based
  std::vector<double> values;
  double operator[](std::size_t i) const { return values[i]; }
};

// Parses a CSV with an exact header into rows of finite doubles.
std::vector<CsvRow> parse_numeric_csv(const std::string& text, std::string_view header) {
  const auto lines = split_lines(text);
  std::size_t i = 0;
  while (i < lines.size() && blank(lines[i])) ++i;
  if (i == lines.size()) throw Error(ErrorCode::kInvalidInput, "empty file");
  if (trim(lines[i]) != header) {
    throw line_error(i + 1, "expected header '" + std::string(header) + "'");
  }
  std::size_t columns = 1;
  for (char c : header) columns += c == ',' ? 1 : 0;

  std::vector<CsvRow> rows;
  for (++i; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    std::vector<double> row;
    std::string_view rest = lines[i];
    while (true) {
      const auto comma = rest.find(',');
      const std::string_view field = trim(rest.substr(0, comma));
      double v = 0.0;
      const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || res.ec != std::errc() || res.ptr != field.data() + field.size()) {
        throw line_error(i + 1, "invalid number '" + std::string(field) + "'");
      }
      if (!std::isfinite(v)) throw line_error(i + 1, "non-finite value '" + std::string(field) + "'");
      row.push_back(v);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (row.size() != columns) {
      throw line_error(i + 1, "expected " + std::to_string(columns) + " fields, got " +
                                  std::to_string(row.size()));
    }
    rows.push_back({i + 1, std::move(row)});
  }
  return rows;
}

void require_increasing(const std::vector<CsvRow>& rows, const char* what) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i][0] > rows[i - 1][0])) {
      throw line_error(rows[i].line, std::string(what) + " not strictly increasing");
    }
  }
}

UnitQuaternion parse_quaternion(const CsvRow& r, std::size_t first) {
  const Vec4 q(r[first], r[first + 1], r[first + 2], r[first + 3]);
  if (std::abs(q.norm() - 1.0) > 1e-6) throw line_error(r.line, "quaternion is not unit-norm");
  return UnitQuaternion(q);
}

template <typename Row>
std::string join(const Row& values) {
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += format_double(values[i]);
  }
  line += '\n';
  return line;
}

constexpr std::string_view kImuHeader = "t,ax,ay,az,gx,gy,gz";
constexpr std::string_view kPoseHeader = "t,qw,qx,qy,qz,tx,ty,tz";
constexpr std::string_view kFrameHeader = "t_frame";
constexpr std::string_view kNavHeader = "t,px,py,pz,vx,vy,vz,qw,qx,qy,qz";

}  // namespace

std::vector<ImuSample> parse_imu_csv(const std::string& text) {
  const auto rows = parse_numeric_csv(text, kImuHeader);
  require_increasing(rows, "timestamps");
  std::vector<ImuSample> out;
  for (const auto& r : rows) out.push_back({r[0], Vec3(r[1], r[2], r[3]), Vec3(r[4], r[5], r[6])});
  return out;
}

std::string format_imu_csv(std::span<const ImuSample> samples) {
  std::string s(kImuHeader);
  s += '\n';
  for (const auto& x : samples) {
    s += join(std::array<double, 7>{x.t, x.accel.x(), x.accel.y(), x.accel.z(), x.gyro.x(),
                                    x.gyro.y(), x.gyro.z()});
  }
  return s;
}

std::vector<ImuSample> read_imu_csv(const std::filesystem::path& path) {
  return parse_imu_csv(read_text_file(path));
}

std::vector<CameraPose> parse_poses_csv(const std::string& text) {
  const auto rows = parse_numeric_csv(text, kPoseHeader);
  require_increasing(rows, "pose timestamps");
  std::vector<CameraPose> out;
  for (const auto& r : rows) out.push_back({r[0], parse_quaternion(r, 1), Vec3(r[5], r[6], r[7])});
  return out;
}

std::string format_poses_csv(std::span<const CameraPose> poses) {
  std::string s(kPoseHeader);
  s += '\n';
  for (const auto& p : poses) {
    s += join(std::array<double, 8>{p.t, p.q.w(), p.q.x(), p.q.y(), p.q.z(), p.p.x(), p.p.y(),
                                    p.p.z()});
  }
  return s;
}

std::vector<CameraPose> read_poses_csv(const std::filesystem::path& path) {
  return parse_poses_csv(read_text_file(path));
}

std::vector<double> parse_frames_csv(const std::string& text) {
  const auto rows = parse_numeric_csv(text, kFrameHeader);
  require_increasing(rows, "frame times");
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r[0]);
  return out;
}

std::string format_frames_csv(std::span<const double> times) {
  std::string s(kFrameHeader);
  s += '\n';
  for (double t : times) s += format_double(t) + '\n';
  return s;
}

std::vector<double> read_frames_csv(const std::filesystem::path& path) {
  return parse_frames_csv(read_text_file(path));
}

std::vector<TimedNavState> parse_nav_states_csv(const std::string& text) {
  const auto rows = parse_numeric_csv(text, kNavHeader);
  require_increasing(rows, "state timestamps");
  std::vector<TimedNavState> out;
  for (const auto& r : rows) {
    out.push_back({r[0], NavState{Vec3(r[1], r[2], r[3]), Vec3(r[4], r[5], r[6]), parse_quaternion(r, 7)}});
  }
  return out;
}

std::string format_nav_states_csv(std::span<const TimedNavState> states) {
  std::string s(kNavHeader);
  s += '\n';
  for (const auto& x : states) {
    const auto& n = x.state;
    s += join(std::array<double, 11>{x.t, n.p.x(), n.p.y(), n.p.z(), n.v.x(), n.v.y(), n.v.z(),
                                     n.q.w(), n.q.x(), n.q.y(), n.q.z()});
  }
  return s;
}

std::vector<TimedNavState> read_nav_states_csv(const std::filesystem::path& path) {
  return parse_nav_states_csv(read_text_file(path));
}

std::vector<PlanarView> parse_views_jsonl(const std::string& text) {
  const auto lines = split_lines(text);
  std::vector<PlanarView> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (blank(lines[i])) continue;
    const std::size_t line = i + 1;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(lines[i]);
    } catch (const nlohmann::json::exception& e) {
      throw line_error(line, std::string("malformed JSON: ") + e.what());
    }
    try {
      PlanarView v;
      v.view_id = j.at("view_id").get<int>();
      for (const auto& p : j.at("points")) {
        v.points.push_back({Vec2(p.at("tx").get<double>(), p.at("ty").get<double>()),
                            Vec2(p.at("u").get<double>(), p.at("v").get<double>())});
      }
      validate_view(v);
      out.push_back(std::move(v));
    } catch (const nlohmann::json::exception& e) {
      throw line_error(line, std::string("bad view record: ") + e.what());
    } catch (const Error& e) {
      throw line_error(line, e.what());
    }
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidInput, "no views in input");
  return out;
}

std::string format_views_jsonl(std::span<const PlanarView> views) {
  std::string s;
  for (const auto& v : views) {
    // Written by hand so numbers keep their shortest round-trip form.
    s += "{\"view_id\":" + std::to_string(v.view_id) + ",\"points\":[";
    for (std::size_t i = 0; i < v.points.size(); ++i) {
      const auto& c = v.points[i];
      if (i) s += ',';
      s += "{\"tx\":" + format_double(c.target.x()) + ",\"ty\":" + format_double(c.target.y()) +
           ",\"u\":" + format_double(c.pixel.x()) + ",\"v\":" + format_double(c.pixel.y()) + "}";
    }
    s += "]}\n";
  }
  return s;
}

std::vector<PlanarView> read_views_jsonl(const std::filesystem::path& path) {
  return parse_views_jsonl(read_text_file(path));
}

}  // namespace camimu
