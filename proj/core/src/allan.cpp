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

#include "camimu/allan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "camimu/error.hpp"

namespace camimu {

std::vector<std::size_t> log_spaced_cluster_sizes(std::size_t n_samples, double dt,
                                                  double tau_min, double tau_max,
                                                  int per_decade) {
  if (!(dt > 0.0) || per_decade < 1) {
    throw Error(ErrorCode::kInvalidInput, "cluster grid needs dt > 0 and per_decade >= 1");
  }
  const double m_hi_limit = static_cast<double>(n_samples / kMinClusters);
  const double m_lo = std::max(1.0, tau_min / dt);
  const double m_hi = tau_max > 0.0 ? tau_max / dt : m_hi_limit;
  std::vector<std::size_t> out;
  if (m_hi < m_lo) return out;
  const double step = 1.0 / per_decade;
  const double top = std::log10(m_hi);
  for (double e = std::log10(m_lo); e <= top + 1e-12; e += step) {
    const auto m = static_cast<std::size_t>(std::llround(std::pow(10.0, e)));
    if (m >= 1 && (out.empty() || m != out.back())) out.push_back(m);
  }
  return out;
}

AllanCurve allan_variance(std::span<const double> series, double dt,
                          std::span<const std::size_t> cluster_sizes) {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidInput, "Allan variance needs dt > 0");
  const std::size_t n = series.size();
  // Running integral of the series relative to its first sample, so a
  // constant signal yields exactly zero.
  std::vector<double> theta(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) theta[i + 1] = theta[i] + (series[i] - series[0]);

  AllanCurve curve;
  std::vector<std::size_t> sizes(cluster_sizes.begin(), cluster_sizes.end());
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  for (std::size_t m : sizes) {
    if (m == 0) continue;
    if (n / m < kMinClusters) {
      curve.warnings.push_back("tau " + std::to_string(static_cast<double>(m) * dt) +
                               " s omitted: record too short");
      continue;
    }
    const std::size_t terms = n + 1 - 2 * m;
    double acc = 0.0;
    for (std::size_t k = 0; k < terms; ++k) {
      const double d = theta[k + 2 * m] - 2.0 * theta[k + m] + theta[k];
      acc += d * d;
    }
    const double md = static_cast<double>(m);
    curve.points.push_back({md * dt, acc / (2.0 * md * md * static_cast<double>(terms)), n / m});
  }
  if (curve.points.empty()) {
    throw Error(ErrorCode::kInsufficientData, "record too short for any requested tau");
  }
  return curve;
}

AllanCurve allan_variance(std::span<const double> series, double dt) {
  const auto sizes = log_spaced_cluster_sizes(series.size(), dt);
  return allan_variance(series, dt, sizes);
}

namespace {

double ls_slope(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

std::pair<std::size_t, std::size_t> longest_run(const std::vector<bool>& mask) {
  std::pair<std::size_t, std::size_t> best{0, 0};
  std::size_t i = 0;
  while (i < mask.size()) {
    if (!mask[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < mask.size() && mask[j]) ++j;
    if (j - i > best.second - best.first) best = {i, j};
    i = j;
  }
  return best;
}

}  // namespace

double deviation_slope(const AllanCurve& curve, double tau_lo, double tau_hi) {
  std::vector<double> x, y;
  for (const auto& p : curve.points) {
    if (p.tau >= tau_lo && p.tau <= tau_hi && p.avar > 0.0) {
      x.push_back(std::log(p.tau));
      y.push_back(0.5 * std::log(p.avar));
    }
  }
  if (x.size() < 2) throw Error(ErrorCode::kInsufficientData, "slope needs two points in range");
  return ls_slope(x, y);
}

AxisNoiseFit fit_axis_noise(const AllanCurve& curve, const std::string& axis,
                            const NoiseFitOptions& options) {
  const auto& pts = curve.points;
  const std::size_t n = pts.size();
  auto unidentifiable = [&](const std::string& why) {
    return Error(ErrorCode::kUnidentifiableRegime, "axis " + axis + ": " + why);
  };
  for (const auto& p : pts) {
    if (!(p.avar > 0.0)) throw unidentifiable("Allan variance is zero");
  }
  std::vector<double> lt(n), ls(n);
  for (std::size_t i = 0; i < n; ++i) {
    lt[i] = std::log(pts[i].tau);
    ls[i] = 0.5 * std::log(pts[i].avar);
  }

  // Local deviation slope from a five-point window.
  std::vector<bool> white(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i >= 2 ? i - 2 : 0;
    const std::size_t b = std::min(n, i + 3);
    const double s = ls_slope(std::span(lt).subspan(a, b - a), std::span(ls).subspan(a, b - a));
    white[i] = std::abs(s + 0.5) < options.slope_tolerance;
  }
  const auto [wa, wb] = longest_run(white);
  if (wb - wa < options.min_points) throw unidentifiable("no -1/2 slope segment");

  AxisNoiseFit fit;
  fit.axis = axis;
  double c = 0.0;
  for (std::size_t i = wa; i < wb; ++i) c += ls[i] + 0.5 * lt[i];
  c /= static_cast<double>(wb - wa);
  double sq = 0.0;
  for (std::size_t i = wa; i < wb; ++i) sq += std::pow(ls[i] + 0.5 * lt[i] - c, 2);
  fit.white_fit_rms = std::sqrt(sq / static_cast<double>(wb - wa));
  if (fit.white_fit_rms > options.max_fit_rms) throw unidentifiable("-1/2 segment fit residual too large");
  fit.density = std::exp(c);
  fit.white_tau_lo = pts[wa].tau;
  fit.white_tau_hi = pts[wb - 1].tau;

  // Walk: points past the middle of the white segment where the variance
  // left after removing the white law dominates.
  const double n2 = fit.density * fit.density;
  std::vector<std::size_t> idx;
  for (std::size_t i = (wa + wb) / 2; i < n; ++i) {
    const double corrected = pts[i].avar - n2 / pts[i].tau;
    if (corrected > 0.5 * pts[i].avar) idx.push_back(i);
  }
  if (idx.size() < options.min_points) return fit;

  double wsum = 0.0, ck = 0.0;
  std::vector<double> r(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const auto& p = pts[idx[j]];
    r[j] = 0.5 * std::log(p.avar - n2 / p.tau) - 0.5 * lt[idx[j]];
    const double w = static_cast<double>(p.count);
    ck += w * r[j];
    wsum += w;
  }
  ck /= wsum;
  double wsq = 0.0;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    wsq += static_cast<double>(pts[idx[j]].count) * (r[j] - ck) * (r[j] - ck);
  }
  fit.walk_fit_rms = std::sqrt(wsq / wsum);
  fit.walk = std::exp(ck) * std::sqrt(3.0);
  fit.walk_tau_lo = pts[idx.front()].tau;
  fit.walk_tau_hi = pts[idx.back()].tau;
  return fit;
}

NoiseReport fit_noise_params(std::span<const AllanCurve, 3> gyro_curves,
                             std::span<const AllanCurve, 3> accel_curves,
                             const NoiseFitOptions& options) {
  static constexpr std::array<const char*, 3> kGyroAxes{"gx", "gy", "gz"};
  static constexpr std::array<const char*, 3> kAccelAxes{"ax", "ay", "az"};
  NoiseReport report;
  report.gyro_walk_identified = true;
  report.accel_walk_identified = true;
  double gw = 0.0, gk = 0.0, aw = 0.0, ak = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    report.gyro[i] = fit_axis_noise(gyro_curves[i], kGyroAxes[i], options);
    report.accel[i] = fit_axis_noise(accel_curves[i], kAccelAxes[i], options);
    gw += report.gyro[i].density;
    aw += report.accel[i].density;
    if (report.gyro[i].walk) gk += *report.gyro[i].walk; else report.gyro_walk_identified = false;
    if (report.accel[i].walk) ak += *report.accel[i].walk; else report.accel_walk_identified = false;
  }
  report.mean.sigma_w = gw / 3.0;
  report.mean.sigma_a = aw / 3.0;
  report.mean.sigma_bw = report.gyro_walk_identified ? gk / 3.0 : 0.0;
  report.mean.sigma_ba = report.accel_walk_identified ? ak / 3.0 : 0.0;
  return report;
}

}  // namespace camimu
