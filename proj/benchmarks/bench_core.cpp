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


#include <benchmark/benchmark.h>

#include <vector>

#include "camimu/allan.hpp"
#include "camimu/camera_model.hpp"
#include "camimu/extrinsic_solver.hpp"
#include "camimu/preintegration.hpp"
#include "camimu/synthetic.hpp"

namespace camimu {
namespace {

void BM_SolveRotation(benchmark::State& state) {
  RotationPairSpec spec;
  spec.count = static_cast<int>(state.range(0));
  spec.noise_deg = 0.5;
  spec.outlier_fraction = 0.2;
  spec.outlier_deg = 30.0;
  spec.R_bc = reference_extrinsic_rotation();
  const auto set = generate_rotation_pairs(spec, 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_rotation(set.pairs));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SolveRotation)->Arg(50)->Arg(200)->Arg(1000);

std::vector<ImuSample> noisy_samples(double duration) {
  ImuEmissionOptions opts;
  opts.noise = reference_noise();
  return emit_imu(Trajectory(default_trajectory_spec(12, duration)), opts, 12);
}

void BM_Preintegrate(benchmark::State& state) {
  const auto all = noisy_samples(2.0);
  const auto span = slice_interval(all, 0.0, 0.005 * static_cast<double>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(preintegrate(span, Vec3::Zero(), Vec3::Zero()));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Preintegrate)->Arg(20)->Arg(200);

void BM_AllanVariance(benchmark::State& state) {
  const auto samples = noisy_samples(static_cast<double>(state.range(0)));
  std::vector<double> series;
  for (const auto& s : samples) series.push_back(s.gyro.x());
  for (auto _ : state) {
    benchmark::DoNotOptimize(allan_variance(series, 0.005));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(series.size()));
}
BENCHMARK(BM_AllanVariance)->Arg(600)->Arg(7200)->Unit(benchmark::kMillisecond);

void BM_SolveIntrinsics(benchmark::State& state) {
  const auto set = generate_calibration_views(reference_intrinsics(), DistortionCoeffs{}, TargetGrid{},
                                              static_cast<int>(state.range(0)), 0.3, 13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_intrinsics(std::span<const PlanarView>(set.views)));
  }
}
BENCHMARK(BM_SolveIntrinsics)->Arg(10)->Arg(25);

void BM_CalibrateCamera(benchmark::State& state) {
  const auto set = generate_calibration_views(reference_intrinsics(), reference_distortion(), TargetGrid{},
                                              static_cast<int>(state.range(0)), 0.0, 14);
  for (auto _ : state) {
    benchmark::DoNotOptimize(calibrate_camera(set.views));
  }
}
BENCHMARK(BM_CalibrateCamera)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace camimu

BENCHMARK_MAIN();
