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

// Small dense Levenberg-Marquardt solver for the IMU calibration fits.

#include <functional>
#include <string>
#include <vector>

#include "camimu/types.hpp"

namespace camimu {

/// Fills residuals r(x) and, when J is non-null, the Jacobian dr/dx.
using ResidualFunction = std::function<void(const VecX& x, VecX& r, MatX* J)>;

struct LmOptions {
  int max_iterations = 200;
  double initial_damping = 1e-3;
  /// Converged when |dx| <= step_tolerance * (|x| + step_tolerance).
  double step_tolerance = 1e-12;
  /// Converged when max |J^T r| <= gradient_tolerance.
  double gradient_tolerance = 1e-20;
  /// Converged when the loss drops to this value or below.
  double loss_tolerance = 0.0;
};

struct LmResult {
  VecX x;
  double loss = 0.0;  // sum of squared residuals
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
  std::vector<double> loss_trace;
  /// Singular values of the Jacobian at the returned point, descending.
  VecX jacobian_singular_values;
};

LmResult levenberg_marquardt(const ResidualFunction& f, const VecX& x0,
                             const LmOptions& options = {});

/// Central-difference Jacobian of `f` at x.
MatX numeric_jacobian(const std::function<void(const VecX&, VecX&)>& f, const VecX& x,
                      double step = 1e-7);

}  // namespace camimu
