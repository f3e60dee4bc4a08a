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

#include "camimu/least_squares.hpp"

#include <algorithm>
#include <cmath>

#include "camimu/error.hpp"

namespace camimu {

LmResult levenberg_marquardt(const ResidualFunction& f, const VecX& x0, const LmOptions& options) {
  LmResult out;
  VecX x = x0;
  VecX r;
  MatX J;
  f(x, r, &J);
  double loss = r.squaredNorm();
  if (!std::isfinite(loss)) throw Error(ErrorCode::kInvalidInput, "non-finite initial residual");
  out.loss_trace.push_back(loss);
  double damping = options.initial_damping;

  for (int it = 0; it < options.max_iterations; ++it) {
    out.iterations = it + 1;
    if (loss <= options.loss_tolerance) {
      out.converged = true;
      out.stop_reason = "loss tolerance";
      break;
    }
    const VecX g = J.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance) {
      out.converged = true;
      out.stop_reason = "gradient tolerance";
      break;
    }
    const MatX A = J.transpose() * J;
    bool accepted = false;
    bool small_step = false;
    for (int attempt = 0; attempt < 60 && !accepted; ++attempt) {
      MatX Ad = A;
      Ad.diagonal() += damping * A.diagonal().cwiseMax(1e-12);
      const VecX dx = Ad.ldlt().solve(-g);
      if (dx.norm() <= options.step_tolerance * (x.norm() + options.step_tolerance)) {
        small_step = true;
        break;
      }
      const VecX x_new = x + dx;
      VecX r_new;
      f(x_new, r_new, nullptr);
      const double loss_new = r_new.squaredNorm();
      if (std::isfinite(loss_new) && loss_new < loss) {
        x = x_new;
        f(x, r, &J);
        loss = r.squaredNorm();
        damping = std::max(damping / 3.0, 1e-15);
        accepted = true;
      } else {
        damping *= 4.0;
      }
    }
    out.loss_trace.push_back(loss);
    if (small_step || !accepted) {
      // No step reduces the loss further: a (local) minimum to working precision.
      out.converged = true;
      out.stop_reason = small_step ? "step tolerance" : "no decrease";
      break;
    }
  }
  if (!out.converged) out.stop_reason = "iteration limit";
  out.x = x;
  out.loss = loss;
  Eigen::JacobiSVD<MatX> svd(J);
  out.jacobian_singular_values = svd.singularValues();
  return out;
}

MatX numeric_jacobian(const std::function<void(const VecX&, VecX&)>& f, const VecX& x,
                      double step) {
  VecX r0;
  f(x, r0);
  MatX J(r0.size(), x.size());
  VecX xp = x, xm = x, rp, rm;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = step * std::max(1.0, std::abs(x[i]));
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    f(xp, rp);
    f(xm, rm);
    J.col(i) = (rp - rm) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return J;
}

}  // namespace camimu
