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

#include <stdexcept>
#include <string>
#include <utility>
#include <string_view>
#include <vector>

namespace camimu {

// Failure categories. The CLI maps these onto its exit-code contract.
enum class ErrorCode {
  kInvalidInput,
  kInvalidRotation,
  kIo,
  kAlignment,
  kBehindCamera,
  kDegenerateDepth,
  kDegenerateView,
  kDegenerateGeometry,
  kInsufficientData,
  kCalibrationData,
  kUnidentifiableRegime,
  kUnobservableTranslation,
  kObservability,
  kConvergenceFailure,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// kConvergenceFailure carrying the optimizer's loss per iteration.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, std::vector<double> loss_trace)
      : Error(ErrorCode::kConvergenceFailure, message), loss_trace_(std::move(loss_trace)) {}

  const std::vector<double>& loss_trace() const noexcept { return loss_trace_; }

 private:
  std::vector<double> loss_trace_;
};

}  // namespace camimu
