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

#include "camimu/error.hpp"

namespace camimu {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kInvalidRotation: return "invalid-rotation";
    case ErrorCode::kIo: return "io";
    case ErrorCode::kAlignment: return "alignment";
    case ErrorCode::kBehindCamera: return "behind-camera";
    case ErrorCode::kDegenerateDepth: return "degenerate-depth";
    case ErrorCode::kDegenerateView: return "degenerate-view";
    case ErrorCode::kDegenerateGeometry: return "degenerate-geometry";
    case ErrorCode::kInsufficientData: return "insufficient-data";
    case ErrorCode::kCalibrationData: return "calibration-data";
    case ErrorCode::kUnidentifiableRegime: return "unidentifiable-regime";
    case ErrorCode::kUnobservableTranslation: return "unobservable-translation";
    case ErrorCode::kObservability: return "observability";
    case ErrorCode::kConvergenceFailure: return "convergence-failure";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace camimu
