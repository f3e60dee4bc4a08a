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

#include <iosfwd>

#include "config.hpp"

namespace camimu::app {

// Each command writes its files under config.out and a key=value summary to
// `out`. Failures are thrown as camimu::Error; warnings go to `err`.

void cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
void cmd_calibrate_camera(const RunConfig& config, std::ostream& out, std::ostream& err);
void cmd_allan(const RunConfig& config, std::ostream& out, std::ostream& err);
void cmd_calibrate_imu(const RunConfig& config, std::ostream& out, std::ostream& err);
void cmd_calibrate_extrinsics(const RunConfig& config, std::ostream& out, std::ostream& err);
void cmd_preintegrate(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace camimu::app
