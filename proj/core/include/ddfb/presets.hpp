// SPDX-License-Identifier: Apache-2.0
//
// ddfb: limited-feedback sparse channel estimation for massive MIMO
// Copyright (C) 2026 The ddfb authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#pragma once

#include "ddfb/experiment.hpp"

#include <string>
#include <vector>

namespace ddfb {

struct PresetInfo {
  std::string name;
  std::string summary;
};

/// All presets, each followed by its reduced "-desk" variant.
std::vector<PresetInfo> list_presets();

/// Throws std::invalid_argument naming the available presets for an unknown name.
ExperimentSpec preset(const std::string& name);

}  // namespace ddfb
