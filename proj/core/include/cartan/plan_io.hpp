// Copyright 2026 The cartan authors
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

#include "cartan/synth.hpp"

namespace cartan {

struct PlanFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Versioned plan document ("schema": 1). 1Q steps are stored as ZYZ angles.
std::string plan_to_json(const SynthesisPlan& plan);
/// Rebuilds bases, steps and target; residual_achieved is recomputed.
SynthesisPlan plan_from_json(const std::string& text);

/// Matrices as 16 [re, im] pairs, row-major.
std::string matrix_to_json(const C4& m);
C4 matrix_from_json_text(const std::string& text);

}  // namespace cartan
