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

#include "cartan/kak.hpp"

namespace cartan {

struct Unsupported : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Coupling { XX_only, XX_plus_YY };

/// Linear error model p = m * tau + b, tau in radians of Cartan latency.
struct HardwareModel {
  Coupling coupling = Coupling::XX_only;
  double m = 5.76e-3 / (kPi / 4);
  double b = 1.909e-3;
};

/// Latency in CX units: L1 norm / (pi/4) for XX coupling, eta_x / (pi/4) for
/// XX+YY coupling (no rule for gates with a ZZ part there).
double gate_latency(const CartanCoord& c, const HardwareModel& model);
double gate_latency(const TemplateClass& t, const HardwareModel& model);

/// Error of a gate with the given CX-normalized latency.
double gate_error(double latency, const HardwareModel& model);

const char* coupling_name(Coupling c);
Coupling parse_coupling(const std::string& s);

}  // namespace cartan
