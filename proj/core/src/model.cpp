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

#include "cartan/model.hpp"

#include <cmath>
#include <string>

namespace cartan {

double gate_latency(const CartanCoord& c, const HardwareModel& model) {
  constexpr double unit = kPi / 4;
  if (model.coupling == Coupling::XX_only) return k_t(c) / unit;
  if (std::abs(c.z) > 1e-9)
    throw Unsupported("latency of an XX+YY+ZZ gate under XX+YY coupling is undefined");
  return c.x / unit;
}

double gate_latency(const TemplateClass& t, const HardwareModel& model) {
  return gate_latency(CartanCoord{t.theta_x, t.theta_y, t.theta_z}, model);
}

double gate_error(double latency, const HardwareModel& model) {
  return model.m * latency * (kPi / 4) + model.b;
}

const char* coupling_name(Coupling c) {
  return c == Coupling::XX_only ? "xx" : "xx+yy";
}

Coupling parse_coupling(const std::string& s) {
  if (s == "xx" || s == "XX" || s == "xx_only") return Coupling::XX_only;
  if (s == "xx+yy" || s == "xxyy" || s == "XX+YY" || s == "xx_plus_yy")
    return Coupling::XX_plus_YY;
  throw std::invalid_argument("unknown coupling '" + s + "'");
}

}  // namespace cartan
