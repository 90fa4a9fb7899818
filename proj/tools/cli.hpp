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

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cartan/hwmodel.hpp"

namespace cartan::cli {

enum ExitCode { kOk = 0, kVerifyFailed = 1, kUsage = 2 };

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// `pi/<int>`, `<float>` or `<float>deg`, in radians.
double parse_angle(const std::string& text);

/// `cx`, `da:<t>`, `db:<tx>,<ty>` or `dc:<tx>,<ty>,<tz>`. The spec text
/// becomes the basis label.
BasisGate parse_basis(const std::string& text);

/// Basis specs joined with '+', e.g. `cx+da:pi/8`.
InstructionSet parse_instruction_set(const std::string& text);

/// `<name>:<n>[,<n>...]`, e.g. `qft:5,7`.
std::vector<Benchmark> parse_benchmarks(const std::string& text, std::uint64_t seed);

/// Basis spec whose angles may be ranges `<lo>..<hi>@<count>` (inclusive,
/// evenly spaced); expands to the Cartesian product.
std::vector<InstructionSet> parse_grid(const std::string& text);

/// Named 2Q gates accepted by `decompose --gate`.
C4 named_gate(const std::string& name);

/// Full command line, argv[0] included. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cartan::cli
