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

#include <doctest.h>

#include <cmath>

#include "cartan/hwmodel.hpp"
#include "json.hpp"

using namespace cartan;

namespace {

constexpr double kQ = kPi / 4;
const HardwareModel kXX{Coupling::XX_only};
const HardwareModel kXXYY{Coupling::XX_plus_YY};

Circuit cx_chain(int n) {
  Circuit c;
  c.n_qubits = 2;
  for (int i = 0; i < n; ++i) c.ops.push_back(GateOp::named("cx", {0, 1}));
  return c;
}

Circuit swap_workload() {
  Circuit c;
  c.n_qubits = 3;
  c.ops = {GateOp::named("swap", {0, 1}), GateOp::named("swap", {1, 2}),
           GateOp::named("swap", {0, 2})};
  return c;
}

}  // namespace

TEST_CASE("gate latency") {
  CHECK(gate_latency(BasisGate::da(kQ), kXX) == doctest::Approx(1.0));
  CHECK(gate_latency(BasisGate::db(kQ, kPi / 8), kXX) == doctest::Approx(1.5));
  CHECK(gate_latency(BasisGate::db(kQ, kPi / 8), kXXYY) == doctest::Approx(1.0));
  CHECK(gate_latency(BasisGate::da(kPi / 16), kXXYY) == doctest::Approx(0.25));
  CHECK_THROWS_AS(gate_latency(BasisGate::dc(0.5, 0.3, 0.1), kXXYY), Unsupported);
  CHECK(gate_latency(BasisGate::dc(0.5, 0.3, -0.1), kXX) == doctest::Approx(0.9 / kQ));
  CHECK(parse_coupling(coupling_name(Coupling::XX_plus_YY)) == Coupling::XX_plus_YY);
  CHECK_THROWS_AS(parse_coupling("zz"), std::invalid_argument);
}

TEST_CASE("gate error") {
  CHECK(gate_error(1.0, kXX) == doctest::Approx(7.669e-3).epsilon(1e-12));
  CHECK(gate_error(0.0, kXX) == doctest::Approx(1.909e-3).epsilon(1e-12));
  CHECK(gate_error(gate_latency(BasisGate::da(kPi / 16), kXX), kXX) ==
        doctest::Approx(3.349e-3).epsilon(1e-12));
}

TEST_CASE("circuit fidelity and latency") {
  Circuit empty;
  empty.n_qubits = 2;
  CHECK(circuit_fidelity(empty, kXX) == 1.0);
  CHECK(circuit_fidelity(cx_chain(2), kXX) == doctest::Approx(std::pow(1 - 7.669e-3, 2)));
  CHECK(circuit_latency(cx_chain(3), kXX) == doctest::Approx(3.0));

  // ZZ(pi/8) is one Da(pi/8) invocation versus two CX.
  Circuit zz;
  zz.n_qubits = 2;
  zz.ops = {GateOp::named("rzz", {0, 1}, {kPi / 8})};
  const auto small = transpile_circuit(zz, {BasisGate::da(kPi / 8)}, Objective::MinCount, kXX);
  const auto cx = transpile_circuit(zz, {BasisGate::da(kQ)}, Objective::MinCount, kXX);
  CHECK(small.report.basis_count == 1);
  CHECK(cx.report.basis_count == 2);
  CHECK(circuit_latency(small.circuit, kXX) == doctest::Approx(0.5));
  CHECK(circuit_latency(cx.circuit, kXX) == doctest::Approx(2.0));
}

TEST_CASE("evaluate_instruction_set") {
  InstructionSet cx{{BasisGate::da(kQ, "cx")}};
  const std::vector<Benchmark> bench{{"bv3", gen_bv(3)}};
  const auto rows = evaluate_instruction_set(bench, cx, kXX);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].basis_count == 3);
  CHECK(rows[0].latency == doctest::Approx(3.0));
  CHECK(rows[0].fidelity == doctest::Approx(std::pow(1 - 7.669e-3, 3)));
  CHECK(rows[0].config == "{cx}");
  CHECK(rows[0].lower_bound == 3);
  CHECK_THROWS_AS(evaluate_instruction_set(bench, InstructionSet{}, kXX), std::invalid_argument);
}

TEST_CASE("Da angle sweep on QFT-7") {
  std::vector<InstructionSet> grid;
  for (int k = 1; k <= 8; ++k) grid.push_back({{BasisGate::da(kPi / (4 * k))}});
  const std::vector<Benchmark> bench{{"qft7", gen_qft(7)}};
  std::vector<EvalRow> rows;
  for (const auto& s : grid) rows.push_back(evaluate_instruction_set(bench, s, kXX).at(0));
  // Halving the angle never costs latency: two Da(t/2) emulate one Da(t).
  for (int k = 1; 2 * k <= 8; ++k) CHECK(rows[2 * k - 1].latency < rows[k - 1].latency);
  CHECK(rows[7].latency < rows[0].latency / 4);
  int best = 0;
  for (int k = 1; k < 8; ++k)
    if (rows[k].fidelity > rows[best].fidelity) best = k;
  CHECK(best > 0);
  CHECK(best < 7);
  CHECK(rows[3].fidelity > rows[0].fidelity);
}

TEST_CASE("Db angle sweep ranks pi/8 best on SWAP cost") {
  std::vector<InstructionSet> grid;
  for (int k = 1; k <= 8; ++k) grid.push_back({{BasisGate::db(kQ, k * kPi / 32)}});
  EvalOptions opts;
  opts.weights = ObjectiveWeights::for_objective(Objective::MinCount);
  const auto ranked = sweep_design_space({{"swaps", swap_workload()}}, grid, kXXYY, opts);
  REQUIRE(ranked.size() == 8);
  CHECK(ranked[0].angles.at(0).y == doctest::Approx(kPi / 8));
  CHECK(ranked[0].basis_count == 6);
  CHECK(ranked[1].basis_count > ranked[0].basis_count);
  for (std::size_t i = 0; i < ranked.size(); ++i) CHECK(ranked[i].rank == i + 1);
}

TEST_CASE("sweep with one cell equals a single evaluation") {
  const InstructionSet s{{BasisGate::da(kPi / 8)}};
  const std::vector<Benchmark> bench{{"qaoa4", gen_qaoa(4)}, {"bv3", gen_bv(3)}};
  const auto single = evaluate_instruction_set(bench, s, kXX);
  const auto sweep = sweep_design_space(bench, {s}, kXX);
  REQUIRE(sweep.size() == 1);
  REQUIRE(sweep[0].rows.size() == single.size());
  double f = 1, score = 0;
  for (std::size_t i = 0; i < single.size(); ++i) {
    CHECK(sweep[0].rows[i].fidelity == single[i].fidelity);
    CHECK(sweep[0].rows[i].basis_count == single[i].basis_count);
    f *= single[i].fidelity;
    score += single[i].score;
  }
  CHECK(sweep[0].fidelity == doctest::Approx(f));
  CHECK(sweep[0].score == doctest::Approx(score));
  CHECK_THROWS_AS(sweep_design_space(bench, {}, kXX), std::invalid_argument);
}

TEST_CASE("sweeps are deterministic across worker counts") {
  std::vector<InstructionSet> grid;
  for (int k = 2; k <= 9; ++k) grid.push_back({{BasisGate::da(kPi / (2 * k))}});
  const std::vector<Benchmark> bench{{"qaoa5", gen_qaoa(5)}};
  EvalOptions one, three;
  one.transpile.workers = 1;
  three.transpile.workers = 3;
  const auto a = sweep_design_space(bench, grid, kXX, one);
  const auto b = sweep_design_space(bench, grid, kXX, three);
  CHECK(sweep_csv(a) == sweep_csv(b));
  CHECK(sweep_json(a) == sweep_json(b));
}

TEST_CASE("report formats") {
  const InstructionSet s{{BasisGate::da(kQ, "cx"), BasisGate::da(kPi / 8, "da8")}};
  const auto rows = evaluate_instruction_set({{"bv3", gen_bv(3)}}, s, kXX);
  const std::string csv = eval_rows_csv(rows);
  CHECK(csv.rfind("benchmark,config,angles,fidelity,latency,basis_count,lower_bound,score\n", 0) ==
        0);
  CHECK(csv.find("\"{cx,da8}\"") != std::string::npos);
  const auto j = nlohmann::json::parse(eval_rows_json(rows));
  CHECK(j.size() == 1);
  CHECK(j[0]["basis_count"].get<int>() == static_cast<int>(rows[0].basis_count));
  CHECK(j[0]["angles"].size() == 2);
}
