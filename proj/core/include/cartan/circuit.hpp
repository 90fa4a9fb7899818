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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cartan/matrix.hpp"

namespace cartan {

struct CircuitError : std::runtime_error {
  CircuitError(const std::string& msg, int line = 0, int column = 0);
  int line = 0, column = 0;
};

/// One gate. Named gates carry internal angles (exp(i beta P) convention);
/// the QASM reader and writer convert at the boundary:
///   rx/ry/rz(l) -> beta = -l/2, rzz(t) -> beta = -t/2, crz(l) -> beta = -l/2,
///   u3(t, p, l) -> (alpha, beta, gamma) = (-p/2, -t/2, -l/2), u ~ Z(alpha) Y(beta) Z(gamma).
/// An op without a name is opaque: `matrix` holds its 4x4 (or 2x2 via u3).
struct GateOp {
  std::string name;  // h x y z s sdg rx ry rz u3 cx swap crz rzz, or "" for opaque
  std::vector<int> qubits;
  std::vector<double> params;
  std::optional<C4> matrix;
  std::string label;  // basis label for opaque ops produced by transpilation

  bool is_two_qubit() const { return qubits.size() == 2; }
  bool is_opaque() const { return name.empty(); }
  /// 2x2 for 1Q ops.
  C2 matrix_1q() const;
  /// 4x4 with qubits[0] as the most significant qubit.
  C4 matrix_2q() const;

  static GateOp named(std::string name, std::vector<int> qubits, std::vector<double> params = {});
  static GateOp opaque(const C4& m, int q0, int q1, std::string label = "");
  static GateOp u3_from(const C2& u, int qubit);
};

struct Circuit {
  int n_qubits = 0;
  std::vector<GateOp> ops;

  std::size_t two_qubit_count() const;
  /// Throws CircuitError on bad indices or non-unitary opaque matrices.
  void validate() const;
};

bool operator==(const GateOp& a, const GateOp& b);
inline bool operator==(const Circuit& a, const Circuit& b) {
  return a.n_qubits == b.n_qubits && a.ops == b.ops;
}

enum class CircuitFormat { Qasm, Json };

Circuit parse_qasm(const std::string& text);
Circuit parse_json(const std::string& text);
/// Picks the format from the first non-blank character.
Circuit parse_circuit(const std::string& text);

/// QASM emission of opaque ops throws CircuitError.
std::string emit_qasm(const Circuit& c);
std::string emit_json(const Circuit& c);
std::string emit_circuit(const Circuit& c, CircuitFormat f);

/// Row-major dense unitary, qubit 0 most significant.
struct DenseUnitary {
  int dim = 0;
  std::vector<cplx> data;
  cplx& at(int r, int c) { return data[static_cast<std::size_t>(r) * dim + c]; }
  cplx at(int r, int c) const { return data[static_cast<std::size_t>(r) * dim + c]; }
};
DenseUnitary dense_unitary(const Circuit& c);
double distance_up_to_phase(const DenseUnitary& a, const DenseUnitary& b);

// ---- benchmark generators ----

/// MAXCUT ansatz: H layer, one rzz per edge sampled with probability
/// `edge_prob` (internal angle uniform in (0, pi/2)), rx mixer layer.
Circuit gen_qaoa(int n, double edge_prob = 0.3, std::uint64_t seed = 7);
Circuit gen_qft(int n);
/// n data qubits plus one ancilla (index n); empty secret means all ones.
Circuit gen_bv(int n, std::vector<bool> secret = {});
/// One SWAP on every qubit pair.
Circuit gen_swap_net(int n);
/// Each string acts on 2..n random qubits with random X/Y/Z letters,
/// realized by basis changes, a CX ladder and one rz.
struct PauliString {
  std::vector<int> qubits;
  std::string letters;  // one of X, Y, Z per qubit
  double angle = 0;     // exp(i angle P)
};
std::vector<PauliString> pauli_strings(int n, int n_strings, std::uint64_t seed);
Circuit gen_pauli_evo(int n, int n_strings = 10, std::uint64_t seed = 11);
Circuit pauli_evo_circuit(int n, const std::vector<PauliString>& strings);

/// "qft", "qaoa", "bv", "pauli_evo" (alias "pauli").
Circuit generate_benchmark(const std::string& name, int n, std::uint64_t seed = 0);

}  // namespace cartan
