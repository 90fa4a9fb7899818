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

#include <algorithm>
#include <numeric>
#include <random>

#include "cartan/circuit.hpp"

namespace cartan {

namespace {

// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(unit(rng) * (hi - lo + 1));
}

}  // namespace

Circuit gen_qaoa(int n, double edge_prob, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_qaoa needs at least 2 qubits");
  std::mt19937_64 rng(seed);
  Circuit c;
  c.n_qubits = n;
  for (int q = 0; q < n; ++q) c.ops.push_back(GateOp::named("h", {q}));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const bool edge = unit(rng) < edge_prob;
      const double angle = unit(rng);
      if (edge) {
        const double beta = kPi / 2 * std::clamp(angle, 1e-9, 1 - 1e-9);
        c.ops.push_back(GateOp::named("rzz", {i, j}, {beta}));
      }
    }
  const double mixer = kPi / 2 * unit(rng);
  for (int q = 0; q < n; ++q) c.ops.push_back(GateOp::named("rx", {q}, {mixer}));
  return c;
}

Circuit gen_qft(int n) {
  if (n < 1) throw std::invalid_argument("gen_qft needs at least 1 qubit");
  Circuit c;
  c.n_qubits = n;
  for (int i = 0; i < n; ++i) {
    c.ops.push_back(GateOp::named("h", {i}));
    for (int j = i + 1; j < n; ++j) {
      // Controlled phase 2 pi / 2^(j-i+1) as crz plus rz on the control.
      const double lambda = 2 * kPi / std::ldexp(1.0, j - i + 1);
      c.ops.push_back(GateOp::named("crz", {j, i}, {-lambda / 2}));
      c.ops.push_back(GateOp::named("rz", {j}, {-lambda / 4}));
    }
  }
  return c;
}

Circuit gen_bv(int n, std::vector<bool> secret) {
  if (n < 1) throw std::invalid_argument("gen_bv needs at least 1 qubit");
  if (secret.empty()) secret.assign(static_cast<std::size_t>(n), true);
  if (static_cast<int>(secret.size()) != n) throw std::invalid_argument("secret length must equal n");
  Circuit c;
  c.n_qubits = n + 1;
  c.ops.push_back(GateOp::named("x", {n}));
  for (int q = 0; q <= n; ++q) c.ops.push_back(GateOp::named("h", {q}));
  for (int q = 0; q < n; ++q)
    if (secret[static_cast<std::size_t>(q)]) c.ops.push_back(GateOp::named("cx", {q, n}));
  for (int q = 0; q < n; ++q) c.ops.push_back(GateOp::named("h", {q}));
  return c;
}

Circuit gen_swap_net(int n) {
  if (n < 2) throw std::invalid_argument("gen_swap_net needs at least 2 qubits");
  Circuit c;
  c.n_qubits = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) c.ops.push_back(GateOp::named("swap", {i, j}));
  return c;
}

std::vector<PauliString> pauli_strings(int n, int n_strings, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("gen_pauli_evo needs at least 2 qubits");
  std::mt19937_64 rng(seed);
  std::vector<PauliString> out;
  for (int s = 0; s < n_strings; ++s) {
    PauliString p;
    const int weight = uniform_int(rng, 2, n);
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 0);
    for (int k = 0; k < weight; ++k) {
      const int pick = uniform_int(rng, k, n - 1);
      std::swap(all[static_cast<std::size_t>(k)], all[static_cast<std::size_t>(pick)]);
    }
    p.qubits.assign(all.begin(), all.begin() + weight);
    std::sort(p.qubits.begin(), p.qubits.end());
    for (int k = 0; k < weight; ++k) p.letters += "XYZ"[uniform_int(rng, 0, 2)];
    p.angle = kPi / 2 * unit(rng);
    out.push_back(std::move(p));
  }
  return out;
}

Circuit pauli_evo_circuit(int n, const std::vector<PauliString>& strings) {
  Circuit c;
  c.n_qubits = n;
  auto basis_change = [&](const PauliString& p, bool undo) {
    for (std::size_t k = 0; k < p.qubits.size(); ++k) {
      const int q = p.qubits[k];
      if (p.letters[k] == 'X') c.ops.push_back(GateOp::named("h", {q}));
      if (p.letters[k] == 'Y') c.ops.push_back(GateOp::named("rx", {q}, {undo ? kPi / 4 : -kPi / 4}));
    }
  };
  for (const auto& p : strings) {
    basis_change(p, false);
    for (std::size_t k = 0; k + 1 < p.qubits.size(); ++k)
      c.ops.push_back(GateOp::named("cx", {p.qubits[k], p.qubits[k + 1]}));
    c.ops.push_back(GateOp::named("rz", {p.qubits.back()}, {p.angle}));
    for (std::size_t k = p.qubits.size() - 1; k-- > 0;)
      c.ops.push_back(GateOp::named("cx", {p.qubits[k], p.qubits[k + 1]}));
    basis_change(p, true);
  }
  return c;
}

Circuit gen_pauli_evo(int n, int n_strings, std::uint64_t seed) {
  return pauli_evo_circuit(n, pauli_strings(n, n_strings, seed));
}

Circuit generate_benchmark(const std::string& name, int n, std::uint64_t seed) {
  if (name == "qft") return gen_qft(n);
  if (name == "bv") return gen_bv(n);
  if (name == "swap") return gen_swap_net(n);
  if (name == "qaoa") return gen_qaoa(n, 0.3, seed ? seed : 7);
  if (name == "pauli_evo" || name == "pauli") return gen_pauli_evo(n, 10, seed ? seed : 11);
  throw std::invalid_argument("unknown benchmark '" + name + "'");
}

}  // namespace cartan
