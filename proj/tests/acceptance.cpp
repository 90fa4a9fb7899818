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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "cartan/calib.hpp"
#include "cartan/hwmodel.hpp"
#include "cartan/oracle.hpp"
#include "cartan/synth.hpp"
#include "support.hpp"

using namespace cartan;
using cartan::testing::Rng;
using cartan::testing::uniform;

namespace {

constexpr double kQ = kPi / 4;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;

void report(int n, const std::function<Outcome()>& run) {
  Outcome o;
  try {
    o = run();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++g_failures;
  fmt::print("criterion {}: {} {}\n", n, o.pass ? "PASS" : "FAIL", o.detail);
  std::fflush(stdout);
}

BasisGate random_basis(Rng& rng, int kind) {
  const double x = uniform(rng, 0.05, kQ), y = uniform(rng, 0.03, x), z = uniform(rng, -y, y);
  if (kind == 0) return BasisGate::da(x);
  if (kind == 1) return BasisGate::db(x, y);
  return BasisGate::dc(x, y, z);
}

TemplateClass tmpl(TemplateClass::Tag tag, double x, double y = 0, double z = 0) {
  TemplateClass t;
  t.tag = tag;
  t.theta_x = x;
  t.theta_y = y;
  t.theta_z = z;
  return t;
}

double coord_gap(const CartanCoord& a, const CartanCoord& b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

Outcome kak_round_trip() {
  Rng rng(1001);
  std::vector<C4> us;
  for (int i = 0; i < 1000; ++i) us.push_back(testing::random_su4(rng));
  const auto t0 = Clock::now();
  double worst = 0;
  int outside = 0;
  for (const C4& u : us) {
    const KakFactorization f = kak_decompose(u);
    worst = std::max(worst, distance_up_to_phase(kak_recompose(f), u));
    outside += !in_weyl_chamber(f.coord);
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-8 && outside == 0 && secs < 5.0,
          fmt::format("(1000 draws, max distance {:.2e}, outside chamber {}, {:.3f} s)", worst,
                      outside, secs)};
}

Outcome named_coordinates() {
  const double cx = coord_gap(cartan_coord(gates::CX()), {kQ, 0, 0});
  const double sw = coord_gap(cartan_coord(gates::SWAP()), {kQ, kQ, kQ});
  return {cx < 1e-9 && sw < 1e-9, fmt::format("(CX error {:.2e}, SWAP error {:.2e})", cx, sw)};
}

Outcome calibration_solvers() {
  Rng rng(1003);
  double p1 = 0, p2 = 0, rules = 0;
  for (int i = 0; i < 500; ++i) {
    const double t1 = uniform(rng, 0, kQ), t2 = uniform(rng, 0, kQ);
    const DaSandwich f = da_forward(t1, t2, uniform(rng, -kPi, kPi), i % 2 == 1);
    const C4 want = rotation_2q(Axis::X, f.eta);
    p1 = std::max({p1, distance_up_to_phase(f.assemble(), want),
                   coord_gap(cartan_coord(f.assemble()), cartan_coord(want))});
    const double lo = std::abs(t1 - t2), hi = fold_pi(t1 + t2);
    const DaSandwich inv = da_invert(t1, t2, uniform(rng, std::min(lo, hi), std::max(lo, hi)));
    p1 = std::max(p1, distance_up_to_phase(inv.assemble(), rotation_2q(Axis::X, inv.eta)));
  }
  for (int i = 0; i < 500; ++i) {
    const double tx = uniform(rng, 0, kQ), ty = uniform(rng, 0, tx);
    const double tx2 = uniform(rng, 0, kQ), ty2 = uniform(rng, 0, tx2);
    const DbSandwich f =
        db_forward(tx, ty, tx2, ty2, uniform(rng, -kPi, kPi), uniform(rng, -kPi, kPi));
    const C4 want = canonical_gate(f.eta_x, f.eta_y, 0);
    p2 = std::max({p2, distance_up_to_phase(f.assemble(), want),
                   coord_gap(cartan_coord(f.assemble()), cartan_coord(want))});
    const DbSandwich inv = db_invert(tx, ty, tx2, ty2, f.eta_x, f.eta_y);
    p2 = std::max(p2, distance_up_to_phase(inv.assemble(), want));
  }
  using Tag = TemplateClass::Tag;
  for (int i = 0; i < 100; ++i) {
    const double tx = uniform(rng, 0.01, kQ), ty = uniform(rng, 0.01, tx),
                 tz = uniform(rng, -ty, ty), th = uniform(rng, -kPi, kPi);
    const int q = i % 2;
    const TemplateClass da = tmpl(Tag::Da, tx), db = tmpl(Tag::Db, tx, ty),
                        dc = tmpl(Tag::Dc, tx, ty, tz);
    const std::vector<std::pair<Rule, GateSeq>> cases{
        {Rule::PauliConversion,
         {SeqGate::templ(da), SeqGate::rot1(Axis::Y, q, th), SeqGate::templ(da, true)}},
        {Rule::Reduce, {SeqGate::templ(da), SeqGate::rot1(Axis::Z, q, th), SeqGate::templ(da)}},
        {Rule::Reduce, {SeqGate::templ(db), SeqGate::rot1(Axis::Z, q, th), SeqGate::templ(db)}},
        {Rule::DowngradeI,
         {SeqGate::templ(db), SeqGate::rot1(Axis::Y, q, th), SeqGate::templ(db, true)}},
        {Rule::DowngradeI,
         {SeqGate::templ(dc), SeqGate::rot1(Axis::Z, q, th), SeqGate::templ(dc, true)}},
        {Rule::DowngradeII,
         {SeqGate::templ(db), SeqGate::rot1(Axis::Y, q, th), SeqGate::templ(db)}},
        {Rule::DowngradeII,
         {SeqGate::templ(dc), SeqGate::rot1(Axis::Z, q, th), SeqGate::templ(dc)}}};
    for (const auto& [rule, lhs] : cases)
      rules = std::max(rules, verify_identity(lhs, apply_rule(rule, lhs)).distance);
  }
  return {p1 < 1e-8 && p2 < 1e-8 && rules < 1e-9,
          fmt::format("(XX sandwich max residual {:.2e}, XX+YY sandwich {:.2e}, rules {:.2e})", p1,
                      p2, rules)};
}

Outcome soundness() {
  Rng rng(1005);
  double worst = 0;
  int bad = 0, below = 0;
  for (int i = 0; i < 500; ++i) {
    const BasisGate b = random_basis(rng, i % 3);
    const C4 u = testing::random_su4(rng);
    const SynthesisPlan p = compile_2q(u, b);
    const double d = distance_up_to_phase(assemble(p), u);
    worst = std::max(worst, d);
    bad += !(d < 1e-7);
    below += p.basis_count < p.bound.n_lower;
  }
  return {bad == 0 && below == 0,
          fmt::format("(500 plans, {} over tolerance, max distance {:.2e}, {} below bound)", bad,
                      worst, below)};
}

Outcome near_optimality() {
  const auto t0 = Clock::now();
  Rng rng(1007);
  std::vector<C4> targets;
  for (int i = 0; i < 100; ++i) targets.push_back(testing::random_su4(rng));
  struct Case {
    BasisGate basis;
    double limit;
    double gap = 0;
  };
  std::vector<Case> cases{{BasisGate::da(kQ), 1.5},
                          {BasisGate::da(kPi / 8), 1.5},
                          {BasisGate::db(kQ, kPi / 8), 0.5}};
  int below = 0, unresolved = 0;
  constexpr int kMax = 6;
  for (Case& c : cases) {
    long total = 0;
    for (const C4& u : targets) {
      const SynthesisPlan p = compile_2q(u, c.basis);
      below += p.basis_count < p.bound.n_lower;
      BruteOptions opts;
      std::optional<int> best;
      if (p.basis_count <= kMax) {
        opts.known_feasible = p.basis_count;
        best = brute_force_min_count(u, c.basis, kMax, opts);
      } else {
        best = brute_force_min_count(u, c.basis, kMax, opts);
      }
      if (!best) {
        ++unresolved;
        continue;
      }
      below += *best < p.bound.n_lower;
      total += p.basis_count - *best;
    }
    c.gap = static_cast<double>(total) / static_cast<double>(targets.size());
  }
  const double secs = seconds_since(t0);
  bool ok = below == 0 && unresolved == 0 && secs < 600;
  for (const Case& c : cases) ok = ok && c.gap <= c.limit;
  return {ok, fmt::format("(mean gap Da(pi/4) {:.2f}, Da(pi/8) {:.2f}, Db(pi/4,pi/8) {:.2f}; "
                          "{} below bound, {} unresolved, {:.1f} s)",
                          cases[0].gap, cases[1].gap, cases[2].gap, below, unresolved, secs)};
}

Outcome exact_counts() {
  const BasisGate b = BasisGate::da(kQ);
  const int zz = compile_2q(rotation_2q(Axis::Z, kPi / 8), b).basis_count;
  const int cx = compile_2q(gates::CX(), b).basis_count;
  const int sw = compile_2q(gates::SWAP(), b).basis_count;
  std::size_t ctrl = 0;
  for (const GateOp& op : gen_qft(5).ops) ctrl += op.name == "crz";
  return {zz == 2 && cx == 1 && sw == 3 && ctrl == 10,
          fmt::format("(ZZ(pi/8) {}, CX {}, SWAP {}, QFT-5 controlled rotations {})", zz, cx, sw,
                      ctrl)};
}

// Median wall time of `reps` compilations.
double median_compile_seconds(const C4& u, const BasisGate& b, int reps, int* count) {
  std::vector<double> t;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    *count = compile_2q(u, b).basis_count;
    t.push_back(seconds_since(t0));
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

Outcome constant_work() {
  int n28 = 0, n8 = 0, n256 = 0;
  const double t28 = median_compile_seconds(gates::SWAP(), BasisGate::da(kPi / 28), 21, &n28);
  const double t8 = median_compile_seconds(gates::SWAP(), BasisGate::da(kPi / 8), 21, &n8);
  const double t256 = median_compile_seconds(gates::SWAP(), BasisGate::da(kPi / 256), 21, &n256);
  const double time_ratio = t256 / t8;
  const double length_ratio = static_cast<double>(n256) / n8;
  const bool ok = t28 < 0.010 && n28 >= 7 && time_ratio <= 2 * length_ratio;
  return {ok, fmt::format("(SWAP/Da(pi/28): {} invocations in {:.3f} ms; pi/256 vs pi/8: time "
                          "ratio {:.2f}, plan length ratio {:.1f})",
                          n28, t28 * 1e3, time_ratio, length_ratio)};
}

Outcome magic_basis_checks() {
  Rng rng(1011);
  int sv_fail = 0, tri_fail = 0;
  for (int i = 0; i < 500; ++i) {
    const C4 u = testing::random_su4(rng);
    sv_fail += !check_singular_values(std::polar(1.0, uniform(rng, -kPi, kPi)) * u);
  }
  int drawn = 0;
  while (drawn < 500) {
    const C4 u = testing::random_su4(rng);
    const double k = k_t(u);
    if (std::min(k, kPi - k) > kQ) continue;
    tri_fail += !check_triangle_inequality(u, uniform(rng, 1e-3, kQ - 1e-3), 4,
                                           static_cast<std::uint64_t>(drawn) + 1, 1e-9);
    ++drawn;
  }
  return {sv_fail == 0 && tri_fail == 0,
          fmt::format("(singular values {}/500 failed, triangle inequality {}/500 failed)", sv_fail,
                      tri_fail)};
}

Outcome hardware_model() {
  const HardwareModel xx{Coupling::XX_only};
  auto fidelity = [&](const Circuit& c, const BasisGate& b) {
    return evaluate_instruction_set({{"b", c}}, InstructionSet{{b}}, xx).at(0).fidelity;
  };
  const BasisGate cx = BasisGate::da(kQ, "cx");
  const double qft_da = fidelity(gen_qft(7), BasisGate::da(kPi / 16));
  const double qft_cx = fidelity(gen_qft(7), cx);
  const double bv_da = fidelity(gen_bv(8), BasisGate::da(kPi / 8));
  const double bv_cx = fidelity(gen_bv(8), cx);
  const bool a = qft_da > qft_cx, b = bv_da < bv_cx;

  Circuit swaps;
  swaps.n_qubits = 3;
  swaps.ops = {GateOp::named("swap", {0, 1}), GateOp::named("swap", {1, 2}),
               GateOp::named("swap", {0, 2})};
  std::vector<InstructionSet> db_grid;
  for (int k = 1; k <= 8; ++k) db_grid.push_back({{BasisGate::db(kQ, k * kPi / 32)}});
  EvalOptions count_opts;
  count_opts.weights = ObjectiveWeights::for_objective(Objective::MinCount);
  const auto ranked =
      sweep_design_space({{"swaps", swaps}}, db_grid, HardwareModel{Coupling::XX_plus_YY}, count_opts);
  const double top_y = ranked.front().angles.front().y;
  const bool c = std::abs(top_y - kPi / 8) < 1e-12 &&
                 ranked[1].basis_count > ranked[0].basis_count;

  std::vector<InstructionSet> da_grid;
  for (int k = 1; k <= 1000; ++k) da_grid.push_back({{BasisGate::da(kQ * k / 1000.0)}});
  const auto t0 = Clock::now();
  const auto rows = sweep_design_space({{"qaoa10", gen_qaoa(10)}}, da_grid, xx);
  const double secs = seconds_since(t0);
  const bool d = rows.size() == 1000 && secs < 10.0;

  return {a && b && c && d,
          fmt::format("((a) QFT-7 {:.4f} vs CX {:.4f} {}; (b) BV-8 {:.4f} vs CX {:.4f} {}; "
                      "(c) top theta_y {:.5f} {}; (d) 1000-cell sweep {:.2f} s {})",
                      qft_da, qft_cx, a ? "ok" : "bad", bv_da, bv_cx, b ? "ok" : "bad", top_y,
                      c ? "ok" : "bad", secs, d ? "ok" : "bad")};
}

Outcome semantic_preservation() {
  std::vector<std::pair<std::string, Circuit>> circuits;
  for (int n = 1; n <= 3; ++n) circuits.emplace_back(fmt::format("qft{}", n), gen_qft(n));
  for (int n = 1; n <= 2; ++n) circuits.emplace_back(fmt::format("bv{}", n), gen_bv(n));
  for (int n = 2; n <= 3; ++n) {
    circuits.emplace_back(fmt::format("qaoa{}", n), gen_qaoa(n));
    circuits.emplace_back(fmt::format("qaoa{}-dense", n), gen_qaoa(n, 1.0, 5));
    circuits.emplace_back(fmt::format("pauli{}", n), gen_pauli_evo(n));
  }
  const std::vector<std::vector<BasisGate>> sets{
      {BasisGate::da(kQ)},
      {BasisGate::da(kPi / 8)},
      {BasisGate::da(0.1)},
      {BasisGate::db(kQ, kPi / 8)},
      {BasisGate::dc(0.5, 0.3, 0.1)},
      {BasisGate::da(kQ), BasisGate::db(kQ, kPi / 8)}};
  double worst = 0;
  int checked = 0;
  for (const auto& [name, c] : circuits) {
    const DenseUnitary before = dense_unitary(c);
    for (const auto& set : sets) {
      const TranspileResult r =
          transpile_circuit(c, set, Objective::MaxFidelity, HardwareModel{Coupling::XX_only});
      worst = std::max(worst, distance_up_to_phase(dense_unitary(r.circuit), before));
      ++checked;
    }
  }
  return {worst < 1e-6,
          fmt::format("({} circuit/basis pairs, max distance {:.2e})", checked, worst)};
}

}  // namespace

int main() {
  report(1, kak_round_trip);
  report(2, named_coordinates);
  report(3, calibration_solvers);
  report(4, soundness);
  report(5, near_optimality);
  report(6, exact_counts);
  report(7, constant_work);
  report(8, magic_basis_checks);
  report(9, hardware_model);
  report(10, semantic_preservation);
  return g_failures == 0 ? 0 : 1;
}
