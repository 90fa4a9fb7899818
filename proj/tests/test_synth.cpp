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

#include "cartan/synth.hpp"
#include "support.hpp"

using namespace cartan;
using cartan::testing::Rng;
using cartan::testing::uniform;

namespace {

constexpr double kQ = kPi / 4;

int invocations(const SynthesisPlan& p) {
  int n = 0;
  for (const Step& s : p.steps) n += s.kind == Step::Kind::Basis;
  return n;
}

void check_plan(const SynthesisPlan& p, const C4& target) {
  CHECK(distance_up_to_phase(assemble(p), target) < 1e-7);
  CHECK(p.residual_achieved < 1e-7);
  CHECK(invocations(p) == p.basis_count);
  CHECK(p.basis_count >= p.bound.n_lower);
}

BasisGate random_basis(Rng& rng, int kind) {
  const double x = uniform(rng, 0.05, kQ), y = uniform(rng, 0.03, x), z = uniform(rng, -y, y);
  if (kind == 0) return BasisGate::da(x);
  if (kind == 1) return BasisGate::db(x, y);
  return BasisGate::dc(x, y, z);
}

}  // namespace

TEST_CASE("basis gates") {
  const BasisGate cx = BasisGate::from_matrix(gates::CX(), "cx");
  CHECK(cx.tmpl.tag == TemplateClass::Tag::Da);
  CHECK(cx.tmpl.theta_x == doctest::Approx(kQ));
  CHECK(cx.label == "cx");
  CHECK(BasisGate::db(kQ, kPi / 8).tmpl.tag == TemplateClass::Tag::Db);
  CHECK(BasisGate::dc(0.5, 0.3, -0.1).tmpl.tag == TemplateClass::Tag::Dc);
  CHECK_THROWS_AS(BasisGate::from_matrix(kron(gates::H(), gates::X())), std::invalid_argument);
  C4 bad = gates::CX();
  bad(0, 0) = 3.0;
  CHECK_THROWS_AS(BasisGate::from_matrix(bad), NotUnitary);
}

TEST_CASE("exact counts") {
  const BasisGate da4 = BasisGate::da(kQ);
  const SynthesisPlan cx = compile_2q(gates::CX(), da4);
  CHECK(cx.basis_count == 1);
  check_plan(cx, gates::CX());
  const C4 zz = rotation_2q(Axis::Z, kPi / 8);
  const SynthesisPlan zzp = compile_2q(zz, da4);
  CHECK(zzp.basis_count == 2);
  check_plan(zzp, zz);
  const SynthesisPlan sw = compile_2q(gates::SWAP(), da4);
  CHECK(sw.basis_count == 3);
  check_plan(sw, gates::SWAP());
  const SynthesisPlan id = compile_2q(kron(gates::H(), gates::S()), da4);
  CHECK(id.basis_count == 0);
  check_plan(id, kron(gates::H(), gates::S()));

  CHECK(compile_count(cartan_coord(gates::SWAP()), da4) == 3);
  CHECK(compile_count(cartan_coord(gates::SWAP()), BasisGate::db(kQ, kPi / 8)) == 2);
  CHECK_THROWS_AS(compile_2q(2.0 * gates::CX(), da4), NotUnitary);
}

TEST_CASE("SWAP with small angles") {
  for (int k : {8, 28, 64}) {
    const BasisGate b = BasisGate::da(kPi / k);
    const SynthesisPlan p = compile_2q(gates::SWAP(), b);
    check_plan(p, gates::SWAP());
    CHECK(p.bound.n_lower == (k + 3) / 4);
    CHECK(p.basis_count <= static_cast<int>(pad_rotations(p.target_coord, b).count()) + 3);
  }
}

TEST_CASE("pad_rotations examples") {
  const PadResult a = pad_rotations({0.7, 0.5, 0.2}, BasisGate::da(kPi / 16));
  CHECK(a.count() == 6);
  for (double r : a.residual) CHECK((r >= -1e-12 && r < kPi / 16));

  const PadResult zero = pad_rotations({0, 0, 0}, BasisGate::da(kPi / 16));
  CHECK(zero.count() == 0);
  for (double r : zero.residual) CHECK(r == 0.0);

  const PadResult db = pad_rotations({kQ, kPi / 8, 0}, BasisGate::db(kQ, kPi / 8));
  CHECK(db.count() == 1);
  for (double r : db.residual) CHECK(std::abs(r) < 1e-12);

  const PadResult neg = pad_rotations({0.7, 0.5, -0.45}, BasisGate::da(0.2));
  CHECK(neg.count() == 3 + 2 + 2);
  CHECK(neg.residual[2] == doctest::Approx(-0.05));
}

TEST_CASE("lower_bound examples") {
  CHECK(lower_bound(cartan_coord(gates::SWAP()), BasisGate::da(kPi / 28)).n_lower == 7);
  CHECK(lower_bound({0, 0, 0}, BasisGate::da(kQ)).n_lower == 0);
  CHECK(lower_bound({kPi / 8, 0, 0}, BasisGate::da(kPi / 16)).n_lower == 2);
  CHECK(lower_bound({kPi / 8, 0, 0}, BasisGate::da(kPi / 16)).applicable);
  CHECK(lower_bound(cartan_coord(gates::SWAP()), BasisGate::db(kQ, kPi / 8)).n_lower == 1);
  CHECK(lower_bound({0.3, 0.2, 0.1}, BasisGate::dc(0.1, 0.05, 0.05)).n_lower == 3);
}

TEST_CASE("residual synthesis for XX-type bases") {
  const BasisGate b = BasisGate::da(kPi / 8);
  CHECK(synth_residual_da({0, 0, 0}, b, true).steps.empty());

  // A small XX residual merged with one leading pad costs one new invocation.
  const double eps = 0.1;
  const CoreCircuit c = synth_residual_da({eps, 0, 0}, b, true);
  CHECK(c.basis_count == 1);
  const C4 raw = canonical_gate(eps + kPi / 8, 0, 0);
  CHECK(distance_up_to_phase(assemble(c.steps, {b}), c.left.matrix() * raw * c.right.matrix()) <
        1e-9);

  Rng rng(301);
  for (int i = 0; i < 100; ++i) {
    const std::array<double, 3> r{uniform(rng, -kPi / 8, kPi / 8), uniform(rng, -kPi / 8, kPi / 8),
                                  uniform(rng, -kPi / 8, kPi / 8)};
    const CoreCircuit k = synth_residual_da(r, b, false);
    const C4 want = k.left.matrix() * canonical_gate(r[0], r[1], r[2]) * k.right.matrix();
    CHECK(distance_up_to_phase(assemble(k.steps, {b}), want) < 1e-7);
    CHECK(k.basis_count <= 3 + 1);
  }
  CHECK_THROWS_AS(synth_residual_da({0.1, 0, 0}, BasisGate::db(0.3, 0.1), false),
                  std::invalid_argument);
}

TEST_CASE("residual synthesis for XX+YY-type bases") {
  Rng rng(303);
  CHECK(synth_residual_db({0, 0, 0}, BasisGate::db(0.5, 0.2)).steps.empty());
  for (int i = 0; i < 100; ++i) {
    const BasisGate b = random_basis(rng, 1);
    const std::array<double, 3> r{uniform(rng, 0, b.tmpl.theta_x), uniform(rng, 0, b.tmpl.theta_y),
                                  uniform(rng, -b.tmpl.theta_y, b.tmpl.theta_y)};
    const CoreCircuit k = synth_residual_db(r, b);
    const C4 want = k.left.matrix() * canonical_gate(r[0], r[1], r[2]) * k.right.matrix();
    CHECK(distance_up_to_phase(assemble(k.steps, {b}), want) < 1e-7);
  }
}

TEST_CASE("residual synthesis for XX+YY+ZZ-type bases") {
  const TemplateClass t = BasisGate::dc(kPi / 8, kPi / 16, kPi / 32).tmpl;
  CHECK(dc_effective_angle(t) == doctest::Approx(kQ));

  Rng rng(305);
  for (int i = 0; i < 40; ++i) {
    const BasisGate b = random_basis(rng, 2);
    const std::array<double, 3> r{uniform(rng, 0, 0.3), uniform(rng, 0, 0.2),
                                  uniform(rng, -0.1, 0.1)};
    const CoreCircuit k = synth_residual_dc(r, b);
    CHECK(k.basis_count % 2 == 0);
    const C4 want = k.left.matrix() * canonical_gate(r[0], r[1], r[2]) * k.right.matrix();
    CHECK(distance_up_to_phase(assemble(k.steps, {b}), want) < 1e-7);
  }
}

TEST_CASE("soundness and bound compliance over random targets") {
  Rng rng(307);
  for (int i = 0; i < 150; ++i) {
    const BasisGate b = random_basis(rng, i % 3);
    const C4 u = testing::random_su4(rng);
    const SynthesisPlan p = compile_2q(u, b);
    check_plan(p, u);
    CHECK(p.basis_count == compile_count(p.target_coord, b));
    if (b.tmpl.tag == TemplateClass::Tag::Da)
      CHECK(p.basis_count <= pad_rotations(p.target_coord, b).count() + 3);
  }
}

TEST_CASE("XX+YY bases whose in-plane move is close to pi/2") {
  // theta_x + theta_y near pi/2 makes reachable intervals fold back.
  const BasisGate b1 = BasisGate::db(0.76812420112649593, 0.62635706673713853);
  const C4 t1 = canonical_gate(0.55540881301174561, 0.24087744197592939, 0.13744540344226111);
  check_plan(compile_2q(t1, b1), t1);
  const BasisGate b2 = BasisGate::db(0.75928810368010446, 0.66197973394759924);
  const C4 t2 = canonical_gate(0.5110977703434163, 0.3143661083157035, 0.081571585454496942);
  check_plan(compile_2q(t2, b2), t2);
  Rng rng(311);
  for (int i = 0; i < 40; ++i) {
    const double x = uniform(rng, 0.7, kQ);
    const BasisGate b = BasisGate::db(x, uniform(rng, 0.6, x));
    const C4 u = testing::random_su4(rng);
    check_plan(compile_2q(u, b), u);
  }
}

TEST_CASE("planning is independent of the target's local dressing") {
  Rng rng(309);
  const BasisGate b = BasisGate::db(0.6, 0.25);
  for (int i = 0; i < 20; ++i) {
    const C4 u = testing::random_su4(rng);
    const C4 v = testing::random_local(rng).matrix() * u * testing::random_local(rng).matrix();
    CHECK(compile_2q(u, b).basis_count == compile_2q(v, b).basis_count);
  }
}

TEST_CASE("mixed compilation") {
  const HardwareModel model;
  Rng rng(311);
  const C4 u = testing::random_su4(rng);
  const BasisGate cx = BasisGate::da(kQ);
  const SynthesisPlan one = compile_2q_mixed(u, {cx}, Objective::MinCount, model);
  CHECK(one.basis_count == compile_2q(u, cx).basis_count);
  check_plan(one, u);

  const C4 zz = rotation_2q(Axis::Z, kPi / 32);
  const SynthesisPlan sel =
      compile_2q_mixed(zz, {BasisGate::da(kQ), BasisGate::da(kPi / 16)}, Objective::MaxFidelity,
                       model);
  check_plan(sel, zz);
  CHECK(sel.basis_count == 2);
  for (const Step& s : sel.steps)
    if (s.kind == Step::Kind::Basis)
      CHECK(sel.bases.at(static_cast<std::size_t>(s.basis)).tmpl.theta_x ==
            doctest::Approx(kPi / 16));
  CHECK(plan_fidelity(sel, model) > 1 - 2 * gate_error(1.0, model));
  CHECK(plan_latency(sel, model) == doctest::Approx(0.5));

  for (int i = 0; i < 60; ++i) {
    const std::vector<BasisGate> set{random_basis(rng, i % 3), random_basis(rng, (i + 1) % 3)};
    const C4 t = testing::random_su4(rng);
    for (Objective o : {Objective::MinCount, Objective::MinLatency, Objective::MaxFidelity}) {
      const SynthesisPlan p = compile_2q_mixed(t, set, o, HardwareModel{Coupling::XX_only});
      check_plan(p, t);
    }
  }
  CHECK_THROWS(compile_2q_mixed(u, {}, Objective::MinCount, model));
}

TEST_CASE("objective names") {
  for (Objective o : {Objective::MinCount, Objective::MinLatency, Objective::MaxFidelity})
    CHECK(parse_objective(objective_name(o)) == o);
  CHECK_THROWS_AS(parse_objective("cheapest"), std::invalid_argument);
}
