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

#include "cartan/synth.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>

#include "cartan/calib.hpp"

namespace cartan {

namespace {

constexpr double kHalfPi = kPi / 2;
constexpr double kQuarterPi = kPi / 4;
constexpr long kNever = std::numeric_limits<int>::max() / 4;

using Vec3 = std::array<double, 3>;
using Tag = TemplateClass::Tag;

bool eq_mod_half_pi(double a, double b, double tol = 1e-12) {
  return std::abs(std::remainder(a - b, kHalfPi)) < tol;
}

// Representative of w modulo pi in [-pi/2, pi/2].
double wrap_half(double w) { return std::remainder(w, kPi); }

// ---- single-qubit Cliffords used as axis frames ----

struct FrameTable {
  // frame[P][Q]: f with f X f^dag = +-sigma_P, f Y f^dag = +-sigma_Q.
  C2 frame[3][3];

  FrameTable() {
    std::vector<C2> group{C2::identity()};
    auto canon = [](C2 m) {
      for (auto& x : m.e)
        if (std::abs(x) > 1e-9) {
          const cplx ph = x / std::abs(x);
          return (1.0 / ph) * m;
        }
      return m;
    };
    for (std::size_t i = 0; i < group.size() && group.size() < 24; ++i)
      for (const C2& g : {gates::H(), gates::S()}) {
        const C2 n = canon(g * group[i]);
        bool seen = false;
        for (const auto& o : group)
          if (max_abs_diff(o, n) < 1e-9) seen = true;
        if (!seen) group.push_back(n);
      }
    auto image = [](const C2& f, Axis a) {
      const C2 im = f * pauli(a) * adjoint(f);
      for (int k = 0; k < 3; ++k) {
        const C2& p = pauli(static_cast<Axis>(k));
        if (max_abs_diff(im, p) < 1e-9 || max_abs_diff(im, -1.0 * p) < 1e-9) return k;
      }
      return -1;
    };
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) {
        if (p == q) continue;
        for (const auto& f : group)
          if (image(f, Axis::X) == p && image(f, Axis::Y) == q) {
            frame[p][q] = f;
            break;
          }
      }
  }
};

const FrameTable& frames() {
  static const FrameTable t;
  return t;
}

Local z_pair(double a, double b) {
  return {rotation_1q(Axis::Z, a), rotation_1q(Axis::Z, b)};
}

// ---- basis invocations (real or virtual) ----

// Product of `steps` is proportional to L * A(g) * R.
struct Invocation {
  std::vector<Step> steps;
  Local L, R;
  Vec3 g{};
  int count = 1;
};

Invocation plain_invocation(const BasisGate& b, int index) {
  Invocation v;
  v.steps = {Step::invoke(index)};
  v.L = b.kak.left();
  v.R = b.kak.right();
  v.g = b.kak.coord.as_array();
  return v;
}

double dc_pair_angle(double theta) {
  const double a = 2 * std::abs(theta);
  return std::min(a, std::abs(kHalfPi - a));
}

// Two Dc invocations around a Pauli give an XX-type gate of twice one angle.
Invocation dc_pair_invocation(const BasisGate& b, int index) {
  const Vec3 g = b.kak.coord.as_array();
  int j = 0;
  for (int k = 1; k < 3; ++k)
    if (dc_pair_angle(g[k]) > dc_pair_angle(g[j]) + 1e-15) j = k;
  Vec3 raw{0, 0, 0};
  raw[j] = 2 * g[j];
  const Canonicalized can = canonicalize(raw);
  const Local lv = b.kak.left(), rv = b.kak.right();
  const Local p0{pauli(static_cast<Axis>(j)), C2::identity()};
  const Local m1 = adjoint(rv) * p0 * adjoint(lv);

  Invocation v;
  v.steps = {Step::invoke(index), Step::one(0, m1.q0), Step::one(1, m1.q1),
             Step::invoke(index)};
  v.L = lv * adjoint(can.left);
  v.R = adjoint(can.right) * p0 * rv;
  v.g = can.coord.as_array();
  v.count = 2;
  return v;
}

// ---- exact circuit builder ----

// Maintains assemble(steps) ~ L * A(acc) * R.
class Builder {
 public:
  std::vector<Step> steps;
  Local L, R;
  Vec3 acc{0, 0, 0};
  int count = 0;

  // acc += v, where v is a signed permutation of the invocation angles.
  void pad(const Invocation& inv, const Vec3& v) {
    const auto [lo, ro] = orient(inv, v);
    const Local mid = adjoint(inv.R) * ro * adjoint(L);
    push_local(mid);
    append(inv);
    L = inv.L * adjoint(lo);
    for (int k = 0; k < 3; ++k) acc[k] += v[k];
  }

  // One calibrated step in the (P, Q) plane: the new invocation carries
  // gp = (p, q, r) on axes (P, Q, R). (u_req, v_req) are the requested
  // values of eta_P +- eta_Q; only their cos^2 is enforced, signs are kept.
  void plane_step(const Invocation& inv, int P, int Q, int Rax, const Vec3& gp,
                  double u_req, double v_req) {
    const double aP = acc[P], aQ = acc[Q];
    const double au = aP + aQ, av = aP - aQ, gu = gp[0] + gp[1], gv = gp[0] - gp[1];
    const double dm = mix_clamped(u_req, au + gu, au - gu);
    const double sm = mix_clamped(v_req, av + gv, av - gv);
    const double b0 = (sm + dm) / 2, b1 = (sm - dm) / 2;
    const double cp2 = sq(std::cos(dm)) * sq(std::cos(au + gu)) +
                       sq(std::sin(dm)) * sq(std::cos(au - gu));
    const double cm2 = sq(std::cos(sm)) * sq(std::cos(av + gv)) +
                       sq(std::sin(sm)) * sq(std::cos(av - gv));
    const double u = std::copysign(std::acos(std::sqrt(std::clamp(cp2, 0.0, 1.0))), u_req);
    const double v = std::copysign(std::acos(std::sqrt(std::clamp(cm2, 0.0, 1.0))), v_req);
    const double ex = (u + v) / 2, ey = (u - v) / 2;
    const auto tau = db_calibration(aP, aQ, gp[0], gp[1], b0, b1, ex, ey);

    const C2& f = frames().frame[P][Q];
    const Local F = Local::both(f), Fd = Local::both(adjoint(f));
    const auto [lo, ro] = orient(inv, gp);
    const Local mid = adjoint(inv.R) * ro * z_pair(b0, b1) * Fd * adjoint(L);
    push_local(mid);
    append(inv);
    L = inv.L * adjoint(lo) * adjoint(z_pair(tau[2], tau[3])) * Fd;
    R = F * adjoint(z_pair(tau[0], tau[1])) * Fd * R;
    acc[P] = ex;
    acc[Q] = ey;
    acc[Rax] += gp[2];
  }

  // Moves acc[j] by a multiple of pi/2 onto `value`.
  void snap(int j, double value) {
    const double d = acc[j] - value;
    const long k = std::lround(d / kHalfPi);
    if (std::abs(d - k * kHalfPi) > 1e-8)
      throw std::logic_error("synth: accumulated angle missed its target");
    if (k % 2 != 0) {
      const C2& p = pauli(static_cast<Axis>(j));
      R = Local{p, p} * R;
    }
    acc[j] -= k * kHalfPi;
  }

 private:
  static double sq(double x) { return x * x; }

  static double mix_clamped(double target, double p, double q) {
    const double ct = sq(std::cos(target)), cp = sq(std::cos(p)), cq = sq(std::cos(q));
    const double den = cp - cq;
    if (std::abs(den) < 1e-15) return 0.0;
    const double c = (ct - cq) / den;
    if (c < -1e-6 || c > 1 + 1e-6)
      throw std::logic_error("synth: calibrated step out of reach");
    return std::acos(std::sqrt(std::clamp(c, 0.0, 1.0)));
  }

  // A(gp) ~ lo * A(g) * ro.
  static std::pair<Local, Local> orient(const Invocation& inv, const Vec3& gp) {
    const Canonicalized c = canonicalize(gp);
    const Vec3 cc = c.coord.as_array();
    for (int k = 0; k < 3; ++k)
      if (std::abs(cc[k] - inv.g[k]) > 1e-10)
        throw std::logic_error("synth: orientation is not equivalent to the basis");
    return {adjoint(c.left), adjoint(c.right)};
  }

  void push_local(const Local& m) {
    steps.push_back(Step::one(0, m.q0));
    steps.push_back(Step::one(1, m.q1));
  }

  void append(const Invocation& inv) {
    steps.insert(steps.end(), inv.steps.begin(), inv.steps.end());
    count += inv.count;
  }
};

// ---- reachable intervals of the chain model ----
//
// In a plane (P, Q) one calibrated step moves u = fold(eta_P + eta_Q) and
// v = fold(eta_P - eta_Q) independently: from u0 with a move a the
// reachable set is [|u0 - a|, fold(u0 + a)] (or reversed).

struct Iv {
  double lo, hi;
};

double fold(double w) { return fold_pi(w); }

Iv step_iv(Iv iv, double a) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  auto eval = [&](double x) {
    const double p = std::abs(x - a), q = fold(x + a);
    lo = std::min({lo, p, q});
    hi = std::max({hi, p, q});
  };
  eval(iv.lo);
  eval(iv.hi);
  for (double x : {a, kHalfPi - a, kPi - a})
    if (x > iv.lo && x < iv.hi) eval(x);
  return {lo, hi};
}

bool inside(double x, Iv iv, double tol = 1e-11) {
  return x >= iv.lo - tol && x <= iv.hi + tol;
}

// Once an interval is at least one move wide, every further step widens it
// by that move on both sides until it saturates at [0, pi/2]. Narrower
// intervals can fold back on themselves and are stepped exactly.
bool grows_linearly(Iv iv, double m) { return iv.hi - iv.lo >= m - 1e-15; }

Iv grow(Iv iv, double m, long steps) {
  const double ext = static_cast<double>(steps) * m;
  return {std::max(0.0, iv.lo - ext), std::min(kHalfPi, iv.hi + ext)};
}

// Interval after K >= 1 steps: first move m1, then K-1 moves m.
Iv chain_iv(double u0, double m1, double m, long K) {
  Iv iv = step_iv({u0, u0}, m1);
  for (long k = 2; k <= K; ++k) {
    if (grows_linearly(iv, m)) return grow(iv, m, K - k + 1);
    iv = step_iv(iv, m);
  }
  return iv;
}

constexpr long kFoldSteps = 64;

// Smallest K >= 4 whose interval contains x.
long min_k_extrapolated(double u0, double m1, double m, double x) {
  Iv iv = chain_iv(u0, m1, m, 3);
  for (long k = 4; k < 4 + kFoldSteps; ++k) {
    const bool linear = grows_linearly(iv, m);
    iv = linear ? grow(iv, m, 1) : step_iv(iv, m);
    if (inside(x, iv)) return k;
    if (linear) {
      if (m <= 1e-15) return kNever;
      const double gap = x < iv.lo ? iv.lo - x : x - iv.hi;
      return k + static_cast<long>(std::ceil(gap / m - 1e-11));
    }
  }
  return kNever;
}

// Orientation patterns: 0 all '+', 1 all '-', 2 '+' then '-', 3 '-' then '+'.
// A '+' step moves u by s and v by d; a '-' step swaps them.
struct Moves {
  double u1, u, v1, v;
};

Moves moves_for(int pattern, double s, double d) {
  switch (pattern) {
    case 0:
      return {s, s, d, d};
    case 1:
      return {d, d, s, s};
    case 2:
      return {s, d, d, s};
    default:
      return {d, s, s, d};
  }
}

struct PhaseChoice {
  long K = kNever;
  int pattern = 0;
};

PhaseChoice phase_min(double u0, double v0, double ut, double vt, double s, double d) {
  PhaseChoice best;
  const int npat = std::abs(s - d) < 1e-15 ? 1 : 4;
  for (int pat = 0; pat < npat; ++pat) {
    const Moves mv = moves_for(pat, s, d);
    long K = kNever;
    for (long k = 1; k <= 3 && K == kNever; ++k)
      if (inside(ut, chain_iv(u0, mv.u1, mv.u, k)) && inside(vt, chain_iv(v0, mv.v1, mv.v, k)))
        K = k;
    if (K == kNever) {
      // Both coordinates must land at the same step count; folding
      // intervals are not nested, so confirm and walk forward if needed.
      const long k0 = std::max(min_k_extrapolated(u0, mv.u1, mv.u, ut),
                               min_k_extrapolated(v0, mv.v1, mv.v, vt));
      for (long k = k0; k < kNever && k < k0 + kFoldSteps; ++k)
        if (inside(ut, chain_iv(u0, mv.u1, mv.u, k)) && inside(vt, chain_iv(v0, mv.v1, mv.v, k))) {
          K = k;
          break;
        }
    }
    if (K < best.K) best = {K, pat};
  }
  return best;
}

// ---- two-phase planner ----

struct ChainPlan {
  long total = kNever;
  int perm[3] = {0, 1, 2};
  double sigma = 0;
  PhaseChoice ph1, ph2;
};

constexpr int kPerms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                              {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};

// Plane gate with in-plane angles (g1, g2): phase 1 in plane (R, S) from
// acc0 to (t_R, sigma); phase 2 in plane (S, T) to (t_S, t_T).
ChainPlan plan_chain(const Vec3& acc0, const Vec3& t, double g1, double g2) {
  const double s = std::abs(g1 + g2), d = std::abs(g1 - g2);
  ChainPlan best;
  constexpr int kGrid = 48;
  for (const auto& p : kPerms) {
    const int R = p[0], S = p[1], T = p[2];
    const double tR = t[R], tS = t[S], tT = t[T];
    const double aR = acc0[R], aS = acc0[S], aT = acc0[T];
    std::vector<double> sig = {aS, tS, -tS, tT, -tT, tS + tT, tS - tT, 0.0, tR, -tR,
                               kQuarterPi, -kQuarterPi, kQuarterPi - tR, tR - kQuarterPi};
    for (int i = 0; i < kGrid; ++i) sig.push_back(-kHalfPi + kPi * (i + 0.5) / kGrid);
    // Single steps reach isolated points, so add the sigmas that land on
    // one-step endpoints of either phase exactly.
    const double u0 = fold(aR + aS), v0 = fold(aR - aS);
    const double q2u = fold(tS + tT), q2v = fold(tS - tT);
    for (double m : {s, d}) {
      for (double w : {m, std::abs(u0 - m), fold(u0 + m), std::abs(v0 - m), fold(v0 + m)})
        for (double c : {w - tR, -w - tR, tR - w, tR + w}) sig.push_back(wrap_half(c));
      for (double w : {std::abs(q2u - m), fold(q2u + m), std::abs(q2v - m), fold(q2v + m)})
        for (double c : {w - aT, -w - aT, aT - w, aT + w}) sig.push_back(wrap_half(c));
    }

    for (double sigma : sig) {
      PhaseChoice a, b;
      if (eq_mod_half_pi(aR, tR) && eq_mod_half_pi(aS, sigma))
        a.K = 0;
      else
        a = phase_min(fold(aR + aS), fold(aR - aS), fold(tR + sigma), fold(tR - sigma), s, d);
      if (a.K >= best.total) continue;
      if (eq_mod_half_pi(sigma, tS) && eq_mod_half_pi(aT, tT))
        b.K = 0;
      else
        b = phase_min(fold(sigma + aT), fold(sigma - aT), q2u, q2v, s, d);
      if (a.K + b.K < best.total) {
        best.total = a.K + b.K;
        best.perm[0] = R;
        best.perm[1] = S;
        best.perm[2] = T;
        best.sigma = sigma;
        best.ph1 = a;
        best.ph2 = b;
      }
    }
  }
  return best;
}

std::vector<Iv> forward_ivs(double u0, const std::vector<double>& moves) {
  std::vector<Iv> iv{{u0, u0}};
  for (double m : moves) iv.push_back(step_iv(iv.back(), m));
  return iv;
}

// Waypoints w_0 = u0, ..., w_K = target through the forward intervals.
std::vector<double> waypoints(double u0, double target, const std::vector<double>& moves) {
  const auto iv = forward_ivs(u0, moves);
  const std::size_t K = moves.size();
  std::vector<double> w(K + 1);
  w[K] = target;
  for (std::size_t k = K; k-- > 1;) {
    const Iv back = step_iv({w[k + 1], w[k + 1]}, moves[k]);
    const double lo = std::max(back.lo, iv[k].lo), hi = std::min(back.hi, iv[k].hi);
    w[k] = lo <= hi ? 0.5 * (lo + hi) : (lo + hi) / 2;
  }
  w[0] = u0;
  return w;
}

void run_phase(Builder& b, const Invocation& inv, int P, int Q, int Rax, double tP,
               double tQ, const PhaseChoice& ph, double g1, double g2) {
  if (ph.K == 0) {
    b.snap(P, tP);
    b.snap(Q, tQ);
    return;
  }
  const double s = std::abs(g1 + g2), d = std::abs(g1 - g2);
  const Moves mv = moves_for(ph.pattern, s, d);
  const std::size_t K = static_cast<std::size_t>(ph.K);
  std::vector<double> mu(K, mv.u), mvv(K, mv.v);
  mu[0] = mv.u1;
  mvv[0] = mv.v1;
  const bool first_plus = ph.pattern == 0 || ph.pattern == 2;
  const bool rest_plus = ph.pattern == 0 || ph.pattern == 3;

  const double u0 = fold(b.acc[P] + b.acc[Q]), v0 = fold(b.acc[P] - b.acc[Q]);
  const auto wu = waypoints(u0, fold(tP + tQ), mu);
  const auto wv = waypoints(v0, fold(tP - tQ), mvv);
  for (std::size_t k = 1; k <= K; ++k) {
    const bool plus = k == 1 ? first_plus : rest_plus;
    const Vec3 gp{g1, plus ? g2 : -g2, 0.0};
    double ur = wu[k], vr = wv[k];
    if (k == K) {
      ur = wrap_half(tP + tQ);
      vr = wrap_half(tP - tQ);
    }
    b.plane_step(inv, P, Q, Rax, gp, ur, vr);
  }
  b.snap(P, tP);
  b.snap(Q, tQ);
}

void build_chain(Builder& b, const Invocation& inv, const Vec3& t, const ChainPlan& plan) {
  const double g1 = inv.g[0], g2 = inv.g[1];
  const int R = plan.perm[0], S = plan.perm[1], T = plan.perm[2];
  run_phase(b, inv, R, S, T, t[R], plan.sigma, plan.ph1, g1, g2);
  run_phase(b, inv, S, T, R, t[S], t[T], plan.ph2, g1, g2);
  for (int k = 0; k < 3; ++k) b.snap(k, t[k]);
}

// ---- numerical closure for short plans ----

C2 su2_from(const double* p) {
  return rotation_1q(Axis::Z, p[0]) * rotation_1q(Axis::Y, p[1]) *
         rotation_1q(Axis::Z, p[2]);
}

Local local_from(const double* p) { return {su2_from(p), su2_from(p + 3)}; }

// L_N B L_{N-1} ... B L_0 with L_k from parameter block k.
C4 closure_circuit(const C4& v, const Eigen::VectorXd& p, int N) {
  C4 w = local_from(&p[0]).matrix();
  for (int k = 1; k <= N; ++k) w = local_from(&p[6 * k]).matrix() * v * w;
  return w;
}

Eigen::VectorXd closure_residual(const C4& v, const C4& target, const Eigen::VectorXd& p, int N) {
  const C4 w = closure_circuit(v, p, N);
  const cplx t = trace(adjoint(target) * w);
  const cplx phi = std::abs(t) > 1e-300 ? t / std::abs(t) : cplx{1, 0};
  Eigen::VectorXd r(32);
  for (int i = 0; i < 16; ++i) {
    const cplx d = w.e[static_cast<std::size_t>(i)] - phi * target.e[static_cast<std::size_t>(i)];
    r[2 * i] = d.real();
    r[2 * i + 1] = d.imag();
  }
  return r;
}

bool levenberg_marquardt(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                         Eigen::VectorXd& p, int max_iter, double tol) {
  Eigen::VectorXd r = f(p);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  const int n = static_cast<int>(p.size());
  for (int it = 0; it < max_iter && cost > tol * tol; ++it) {
    Eigen::MatrixXd J(r.size(), n);
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd q = p;
      const double h = 1e-7;
      q[j] += h;
      J.col(j) = (f(q) - r) / h;
    }
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    bool improved = false;
    while (lambda < 1e12) {
      Eigen::MatrixXd Ad = A;
      Ad.diagonal().array() += lambda * (1.0 + A.diagonal().array());
      const Eigen::VectorXd step = Ad.ldlt().solve(-g);
      const Eigen::VectorXd q = p + step;
      const Eigen::VectorXd rq = f(q);
      if (rq.squaredNorm() < cost) {
        p = q;
        r = rq;
        cost = rq.squaredNorm();
        lambda = std::max(lambda / 3, 1e-12);
        improved = true;
        break;
      }
      lambda *= 4;
    }
    if (!improved) break;
    // Stalled in a local minimum: let the caller restart.
    if (it == 40 && cost > 1e-4) break;
  }
  return cost <= tol * tol;
}

double coord_gap(const CartanCoord& a, const CartanCoord& b) {
  return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

// Fits N invocations of the basis with free locals to A(t); returns a core
// with assemble(steps) ~ A(t).
std::optional<CoreCircuit> numeric_closure(const BasisGate& basis, int index,
                                           const CartanCoord& t, int N) {
  if (N == 1) {
    if (coord_gap(basis.kak.coord, t) > 1e-10) return std::nullopt;
    CoreCircuit c;
    c.steps = {Step::invoke(index)};
    c.left = basis.kak.left();
    c.right = basis.kak.right();
    c.basis_count = 1;
    return c;
  }
  const C4& v = basis.matrix;
  const C4 target = canonical_gate(t);
  std::mt19937_64 rng(0xc105e + static_cast<std::uint64_t>(N));
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  auto f = [&](const Eigen::VectorXd& p) { return closure_residual(v, target, p, N); };
  constexpr int kStarts = 10;
  for (int s = 0; s < kStarts; ++s) {
    Eigen::VectorXd p(6 * (N + 1));
    for (int i = 0; i < p.size(); ++i) p[i] = ang(rng);
    if (!levenberg_marquardt(f, p, 200, 1e-12)) continue;
    CoreCircuit c;
    c.basis_count = N;
    for (int k = 0; k <= N; ++k) {
      if (k > 0) c.steps.push_back(Step::invoke(index));
      const Local l = local_from(&p[6 * k]);
      c.steps.push_back(Step::one(0, l.q0));
      c.steps.push_back(Step::one(1, l.q1));
    }
    return c;
  }
  return std::nullopt;
}

// ---- per-template analytic plans ----

PadResult dc_pads(const Vec3& t, const TemplateClass& b);

// Cheapest analytic route for one basis: direct chains (Da, Db), or
// two-invocation XX-type pairs, optionally after aligned Dc padding.
struct Route {
  enum class Kind { None, Direct, Pair, PaddedPair } kind = Kind::None;
  ChainPlan plan;
  PadResult pads;
  long count = kNever;
};

Route choose_route(const Vec3& t, const BasisGate& basis) {
  Route best;
  const Tag tag = basis.tmpl.tag;
  if (tag != Tag::Dc) {
    const Vec3 g = basis.kak.coord.as_array();
    best.plan = plan_chain({0, 0, 0}, t, g[0], g[1]);
    best.count = best.plan.total;
    best.kind = best.count < kNever ? Route::Kind::Direct : Route::Kind::None;
    if (tag == Tag::Da) return best;
  }
  const Invocation pair = dc_pair_invocation(basis, 0);
  if (pair.g[0] < 1e-12) return best;
  const ChainPlan without = plan_chain({0, 0, 0}, t, pair.g[0], 0.0);
  if (without.total < kNever && 2 * without.total < best.count) {
    best.kind = Route::Kind::Pair;
    best.plan = without;
    best.count = 2 * without.total;
  }
  if (tag == Tag::Dc) {
    PadResult pads = dc_pads(t, basis.tmpl);
    if (pads.count() > 0) {
      Vec3 padded{0, 0, 0};
      for (const auto& p : pads.pads)
        for (int k = 0; k < 3; ++k) padded[k] += p[k];
      const ChainPlan with = plan_chain(padded, t, pair.g[0], 0.0);
      if (with.total < kNever && pads.count() + 2 * with.total <= best.count) {
        best.kind = Route::Kind::PaddedPair;
        best.plan = with;
        best.count = pads.count() + 2 * with.total;
        best.pads = std::move(pads);
      }
    }
  }
  return best;
}

// Realizes A(t) for raw t from acc = 0 with a single basis.
Builder analytic_core(const Vec3& t, const BasisGate& basis, int index) {
  const Route r = choose_route(t, basis);
  Builder b;
  switch (r.kind) {
    case Route::Kind::None:
      throw std::domain_error("synth: basis cannot reach the target");
    case Route::Kind::Direct:
      build_chain(b, plain_invocation(basis, index), t, r.plan);
      break;
    case Route::Kind::Pair:
      build_chain(b, dc_pair_invocation(basis, index), t, r.plan);
      break;
    case Route::Kind::PaddedPair: {
      const Invocation single = plain_invocation(basis, index);
      for (const auto& p : r.pads.pads) b.pad(single, p);
      build_chain(b, dc_pair_invocation(basis, index), t, r.plan);
      break;
    }
  }
  return b;
}

long analytic_count(const Vec3& t, const BasisGate& basis) { return choose_route(t, basis).count; }

// Largest count worth a numerical closure attempt. XX-type chains are
// already tight, so closure only runs there when no chain exists.
int closure_limit(const BasisGate& basis, long n_analytic, const CompileOptions& opts) {
  if (opts.closure_max <= 0) return 0;
  if (n_analytic >= kNever) return std::max(opts.closure_max, 4);
  if (basis.tmpl.tag == Tag::Da) return 0;
  return static_cast<int>(std::min<long>(opts.closure_max, n_analytic - 1));
}

PadResult dc_pads(const Vec3& t, const TemplateClass& b) {
  PadResult out;
  out.residual = t;
  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return std::abs(t[i]) > std::abs(t[j]); });
  const Vec3 th{b.theta_x, b.theta_y, std::abs(b.theta_z)};
  // Aligned signs are realizable only with an even number of flips
  // relative to the basis signs.
  Vec3 sign{};
  int flips = b.theta_z < 0 ? 1 : 0;
  for (int k = 0; k < 3; ++k) {
    sign[order[k]] = t[order[k]] < 0 ? -1.0 : 1.0;
    if (t[order[k]] < 0) ++flips;
  }
  if (flips % 2 != 0) return out;
  long n = kNever;
  for (int k = 0; k < 3; ++k)
    n = std::min(n, static_cast<long>(std::floor(std::abs(t[order[k]]) / th[k] + 1e-9)));
  Vec3 pad{};
  for (int k = 0; k < 3; ++k) pad[order[k]] = sign[order[k]] * th[k];
  for (long i = 0; i < n; ++i) {
    out.pads.push_back(pad);
    for (int k = 0; k < 3; ++k) out.residual[k] -= pad[k];
  }
  return out;
}

// Wraps a core realizing A(t) (t canonical) into a plan for `target`.
void finish_plan(SynthesisPlan& plan, const Builder& b, const KakFactorization& tk) {
  const Canonicalized c = canonicalize(b.acc);
  // steps ~ L cl^dag A(t) cr^dag R
  const Local core_left = b.L * adjoint(c.left);
  const Local core_right = adjoint(c.right) * b.R;
  const Local pre = adjoint(core_right) * tk.right();
  const Local post = tk.left() * adjoint(core_left);
  plan.steps.clear();
  plan.steps.push_back(Step::one(0, pre.q0));
  plan.steps.push_back(Step::one(1, pre.q1));
  plan.steps.insert(plan.steps.end(), b.steps.begin(), b.steps.end());
  plan.steps.push_back(Step::one(0, post.q0));
  plan.steps.push_back(Step::one(1, post.q1));
  plan.basis_count = b.count;
}

void finish_plan(SynthesisPlan& plan, const CoreCircuit& core, const KakFactorization& tk) {
  const Local pre = adjoint(core.right) * tk.right();
  const Local post = tk.left() * adjoint(core.left);
  plan.steps.clear();
  plan.steps.push_back(Step::one(0, pre.q0));
  plan.steps.push_back(Step::one(1, pre.q1));
  plan.steps.insert(plan.steps.end(), core.steps.begin(), core.steps.end());
  plan.steps.push_back(Step::one(0, post.q0));
  plan.steps.push_back(Step::one(1, post.q1));
  plan.basis_count = core.basis_count;
}

bool is_identity_up_to_phase(const C2& u) {
  return distance_up_to_phase(u, C2::identity()) < 1e-13;
}

// Merges 1Q runs between basis invocations and drops identities.
void merge_locals(SynthesisPlan& plan) {
  std::vector<Step> out;
  C2 pending[2] = {C2::identity(), C2::identity()};
  auto flush = [&] {
    for (int q = 0; q < 2; ++q) {
      if (!is_identity_up_to_phase(pending[q])) out.push_back(Step::one(q, pending[q]));
      pending[q] = C2::identity();
    }
  };
  for (const Step& s : plan.steps) {
    if (s.kind == Step::Kind::OneQ) {
      pending[s.qubit] = s.u * pending[s.qubit];
    } else {
      flush();
      out.push_back(s);
    }
  }
  flush();
  plan.steps = std::move(out);
}

void validate_basis(const BasisGate& b) {
  if (k_t(b.kak.coord) < 1e-12)
    throw std::invalid_argument("basis gate is locally equivalent to the identity");
}

}  // namespace

// ---- public API ----

BasisGate BasisGate::from_matrix(const C4& m, std::string label) {
  BasisGate b;
  b.matrix = m;
  b.kak = kak_decompose(m);
  b.tmpl = classify_template(b.kak.coord);
  b.label = label.empty() ? b.tmpl.name() : std::move(label);
  validate_basis(b);
  return b;
}

BasisGate BasisGate::da(double tx, std::string label) {
  return from_matrix(canonical_gate(tx, 0, 0), std::move(label));
}
BasisGate BasisGate::db(double tx, double ty, std::string label) {
  return from_matrix(canonical_gate(tx, ty, 0), std::move(label));
}
BasisGate BasisGate::dc(double tx, double ty, double tz, std::string label) {
  return from_matrix(canonical_gate(tx, ty, tz), std::move(label));
}

C4 assemble(const std::vector<Step>& steps, const std::vector<BasisGate>& bases) {
  C4 w = C4::identity();
  for (const Step& s : steps) {
    if (s.kind == Step::Kind::Basis) {
      w = bases.at(static_cast<std::size_t>(s.basis)).matrix * w;
    } else {
      w = (s.qubit == 0 ? kron(s.u, C2::identity()) : kron(C2::identity(), s.u)) * w;
    }
  }
  return w;
}

C4 assemble(const SynthesisPlan& plan) { return assemble(plan.steps, plan.bases); }

PadResult pad_rotations(const CartanCoord& target, const BasisGate& basis) {
  const Vec3 t = target.as_array();
  const TemplateClass& b = basis.tmpl;
  PadResult out;
  out.residual = t;
  auto add = [&](const Vec3& v) {
    out.pads.push_back(v);
    for (int k = 0; k < 3; ++k) out.residual[k] -= v[k];
  };
  auto sgn = [](double x) { return x < 0 ? -1.0 : 1.0; };
  switch (b.tag) {
    case Tag::Da:
      for (int j = 0; j < 3; ++j) {
        const long n = static_cast<long>(std::floor(std::abs(t[j]) / b.theta_x + 1e-9));
        Vec3 v{0, 0, 0};
        v[j] = sgn(t[j]) * b.theta_x;
        for (long i = 0; i < n; ++i) add(v);
      }
      break;
    case Tag::Db: {
      auto fill = [&](int i, int j) {
        const Vec3 r = out.residual;
        const long n = std::min(static_cast<long>(std::floor(std::abs(r[i]) / b.theta_x + 1e-9)),
                                static_cast<long>(std::floor(std::abs(r[j]) / b.theta_y + 1e-9)));
        Vec3 v{0, 0, 0};
        v[i] = sgn(r[i]) * b.theta_x;
        v[j] = sgn(r[j]) * b.theta_y;
        for (long k = 0; k < n; ++k) add(v);
      };
      fill(0, 1);
      // Second padding step on the best remaining axis pair.
      int bi = -1, bj = -1;
      long bn = 0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          if (i == j) continue;
          const long n = std::min(
              static_cast<long>(std::floor(std::abs(out.residual[i]) / b.theta_x + 1e-9)),
              static_cast<long>(std::floor(std::abs(out.residual[j]) / b.theta_y + 1e-9)));
          if (n > bn) {
            bn = n;
            bi = i;
            bj = j;
          }
        }
      if (bi >= 0) fill(bi, bj);
      break;
    }
    case Tag::Dc:
      return dc_pads(t, b);
  }
  return out;
}

double dc_effective_angle(const TemplateClass& t) {
  return std::max({dc_pair_angle(t.theta_x), dc_pair_angle(t.theta_y),
                   dc_pair_angle(t.theta_z)});
}

namespace {

CoreCircuit core_from_builder(const Builder& b) {
  CoreCircuit c;
  c.steps = b.steps;
  c.left = b.L;
  c.right = b.R;
  c.basis_count = b.count;
  return c;
}

Builder realize_raw(const Vec3& t, const BasisGate& basis) {
  validate_basis(basis);
  return analytic_core(t, basis, 0);
}

}  // namespace

CoreCircuit synth_residual_da(const Vec3& residual, const BasisGate& basis,
                              bool leading_pad_available) {
  if (basis.tmpl.tag != Tag::Da) throw std::invalid_argument("synth_residual_da: not an XX-type basis");
  Vec3 t = residual;
  if (std::abs(t[0]) < 1e-15 && std::abs(t[1]) < 1e-15 && std::abs(t[2]) < 1e-15)
    return {};
  if (leading_pad_available) {
    int j = 0;
    for (int k = 1; k < 3; ++k)
      if (std::abs(t[k]) > std::abs(t[j])) j = k;
    t[j] += (t[j] < 0 ? -1.0 : 1.0) * basis.tmpl.theta_x;
  }
  CoreCircuit c = core_from_builder(realize_raw(t, basis));
  if (leading_pad_available) c.basis_count -= 1;
  return c;
}

CoreCircuit synth_residual_db(const Vec3& residual, const BasisGate& basis) {
  if (basis.tmpl.tag != Tag::Db) throw std::invalid_argument("synth_residual_db: not an XX+YY-type basis");
  if (std::abs(residual[0]) < 1e-15 && std::abs(residual[1]) < 1e-15 &&
      std::abs(residual[2]) < 1e-15)
    return {};
  return core_from_builder(realize_raw(residual, basis));
}

CoreCircuit synth_residual_dc(const Vec3& residual, const BasisGate& basis) {
  if (basis.tmpl.tag != Tag::Dc) throw std::invalid_argument("synth_residual_dc: not an XX+YY+ZZ-type basis");
  if (std::abs(residual[0]) < 1e-15 && std::abs(residual[1]) < 1e-15 &&
      std::abs(residual[2]) < 1e-15)
    return {};
  validate_basis(basis);
  const Invocation pair = dc_pair_invocation(basis, 0);
  if (pair.g[0] < 1e-12) throw std::domain_error("synth: basis cannot reach the target");
  Builder b;
  const ChainPlan plan = plan_chain(b.acc, residual, pair.g[0], 0.0);
  build_chain(b, pair, residual, plan);
  return core_from_builder(b);
}

CostBound lower_bound(const CartanCoord& target, const TemplateClass& basis) {
  CostBound cb;
  cb.k_t_value = k_t(target);
  const double r = std::min(cb.k_t_value, kPi - cb.k_t_value);
  double w = basis.theta_x;
  if (basis.tag == Tag::Db) w = basis.theta_x + basis.theta_y;
  if (basis.tag == Tag::Dc) w = basis.theta_x + basis.theta_y + std::abs(basis.theta_z);
  cb.applicable = r < kQuarterPi - 1e-12;
  if (r < 1e-12 || w <= 0) {
    cb.n_lower = 0;
    return cb;
  }
  cb.n_lower = static_cast<int>(std::ceil(std::min(r, kQuarterPi) / w - 1e-9));
  return cb;
}

CostBound lower_bound(const CartanCoord& target, const BasisGate& basis) {
  return lower_bound(target, basis.tmpl);
}

namespace {

SynthesisPlan plan_single(const C4& target, const BasisGate& basis, const CompileOptions& opts) {
  validate_basis(basis);
  SynthesisPlan plan;
  plan.bases = {basis};
  plan.target = target;
  const KakFactorization tk = kak_decompose(target);
  plan.target_coord = tk.coord;
  plan.bound = lower_bound(tk.coord, basis);
  const Vec3 t = tk.coord.as_array();

  if (k_t(tk.coord) < 1e-13) {
    Builder empty;
    finish_plan(plan, empty, tk);
    plan.method = "local";
  } else {
    std::optional<Builder> analytic;
    long n_analytic = kNever;
    try {
      analytic = analytic_core(t, basis, 0);
      n_analytic = analytic->count;
    } catch (const std::domain_error&) {
    }
    bool done = false;
    const int lo = std::max(1, plan.bound.n_lower);
    for (int n = lo; n <= closure_limit(basis, n_analytic, opts) && !done; ++n) {
      if (auto core = numeric_closure(basis, 0, tk.coord, n)) {
        finish_plan(plan, *core, tk);
        plan.method = "closure";
        merge_locals(plan);
        plan.residual_achieved = distance_up_to_phase(assemble(plan), target);
        done = plan.residual_achieved < 1e-8;
      }
    }
    if (!done) {
      if (!analytic) throw std::domain_error("synth: basis cannot reach the target");
      finish_plan(plan, *analytic, tk);
      plan.method = "analytic";
    }
  }
  merge_locals(plan);
  plan.residual_achieved = distance_up_to_phase(assemble(plan), target);
  return plan;
}

}  // namespace

SynthesisPlan compile_2q(const C4& target, const BasisGate& basis, const CompileOptions& opts) {
  if (unitarity_error(target) > 1e-8) throw NotUnitary("compile_2q: target is not unitary");
  return plan_single(target, basis, opts);
}

int compile_count(const CartanCoord& target, const BasisGate& basis, const CompileOptions& opts) {
  validate_basis(basis);
  if (k_t(target) < 1e-13) return 0;
  const Vec3 t = target.as_array();
  const long n_analytic = analytic_count(t, basis);
  const int lo = std::max(1, lower_bound(target, basis).n_lower);
  for (int n = lo; n <= closure_limit(basis, n_analytic, opts); ++n)
    if (numeric_closure(basis, 0, target, n)) return n;
  if (n_analytic >= kNever) throw std::domain_error("synth: basis cannot reach the target");
  return static_cast<int>(n_analytic);
}

Objective parse_objective(const std::string& s) {
  if (s == "min_count" || s == "count") return Objective::MinCount;
  if (s == "min_latency" || s == "latency") return Objective::MinLatency;
  if (s == "max_fidelity" || s == "fidelity") return Objective::MaxFidelity;
  throw std::invalid_argument("unknown objective '" + s + "'");
}

const char* objective_name(Objective o) {
  switch (o) {
    case Objective::MinCount:
      return "min_count";
    case Objective::MinLatency:
      return "min_latency";
    default:
      return "max_fidelity";
  }
}

double plan_latency(const SynthesisPlan& plan, const HardwareModel& model) {
  double l = 0;
  for (const Step& s : plan.steps)
    if (s.kind == Step::Kind::Basis)
      l += gate_latency(plan.bases.at(static_cast<std::size_t>(s.basis)).kak.coord, model);
  return l;
}

double plan_fidelity(const SynthesisPlan& plan, const HardwareModel& model) {
  double f = 1;
  for (const Step& s : plan.steps)
    if (s.kind == Step::Kind::Basis)
      f *= 1 - gate_error(
                   gate_latency(plan.bases.at(static_cast<std::size_t>(s.basis)).kak.coord, model),
                   model);
  return f;
}

namespace {

// Pads with one basis, finishes with another.
std::optional<SynthesisPlan> mixed_plan(const C4& target, const KakFactorization& tk,
                                        const BasisGate& pad_basis, const BasisGate& res_basis) {
  const PadResult pads = pad_rotations(tk.coord, pad_basis);
  if (pads.count() == 0) return std::nullopt;
  const Vec3 t = tk.coord.as_array();
  const Invocation pinv = plain_invocation(pad_basis, 0);
  Invocation rinv = res_basis.tmpl.tag == Tag::Dc ? dc_pair_invocation(res_basis, 1)
                                                  : plain_invocation(res_basis, 1);
  if (rinv.g[0] < 1e-12) return std::nullopt;
  Builder b;
  for (const auto& p : pads.pads) b.pad(pinv, p);
  const ChainPlan plan = plan_chain(b.acc, t, rinv.g[0], rinv.g[1]);
  if (plan.total >= kNever) return std::nullopt;
  try {
    build_chain(b, rinv, t, plan);
  } catch (const std::logic_error&) {
    return std::nullopt;
  }
  SynthesisPlan out;
  out.bases = {pad_basis, res_basis};
  out.target = target;
  out.target_coord = tk.coord;
  finish_plan(out, b, tk);
  out.method = "mixed";
  merge_locals(out);
  out.residual_achieved = distance_up_to_phase(assemble(out), target);
  if (out.residual_achieved > 1e-7) return std::nullopt;
  return out;
}

struct Score {
  double primary, secondary;
  bool operator<(const Score& o) const {
    if (primary != o.primary) return primary < o.primary;
    return secondary < o.secondary;
  }
};

double safe_latency(const SynthesisPlan& p, const HardwareModel& m) {
  try {
    return plan_latency(p, m);
  } catch (const Unsupported&) {
    return std::numeric_limits<double>::infinity();
  }
}

Score score(const SynthesisPlan& p, Objective o, const HardwareModel& m) {
  const double lat = safe_latency(p, m);
  switch (o) {
    case Objective::MinCount:
      return {static_cast<double>(p.basis_count), lat};
    case Objective::MinLatency:
      return {lat, static_cast<double>(p.basis_count)};
    default: {
      const double fid = std::isinf(lat) ? 0.0 : plan_fidelity(p, m);
      return {-fid, static_cast<double>(p.basis_count)};
    }
  }
}

}  // namespace

SynthesisPlan compile_2q_mixed(const C4& target, const std::vector<BasisGate>& bases,
                               Objective objective, const HardwareModel& model,
                               const CompileOptions& opts) {
  if (bases.empty()) throw std::invalid_argument("compile_2q_mixed: no basis gates");
  if (unitarity_error(target) > 1e-8) throw NotUnitary("compile_2q_mixed: target is not unitary");
  std::vector<SynthesisPlan> cands;
  for (const auto& b : bases) {
    try {
      cands.push_back(plan_single(target, b, opts));
    } catch (const std::domain_error&) {
    }
  }
  if (bases.size() > 1) {
    const KakFactorization tk = kak_decompose(target);
    for (std::size_t i = 0; i < bases.size(); ++i)
      for (std::size_t j = 0; j < bases.size(); ++j)
        if (i != j)
          if (auto p = mixed_plan(target, tk, bases[i], bases[j])) cands.push_back(std::move(*p));
  }
  if (cands.empty()) throw std::domain_error("compile_2q_mixed: no basis reaches the target");
  std::size_t best = 0;
  Score bs = score(cands[0], objective, model);
  for (std::size_t i = 1; i < cands.size(); ++i) {
    const Score s = score(cands[i], objective, model);
    if (s < bs) {
      bs = s;
      best = i;
    }
  }
  if (objective != Objective::MinCount && std::isinf(safe_latency(cands[best], model)))
    throw Unsupported("compile_2q_mixed: model has no latency rule for these bases");
  SynthesisPlan out = std::move(cands[best]);
  out.bound = lower_bound(out.target_coord, out.bases.front());
  return out;
}

}  // namespace cartan
