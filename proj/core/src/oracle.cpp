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

#include "cartan/oracle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace cartan {

namespace {

int slot_width(SlotKind k) {
  switch (k) {
    case SlotKind::ZYZ:
      return 6;
    case SlotKind::Z1:
      return 1;
    default:
      return 0;
  }
}

C2 zyz(const double* p) {
  return rotation_1q(Axis::Z, p[0]) * rotation_1q(Axis::Y, p[1]) * rotation_1q(Axis::Z, p[2]);
}

C4 slot_matrix(SlotKind k, const double* p) {
  switch (k) {
    case SlotKind::ZYZ:
      return kron(zyz(p), zyz(p + 3));
    case SlotKind::Z1:
      return kron(C2::identity(), rotation_1q(Axis::Z, p[0]));
    default:
      return C4::identity();
  }
}

// Minimizes f over R^n with an adaptive Nelder-Mead simplex.
struct Simplex {
  std::vector<Eigen::VectorXd> pts;
  std::vector<double> vals;
};

template <class F>
Eigen::VectorXd nelder_mead(F&& f, Eigen::VectorXd x0, int budget, double stop, long& evals,
                            double& best) {
  const int n = static_cast<int>(x0.size());
  const double dn = n;
  const double alpha = 1, beta = 1 + 2 / dn, gamma = 0.75 - 1 / (2 * dn), delta = 1 - 1 / dn;
  std::vector<Eigen::VectorXd> p(static_cast<std::size_t>(n + 1), x0);
  std::vector<double> v(static_cast<std::size_t>(n + 1));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i + 1)][i] += 0.5;
  int used = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++used;
    ++evals;
    return f(x);
  };
  for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i) v[i] = eval(p[i]);
  std::vector<std::size_t> order(static_cast<std::size_t>(n + 1));
  while (used < budget) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    const std::size_t lo = order.front(), hi = order.back(), nh = order[order.size() - 2];
    if (v[lo] < stop) break;
    if (v[hi] - v[lo] < 1e-15 * (1 + v[lo])) break;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i)
      if (i != hi) c += p[i];
    c /= dn;
    const Eigen::VectorXd xr = c + alpha * (c - p[hi]);
    const double fr = eval(xr);
    if (fr < v[lo]) {
      const Eigen::VectorXd xe = c + beta * (xr - c);
      const double fe = eval(xe);
      if (fe < fr) {
        p[hi] = xe;
        v[hi] = fe;
      } else {
        p[hi] = xr;
        v[hi] = fr;
      }
    } else if (fr < v[nh]) {
      p[hi] = xr;
      v[hi] = fr;
    } else {
      const bool outside = fr < v[hi];
      const Eigen::VectorXd xc = outside ? Eigen::VectorXd(c + gamma * (xr - c))
                                         : Eigen::VectorXd(c - gamma * (xr - c));
      const double fc = eval(xc);
      if (fc < (outside ? fr : v[hi])) {
        p[hi] = xc;
        v[hi] = fc;
      } else {
        for (std::size_t i = 0; i <= static_cast<std::size_t>(n); ++i) {
          if (i == lo) continue;
          p[i] = p[lo] + delta * (p[i] - p[lo]);
          v[i] = eval(p[i]);
        }
      }
    }
  }
  const auto it = std::min_element(v.begin(), v.end());
  best = *it;
  return p[static_cast<std::size_t>(it - v.begin())];
}

// Residual W - phi * T as 32 reals.
Eigen::VectorXd residual(const CandidateTemplate& t, const C4& target, const Eigen::VectorXd& x) {
  const C4 w = t.assemble(std::vector<double>(x.data(), x.data() + x.size()));
  const cplx tr = trace(adjoint(target) * w);
  const cplx phi = std::abs(tr) > 1e-300 ? tr / std::abs(tr) : cplx{1, 0};
  Eigen::VectorXd r(32);
  for (std::size_t i = 0; i < 16; ++i) {
    const cplx d = w.e[i] - phi * target.e[i];
    r[static_cast<Eigen::Index>(2 * i)] = d.real();
    r[static_cast<Eigen::Index>(2 * i + 1)] = d.imag();
  }
  return r;
}

void lm_polish(const CandidateTemplate& t, const C4& target, Eigen::VectorXd& x, long& evals) {
  Eigen::VectorXd r = residual(t, target, x);
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  const Eigen::Index n = x.size();
  for (int it = 0; it < 100 && cost > 1e-26; ++it) {
    Eigen::MatrixXd J(32, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      Eigen::VectorXd q = x;
      q[j] += 1e-7;
      J.col(j) = (residual(t, target, q) - r) / 1e-7;
    }
    evals += n;
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * r;
    bool improved = false;
    while (lambda < 1e12) {
      Eigen::MatrixXd Ad = A;
      Ad.diagonal().array() += lambda * (1.0 + A.diagonal().array());
      const Eigen::VectorXd q = x + Ad.ldlt().solve(-g);
      const Eigen::VectorXd rq = residual(t, target, q);
      ++evals;
      if (rq.squaredNorm() < cost) {
        x = q;
        r = rq;
        cost = rq.squaredNorm();
        lambda = std::max(lambda / 3, 1e-12);
        improved = true;
        break;
      }
      lambda *= 4;
    }
    if (!improved) break;
  }
}

double fold_kt(double k) { return std::min(k, kPi - k); }

}  // namespace

CandidateTemplate CandidateTemplate::repeated(const C4& gate, int n) {
  CandidateTemplate t;
  t.gates.assign(static_cast<std::size_t>(n), gate);
  return t;
}

SlotKind CandidateTemplate::slot(std::size_t k) const {
  return slots.empty() ? SlotKind::ZYZ : slots.at(k);
}

int CandidateTemplate::n_params() const {
  int n = 0;
  for (std::size_t k = 0; k <= gates.size(); ++k) n += slot_width(slot(k));
  return n;
}

C4 CandidateTemplate::assemble(const std::vector<double>& theta) const {
  if (!slots.empty() && slots.size() != gates.size() + 1)
    throw std::invalid_argument("template needs one slot per gap");
  if (static_cast<int>(theta.size()) != n_params())
    throw std::invalid_argument("wrong parameter count");
  std::size_t off = 0;
  C4 w = slot_matrix(slot(0), theta.data());
  off += static_cast<std::size_t>(slot_width(slot(0)));
  for (std::size_t k = 0; k < gates.size(); ++k) {
    w = gates[k] * w;
    const SlotKind s = slot(k + 1);
    w = slot_matrix(s, theta.data() + off) * w;
    off += static_cast<std::size_t>(slot_width(s));
  }
  return w;
}

RefineResult numeric_refine(const CandidateTemplate& tmpl, const C4& target,
                            const RefineOptions& opts) {
  if (opts.budget <= 0) throw std::invalid_argument("numeric_refine: budget must be positive");
  const int n = tmpl.n_params();
  RefineResult best;
  best.distance = std::numeric_limits<double>::infinity();
  auto dist = [&](const Eigen::VectorXd& x) {
    return distance_up_to_phase(tmpl.assemble(std::vector<double>(x.data(), x.data() + x.size())),
                                target);
  };
  if (n == 0) {
    best.distance = distance_up_to_phase(tmpl.assemble({}), target);
    best.evaluations = 1;
    best.restart = 0;
    return best;
  }
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int r = 0; r < std::max(1, opts.restarts); ++r) {
    Eigen::VectorXd x0(n);
    for (int i = 0; i < n; ++i) x0[i] = ang(rng);
    double f = 0;
    Eigen::VectorXd x = nelder_mead(dist, x0, opts.budget, opts.stop_distance, best.evaluations, f);
    if (opts.polish) {
      lm_polish(tmpl, target, x, best.evaluations);
      f = dist(x);
      ++best.evaluations;
    }
    if (f < best.distance) {
      best.distance = f;
      best.theta.assign(x.data(), x.data() + x.size());
      best.restart = r;
    }
    if (best.distance < opts.stop_distance) break;
  }
  return best;
}

std::optional<int> brute_force_min_count(const C4& target, const BasisGate& basis, int n_max,
                                         const BruteOptions& opts) {
  if (locally_equivalent(target, C4::identity(), 1e-9)) return 0;
  auto feasible = [&](int n) {
    return numeric_refine(CandidateTemplate::repeated(basis.matrix, n), target, opts.refine)
               .distance < kFeasibleDistance;
  };
  if (opts.known_feasible) {
    int best = *opts.known_feasible;
    for (int n = best - 1; n >= 1; --n) {
      if (!feasible(n)) break;
      best = n;
    }
    return best;
  }
  for (int n = 1; n <= n_max; ++n)
    if (feasible(n)) return n;
  return std::nullopt;
}

IdentityCheck verify_identity(const GateSeq& lhs, const GateSeq& rhs, double tol) {
  IdentityCheck c;
  c.distance = distance_up_to_phase(product(lhs), product(rhs));
  c.ok = c.distance <= tol;
  return c;
}

double singular_value_gap(const C4& u) {
  const C4 s = su_normalize(u).first;
  const KakFactorization k = kak_decompose(s);
  // s = phase * locals * A(c) * locals with SU(2) locals; phase is a 4th root of 1.
  const bool imaginary_phase = std::abs(k.global_phase.imag()) > std::abs(k.global_phase.real());
  const C4& M = gates::M();
  const C4 ub = adjoint(M) * s * M;
  Eigen::Matrix4d part;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) part(i, j) = imaginary_phase ? ub(i, j).real() : ub(i, j).imag();
  Eigen::Vector4d sv = Eigen::JacobiSVD<Eigen::Matrix4d>(part).singularValues();
  std::sort(sv.data(), sv.data() + 4);
  const double x = k.coord.x, y = k.coord.y, z = k.coord.z;
  std::array<double, 4> eta{x - y + z, x + y - z, -x - y - z, -x + y + z};
  std::array<double, 4> want{};
  for (int i = 0; i < 4; ++i) want[static_cast<std::size_t>(i)] = std::abs(std::sin(eta[static_cast<std::size_t>(i)]));
  std::sort(want.begin(), want.end());
  double gap = 0;
  for (int i = 0; i < 4; ++i) gap = std::max(gap, std::abs(sv[i] - want[static_cast<std::size_t>(i)]));
  return gap;
}

bool check_singular_values(const C4& u, double tol) { return singular_value_gap(u) <= tol; }

bool check_triangle_inequality(const C4& u, double theta, int trials, std::uint64_t seed,
                               double slack) {
  const double r = fold_kt(k_t(u));
  if (r > kPi / 4 + 1e-12 || theta <= 0 || theta >= kPi / 4)
    throw std::invalid_argument("check_triangle_inequality: precondition violated");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  auto local = [&] {
    return kron(from_zyz({ang(rng), ang(rng), ang(rng)}), from_zyz({ang(rng), ang(rng), ang(rng)}));
  };
  const C4 da = canonical_gate(theta, 0, 0);
  const double bound = std::cos(r - theta) + slack;
  for (int i = 0; i < trials; ++i) {
    const C4 v = u * local() * da * local();
    if (std::abs(std::cos(k_t(v))) > bound) return false;
  }
  return true;
}

}  // namespace cartan
