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

#include <Eigen/Dense>
#include <algorithm>
#include <random>

#include "cartan/kak.hpp"
#include "cartan/matrix.hpp"

namespace cartan::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Haar measure: QR of a complex Ginibre matrix with the R diagonal phases
// folded back into Q.
template <std::size_t N>
CMat<N> haar(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Matrix<cplx, int(N), int(N)> z;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) z(int(i), int(j)) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::Matrix<cplx, int(N), int(N)>> qr(z);
  Eigen::Matrix<cplx, int(N), int(N)> q = qr.householderQ();
  const auto r = qr.matrixQR();
  for (int j = 0; j < int(N); ++j) {
    const cplx d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  CMat<N> out;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out(i, j) = q(int(i), int(j));
  return out;
}

inline C4 random_su4(Rng& rng) { return su_normalize(haar<4>(rng)).first; }
inline C2 random_su2(Rng& rng) { return su_normalize(haar<2>(rng)).first; }
inline Local random_local(Rng& rng) { return {random_su2(rng), random_su2(rng)}; }

inline CartanCoord random_chamber_point(Rng& rng) {
  double v[3] = {uniform(rng, 0, kPi / 4), uniform(rng, 0, kPi / 4), uniform(rng, 0, kPi / 4)};
  std::sort(v, v + 3, [](double a, double b) { return a > b; });
  CartanCoord c{v[0], v[1], v[2]};
  if (uniform(rng, 0, 1) < 0.5) c.z = -c.z;
  return c;
}

}  // namespace cartan::testing
