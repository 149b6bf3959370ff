// Copyright 2026 The dressim Authors
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

#include <random>

#include "dressim/core.hpp"
#include "dressim/model.hpp"

namespace dressim::test {

inline constexpr double kMHz = 1e6;
inline constexpr double kGHz = 1e9;

inline double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

inline CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// Kronecker product written out independently of dressim::kron.
inline CMatrix kron_oracle(const CMatrix& a, const CMatrix& b) {
  CMatrix out = CMatrix::Zero(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      out(i, j) = a(i / b.rows(), j / b.cols()) * b(i % b.rows(), j % b.cols());
    }
  }
  return out;
}

/** Random double-dot parameters in a physically sensible window. */
inline DoubleDotParams random_double_dot(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mhz(-5.0, 5.0);
  std::uniform_real_distribution<double> rabi(5.0, 20.0);
  std::uniform_real_distribution<double> ghz(0.1, 2.0);
  DoubleDotParams p;
  p.delta_nu_1 = mhz(rng) * kMHz;
  p.delta_nu_2 = mhz(rng) * kMHz;
  p.omega_R1 = rabi(rng) * kMHz;
  p.omega_R2 = rabi(rng) * kMHz;
  p.t_c = ghz(rng) * kGHz;
  p.eps = 10.0 * mhz(rng) * kGHz;
  p.U = 1000.0 * kGHz;
  return p;
}

}  // namespace dressim::test
