// Copyright 2026 The snbcert authors
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

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "snbcert/channels.hpp"
#include "snbcert/game.hpp"
#include "snbcert/linalg.hpp"

namespace snbcert {

/// A one- or two-qudit unitary gate.
struct QuditGate {
  Matrix matrix;
  int arity = 1;
  Eigen::Index d = 2;
};

/// Controlled shift on C^d (x) C^d with the first factor (A, target) shifted
/// by the second (B, control): |i>|j> -> |i + j mod d>|j>.
inline QuditGate controlled_shift(Eigen::Index d) {
  if (d < 2) throw std::invalid_argument("controlled_shift: d >= 2");
  Matrix cx = Matrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j)
      cx(((i + j) % d) * d + j, i * d + j) = 1.0;
  return {std::move(cx), 2, d};
}

/// Qudit Fourier transform: entries (1/sqrt(d)) exp(i 2 pi j k / d).
inline QuditGate qft(Eigen::Index d) {
  if (d < 2) throw std::invalid_argument("qft: d >= 2");
  Matrix f(d, d);
  const double tau = 2.0 * std::numbers::pi / static_cast<double>(d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index k = 0; k < d; ++k)
    for (Eigen::Index j = 0; j < d; ++j)
      f(k, j) = amp * std::exp(Complex(0.0, tau * static_cast<double>(j * k)));
  return {std::move(f), 1, d};
}

/// The circuit's measurement effects, indexed (a, b): rank-1 projectors
/// onto [CX (I_A (x) QFT_B)] |a>|b>. Effect (0,0) is the generalized-Bell
/// projector |Phi><Phi|; B is the control wire.
inline std::vector<Matrix> circuit_povm(Eigen::Index d) {
  Matrix pull = controlled_shift(d).matrix *
                kron(Matrix::Identity(d, d), qft(d).matrix);
  std::vector<Matrix> effects;
  effects.reserve(d * d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b) {
      Vector basis = Vector::Zero(d * d);
      basis(a * d + b) = 1.0;
      effects.push_back(projector(pull * basis));
    }
  return effects;
}

struct CircuitOutcome {
  Eigen::Index a = 0;
  Eigen::Index b = 0;
  double probability = 0.0;
};

/// Density-matrix simulation of the certification circuit: prepare
/// U_A^x|0>, U_B^y|0>, pass the A system through the channel, apply the
/// inverse controlled shift and the inverse QFT on B, read out both wires.
inline std::vector<CircuitOutcome> run_circuit(
    const KrausChannel& ch, std::size_t x, std::size_t y,
    const std::vector<Matrix>& prep_a, const std::vector<Matrix>& prep_b) {
  if (x >= prep_a.size() || y >= prep_b.size())
    throw std::invalid_argument("run_circuit: preparation index out of range");
  const Eigen::Index d = prep_a[x].rows();
  Vector zero = Vector::Zero(d);
  zero(0) = 1.0;
  Matrix psi = projector(Vector(prep_a[x] * zero));
  Matrix phi = projector(Vector(prep_b[y] * zero));
  Matrix rho = kron(ch.apply(psi), phi);
  Matrix inv_cx = controlled_shift(d).matrix.adjoint();
  Matrix inv_qft_b = kron(Matrix::Identity(d, d), qft(d).matrix.adjoint());
  rho = inv_cx * rho * inv_cx.adjoint();
  rho = inv_qft_b * rho * inv_qft_b.adjoint();
  std::vector<CircuitOutcome> out;
  out.reserve(d * d);
  for (Eigen::Index a = 0; a < d; ++a)
    for (Eigen::Index b = 0; b < d; ++b)
      out.push_back({a, b, rho(a * d + b, a * d + b).real()});
  return out;
}

/// The nine reference qutrit preparation unitaries U^1..U^9 with
/// U^x|0> = |psi^x>, the transposed decomposition states.
inline std::vector<Matrix> paper_qutrit_unitaries() {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  std::vector<Matrix> us(9, Matrix::Zero(3, 3));
  us[0] = Matrix::Identity(3, 3);
  us[1] << 0, 1, 0, 1, 0, 0, 0, 0, 1;
  us[2] << 0, 0, 1, 0, 1, 0, 1, 0, 0;
  us[3] << s, s, 0, s, -s, 0, 0, 0, 1;
  us[4] << s, 0, s, 0, 1, 0, s, 0, -s;
  us[5] << 0, 1, 0, s, 0, s, s, 0, -s;
  us[6] << s, s, 0, -i * s, i * s, 0, 0, 0, 1;
  us[7] << s, 0, s, 0, 1, 0, -i * s, 0, i * s;
  us[8] << 0, 1, 0, s, 0, s, -i * s, 0, i * s;
  return us;
}

}  // namespace snbcert
