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
#include <utility>
#include <vector>

#include "snbcert/linalg.hpp"

namespace snbcert {

/// Maximally entangled state (1/sqrt(d)) sum_i |ii> on C^d (x) C^d.
inline Vector max_entangled(Eigen::Index d) {
  if (d < 2) throw std::invalid_argument("max_entangled: d must be >= 2");
  Vector phi = Vector::Zero(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index i = 0; i < d; ++i) phi(i * d + i) = amp;
  return phi;
}

/// A CP map in Kraus form. Trace-preserving instances are channels; CP-only
/// (sub-normalized) instances are first-class, flagged by is_channel().
struct KrausChannel {
  std::vector<Matrix> kraus;
  Eigen::Index d_in = 0;
  Eigen::Index d_out = 0;

  KrausChannel() = default;
  KrausChannel(std::vector<Matrix> ops, Eigen::Index din, Eigen::Index dout)
      : kraus(std::move(ops)), d_in(din), d_out(dout) {
    if (kraus.empty())
      throw std::invalid_argument("KrausChannel: at least one Kraus operator");
    for (const auto& k : kraus)
      if (k.rows() != d_out || k.cols() != d_in)
        throw std::invalid_argument("KrausChannel: operator shape mismatch");
  }

  static KrausChannel identity(Eigen::Index d) {
    return KrausChannel({Matrix::Identity(d, d)}, d, d);
  }

  /// sum_i K_i^dag K_i
  Matrix completeness() const {
    Matrix s = Matrix::Zero(d_in, d_in);
    for (const auto& k : kraus) s += k.adjoint() * k;
    return s;
  }

  /// sum_i K_i^dag K_i == I within tol (trace preservation).
  bool is_channel(double tol = kDefaultTol) const {
    return (completeness() - Matrix::Identity(d_in, d_in))
               .cwiseAbs()
               .maxCoeff() <= tol;
  }

  /// sum_i K_i^dag K_i <= I within tol (valid CP map, possibly sub-normalized).
  bool is_cp_contraction(double tol = kDefaultTol) const {
    Matrix g = Matrix::Identity(d_in, d_in) - completeness();
    Eigen::SelfAdjointEigenSolver<Matrix> es(g);
    return es.eigenvalues().minCoeff() >= -tol;
  }

  Matrix apply(const Matrix& rho) const {
    if (rho.rows() != d_in || rho.cols() != d_in)
      throw std::invalid_argument("KrausChannel::apply: dimension mismatch");
    Matrix out = Matrix::Zero(d_out, d_out);
    for (const auto& k : kraus) out += k * rho * k.adjoint();
    return out;
  }
};

/// Choi operator J = (id (x) E)(|Phi><Phi|), trace-1 normalized for channels.
/// The first factor carries the input copy, the second the channel output.
struct ChoiOperator {
  Matrix matrix;
  Eigen::Index d_in = 0;
  Eigen::Index d_out = 0;

  DimSpec dims() const { return DimSpec{d_in, d_out}; }
};

inline ChoiOperator kraus_to_choi(const KrausChannel& ch) {
  const Eigen::Index d = ch.d_in;
  Vector phi = max_entangled(d);
  Matrix j = Matrix::Zero(d * ch.d_out, d * ch.d_out);
  const Matrix id = Matrix::Identity(d, d);
  for (const auto& k : ch.kraus) {
    Vector v = kron(id, k) * phi;
    j += v * v.adjoint();
  }
  return {std::move(j), ch.d_in, ch.d_out};
}

/// Inverse Choi map. With the trace-1 normalization the textbook formula
/// yields E(rho)/d, so the result is scaled by d_in.
inline Matrix apply_via_choi(const ChoiOperator& j, const Matrix& rho) {
  if (rho.rows() != j.d_in || rho.cols() != j.d_in)
    throw std::invalid_argument("apply_via_choi: dimension mismatch");
  Matrix pre = kron(rho.transpose(), Matrix::Identity(j.d_out, j.d_out));
  Matrix prod = pre * j.matrix;
  return static_cast<double>(j.d_in) *
         partial_trace(prod, j.dims(), {1});
}

/// Kraus set {F_i E_j} of the sequential composition f after e.
inline KrausChannel compose(const KrausChannel& f, const KrausChannel& e) {
  if (e.d_out != f.d_in)
    throw std::invalid_argument("compose: intermediate dimension mismatch");
  std::vector<Matrix> ops;
  ops.reserve(f.kraus.size() * e.kraus.size());
  for (const auto& fi : f.kraus)
    for (const auto& ej : e.kraus) ops.push_back(fi * ej);
  return KrausChannel(std::move(ops), e.d_in, f.d_out);
}

/// Adjoint map {K_i^dag}: Tr[f(rho) sigma] = Tr[rho f*(sigma)].
inline KrausChannel adjoint_map(const KrausChannel& f) {
  std::vector<Matrix> ops;
  ops.reserve(f.kraus.size());
  for (const auto& k : f.kraus) ops.push_back(k.adjoint());
  return KrausChannel(std::move(ops), f.d_out, f.d_in);
}

namespace detail {

/// Heisenberg-Weyl displacement X^a Z^b on C^d.
inline Matrix weyl(Eigen::Index d, Eigen::Index a, Eigen::Index b) {
  Matrix w = Matrix::Zero(d, d);
  const double tau = 2.0 * std::numbers::pi / static_cast<double>(d);
  for (Eigen::Index j = 0; j < d; ++j)
    w((j + a) % d, j) = std::exp(Complex(0.0, tau * static_cast<double>(b * j)));
  return w;
}

}  // namespace detail

/// rho -> (1-lambda) rho + lambda Tr(rho) I/d.
inline KrausChannel depolarizing(Eigen::Index d, double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("depolarizing: lambda outside [0,1]");
  const double dd = static_cast<double>(d * d);
  std::vector<Matrix> ops;
  ops.push_back(std::sqrt(1.0 - lambda + lambda / dd) *
                Matrix::Identity(d, d));
  if (lambda > 0.0) {
    const double w = std::sqrt(lambda / dd);
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b) {
        if (a == 0 && b == 0) continue;
        ops.push_back(w * detail::weyl(d, a, b));
      }
  }
  return KrausChannel(std::move(ops), d, d);
}

/// rho -> (1-lambda) rho + lambda sum_i |i><i| rho |i><i|.
inline KrausChannel dephasing(Eigen::Index d, double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("dephasing: lambda outside [0,1]");
  std::vector<Matrix> ops;
  ops.push_back(std::sqrt(1.0 - lambda) * Matrix::Identity(d, d));
  if (lambda > 0.0) {
    for (Eigen::Index i = 0; i < d; ++i) {
      Matrix p = Matrix::Zero(d, d);
      p(i, i) = std::sqrt(lambda);
      ops.push_back(p);
    }
  }
  return KrausChannel(std::move(ops), d, d);
}

/// Haar-random channel of the given Kraus rank via a random Stinespring
/// isometry; seeded and reproducible.
inline KrausChannel random_channel(Eigen::Index d_in, Eigen::Index d_out,
                                   Eigen::Index kraus_rank,
                                   std::mt19937_64& rng) {
  Matrix v = haar_isometry(d_out * kraus_rank, d_in, rng);
  std::vector<Matrix> ops;
  ops.reserve(kraus_rank);
  for (Eigen::Index e = 0; e < kraus_rank; ++e) {
    Matrix k(d_out, d_in);
    for (Eigen::Index i = 0; i < d_out; ++i) k.row(i) = v.row(i * kraus_rank + e);
    ops.push_back(std::move(k));
  }
  return KrausChannel(std::move(ops), d_in, d_out);
}

inline KrausChannel random_channel(Eigen::Index d_in, Eigen::Index d_out,
                                   Eigen::Index kraus_rank,
                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_channel(d_in, d_out, kraus_rank, rng);
}

/// D o C with C: d -> k and D: k -> d random channels. The Choi operator has
/// Schmidt number <= k by construction.
inline KrausChannel factor_through_k(Eigen::Index d, Eigen::Index k,
                                     std::uint64_t seed) {
  if (k < 1 || k > d)
    throw std::invalid_argument("factor_through_k: k out of range");
  std::mt19937_64 rng(seed);
  KrausChannel down = random_channel(d, k, d * k, rng);
  KrausChannel up = random_channel(k, d, d * k, rng);
  return compose(up, down);
}

/// Random POVM: effects S^{-1/2} G_i S^{-1/2} for random PSD G_i, S = sum G_i.
inline std::vector<Matrix> random_povm(Eigen::Index d, int outcomes,
                                       std::uint64_t seed) {
  if (outcomes < 2)
    throw std::invalid_argument("random_povm: at least two outcomes");
  std::mt19937_64 rng(seed);
  std::vector<Matrix> g(outcomes);
  Matrix s = Matrix::Zero(d, d);
  for (int i = 0; i < outcomes; ++i) {
    Matrix a = gaussian_matrix(d, d, rng);
    g[i] = a * a.adjoint();
    s += g[i];
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(s);
  Matrix inv_sqrt = es.operatorInverseSqrt();
  for (auto& e : g) e = inv_sqrt * e * inv_sqrt;
  return g;
}

}  // namespace snbcert
