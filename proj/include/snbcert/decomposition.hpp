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
#include <stdexcept>
#include <vector>

#include "snbcert/linalg.hpp"
#include "snbcert/witnesses.hpp"

namespace snbcert {

/// d^2 pure states spanning the operator space on C^d.
struct StateBasis {
  std::vector<Matrix> states;  // rank-1 density matrices
  Eigen::Index d = 0;

  /// Gram matrix of Hilbert-Schmidt inner products; its condition number
  /// diagnoses (near-)dependence of the basis.
  Eigen::MatrixXd gram() const {
    const auto n = static_cast<Eigen::Index>(states.size());
    Eigen::MatrixXd g(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = 0; b < n; ++b)
        g(a, b) = (states[a] * states[b]).trace().real();
    return g;
  }

  double condition_number() const {
    Eigen::JacobiSVD<Eigen::MatrixXd> s(gram());
    return s.singularValues()(0) /
           s.singularValues()(s.singularValues().size() - 1);
  }
};

/// The d^2 spanning states: computational basis states, the real equal
/// superpositions (|i>+|j>)/sqrt(2) for i<j, then the i-phase superpositions
/// (|i>+i|j>)/sqrt(2) for i<j. At d=3 these are the nine qutrit states of the
/// witness decomposition, in their canonical order.
inline StateBasis spanning_state_basis(Eigen::Index d) {
  StateBasis basis;
  basis.d = d;
  auto ket = [&](Eigen::Index i) {
    Vector v = Vector::Zero(d);
    v(i) = 1.0;
    return v;
  };
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < d; ++i) basis.states.push_back(projector(ket(i)));
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j)
      basis.states.push_back(projector(s * (ket(i) + ket(j))));
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j)
      basis.states.push_back(
          projector(s * (ket(i) + Complex(0.0, 1.0) * ket(j))));
  return basis;
}

inline StateBasis paper_qutrit_basis() { return spanning_state_basis(3); }

/// Two families of pure product states plus the real coefficient matrix gamma
/// with W = sum_xy gamma_xy (xi^x (x) zeta^y).
struct ProductDecomposition {
  StateBasis basis_a;
  StateBasis basis_b;
  Eigen::MatrixXd gamma;  // d^2 x d^2
  double residual = 0.0;
  double basis_condition = 0.0;

  Matrix reconstruct() const {
    const Eigen::Index n = basis_a.d * basis_b.d;
    Matrix w = Matrix::Zero(n, n);
    for (Eigen::Index x = 0; x < gamma.rows(); ++x)
      for (Eigen::Index y = 0; y < gamma.cols(); ++y)
        w += gamma(x, y) * kron(basis_a.states[x], basis_b.states[y]);
    return w;
  }
};

namespace detail {

/// Real coordinates of a Hermitian n x n matrix: diagonal, then real and
/// imaginary parts of the upper triangle. Length n^2.
inline Eigen::VectorXd hermitian_coords(const Matrix& m) {
  const Eigen::Index n = m.rows();
  Eigen::VectorXd v(n * n);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < n; ++i) v(idx++) = m(i, i).real();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      v(idx++) = m(i, j).real();
      v(idx++) = m(i, j).imag();
    }
  return v;
}

}  // namespace detail

/// Unique gamma solving W = sum gamma_xy (xi^x (x) zeta^y) over the given
/// product basis, via the real d^4 x d^4 linear system in Hermitian
/// coordinates. Refuses ill-conditioned bases.
inline ProductDecomposition decompose_witness(
    const Matrix& w, const StateBasis& basis_a, const StateBasis& basis_b,
    double cond_limit = 1e8) {
  const Eigen::Index da = basis_a.d, db = basis_b.d;
  const Eigen::Index na = static_cast<Eigen::Index>(basis_a.states.size());
  const Eigen::Index nb = static_cast<Eigen::Index>(basis_b.states.size());
  if (na != da * da || nb != db * db)
    throw std::invalid_argument("decompose_witness: basis must have d^2 states");
  if (w.rows() != da * db || w.cols() != da * db)
    throw std::invalid_argument("decompose_witness: dimension mismatch");
  if (!is_hermitian(w))
    throw std::invalid_argument("decompose_witness: witness not Hermitian");

  const Eigen::Index n = na * nb;
  Eigen::MatrixXd system(n, n);
  for (Eigen::Index x = 0; x < na; ++x)
    for (Eigen::Index y = 0; y < nb; ++y)
      system.col(x * nb + y) =
          detail::hermitian_coords(kron(basis_a.states[x], basis_b.states[y]));

  Eigen::JacobiSVD<Eigen::MatrixXd> svd_sys(
      system, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double cond = svd_sys.singularValues()(0) /
                      svd_sys.singularValues()(n - 1);
  if (!(cond < cond_limit))
    throw std::runtime_error(
        "decompose_witness: product basis is singular or ill-conditioned "
        "(condition number " + std::to_string(cond) + ")");

  Eigen::VectorXd gamma_flat = svd_sys.solve(detail::hermitian_coords(w));

  ProductDecomposition pd;
  pd.basis_a = basis_a;
  pd.basis_b = basis_b;
  pd.basis_condition = cond;
  pd.gamma = Eigen::MatrixXd(na, nb);
  for (Eigen::Index x = 0; x < na; ++x)
    for (Eigen::Index y = 0; y < nb; ++y) pd.gamma(x, y) = gamma_flat(x * nb + y);
  pd.residual = (pd.reconstruct() - w).cwiseAbs().maxCoeff();
  if (pd.residual > 1e-9)
    throw std::runtime_error("decompose_witness: reconstruction residual " +
                             std::to_string(pd.residual));
  return pd;
}

/// Element-wise computational-basis transposes of the decomposition states:
/// the game's trusted inputs psi^x = (xi^x)^T, phi^y = (zeta^y)^T.
inline std::pair<std::vector<Matrix>, std::vector<Matrix>>
game_inputs_from_decomposition(const ProductDecomposition& pd) {
  std::vector<Matrix> a, b;
  a.reserve(pd.basis_a.states.size());
  b.reserve(pd.basis_b.states.size());
  for (const auto& s : pd.basis_a.states) a.push_back(s.transpose());
  for (const auto& s : pd.basis_b.states) b.push_back(s.transpose());
  return {std::move(a), std::move(b)};
}

/// Extracts the state vector of a rank-1 density matrix, phase-normalized.
inline Vector pure_state_vector(const Matrix& rho, double tol = 1e-9) {
  EigResult e = eig_hermitian(rho);
  if (std::abs(e.values(0) - 1.0) > tol ||
      (e.values.size() > 1 && std::abs(e.values(1)) > tol))
    throw std::invalid_argument("pure_state_vector: state is not pure");
  return normalize_phase(e.vectors.col(0));
}

/// Preparation unitaries with U|0> equal to each state vector; the remaining
/// columns come from Gram-Schmidt against the computational basis in order.
inline std::vector<Matrix> prep_unitaries(const std::vector<Matrix>& states) {
  std::vector<Matrix> out;
  out.reserve(states.size());
  for (const auto& rho : states) {
    const Eigen::Index d = rho.rows();
    Vector first = pure_state_vector(rho);
    Matrix u(d, d);
    u.col(0) = first;
    Eigen::Index next = 1;
    for (Eigen::Index e = 0; e < d && next < d; ++e) {
      Vector cand = Vector::Zero(d);
      cand(e) = 1.0;
      for (Eigen::Index c = 0; c < next; ++c)
        cand -= (u.col(c).adjoint() * cand)(0, 0) * u.col(c);
      if (cand.norm() > 1e-8) {
        u.col(next++) = cand.normalized();
      }
    }
    if (next != d)
      throw std::runtime_error("prep_unitaries: completion failed");
    out.push_back(std::move(u));
  }
  return out;
}

}  // namespace snbcert
