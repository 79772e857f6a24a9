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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "snbcert/channels.hpp"
#include "snbcert/linalg.hpp"

namespace snbcert {

/// A Hermitian bipartite operator certifying channels outside a breaking
/// class: either the Schmidt-number-k class or the NPT-breaking class.
struct Witness {
  enum class Kind { schmidt_number, npt };

  Matrix matrix;          // on C^d (x) C^d
  Kind kind = Kind::schmidt_number;
  Eigen::Index k = 1;     // meaningful for schmidt_number
  Eigen::Index d = 0;     // local dimension
};

struct SchmidtData {
  RealVector coefficients;  // non-increasing, non-negative
  Matrix left_vectors;      // columns |u_i>
  Matrix right_vectors;     // columns |v_i>
  Eigen::Index rank = 0;
};

/// Schmidt decomposition of a bipartite pure state psi on C^dA (x) C^dB.
/// Singular values below 1e-8 x (largest) count as zero for the rank.
inline SchmidtData schmidt_decompose(const Vector& psi, Eigen::Index d_a,
                                     Eigen::Index d_b,
                                     double rel_tol = 1e-8) {
  if (psi.size() != d_a * d_b)
    throw std::invalid_argument("schmidt_decompose: dimension mismatch");
  if (std::abs(psi.norm() - 1.0) > kDefaultTol)
    throw std::invalid_argument("schmidt_decompose: state not normalized");
  // psi_(i*dB + j) = C(i, j); leftmost factor is the slow index.
  Matrix coeff(d_a, d_b);
  for (Eigen::Index i = 0; i < d_a; ++i)
    for (Eigen::Index j = 0; j < d_b; ++j) coeff(i, j) = psi(i * d_b + j);
  SvdResult s = svd(coeff);
  SchmidtData out;
  out.coefficients = s.singular_values;
  out.left_vectors = s.u;
  out.right_vectors = s.v.conjugate();
  const double cutoff = rel_tol * s.singular_values(0);
  out.rank = (s.singular_values.array() > cutoff).count();
  return out;
}

/// W = I - (d/k) P_d with P_d the maximally entangled projector. Negative
/// expectation on a Choi operator certifies Schmidt number > k.
inline Witness optimal_sn_witness(Eigen::Index d, Eigen::Index k) {
  if (k < 1 || k >= d)
    throw std::invalid_argument("optimal_sn_witness: require 1 <= k < d");
  Matrix p = projector(max_entangled(d));
  Matrix w = Matrix::Identity(d * d, d * d) -
             (static_cast<double>(d) / static_cast<double>(k)) * p;
  return {std::move(w), Witness::Kind::schmidt_number, k, d};
}

inline double witness_value(const Witness& w, const ChoiOperator& j,
                            double imag_tol = 1e-10) {
  if (w.matrix.rows() != j.matrix.rows())
    throw std::invalid_argument("witness_value: dimension mismatch");
  Complex t = (w.matrix * j.matrix).trace();
  if (std::abs(t.imag()) > imag_tol)
    throw std::runtime_error(
        "witness_value: imaginary part above tolerance; witness not "
        "Hermitian or Choi invalid");
  return t.real();
}

/// Heuristic minimum of Tr[w sigma] over pure sigma with Schmidt rank <= k.
/// Alternating power iteration on the state with rank-k truncation of the
/// coefficient matrix each step; a falsifier, not a certifier.
inline double max_schmidt_k_overlap(const Matrix& w, Eigen::Index d,
                                    Eigen::Index k, int restarts = 200,
                                    std::uint64_t seed = 0,
                                    int iterations = 20) {
  if (!is_hermitian(w))
    throw std::invalid_argument("max_schmidt_k_overlap: non-Hermitian input");
  std::mt19937_64 rng(seed);
  Eigen::SelfAdjointEigenSolver<Matrix> es(w);
  const double shift = es.eigenvalues().maxCoeff() + 1.0;
  const Matrix iter_op =
      shift * Matrix::Identity(w.rows(), w.cols()) - w;

  auto truncate_rank = [&](Vector psi) {
    Matrix coeff(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) coeff(i, j) = psi(i * d + j);
    Eigen::JacobiSVD<Matrix> s(coeff,
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
    Matrix trunc = Matrix::Zero(d, d);
    for (Eigen::Index r = 0; r < k; ++r)
      trunc += s.singularValues()(r) * s.matrixU().col(r) *
               s.matrixV().col(r).adjoint();
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) psi(i * d + j) = trunc(i, j);
    psi.normalize();
    return psi;
  };

  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Vector psi = gaussian_matrix(d * d, 1, rng).col(0);
    psi = truncate_rank(psi);
    for (int it = 0; it < iterations; ++it)
      psi = truncate_rank(iter_op * psi);
    best = std::min(best, (psi.adjoint() * w * psi)(0, 0).real());
  }
  return best;
}

struct PptResult {
  bool ppt = false;
  double min_eigenvalue = 0.0;
};

/// PPT test on a Choi operator: partial transpose on the output factor.
inline PptResult is_ppt(const ChoiOperator& j, double tol = kDefaultTol) {
  Matrix pt = partial_transpose(j.matrix, j.dims(), 1);
  Eigen::SelfAdjointEigenSolver<Matrix> es(pt);
  const double min_eig = es.eigenvalues().minCoeff();
  return {min_eig >= -tol, min_eig};
}

/// Decomposable witness (|eta><eta|)^{T_B} from the most negative eigenvector
/// of the partial transpose. Requires an NPT input.
inline Witness npt_witness_from_choi(const ChoiOperator& j,
                                     double tol = kDefaultTol) {
  if (j.d_in != j.d_out)
    throw std::invalid_argument("npt_witness_from_choi: square Choi required");
  Matrix pt = partial_transpose(j.matrix, j.dims(), 1);
  Eigen::SelfAdjointEigenSolver<Matrix> es(pt);
  Eigen::Index min_idx = 0;
  es.eigenvalues().minCoeff(&min_idx);
  if (es.eigenvalues()(min_idx) >= -tol)
    throw std::runtime_error(
        "npt_witness_from_choi: Choi is PPT, no witness in this family");
  Vector eta = es.eigenvectors().col(min_idx);
  Matrix w = partial_transpose(projector(eta), j.dims(), 1);
  return {std::move(w), Witness::Kind::npt, 0, j.d_in};
}

}  // namespace snbcert
