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

#include <random>

#include "snbcert/linalg.hpp"

namespace snbcert::test {

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline Matrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  Matrix g = gaussian_matrix(n, n, rng);
  return 0.5 * (g + Matrix(g.adjoint()));
}

inline Matrix random_density(Eigen::Index n, std::mt19937_64& rng) {
  Matrix g = gaussian_matrix(n, n, rng);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline Vector basis_ket(Eigen::Index d, Eigen::Index i) {
  Vector v = Vector::Zero(d);
  v(i) = 1.0;
  return v;
}

/// Random pure bipartite state on C^d (x) C^d with Schmidt rank exactly k,
/// built from random orthonormal k-frames.
inline Vector random_schmidt_rank_k(Eigen::Index d, Eigen::Index k,
                                    std::mt19937_64& rng) {
  Matrix u = haar_isometry(d, k, rng);
  Matrix v = haar_isometry(d, k, rng);
  std::uniform_real_distribution<double> uni(0.1, 1.0);
  Eigen::VectorXd coeff(k);
  for (Eigen::Index r = 0; r < k; ++r) coeff(r) = uni(rng);
  coeff /= coeff.norm();
  Vector psi = Vector::Zero(d * d);
  for (Eigen::Index r = 0; r < k; ++r)
    psi += coeff(r) * kron(Vector(u.col(r)), Vector(v.col(r)));
  return psi.normalized();
}

}  // namespace snbcert::test
