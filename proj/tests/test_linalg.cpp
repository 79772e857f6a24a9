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

#include <catch2/catch_amalgamated.hpp>

#include "snbcert/channels.hpp"
#include "snbcert/linalg.hpp"
#include "test_util.hpp"

using namespace snbcert;
using test::basis_ket;
using test::max_abs_diff;
using test::random_density;
using test::random_hermitian;

TEST_CASE("kron of identities and basis projectors") {
  Matrix i2 = Matrix::Identity(2, 2);
  CHECK(max_abs_diff(kron(i2, i2), Matrix::Identity(4, 4)) == 0.0);

  Matrix p0 = projector(basis_ket(2, 0));
  Matrix p1 = projector(basis_ket(2, 1));
  Matrix k = kron(p0, p1);
  Matrix expected = Matrix::Zero(4, 4);
  expected(1, 1) = 1.0;
  CHECK(max_abs_diff(k, expected) == 0.0);
}

TEST_CASE("X (x) X leaves the d=2 maximally entangled vector invariant") {
  Matrix x(2, 2);
  x << 0, 1, 1, 0;
  Vector phi = max_entangled(2);
  CHECK((kron(x, x) * phi - phi).norm() <= 1e-15);
}

TEST_CASE("kron associativity and bilinearity on random inputs") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 10; ++t) {
    Matrix a = gaussian_matrix(2, 3, rng);
    Matrix b = gaussian_matrix(3, 2, rng);
    Matrix c = gaussian_matrix(2, 2, rng);
    CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) <= 1e-12);
    Complex alpha(0.7, -0.3);
    CHECK(max_abs_diff(kron(alpha * a + b.transpose(), c),
                       alpha * kron(a, c) + kron(b.transpose(), c)) <= 1e-12);
  }
}

TEST_CASE("partial trace of maximally entangled projector is maximally mixed") {
  Matrix p3 = projector(max_entangled(3));
  Matrix reduced = partial_trace(p3, DimSpec{3, 3}, {0});
  CHECK(max_abs_diff(reduced, Matrix::Identity(3, 3) / 3.0) <= 1e-15);
}

TEST_CASE("partial trace of a product is the marginal times the trace") {
  std::mt19937_64 rng(5);
  Matrix rho = random_density(3, rng);
  Matrix sigma = random_hermitian(4, rng);
  Matrix m = kron(rho, sigma);
  CHECK(max_abs_diff(partial_trace(m, DimSpec{3, 4}, {0}),
                     sigma.trace() * rho) <= 1e-12);
  CHECK(max_abs_diff(partial_trace(m, DimSpec{3, 4}, {1}),
                     rho.trace() * sigma) <= 1e-12);
}

TEST_CASE("partial trace preserves the full trace") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 10; ++t) {
    Matrix m = random_hermitian(12, rng);
    Matrix r = partial_trace(m, DimSpec{3, 4}, {1});
    CHECK(std::abs((r.trace() - m.trace()).real()) <= 1e-12);
    CHECK(std::abs((r.trace() - m.trace()).imag()) <= 1e-12);
  }
}

TEST_CASE("qutrit depolarizing Choi marginal is maximally mixed for all lambda") {
  Matrix p3 = projector(max_entangled(3));
  for (double lam : {0.0, 0.3, 0.7, 1.0}) {
    Matrix j = (1.0 - lam) * p3 + lam * Matrix::Identity(9, 9) / 9.0;
    CHECK(max_abs_diff(partial_trace(j, DimSpec{3, 3}, {0}),
                       Matrix::Identity(3, 3) / 3.0) <= 1e-12);
  }
}

TEST_CASE("partial transpose of a product stays positive") {
  std::mt19937_64 rng(23);
  Matrix rho = random_density(2, rng);
  Matrix sigma = random_density(3, rng);
  Matrix pt = partial_transpose(kron(rho, sigma), DimSpec{2, 3}, 1);
  CHECK(max_abs_diff(pt, kron(rho, sigma.transpose())) <= 1e-14);
  CHECK(is_psd(pt));
}

TEST_CASE("partial transpose of the Bell projector has eigenvalue -1/2") {
  Matrix p2 = projector(max_entangled(2));
  Matrix pt = partial_transpose(p2, DimSpec{2, 2}, 1);
  EigResult e = eig_hermitian(pt);
  RealVector expected(4);
  expected << 0.5, 0.5, 0.5, -0.5;
  CHECK((e.values - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("partial transpose is an involution, bit-exactly on exact inputs") {
  std::mt19937_64 rng(31);
  Matrix m = random_hermitian(9, rng);
  Matrix twice = partial_transpose(partial_transpose(m, DimSpec{3, 3}, 0),
                                   DimSpec{3, 3}, 0);
  CHECK(max_abs_diff(twice, m) == 0.0);
}

TEST_CASE("eig_hermitian on simple spectra") {
  EigResult id3 = eig_hermitian(Matrix::Identity(3, 3));
  CHECK((id3.values.array() - 1.0).abs().maxCoeff() <= 1e-15);

  EigResult rank1 = eig_hermitian(projector(max_entangled(3)));
  CHECK(std::abs(rank1.values(0) - 1.0) <= 1e-12);
  CHECK(rank1.values.tail(8).cwiseAbs().maxCoeff() <= 1e-12);

  Matrix w2 = Matrix::Identity(9, 9) - 1.5 * projector(max_entangled(3));
  EigResult e = eig_hermitian(w2);
  CHECK(std::abs(e.values(8) - (-0.5)) <= 1e-12);
  CHECK((e.values.head(8).array() - 1.0).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("eig_hermitian reconstructs random Hermitian matrices up to dim 81") {
  std::mt19937_64 rng(41);
  for (Eigen::Index n : {4, 27, 81}) {
    Matrix m = random_hermitian(n, rng);
    EigResult e = eig_hermitian(m);
    Matrix recon = e.vectors * e.values.asDiagonal() *
                   Matrix(e.vectors.adjoint());
    CHECK(max_abs_diff(recon, m) <= 1e-10);
    CHECK(is_unitary(e.vectors, 1e-10));
    for (Eigen::Index i = 1; i < n; ++i) CHECK(e.values(i - 1) >= e.values(i));
  }
}

TEST_CASE("eig_hermitian rejects non-Hermitian input") {
  std::mt19937_64 rng(43);
  Matrix g = gaussian_matrix(4, 4, rng);
  CHECK_THROWS_AS(eig_hermitian(g), std::invalid_argument);
}

TEST_CASE("svd on reshaped pure states") {
  // |00> reshaped to its 2x2 coefficient matrix.
  Matrix product = Matrix::Zero(2, 2);
  product(0, 0) = 1.0;
  SvdResult s = svd(product);
  CHECK(std::abs(s.singular_values(0) - 1.0) <= 1e-15);
  CHECK(std::abs(s.singular_values(1)) <= 1e-15);

  Vector phi = max_entangled(3);
  Matrix coeff(3, 3);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) coeff(i, j) = phi(i * 3 + j);
  SvdResult s3 = svd(coeff);
  CHECK((s3.singular_values.array() - 1.0 / std::sqrt(3.0)).abs().maxCoeff() <=
        1e-12);

  // (|00> + |01> + |10>)/sqrt(3): values frozen from the 2x2 analytic SVD,
  // s^2 solving t^2 - t + 1/9 = 0.
  Matrix c(2, 2);
  c << 1, 1, 1, 0;
  c /= std::sqrt(3.0);
  SvdResult sw = svd(c);
  const double disc = std::sqrt(1.0 - 4.0 / 9.0);
  CHECK(std::abs(sw.singular_values(0) - std::sqrt((1.0 + disc) / 2.0)) <= 1e-12);
  CHECK(std::abs(sw.singular_values(1) - std::sqrt((1.0 - disc) / 2.0)) <= 1e-12);
}

TEST_CASE("svd reconstruction on random matrices") {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 5; ++t) {
    Matrix m = gaussian_matrix(7, 5, rng);
    SvdResult s = svd(m);
    Matrix recon = s.u * s.singular_values.asDiagonal() * Matrix(s.v.adjoint());
    CHECK(max_abs_diff(recon, m) <= 1e-10);
  }
}

TEST_CASE("DimSpec rejects degenerate factors") {
  CHECK_THROWS_AS(DimSpec({3, 1}), std::invalid_argument);
  CHECK_THROWS_AS(partial_trace(Matrix::Identity(4, 4), DimSpec{2, 3}, {0}),
                  std::invalid_argument);
}
