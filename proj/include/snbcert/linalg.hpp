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

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

namespace snbcert {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Default tolerance for predicate checks (Hermitian, unitary, positive).
/// Two orders of magnitude above accumulated round-off at dimension 81.
inline constexpr double kDefaultTol = 1e-9;

/// Ordered list of subsystem dimensions. The leftmost factor of a Kronecker
/// product is the slowest-varying index; this convention is fixed here and
/// used everywhere.
struct DimSpec {
  std::vector<Eigen::Index> factors;

  DimSpec(std::initializer_list<Eigen::Index> f) : factors(f) { check(); }
  explicit DimSpec(std::vector<Eigen::Index> f) : factors(std::move(f)) {
    check();
  }

  Eigen::Index total() const {
    Eigen::Index p = 1;
    for (auto f : factors) p *= f;
    return p;
  }

  std::size_t size() const { return factors.size(); }

 private:
  void check() const {
    if (factors.empty())
      throw std::invalid_argument("DimSpec: at least one factor required");
    for (auto f : factors)
      if (f < 2) throw std::invalid_argument("DimSpec: factors must be >= 2");
  }
};

inline bool is_hermitian(const Matrix& m, double tol = kDefaultTol) {
  return m.rows() == m.cols() &&
         (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_unitary(const Matrix& m, double tol = kDefaultTol) {
  if (m.rows() != m.cols()) return false;
  Matrix g = m.adjoint() * m;
  g -= Matrix::Identity(m.rows(), m.cols());
  return g.cwiseAbs().maxCoeff() <= tol;
}

/// Kronecker product; returns a Vector when both arguments are
/// compile-time column vectors, a Matrix otherwise.
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a_in,
          const Eigen::MatrixBase<DerivedB>& b_in) {
  if constexpr (DerivedA::ColsAtCompileTime == 1 &&
                DerivedB::ColsAtCompileTime == 1) {
    const Vector a = a_in, b = b_in;
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
      out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
  } else {
    const Matrix a = a_in, b = b_in;
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j)
        out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
            a(i, j) * b;
    return out;
  }
}

namespace detail {

// Decomposes a flat index into per-factor digits (leftmost slowest).
inline void to_digits(Eigen::Index idx, const DimSpec& dims,
                      std::vector<Eigen::Index>& digits) {
  for (std::size_t s = dims.size(); s-- > 0;) {
    digits[s] = idx % dims.factors[s];
    idx /= dims.factors[s];
  }
}

inline Eigen::Index from_digits(const std::vector<Eigen::Index>& digits,
                                const DimSpec& dims) {
  Eigen::Index idx = 0;
  for (std::size_t s = 0; s < dims.size(); ++s)
    idx = idx * dims.factors[s] + digits[s];
  return idx;
}

}  // namespace detail

/// Reduced operator on the subsystems listed in `keep` (indices into
/// dims.factors, strictly increasing). Trace is preserved.
inline Matrix partial_trace(const Matrix& m, const DimSpec& dims,
                            const std::vector<int>& keep) {
  if (m.rows() != m.cols() || m.rows() != dims.total())
    throw std::invalid_argument("partial_trace: dimension mismatch");
  const std::size_t n = dims.size();
  std::vector<bool> kept(n, false);
  Eigen::Index d_keep = 1, d_trace = 1;
  for (int s : keep) {
    if (s < 0 || static_cast<std::size_t>(s) >= n)
      throw std::invalid_argument("partial_trace: keep index out of range");
    kept[s] = true;
  }
  std::vector<std::size_t> kept_pos, traced_pos;
  for (std::size_t s = 0; s < n; ++s) {
    if (kept[s]) {
      d_keep *= dims.factors[s];
      kept_pos.push_back(s);
    } else {
      d_trace *= dims.factors[s];
      traced_pos.push_back(s);
    }
  }

  Matrix out = Matrix::Zero(d_keep, d_keep);
  std::vector<Eigen::Index> row(n), col(n);
  // Enumerate kept (r, c) pairs and sum over the traced diagonal.
  for (Eigen::Index r = 0; r < d_keep; ++r) {
    for (Eigen::Index c = 0; c < d_keep; ++c) {
      Complex acc = 0.0;
      for (Eigen::Index t = 0; t < d_trace; ++t) {
        Eigen::Index rr = r, cc = c, tt = t;
        for (std::size_t s = kept_pos.size(); s-- > 0;) {
          row[kept_pos[s]] = rr % dims.factors[kept_pos[s]];
          rr /= dims.factors[kept_pos[s]];
        }
        for (std::size_t s = traced_pos.size(); s-- > 0;) {
          row[traced_pos[s]] = tt % dims.factors[traced_pos[s]];
          tt /= dims.factors[traced_pos[s]];
        }
        cc = c;
        for (std::size_t s = kept_pos.size(); s-- > 0;) {
          col[kept_pos[s]] = cc % dims.factors[kept_pos[s]];
          cc /= dims.factors[kept_pos[s]];
        }
        for (std::size_t s = 0; s < traced_pos.size(); ++s)
          col[traced_pos[s]] = row[traced_pos[s]];
        acc += m(detail::from_digits(row, dims), detail::from_digits(col, dims));
      }
      out(r, c) = acc;
    }
  }
  return out;
}

/// Transpose on the designated factor of a bipartite operator.
inline Matrix partial_transpose(const Matrix& m, const DimSpec& dims,
                                int subsystem) {
  if (dims.size() != 2)
    throw std::invalid_argument("partial_transpose: bipartite dims required");
  if (m.rows() != m.cols() || m.rows() != dims.total())
    throw std::invalid_argument("partial_transpose: dimension mismatch");
  if (subsystem != 0 && subsystem != 1)
    throw std::invalid_argument("partial_transpose: subsystem must be 0 or 1");
  const Eigen::Index da = dims.factors[0], db = dims.factors[1];
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j)
      for (Eigen::Index k = 0; k < db; ++k)
        for (Eigen::Index l = 0; l < db; ++l) {
          if (subsystem == 0)
            out(j * db + k, i * db + l) = m(i * db + k, j * db + l);
          else
            out(i * db + l, j * db + k) = m(i * db + k, j * db + l);
        }
  return out;
}

struct EigResult {
  RealVector values;  // descending
  Matrix vectors;     // columns, matching order
};

/// Spectrum of a Hermitian matrix, eigenvalues descending.
inline EigResult eig_hermitian(const Matrix& m, double tol = kDefaultTol) {
  if (!is_hermitian(m, tol))
    throw std::invalid_argument("eig_hermitian: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver failed");
  const Eigen::Index n = m.rows();
  EigResult res;
  res.values = solver.eigenvalues().reverse();
  res.vectors = solver.eigenvectors().rowwise().reverse();
  (void)n;
  return res;
}

inline bool is_psd(const Matrix& m, double tol = kDefaultTol) {
  if (!is_hermitian(m, tol)) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  return solver.eigenvalues().minCoeff() >= -tol;
}

struct SvdResult {
  RealVector singular_values;  // descending
  Matrix u;
  Matrix v;  // m = u * diag(s) * v.adjoint()
};

inline SvdResult svd(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> solver(m,
                                  Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {solver.singularValues(), solver.matrixU(), solver.matrixV()};
}

/// Fixes the global phase of a state vector so its first amplitude with
/// magnitude above tol is real positive.
inline Vector normalize_phase(const Vector& v, double tol = 1e-12) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > tol) {
      return v * (std::conj(v(i)) / std::abs(v(i)));
    }
  }
  return v;
}

inline Matrix projector(const Vector& v) { return v * v.adjoint(); }

/// Tr[a b] without forming the product.
inline Complex trace_product(const Matrix& a, const Matrix& b) {
  return a.transpose().cwiseProduct(b).sum();
}

/// Complex standard-Gaussian matrix.
inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols,
                              std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i)
      m(i, j) = Complex(gauss(rng), gauss(rng));
  return m;
}

/// Haar-random isometry (rows >= cols) via QR of a Gaussian matrix with the
/// R-diagonal phase fix.
inline Matrix haar_isometry(Eigen::Index rows, Eigen::Index cols,
                            std::mt19937_64& rng) {
  if (rows < cols)
    throw std::invalid_argument("haar_isometry: rows must be >= cols");
  Matrix g = gaussian_matrix(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  Matrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < cols; ++j) {
    Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

}  // namespace snbcert
