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

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "snbcert/channels.hpp"
#include "snbcert/decomposition.hpp"
#include "snbcert/game.hpp"
#include "snbcert/witnesses.hpp"

namespace snbcert {

using Json = nlohmann::json;

// Matrix wire format: rows of [re, im] pairs.
inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty())
    throw std::runtime_error("matrix: expected non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(r);
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw std::runtime_error("matrix: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& e = row.at(c);
      if (!e.is_array() || e.size() != 2)
        throw std::runtime_error("matrix: entries must be [re, im] pairs");
      m(r, c) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

/// A loaded channel: Kraus form, or Choi form when only that was supplied.
struct ChannelInput {
  std::optional<KrausChannel> kraus;
  std::optional<ChoiOperator> choi;

  /// Kraus form for simulation; a Choi-only input is converted through its
  /// eigendecomposition.
  KrausChannel as_kraus() const {
    if (kraus) return *kraus;
    const ChoiOperator& j = *choi;
    EigResult e = eig_hermitian(j.matrix);
    std::vector<Matrix> ops;
    const double scale = std::sqrt(static_cast<double>(j.d_in));
    for (Eigen::Index r = 0; r < e.values.size(); ++r) {
      if (e.values(r) <= 1e-12) continue;
      // Column r reshapes to a d_out x d_in operator (input index slow).
      Matrix k(j.d_out, j.d_in);
      for (Eigen::Index a = 0; a < j.d_in; ++a)
        for (Eigen::Index b = 0; b < j.d_out; ++b)
          k(b, a) = e.vectors(a * j.d_out + b, r);
      ops.push_back(std::sqrt(e.values(r)) * scale * k);
    }
    return KrausChannel(std::move(ops), j.d_in, j.d_out);
  }

  ChoiOperator as_choi() const {
    if (choi) return *choi;
    return kraus_to_choi(*kraus);
  }
};

inline Json channel_to_json(const KrausChannel& ch) {
  Json matrices = Json::array();
  for (const auto& k : ch.kraus) matrices.push_back(matrix_to_json(k));
  return {{"kind", "kraus"},
          {"d_in", ch.d_in},
          {"d_out", ch.d_out},
          {"matrices", std::move(matrices)}};
}

inline Json channel_to_json(const ChoiOperator& j) {
  return {{"kind", "choi"},
          {"d_in", j.d_in},
          {"d_out", j.d_out},
          {"matrices", Json::array({matrix_to_json(j.matrix)})}};
}

/// Parses and validates the channel wire format; throws with the name of the
/// violated invariant.
inline ChannelInput channel_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const auto d_in = j.at("d_in").get<Eigen::Index>();
  const auto d_out = j.at("d_out").get<Eigen::Index>();
  if (d_in < 2 || d_out < 2)
    throw std::runtime_error("channel: dimensions must be >= 2");
  const auto& mats = j.at("matrices");
  if (!mats.is_array() || mats.empty())
    throw std::runtime_error("channel: matrices must be a non-empty array");

  if (kind == "kraus") {
    std::vector<Matrix> ops;
    for (const auto& m : mats) ops.push_back(matrix_from_json(m));
    KrausChannel ch(std::move(ops), d_in, d_out);
    if (!ch.is_cp_contraction())
      throw std::runtime_error(
          "channel: kraus completeness violated (sum K^dag K > I)");
    return {std::move(ch), std::nullopt};
  }
  if (kind == "choi") {
    if (mats.size() != 1)
      throw std::runtime_error("channel: choi kind takes exactly one matrix");
    Matrix m = matrix_from_json(mats.at(0));
    if (m.rows() != d_in * d_out || m.cols() != d_in * d_out)
      throw std::runtime_error("channel: choi dimension mismatch");
    if (!is_hermitian(m)) throw std::runtime_error("choi hermiticity violated");
    if (!is_psd(m)) throw std::runtime_error("choi positivity violated");
    if (std::abs(m.trace().real() - 1.0) > kDefaultTol)
      throw std::runtime_error("choi trace normalization violated");
    ChoiOperator choi{std::move(m), d_in, d_out};
    Matrix marg = partial_trace(choi.matrix, choi.dims(), {0});
    if ((marg - Matrix::Identity(d_in, d_in) / static_cast<double>(d_in))
            .cwiseAbs()
            .maxCoeff() > kDefaultTol)
      throw std::runtime_error("choi input-marginal (trace preservation) violated");
    return {std::nullopt, std::move(choi)};
  }
  throw std::runtime_error("channel: unknown kind '" + kind + "'");
}

inline Json witness_to_json(const Witness& w) {
  Json j = {{"d", w.d}, {"matrix", matrix_to_json(w.matrix)}};
  if (w.kind == Witness::Kind::schmidt_number) {
    j["kind"] = "sn";
    j["k"] = w.k;
  } else {
    j["kind"] = "npt";
  }
  return j;
}

inline Witness witness_from_json(const Json& j) {
  Witness w;
  w.d = j.at("d").get<Eigen::Index>();
  w.matrix = matrix_from_json(j.at("matrix"));
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "sn") {
    w.kind = Witness::Kind::schmidt_number;
    w.k = j.at("k").get<Eigen::Index>();
  } else if (kind == "npt") {
    w.kind = Witness::Kind::npt;
  } else {
    throw std::runtime_error("witness: unknown kind '" + kind + "'");
  }
  if (w.matrix.rows() != w.d * w.d || w.matrix.cols() != w.d * w.d)
    throw std::runtime_error("witness: dimension mismatch");
  if (!is_hermitian(w.matrix))
    throw std::runtime_error("witness hermiticity violated");
  return w;
}

inline Json decomposition_to_json(const ProductDecomposition& pd) {
  Json gamma = Json::array();
  for (Eigen::Index x = 0; x < pd.gamma.rows(); ++x) {
    Json row = Json::array();
    for (Eigen::Index y = 0; y < pd.gamma.cols(); ++y)
      row.push_back(pd.gamma(x, y));
    gamma.push_back(std::move(row));
  }
  Json states_a = Json::array(), states_b = Json::array();
  for (const auto& s : pd.basis_a.states) states_a.push_back(matrix_to_json(s));
  for (const auto& s : pd.basis_b.states) states_b.push_back(matrix_to_json(s));
  return {{"gamma", std::move(gamma)},
          {"states_a", std::move(states_a)},
          {"states_b", std::move(states_b)},
          {"residual", pd.residual},
          {"basis_condition", pd.basis_condition}};
}

inline StateBasis basis_from_json(const Json& states) {
  StateBasis b;
  for (const auto& s : states) b.states.push_back(matrix_from_json(s));
  if (b.states.empty()) throw std::runtime_error("basis: empty state list");
  b.d = b.states.front().rows();
  if (static_cast<Eigen::Index>(b.states.size()) != b.d * b.d)
    throw std::runtime_error("basis: expected d^2 states");
  return b;
}

inline Json result_to_json(const GameResult& r) {
  Json j = {{"exact", r.exact_payoff},
            {"shots", r.shots},
            {"verdict", to_string(r.verdict)}};
  if (r.estimate) j["estimate"] = *r.estimate;
  if (r.stderr_) j["stderr"] = *r.stderr_;
  return j;
}

/// Gate-list description of the certification circuit for one (x, y) setting.
inline Json circuit_description(Eigen::Index d) {
  return Json::array({Json{{"kind", "prep_a"}, {"wire", "A"}, {"d", d}},
                      Json{{"kind", "prep_b"}, {"wire", "B"}, {"d", d}},
                      Json{{"kind", "channel"}, {"wire", "A"}},
                      Json{{"kind", "inv_cx"},
                           {"target", "A"},
                           {"control", "B"}},
                      Json{{"kind", "inv_qft_b"}, {"wire", "B"}},
                      Json{{"kind", "measure"}, {"wires", {"A", "B"}}}});
}

}  // namespace snbcert
