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

#include "snbcert/io.hpp"
#include "test_util.hpp"

using namespace snbcert;
using Catch::Matchers::ContainsSubstring;
using test::max_abs_diff;

TEST_CASE("matrix JSON round trip") {
  std::mt19937_64 rng(1);
  Matrix m = gaussian_matrix(4, 3, rng);
  Matrix back = matrix_from_json(matrix_to_json(m));
  CHECK(max_abs_diff(m, back) == 0.0);

  CHECK_THROWS_WITH(matrix_from_json(Json::array()),
                    ContainsSubstring("non-empty"));
  CHECK_THROWS_WITH(matrix_from_json(Json::parse("[[[1,0],[0,0]],[[1,0]]]")),
                    ContainsSubstring("ragged"));
  CHECK_THROWS_WITH(matrix_from_json(Json::parse("[[1,0]]")),
                    ContainsSubstring("[re, im]"));
}

TEST_CASE("kraus channel JSON round trip") {
  std::mt19937_64 rng(7);
  KrausChannel ch = random_channel(3, 3, 4, rng);
  ChannelInput in = channel_from_json(channel_to_json(ch));
  REQUIRE(in.kraus.has_value());
  CHECK(max_abs_diff(kraus_to_choi(*in.kraus).matrix,
                     kraus_to_choi(ch).matrix) <= 1e-14);
}

TEST_CASE("choi channel JSON round trip and kraus conversion") {
  std::mt19937_64 rng(9);
  KrausChannel ch = random_channel(3, 3, 5, rng);
  ChoiOperator j = kraus_to_choi(ch);
  ChannelInput in = channel_from_json(channel_to_json(j));
  REQUIRE(in.choi.has_value());
  CHECK(max_abs_diff(in.choi->matrix, j.matrix) <= 1e-14);

  // Converting a Choi-only input back to Kraus reproduces the channel action.
  KrausChannel rebuilt = in.as_kraus();
  CHECK(rebuilt.is_channel());
  std::mt19937_64 rng2(10);
  for (int t = 0; t < 5; ++t) {
    Matrix rho = test::random_density(3, rng2);
    CHECK(max_abs_diff(rebuilt.apply(rho), ch.apply(rho)) <= 1e-10);
  }
}

TEST_CASE("channel loader reports violated invariants by name") {
  Json bad_kraus = channel_to_json(KrausChannel::identity(2));
  bad_kraus["matrices"][0][0][0][0] = 1.5;  // scale up: sum K^dag K > I
  CHECK_THROWS_WITH(channel_from_json(bad_kraus),
                    ContainsSubstring("completeness"));

  ChoiOperator good = kraus_to_choi(depolarizing(3, 0.5));
  Json j = channel_to_json(good);

  Json bad = j;
  bad["matrices"][0][0][0] = {5.0, 0.0};  // breaks trace and positivity checks
  CHECK_THROWS_AS(channel_from_json(bad), std::runtime_error);

  bad = j;
  bad["matrices"][0][0][1] = {0.0, 1.0};  // asymmetric entry
  CHECK_THROWS_WITH(channel_from_json(bad),
                    ContainsSubstring("hermiticity"));

  bad = j;
  // Swap a diagonal pair to keep the trace but break the input marginal.
  bad["matrices"][0][1][1] = j["matrices"][0][0][0];
  bad["matrices"][0][0][0] = j["matrices"][0][1][1];
  CHECK_THROWS_AS(channel_from_json(bad), std::runtime_error);

  bad = j;
  bad["kind"] = "stinespring";
  CHECK_THROWS_WITH(channel_from_json(bad), ContainsSubstring("unknown kind"));

  bad = j;
  bad["d_in"] = 1;
  CHECK_THROWS_WITH(channel_from_json(bad), ContainsSubstring(">= 2"));
}

TEST_CASE("choi positivity violation is reported") {
  // A valid witness is Hermitian, unit-trace after scaling, but not PSD.
  Matrix w = optimal_sn_witness(3, 2).matrix;
  w /= w.trace().real();
  Json j = {{"kind", "choi"},
            {"d_in", 3},
            {"d_out", 3},
            {"matrices", Json::array({matrix_to_json(w)})}};
  CHECK_THROWS_WITH(channel_from_json(j),
                    ContainsSubstring("positivity violated"));
}

TEST_CASE("witness JSON round trip") {
  Witness w = optimal_sn_witness(3, 2);
  Witness back = witness_from_json(witness_to_json(w));
  CHECK(back.kind == Witness::Kind::schmidt_number);
  CHECK(back.k == 2);
  CHECK(back.d == 3);
  CHECK(max_abs_diff(back.matrix, w.matrix) == 0.0);

  Json j = witness_to_json(w);
  j["matrix"][0][1] = {0.0, 0.5};
  CHECK_THROWS_WITH(witness_from_json(j), ContainsSubstring("hermiticity"));
  j = witness_to_json(w);
  j["d"] = 4;
  CHECK_THROWS_WITH(witness_from_json(j), ContainsSubstring("dimension"));
}

TEST_CASE("decomposition JSON carries gamma, states, and diagnostics") {
  StateBasis basis = paper_qutrit_basis();
  ProductDecomposition pd =
      decompose_witness(optimal_sn_witness(3, 2).matrix, basis, basis);
  Json j = decomposition_to_json(pd);
  CHECK(j.at("gamma").size() == 9);
  CHECK(j.at("states_a").size() == 9);
  CHECK(std::abs(j.at("gamma")[0][0].get<double>() - 0.5) <= 1e-10);
  CHECK(j.at("residual").get<double>() <= 1e-9);
  CHECK(j.at("basis_condition").get<double>() > 1.0);

  StateBasis back = basis_from_json(j.at("states_a"));
  REQUIRE(back.states.size() == 9);
  CHECK(back.d == 3);
  for (std::size_t s = 0; s < 9; ++s)
    CHECK(max_abs_diff(back.states[s], basis.states[s]) == 0.0);

  CHECK_THROWS_WITH(basis_from_json(Json::array()), ContainsSubstring("empty"));
  Json eight = j.at("states_a");
  eight.erase(0);
  CHECK_THROWS_WITH(basis_from_json(eight), ContainsSubstring("d^2"));
}

TEST_CASE("game result JSON") {
  GameResult r;
  r.exact_payoff = -0.5;
  r.shots = 1000;
  r.estimate = -0.49;
  r.stderr_ = 0.01;
  r.verdict = Verdict::certified_non_k_snb;
  Json j = result_to_json(r);
  CHECK(j.at("exact").get<double>() == -0.5);
  CHECK(j.at("shots").get<std::uint64_t>() == 1000);
  CHECK(j.at("verdict").get<std::string>() == "certified_non_k_snb");
  CHECK(j.at("estimate").get<double>() == -0.49);
  CHECK(j.at("stderr").get<double>() == 0.01);
}

TEST_CASE("circuit description lists the gate sequence") {
  Json j = circuit_description(3);
  REQUIRE(j.size() == 6);
  CHECK(j[0].at("kind") == "prep_a");
  CHECK(j[2].at("kind") == "channel");
  CHECK(j[3].at("kind") == "inv_cx");
  CHECK(j[3].at("control") == "B");
  CHECK(j[5].at("kind") == "measure");
}
