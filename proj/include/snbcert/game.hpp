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
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "snbcert/channels.hpp"
#include "snbcert/decomposition.hpp"
#include "snbcert/linalg.hpp"
#include "snbcert/witnesses.hpp"

namespace snbcert {

/// Bob's joint measurement: the ideal generalized-Bell projector pair
/// {P_d, I - P_d}, or an arbitrary explicit POVM (outcome 0 carries payoff).
struct MeasurementModel {
  enum class Variant { bell_projector, explicit_povm };

  Variant variant = Variant::bell_projector;
  std::vector<Matrix> effects;  // used for explicit_povm

  static MeasurementModel bell() { return {}; }
  static MeasurementModel povm(std::vector<Matrix> fx) {
    return {Variant::explicit_povm, std::move(fx)};
  }

  std::vector<Matrix> expand(Eigen::Index d) const {
    if (variant == Variant::bell_projector) {
      Matrix p = projector(max_entangled(d));
      return {p, Matrix::Identity(d * d, d * d) - p};
    }
    return effects;
  }
};

/// Full signaling-game configuration: trusted inputs, priors, payoff table
/// for the payoff-bearing outcome b=0 (other outcomes pay zero), measurement.
struct GameSpec {
  std::vector<Matrix> states_a;  // psi^x, fed through the channel
  std::vector<Matrix> states_b;  // phi^y, Bob's second input
  Eigen::VectorXd priors_a;
  Eigen::VectorXd priors_b;
  Eigen::MatrixXd payoff0;  // J(0, x, y); J(b != 0, x, y) = 0
  MeasurementModel measurement;

  Eigen::Index d() const { return states_a.front().rows(); }

  void validate() const {
    if (states_a.empty() || states_b.empty())
      throw std::invalid_argument("GameSpec: empty state families");
    if (priors_a.size() != static_cast<Eigen::Index>(states_a.size()) ||
        priors_b.size() != static_cast<Eigen::Index>(states_b.size()))
      throw std::invalid_argument("GameSpec: prior length mismatch");
    if (priors_a.minCoeff() < 0.0 || priors_b.minCoeff() < 0.0 ||
        std::abs(priors_a.sum() - 1.0) > 1e-12 ||
        std::abs(priors_b.sum() - 1.0) > 1e-12)
      throw std::invalid_argument("GameSpec: priors must be a distribution");
    if (payoff0.rows() != priors_a.size() || payoff0.cols() != priors_b.size())
      throw std::invalid_argument("GameSpec: payoff table shape mismatch");
  }

  /// Game realizing Tr[W J] as average payoff: inputs are transposed basis
  /// states, priors uniform 1/d^2 each, payoff d^4 gamma on outcome 0.
  static GameSpec from_decomposition(const ProductDecomposition& pd) {
    GameSpec spec;
    auto [a, b] = game_inputs_from_decomposition(pd);
    spec.states_a = std::move(a);
    spec.states_b = std::move(b);
    const auto na = static_cast<Eigen::Index>(spec.states_a.size());
    const auto nb = static_cast<Eigen::Index>(spec.states_b.size());
    spec.priors_a = Eigen::VectorXd::Constant(na, 1.0 / na);
    spec.priors_b = Eigen::VectorXd::Constant(nb, 1.0 / nb);
    spec.payoff0 = static_cast<double>(na) * static_cast<double>(nb) * pd.gamma;
    spec.measurement = MeasurementModel::bell();
    return spec;
  }
};

enum class Verdict { certified_non_k_snb, inconclusive };

inline const char* to_string(Verdict v) {
  return v == Verdict::certified_non_k_snb ? "certified_non_k_snb"
                                           : "inconclusive";
}

struct GameResult {
  double exact_payoff = 0.0;
  std::optional<double> estimate;
  std::optional<double> stderr_;
  std::uint64_t shots = 0;
  Verdict verdict = Verdict::inconclusive;
};

inline constexpr double kVerdictEpsilon = 1e-7;

/// p(b | psi, phi) = Tr[(N(psi) (x) phi) Pi^b].
inline Eigen::VectorXd correlation(const KrausChannel& ch, const Matrix& psi,
                                   const Matrix& phi,
                                   const MeasurementModel& meas) {
  Matrix out = kron(ch.apply(psi), phi);
  const auto effects = meas.expand(phi.rows());
  if (effects.empty())
    throw std::invalid_argument("correlation: empty measurement");
  Eigen::VectorXd p(static_cast<Eigen::Index>(effects.size()));
  for (std::size_t b = 0; b < effects.size(); ++b)
    p(static_cast<Eigen::Index>(b)) = trace_product(out, effects[b]).real();
  return p;
}

inline double exact_payoff(const GameSpec& spec, const KrausChannel& ch) {
  spec.validate();
  double total = 0.0;
  for (std::size_t x = 0; x < spec.states_a.size(); ++x) {
    Matrix nx = ch.apply(spec.states_a[x]);
    for (std::size_t y = 0; y < spec.states_b.size(); ++y) {
      Eigen::VectorXd p =
          correlation(KrausChannel::identity(nx.rows()), nx,
                      spec.states_b[y], spec.measurement);
      const auto xi = static_cast<Eigen::Index>(x);
      const auto yi = static_cast<Eigen::Index>(y);
      total += spec.payoff0(xi, yi) * p(0) * spec.priors_a(xi) *
               spec.priors_b(yi);
    }
  }
  return total;
}

/// Payoff when Bob's measurement is replaced by an arbitrary two-outcome
/// POVM; for k-SNB channels this stays non-negative regardless of the POVM.
inline double adversarial_payoff(const GameSpec& spec, const KrausChannel& ch,
                                 const std::vector<Matrix>& povm,
                                 double tol = 1e-10) {
  if (povm.size() != 2)
    throw std::invalid_argument("adversarial_payoff: two-outcome POVM required");
  Matrix sum = povm[0] + povm[1];
  if ((sum - Matrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff() >
      tol)
    throw std::invalid_argument("adversarial_payoff: POVM incomplete");
  GameSpec sub = spec;
  sub.measurement = MeasurementModel::povm(povm);
  return exact_payoff(sub, ch);
}

namespace detail {

// SplitMix64 step; derives decorrelated per-worker seeds.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct ShotMoments {
  double sum = 0.0;
  double sum_sq = 0.0;
};

}  // namespace detail

/// Finite-shot Monte-Carlo run of the game: i.i.d. draws of (x, y) from the
/// priors and b from the exact outcome distribution. Deterministic given
/// (seed, worker count); workers get derived seeds and a fixed merge order.
inline GameResult sample_game(const GameSpec& spec, const KrausChannel& ch,
                              std::uint64_t shots, std::uint64_t seed,
                              unsigned workers = 1) {
  spec.validate();
  if (shots < 1) throw std::invalid_argument("sample_game: shots >= 1");
  if (workers < 1) workers = 1;

  const auto na = spec.states_a.size();
  const auto nb = spec.states_b.size();
  // Joint distribution over (x, y, b) and the payoff per cell, computed once.
  std::vector<double> weights;
  std::vector<double> payoffs;
  for (std::size_t x = 0; x < na; ++x) {
    Matrix nx = ch.apply(spec.states_a[x]);
    for (std::size_t y = 0; y < nb; ++y) {
      Eigen::VectorXd p =
          correlation(KrausChannel::identity(nx.rows()), nx,
                      spec.states_b[y], spec.measurement);
      const double joint = spec.priors_a(static_cast<Eigen::Index>(x)) *
                           spec.priors_b(static_cast<Eigen::Index>(y));
      for (Eigen::Index b = 0; b < p.size(); ++b) {
        weights.push_back(std::max(0.0, p(b)) * joint);
        payoffs.push_back(
            b == 0 ? spec.payoff0(static_cast<Eigen::Index>(x),
                                  static_cast<Eigen::Index>(y))
                   : 0.0);
      }
    }
  }

  auto run_worker = [&](std::uint64_t n, std::uint64_t worker_seed) {
    std::mt19937_64 rng(worker_seed);
    std::discrete_distribution<std::size_t> dist(weights.begin(),
                                                 weights.end());
    detail::ShotMoments m;
    for (std::uint64_t s = 0; s < n; ++s) {
      const double j = payoffs[dist(rng)];
      m.sum += j;
      m.sum_sq += j * j;
    }
    return m;
  };

  std::vector<detail::ShotMoments> partial(workers);
  if (workers == 1) {
    partial[0] = run_worker(shots, detail::derive_seed(seed, 0));
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = shots / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t n = (w == workers - 1) ? shots - chunk * (workers - 1)
                                                 : chunk;
      pool.emplace_back([&, w, n] {
        partial[w] = run_worker(n, detail::derive_seed(seed, w));
      });
    }
    for (auto& t : pool) t.join();
  }

  detail::ShotMoments total;
  for (const auto& m : partial) {
    total.sum += m.sum;
    total.sum_sq += m.sum_sq;
  }

  GameResult res;
  res.shots = shots;
  res.exact_payoff = exact_payoff(spec, ch);
  const double n = static_cast<double>(shots);
  const double mean = total.sum / n;
  res.estimate = mean;
  if (shots >= 2) {
    const double var = std::max(0.0, (total.sum_sq - n * mean * mean) / (n - 1.0));
    res.stderr_ = std::sqrt(var / n);
    if (mean + 5.0 * *res.stderr_ < 0.0)
      res.verdict = Verdict::certified_non_k_snb;
  }
  return res;
}

struct CertifyOptions {
  bool sampled = false;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// End-to-end certification: builds the optimal witness W_k, decomposes it
/// over the spanning state basis, runs the induced game on the channel,
/// and issues the one-sided verdict. Never claims a channel IS k-SNB.
inline GameResult certify(const KrausChannel& ch, Eigen::Index k,
                          Eigen::Index d, const CertifyOptions& opt = {}) {
  Witness w = optimal_sn_witness(d, k);
  StateBasis basis = spanning_state_basis(d);
  ProductDecomposition pd = decompose_witness(w.matrix, basis, basis);
  GameSpec spec = GameSpec::from_decomposition(pd);
  if (opt.sampled) return sample_game(spec, ch, opt.shots, opt.seed, opt.workers);
  GameResult res;
  res.exact_payoff = exact_payoff(spec, ch);
  if (res.exact_payoff < -kVerdictEpsilon)
    res.verdict = Verdict::certified_non_k_snb;
  return res;
}

}  // namespace snbcert
