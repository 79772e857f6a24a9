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

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "snbcert/circuit.hpp"
#include "snbcert/decomposition.hpp"
#include "snbcert/game.hpp"
#include "snbcert/io.hpp"
#include "snbcert/witnesses.hpp"

namespace {

using namespace snbcert;

constexpr int kExitCertified = 0;
constexpr int kExitError = 1;
constexpr int kExitInconclusive = 2;

unsigned thread_cap() {
  if (const char* env = std::getenv("SNBCERT_THREADS")) {
    const long v = std::atol(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return 1;
}

std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

struct ChannelArgs {
  std::string family;
  std::string kraus_file;
  std::string choi_file;
  double lambda = 0.0;
  Eigen::Index d = 3;

  void add_to(CLI::App& cmd, bool with_lambda = true) {
    cmd.add_option("--family", family,
                   "Built-in channel family: depolarizing|dephasing");
    cmd.add_option("--kraus", kraus_file, "Channel JSON file (kraus form)");
    cmd.add_option("--choi", choi_file, "Channel JSON file (choi form)");
    cmd.add_option("--d", d, "Local dimension for built-in families");
    if (with_lambda)
      cmd.add_option("--lambda", lambda, "Noise parameter for built-in families");
  }

  KrausChannel build(double lam) const {
    if (!kraus_file.empty()) return channel_from_json(load_json(kraus_file)).as_kraus();
    if (!choi_file.empty()) return channel_from_json(load_json(choi_file)).as_kraus();
    if (family == "depolarizing") return depolarizing(d, lam);
    if (family == "dephasing") return dephasing(d, lam);
    throw std::runtime_error(
        "no channel given: use --family depolarizing|dephasing, --kraus FILE "
        "or --choi FILE");
  }

  KrausChannel build() const { return build(lambda); }

  bool from_file() const { return !kraus_file.empty() || !choi_file.empty(); }
};

struct SampleArgs {
  std::string mode = "exact";
  std::uint64_t shots = 100000;
  std::optional<std::uint64_t> seed;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--mode", mode, "exact|sampled")
        ->check(CLI::IsMember({"exact", "sampled"}));
    cmd.add_option("--shots", shots, "Shot count for sampled mode");
    cmd.add_option("--seed", seed, "RNG seed (mandatory in sampled mode)");
  }

  CertifyOptions options() const {
    CertifyOptions opt;
    if (mode == "sampled") {
      if (!seed)
        throw std::runtime_error("--seed is mandatory in sampled mode");
      opt.sampled = true;
      opt.shots = shots;
      opt.seed = *seed;
      opt.workers = thread_cap();
    }
    return opt;
  }
};

std::ostream& open_out(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

int cmd_certify(const ChannelArgs& ch_args, const SampleArgs& s_args,
                Eigen::Index k, const std::string& out_path) {
  KrausChannel ch = ch_args.build();
  GameResult res = certify(ch, k, ch.d_in, s_args.options());
  Json report = result_to_json(res);
  report["k"] = k;
  report["d"] = ch.d_in;
  std::ofstream file;
  open_out(file, out_path) << report.dump() << "\n";
  return res.verdict == Verdict::certified_non_k_snb ? kExitCertified
                                                     : kExitInconclusive;
}

int cmd_sweep(const ChannelArgs& ch_args, const SampleArgs& s_args,
              Eigen::Index k, const std::string& grid_spec,
              const std::string& out_path) {
  double start = 0.0, stop = 1.0, step = 0.01;
  if (!grid_spec.empty()) {
    if (std::sscanf(grid_spec.c_str(), "%lf:%lf:%lf", &start, &stop, &step) != 3)
      throw std::runtime_error("--lambda-grid expects start:stop:step");
  }
  if (step <= 0.0 || stop < start)
    throw std::runtime_error("lambda grid is empty or step <= 0");
  if (!ch_args.from_file() && (start < 0.0 || stop > 1.0))
    throw std::runtime_error("lambda bounds must lie in [0,1]");

  // The game for W_k in the spanning basis, built once; the channel varies.
  const Eigen::Index d = ch_args.d;
  Witness w = optimal_sn_witness(d, k);
  StateBasis basis = spanning_state_basis(d);
  ProductDecomposition pd = decompose_witness(w.matrix, basis, basis);
  GameSpec spec = GameSpec::from_decomposition(pd);
  CertifyOptions opt = s_args.options();

  std::ofstream file;
  std::ostream& out = open_out(file, out_path);
  out << "lambda,k,exact_payoff,estimate,stderr,verdict\n";
  const int steps = static_cast<int>((stop - start) / step + 0.5);
  for (int i = 0; i <= steps; ++i) {
    const double lam = start + i * step;
    if (lam > stop + 1e-12) break;
    KrausChannel ch = ch_args.build(lam);
    GameResult res;
    if (opt.sampled) {
      res = sample_game(spec, ch, opt.shots,
                        detail::derive_seed(opt.seed, static_cast<std::uint64_t>(i)),
                        opt.workers);
    } else {
      res.exact_payoff = exact_payoff(spec, ch);
      if (res.exact_payoff < -kVerdictEpsilon)
        res.verdict = Verdict::certified_non_k_snb;
    }
    out << fmt12(lam) << ',' << k << ',' << fmt12(res.exact_payoff) << ','
        << (res.estimate ? fmt12(*res.estimate) : "") << ','
        << (res.stderr_ ? fmt12(*res.stderr_) : "") << ','
        << to_string(res.verdict) << "\n";
  }
  return kExitCertified;
}

int cmd_decompose(const std::string& builtin, const std::string& witness_file,
                  const std::string& basis_spec, const std::string& out_path) {
  Witness w;
  if (!witness_file.empty()) {
    w = witness_from_json(load_json(witness_file));
  } else if (builtin == "w2opt-d3") {
    w = optimal_sn_witness(3, 2);
  } else if (builtin == "w1-d3") {
    w = optimal_sn_witness(3, 1);
  } else {
    throw std::runtime_error(
        "unknown witness: use --builtin w2opt-d3|w1-d3 or --witness FILE");
  }
  StateBasis basis = (basis_spec.empty() || basis_spec == "default")
                         ? spanning_state_basis(w.d)
                         : basis_from_json(load_json(basis_spec).at("states"));
  ProductDecomposition pd = decompose_witness(w.matrix, basis, basis);
  std::ofstream file;
  open_out(file, out_path) << decomposition_to_json(pd).dump() << "\n";
  std::cerr << "reconstruction residual: " << fmt12(pd.residual) << "\n";
  return kExitCertified;
}

int cmd_simulate(const ChannelArgs& ch_args, Eigen::Index k,
                 std::uint64_t shots, std::optional<std::uint64_t> seed,
                 const std::string& out_path) {
  if (!seed) throw std::runtime_error("--seed is mandatory for simulate");
  KrausChannel ch = ch_args.build();
  CertifyOptions opt{true, shots, *seed, thread_cap()};
  GameResult res = certify(ch, k, ch.d_in, opt);
  Json line = result_to_json(res);
  line["k"] = k;
  line["seed"] = *seed;
  std::ofstream file;
  open_out(file, out_path) << line.dump() << "\n";
  return res.verdict == Verdict::certified_non_k_snb ? kExitCertified
                                                     : kExitInconclusive;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "snbcert: certify that a quantum channel preserves entanglement "
      "dimensionality above k via a semi-quantum signaling game"};
  app.require_subcommand(1);

  ChannelArgs cert_ch, sweep_ch, sim_ch;
  SampleArgs cert_s, sweep_s;
  Eigen::Index cert_k = 2, sweep_k = 2, sim_k = 2;
  std::string cert_out, sweep_out, dec_out, sim_out;
  std::string grid_spec, builtin, witness_file, basis_spec = "default";
  std::uint64_t sim_shots = 100000;
  std::optional<std::uint64_t> sim_seed;

  auto* certify_cmd =
      app.add_subcommand("certify", "Certify one channel (one-sided test)");
  cert_ch.add_to(*certify_cmd);
  cert_s.add_to(*certify_cmd);
  certify_cmd->add_option("--k", cert_k, "Schmidt number threshold");
  certify_cmd->add_option("--out", cert_out, "Output path (default stdout)");

  auto* sweep_cmd =
      app.add_subcommand("sweep", "Sweep a noise parameter, emit CSV");
  sweep_ch.add_to(*sweep_cmd, false);
  sweep_s.add_to(*sweep_cmd);
  sweep_cmd->add_option("--k", sweep_k, "Schmidt number threshold");
  sweep_cmd->add_option("--lambda-grid", grid_spec, "start:stop:step");
  sweep_cmd->add_option("--out", sweep_out, "CSV output path");

  auto* dec_cmd =
      app.add_subcommand("decompose", "Decompose a witness into product states");
  dec_cmd->add_option("--builtin", builtin, "w2opt-d3|w1-d3");
  dec_cmd->add_option("--witness", witness_file, "Witness JSON file");
  dec_cmd->add_option("--basis", basis_spec, "default|FILE");
  dec_cmd->add_option("--out", dec_out, "Output path (default stdout)");

  auto* sim_cmd =
      app.add_subcommand("simulate", "Finite-shot game simulation (JSON lines)");
  sim_ch.add_to(*sim_cmd);
  sim_cmd->add_option("--k", sim_k, "Schmidt number threshold");
  sim_cmd->add_option("--shots", sim_shots, "Shot count");
  sim_cmd->add_option("--seed", sim_seed, "RNG seed (mandatory)");
  sim_cmd->add_option("--out", sim_out, "Output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (certify_cmd->parsed())
      return cmd_certify(cert_ch, cert_s, cert_k, cert_out);
    if (sweep_cmd->parsed())
      return cmd_sweep(sweep_ch, sweep_s, sweep_k, grid_spec, sweep_out);
    if (dec_cmd->parsed())
      return cmd_decompose(builtin, witness_file, basis_spec, dec_out);
    if (sim_cmd->parsed())
      return cmd_simulate(sim_ch, sim_k, sim_shots, sim_seed, sim_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
