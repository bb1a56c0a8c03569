/*
 * Copyright 2026 The rcsat Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rcsat/bench.hpp"
#include "rcsat/cnf.hpp"
#include "rcsat/constraint_spec.hpp"
#include "rcsat/report.hpp"
#include "rcsat/sampler.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_sigint(int) { g_stop.store(true); }

struct SampleArgs {
  std::string circuit;
  std::string constraints;
  std::string out_dir = "rcsat_out";
  rcsat::SamplerConfig cfg;
  // which flags were set explicitly (file-provided cycle bounds otherwise)
  bool eta_set = false;
  bool min_set = false;
};

struct LoadedProblem {
  rcsat::SequentialCircuit circuit;
  rcsat::OutputConstraint cons;
  rcsat::ConstraintSpec spec;
};

LoadedProblem load_problem(const std::string& circuit_flag, const std::string& constraints_path) {
  LoadedProblem p;
  p.spec = rcsat::load_constraint_spec(constraints_path);
  std::string circuit_path = !circuit_flag.empty() ? circuit_flag : p.spec.circuit_path;
  if (circuit_path.empty())
    throw rcsat::IoError("no circuit given: pass --circuit or a 'circuit =' line in " + constraints_path);
  p.circuit = rcsat::build_circuit(rcsat::parse_bench_file(circuit_path));
  p.cons = rcsat::to_output_constraint(p.spec, p.circuit);
  return p;
}

nlohmann::json config_echo(const rcsat::SamplerConfig& cfg, const std::string& circuit,
                           const std::string& constraints) {
  nlohmann::json j;
  j["circuit"] = circuit;
  j["constraints"] = constraints;
  j["eta"] = cfg.eta;
  j["min_cycles"] = cfg.min_cycles;
  j["iters"] = cfg.iters;
  j["lr"] = cfg.lr;
  j["batch"] = cfg.batch;
  j["threshold"] = cfg.threshold;
  j["seed"] = cfg.seed;
  j["init_scale"] = cfg.init_scale;
  j["noise_std"] = cfg.noise_std;
  j["decay"] = cfg.decay;
  j["threads"] = cfg.threads;
  return j;
}

void write_run_outputs(const std::string& out_dir, const rcsat::SolutionSet& set,
                       const rcsat::RunReport& report) {
  std::filesystem::create_directories(out_dir);
  auto at = [&](const std::string& name) { return (std::filesystem::path(out_dir) / name).string(); };
  rcsat::write_text_atomic(at("solutions.txt"), rcsat::solutions_to_text(set));
  rcsat::write_text_atomic(at("report.json"), report.to_json().dump(2) + "\n");
  rcsat::write_text_atomic(at("per_cycle.csv"), rcsat::per_cycle_csv(report));
  rcsat::write_text_atomic(at("per_iteration.csv"), rcsat::per_iteration_csv(report));
}

void apply_cycle_bounds(SampleArgs& a, const rcsat::ConstraintSpec& spec) {
  if (!a.min_set && spec.min_cycles) a.cfg.min_cycles = *spec.min_cycles;
  if (!a.eta_set && spec.max_cycles) a.cfg.eta = *spec.max_cycles;
}

int cmd_sample(SampleArgs& a) {
  auto p = load_problem(a.circuit, a.constraints);
  apply_cycle_bounds(a, p.spec);

  rcsat::SolutionSet set = rcsat::run_backtracking(p.circuit, p.cons, a.cfg, &g_stop);
  auto report = rcsat::make_report(set, config_echo(a.cfg, a.circuit, a.constraints), a.cfg.iters,
                                   a.cfg.min_cycles, a.cfg.eta);
  write_run_outputs(a.out_dir, set, report);

  if (set.unique_count == 0)
    std::cout << "no solutions up to eta=" << a.cfg.eta << "\n";
  else
    std::cout << "unique solutions: " << set.unique_count << " (" << report.throughput
              << " per second)\n";
  std::cout << "results written to " << a.out_dir << "\n";
  return 0;
}

int cmd_bench(SampleArgs& a, double budget_seconds, std::uint64_t target_solutions) {
  auto p = load_problem(a.circuit, a.constraints);
  apply_cycle_bounds(a, p.spec);

  auto t0 = std::chrono::steady_clock::now();
  rcsat::SolutionSet total;
  std::uint64_t pass = 0;
  // Whole passes keep the solution stream deterministic per seed; the budget
  // is checked between passes.
  while (true) {
    rcsat::SamplerConfig cfg = a.cfg;
    cfg.seed = a.cfg.seed + pass;
    rcsat::SolutionSet one = rcsat::run_backtracking(p.circuit, p.cons, cfg, &g_stop);
    total.attempts += one.attempts;
    total.interrupted = total.interrupted || one.interrupted;
    for (const rcsat::Solution* s : one.all()) rcsat::dedup_merge(total, {*s});
    ++pass;
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (g_stop.load() || one.interrupted) break;
    if (target_solutions > 0 && total.unique_count >= target_solutions) break;
    if (budget_seconds > 0.0 && elapsed >= budget_seconds) break;
    if (target_solutions == 0 && budget_seconds <= 0.0) break;  // single pass
  }
  total.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  auto cfg_json = config_echo(a.cfg, a.circuit, a.constraints);
  cfg_json["budget_seconds"] = budget_seconds;
  cfg_json["target_solutions"] = target_solutions;
  cfg_json["passes"] = pass;
  auto report = rcsat::make_report(total, cfg_json, a.cfg.iters, a.cfg.min_cycles, a.cfg.eta);
  write_run_outputs(a.out_dir, total, report);

  std::cout << "passes: " << pass << " unique: " << total.unique_count << " wall_seconds: "
            << total.wall_seconds << " throughput: " << report.throughput << "\n";
  std::cout << "results written to " << a.out_dir << "\n";
  return 0;
}

int cmd_simulate(const std::string& circuit_path, const std::string& stimulus_path,
                 const std::string& state0) {
  auto circuit = rcsat::build_circuit(rcsat::parse_bench_file(circuit_path));

  std::ifstream f(stimulus_path, std::ios::binary);
  if (!f) throw rcsat::IoError("cannot open stimulus file: " + stimulus_path);
  std::vector<rcsat::BitMatrix> inputs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line.size() != circuit.n)
      throw rcsat::MalformedLineError(line_no, "stimulus width " + std::to_string(line.size()) +
                                                   " != inputs " + std::to_string(circuit.n));
    rcsat::BitMatrix row(1, circuit.n);
    for (std::size_t k = 0; k < circuit.n; ++k) {
      if (line[k] != '0' && line[k] != '1')
        throw rcsat::MalformedLineError(line_no, "stimulus must be 0/1");
      row.at(0, k) = line[k] == '1';
    }
    inputs.push_back(std::move(row));
  }

  rcsat::BitMatrix h0(1, circuit.r, 0);
  if (!state0.empty()) {
    if (state0.size() != circuit.r)
      throw rcsat::DimensionMismatchError("state0 width " + std::to_string(state0.size()) +
                                          " != dffs " + std::to_string(circuit.r));
    for (std::size_t k = 0; k < circuit.r; ++k) h0.at(0, k) = state0[k] == '1';
  }

  auto tr = rcsat::simulate_discrete(circuit, inputs, h0);
  auto bits_of = [](const rcsat::BitMatrix& bm) {
    std::string s;
    for (std::size_t k = 0; k < bm.cols; ++k) s += bm.at(0, k) ? '1' : '0';
    return s;
  };
  std::cout << "state0 " << bits_of(tr.states[0]) << "\n";
  for (std::size_t t = 0; t < inputs.size(); ++t)
    std::cout << "cycle " << (t + 1) << " outputs " << bits_of(tr.outputs[t]) << " state "
              << bits_of(tr.states[t + 1]) << "\n";
  return 0;
}

int cmd_export_cnf(const std::string& circuit_flag, const std::string& constraints_path, int cycles,
                   const std::string& out_path) {
  auto p = load_problem(circuit_flag, constraints_path);
  auto unrolled = rcsat::unroll(p.circuit, cycles);
  auto formula = rcsat::tseitin(p.circuit, unrolled, p.cons);

  std::ostringstream buf;
  rcsat::write_dimacs(formula, buf);
  rcsat::write_text_atomic(out_path, buf.str());
  std::cout << "variables: " << formula.num_vars << " clauses: " << formula.clauses.size() << "\n";
  std::cout << "wrote " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradient-based stimulus sampler for sequential BENCH circuits"};
  app.require_subcommand(1);
  std::signal(SIGINT, on_sigint);

  SampleArgs sa;
  auto add_sampler_flags = [](CLI::App* cmd, SampleArgs& a) {
    cmd->add_option("--circuit", a.circuit, "BENCH netlist path (overrides the constraint file)");
    cmd->add_option("--constraints", a.constraints, "constraint file")->required();
    cmd->add_option("--eta", a.cfg.eta, "max clock cycles")->check(CLI::PositiveNumber);
    cmd->add_option("--min-cycles", a.cfg.min_cycles, "min clock cycles")->check(CLI::PositiveNumber);
    cmd->add_option("--iters", a.cfg.iters, "training iterations per horizon")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--lr", a.cfg.lr, "learning rate")->check(CLI::PositiveNumber);
    cmd->add_option("--batch", a.cfg.batch, "candidate rows per horizon")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", a.cfg.seed, "RNG seed");
    cmd->add_option("--threshold", a.cfg.threshold, "rounding threshold");
    cmd->add_option("--init-scale", a.cfg.init_scale, "init half-width for the logits");
    cmd->add_option("--noise-std", a.cfg.noise_std, "gradient noise std (0 = off)");
    cmd->add_option("--decay", a.cfg.decay, "per-iteration shrink of the logits (0 = off)");
    cmd->add_option("--threads", a.cfg.threads, "batch-row threads")->check(CLI::PositiveNumber);
    cmd->add_option("--out", a.out_dir, "output directory");
  };

  auto* sample = app.add_subcommand("sample", "learn satisfying input sequences");
  add_sampler_flags(sample, sa);

  SampleArgs ba;
  double budget_seconds = 0.0;
  std::uint64_t target_solutions = 0;
  auto* bench = app.add_subcommand("bench", "measure unique-solution throughput");
  add_sampler_flags(bench, ba);
  auto* opt_budget = bench->add_option("--budget-seconds", budget_seconds, "wall-clock budget")
                         ->check(CLI::PositiveNumber);
  auto* opt_target =
      bench->add_option("--target-solutions", target_solutions, "stop after this many unique solutions")
          ->check(CLI::PositiveNumber);

  std::string sim_circuit, sim_stimulus, sim_state0;
  auto* simulate = app.add_subcommand("simulate", "run the exact discrete simulator");
  simulate->add_option("--circuit", sim_circuit, "BENCH netlist path")->required();
  simulate->add_option("--stimulus", sim_stimulus, "one 01-row per cycle")->required();
  simulate->add_option("--state0", sim_state0, "initial state bits (default all-zero)");

  std::string cnf_circuit, cnf_constraints, cnf_out;
  int cnf_cycles = 0;
  auto* export_cnf = app.add_subcommand("export-cnf", "unroll and write Tseitin DIMACS CNF");
  export_cnf->add_option("--circuit", cnf_circuit, "BENCH netlist path");
  export_cnf->add_option("--constraints", cnf_constraints, "constraint file")->required();
  export_cnf->add_option("--cycles", cnf_cycles, "unroll horizon")
      ->required()
      ->check(CLI::PositiveNumber);
  export_cnf->add_option("--out", cnf_out, "DIMACS output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage errors exit 2; --help exits 0
  }

  try {
    if (sample->parsed()) {
      sa.eta_set = sample->count("--eta") > 0;
      sa.min_set = sample->count("--min-cycles") > 0;
      return cmd_sample(sa);
    }
    if (bench->parsed()) {
      if (opt_budget->count() == 0 && opt_target->count() == 0) {
        std::cerr << "bench requires --budget-seconds or --target-solutions\n";
        return 2;
      }
      ba.eta_set = bench->count("--eta") > 0;
      ba.min_set = bench->count("--min-cycles") > 0;
      return cmd_bench(ba, budget_seconds, target_solutions);
    }
    if (simulate->parsed()) return cmd_simulate(sim_circuit, sim_stimulus, sim_state0);
    if (export_cnf->parsed()) return cmd_export_cnf(cnf_circuit, cnf_constraints, cnf_cycles, cnf_out);
  } catch (const rcsat::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
