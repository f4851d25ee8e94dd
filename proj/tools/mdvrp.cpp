// Command-line front door: generate, solve, verify, bound, benchmark.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mdvrp/baselines.hpp"
#include "mdvrp/certify.hpp"
#include "mdvrp/exact.hpp"
#include "mdvrp/lp.hpp"
#include "mdvrp/solve.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  out << content;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_file(out_path, content);
}

int run(int argc, char** argv) {
  CLI::App app{"Multiple-depot capacitated vehicle routing solver suite"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  std::uint64_t gen_seed = 1;
  int gen_clients = 10, gen_depots = 2, gen_k = 4;
  std::string gen_mode = "euclidean-uniform", gen_out;
  gen->add_option("--seed", gen_seed);
  gen->add_option("--clients", gen_clients)->check(CLI::PositiveNumber);
  gen->add_option("--depots", gen_depots)->check(CLI::PositiveNumber);
  gen->add_option("--k", gen_k)->check(CLI::PositiveNumber);
  gen->add_option("--mode", gen_mode)
      ->check(CLI::IsMember({"euclidean-uniform", "euclidean-clustered"}));
  gen->add_option("--out", gen_out);

  // solve
  auto* solve = app.add_subcommand("solve", "solve an instance");
  std::string solve_instance_path, solve_algo = "lp-round", solve_out;
  std::uint64_t solve_seed = 1;
  double solve_gamma = mdvrp::kGamma;
  bool solve_certify = false;
  solve->add_option("instance", solve_instance_path)->required();
  solve->add_option("--algo", solve_algo)
      ->check(CLI::IsMember({"lp-round", "tree-split", "tour-split", "brute"}));
  solve->add_option("--seed", solve_seed);
  solve->add_option("--gamma", solve_gamma);
  solve->add_flag("--certify", solve_certify, "print the certificate ledger");
  solve->add_option("--out", solve_out);

  // verify
  auto* verify = app.add_subcommand("verify", "check a solution file");
  std::string verify_instance_path, verify_solution_path;
  verify->add_option("instance", verify_instance_path)->required();
  verify->add_option("solution", verify_solution_path)->required();

  // lp-bound
  auto* bound = app.add_subcommand("lp-bound", "relaxation value and delta");
  std::string bound_instance_path;
  double bound_tol = 1e-7;
  bound->add_option("instance", bound_instance_path)->required();
  bound->add_option("--tol", bound_tol);

  // bench
  auto* bench = app.add_subcommand("bench", "benchmark a directory of instances");
  std::string bench_suite, bench_seeds = "1", bench_out;
  bench->add_option("--suite", bench_suite)->required();
  bench->add_option("--seeds", bench_seeds);
  bench->add_option("--out", bench_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (gen->parsed()) {
    const auto mode = gen_mode == "euclidean-uniform"
                          ? mdvrp::GenMode::EuclideanUniform
                          : mdvrp::GenMode::EuclideanClustered;
    const mdvrp::Instance inst =
        mdvrp::generate_random(gen_seed, gen_clients, gen_depots, gen_k, mode);
    emit(gen_out, mdvrp::write_instance(inst));
    return 0;
  }

  if (solve->parsed()) {
    const mdvrp::Instance inst = mdvrp::parse_instance(read_file(solve_instance_path));
    inst.validate();
    mdvrp::SolveOptions opts;
    opts.seed = solve_seed;
    opts.gamma = solve_gamma;
    mdvrp::RunTrace trace;
    const mdvrp::Solution sol =
        mdvrp::solve_instance(inst, mdvrp::algo_from_name(solve_algo), opts, &trace);
    const auto report = mdvrp::check_feasible(inst, sol);
    if (!report.ok()) {
      for (const auto& v : report.violations) std::cerr << "violation: " << v << "\n";
      return 1;
    }
    emit(solve_out, mdvrp::write_solution(inst, sol));
    if (solve_certify) std::cout << trace.to_text();
    return 0;
  }

  if (verify->parsed()) {
    const mdvrp::Instance inst = mdvrp::parse_instance(read_file(verify_instance_path));
    const mdvrp::Solution sol =
        mdvrp::parse_solution(inst, read_file(verify_solution_path));
    const auto report = mdvrp::check_feasible(inst, sol);
    for (const auto& v : report.violations) std::cout << "violation: " << v << "\n";
    if (!report.ok()) return 1;
    std::cout << "feasible, cost " << mdvrp::solution_cost(inst, sol) << "\n";
    return 0;
  }

  if (bound->parsed()) {
    const mdvrp::Instance inst = mdvrp::parse_instance(read_file(bound_instance_path));
    const mdvrp::Preprocessed pre = mdvrp::preprocess(inst);
    mdvrp::LpOptions opts;
    opts.sep_tol = bound_tol;
    const mdvrp::LpSolution lp = mdvrp::solve_lp_cutting_plane(pre.inst, opts);
    std::printf("opt_lp %.9f\n", lp.opt_lp);
    std::printf("delta %.9f\n", lp.delta);
    return 0;
  }

  if (bench->parsed()) {
    std::vector<std::uint64_t> seeds;
    {
      std::istringstream ss(bench_seeds);
      std::string tok;
      while (std::getline(ss, tok, ',')) seeds.push_back(std::stoull(tok));
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(bench_suite))
      if (entry.path().extension() == ".mdvrp") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::ostringstream table;
    table << "instance\talgo\tseed\tcost\topt_lp\tlb\tratio_to_lp\twall_ms\n";
    for (const auto& file : files) {
      const mdvrp::Instance inst = mdvrp::parse_instance(read_file(file.string()));
      if (inst.k < 3)
        throw std::invalid_argument("bench requires capacity >= 3: " + file.string());
      const mdvrp::Preprocessed pre = mdvrp::preprocess(inst);
      const mdvrp::LpSolution lp = mdvrp::solve_lp_cutting_plane(pre.inst);
      const double lb = mdvrp::radial_lb(inst);
      for (const char* algo : {"lp-round", "tree-split", "tour-split"}) {
        for (std::uint64_t seed : seeds) {
          mdvrp::SolveOptions opts;
          opts.seed = seed;
          const auto t0 = std::chrono::steady_clock::now();
          const mdvrp::Solution sol =
              mdvrp::solve_instance(inst, mdvrp::algo_from_name(algo), opts);
          const auto t1 = std::chrono::steady_clock::now();
          const double cost = mdvrp::solution_cost(inst, sol);
          const double ms =
              std::chrono::duration<double, std::milli>(t1 - t0).count();
          char row[512];
          std::snprintf(row, sizeof(row),
                        "%s\t%s\t%llu\t%.6f\t%.6f\t%.6f\t%.6f\t%.3f\n",
                        file.filename().string().c_str(), algo,
                        static_cast<unsigned long long>(seed), cost, lp.opt_lp,
                        lb, cost / lp.opt_lp, ms);
          table << row;
        }
      }
    }
    emit(bench_out, table.str());
    return 0;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
