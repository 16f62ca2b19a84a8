// Command-line driver: run sweeps, verify and generate NK instances, and run
// the finite-difference gradient check.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "ganeda/errors.hpp"
#include "ganeda/gradcheck.hpp"
#include "ganeda/harness.hpp"
#include "ganeda/problems.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRunFailures = 2;
constexpr int kExitMismatch = 3;

int cmd_run(const std::string& config_path, const std::string& out_dir, std::size_t jobs) {
  ganeda::ExperimentConfig config;
  try {
    config = ganeda::load_config(config_path);
    if (!out_dir.empty()) config.output = out_dir;
  } catch (const ganeda::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  ganeda::ProblemInstance instance = ganeda::ProblemInstance::onemax(1);
  try {
    instance = ganeda::build_instance(config.problem);
  } catch (const ganeda::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const auto result = ganeda::run_sweep(config, instance, jobs);
  ganeda::write_sweep(config.output, config, result);
  ganeda::write_aggregate_csv(std::cout, result.aggregates);
  if (result.any_failed()) {
    for (const auto& r : result.runs) {
      if (r.failed) std::cerr << "run pop=" << r.pop_size << " id=" << r.run_id << " failed: " << r.error << '\n';
    }
    return kExitRunFailures;
  }
  return kExitOk;
}

int cmd_verify(const std::string& path) {
  try {
    const auto report = ganeda::verify_instance(path);
    std::printf("nk n=%zu k=%zu\n", report.n, report.k);
    std::printf("brute-force optimum: %.17g at %s\n", report.brute_force_optimum, report.maximizer.to_string().c_str());
    if (!report.stated_optimum) {
      std::printf("file states no optimum\n");
      return kExitMismatch;
    }
    std::printf("stated optimum:      %.17g\n", *report.stated_optimum);
    std::printf("%s\n", report.matches() ? "match" : "MISMATCH");
    return report.matches() ? kExitOk : kExitMismatch;
  } catch (const ganeda::Error& e) {
    std::cerr << "verify: " << e.what() << '\n';
    return kExitConfig;
  }
}

int cmd_gen_nk(std::size_t n, std::size_t k, std::uint64_t seed, const std::string& out) {
  try {
    const auto instance = ganeda::generate_nk_instance(n, k, seed);
    ganeda::save_nk_instance(out, instance);
    if (instance.known_optimum()) std::printf("optimum %.17g\n", *instance.known_optimum());
    return kExitOk;
  } catch (const ganeda::Error& e) {
    std::cerr << "gen-nk: " << e.what() << '\n';
    return kExitConfig;
  }
}

int cmd_gradcheck(std::size_t configurations, std::uint64_t seed, double tolerance) {
  const auto r = ganeda::nn::run_gradient_check_suite(configurations, seed);
  std::printf("configurations:          %zu\n", r.configurations);
  std::printf("network max rel. error:  %.3e\n", r.network_max_error);
  std::printf("D(G(z)) max rel. error:  %.3e\n", r.composed_max_error);
  const bool ok = r.passed(tolerance);
  std::printf("%s (tolerance %.1e)\n", ok ? "PASS" : "FAIL", tolerance);
  return ok ? kExitOk : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EDA laboratory with GAN, DAE and univariate models"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::size_t jobs = 1;
  auto* run = app.add_subcommand("run", "run a population-size sweep from a config file");
  run->add_option("--config", config_path, "key=value config file")->required();
  run->add_option("--out", out_dir, "output directory (overrides 'out' key)");
  run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  std::string instance_path;
  auto* verify = app.add_subcommand("verify", "brute-force an NK instance and compare with its optimum line");
  verify->add_option("--instance", instance_path, "NK instance file")->required();

  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t seed = 1;
  std::string out_file;
  auto* gen = app.add_subcommand("gen-nk", "generate a seeded NK instance");
  gen->add_option("--n", n)->required();
  gen->add_option("--k", k)->required();
  gen->add_option("--seed", seed)->required();
  gen->add_option("--out", out_file)->required();

  std::size_t configurations = 100;
  std::uint64_t gc_seed = 2024;
  double tolerance = 1e-4;
  auto* gradcheck = app.add_subcommand("gradcheck", "backprop vs. central finite differences");
  gradcheck->add_option("--configs", configurations, "random configurations");
  gradcheck->add_option("--seed", gc_seed);
  gradcheck->add_option("--tolerance", tolerance);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*run) return cmd_run(config_path, out_dir, jobs);
  if (*verify) return cmd_verify(instance_path);
  if (*gen) return cmd_gen_nk(n, k, seed, out_file);
  if (*gradcheck) return cmd_gradcheck(configurations, gc_seed, tolerance);
  return kExitConfig;
}
