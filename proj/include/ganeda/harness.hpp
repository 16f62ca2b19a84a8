#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ganeda/eda.hpp"
#include "ganeda/problems.hpp"

namespace ganeda {

struct ProblemSpec {
  ProblemKind kind = ProblemKind::OneMax;
  std::size_t n = 0;
  std::size_t k = 0;
  std::optional<std::filesystem::path> instance_path;  // nk only
  std::uint64_t nk_seed = 1;                           // nk only, when no path
};

ProblemInstance build_instance(const ProblemSpec& spec);

struct ExperimentConfig {
  ProblemSpec problem;
  EdaConfig eda;  // population_size and seed are overridden per run
  std::vector<std::size_t> population_sizes{32, 64, 128, 256, 512};
  std::size_t runs_per_setting = 20;
  std::uint64_t base_seed = 42;
  std::filesystem::path output = "results";
};

/// Flat `key=value` lines, `#` comments, dotted namespaces. Absent keys take
/// the documented defaults; unknown keys and out-of-domain values throw
/// ParseError carrying the line number.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Every key with its resolved value; parse_config(format_config(c)) == c.
std::string format_config(const ExperimentConfig& config);

struct RunRow {
  std::string problem;
  std::size_t n = 0;
  std::size_t k = 0;
  std::string model;
  std::size_t pop_size = 0;
  std::size_t run_id = 0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
  RunRecord record;  // empty when failed
};

struct AggregateRow {
  std::string problem;
  std::size_t n = 0;
  std::size_t k = 0;
  std::string model;
  std::size_t pop_size = 0;
  double mean_best_fitness = 0.0;
  double std_best_fitness = 0.0;  // sample standard deviation, 0 for one run
  double mean_unique_evals = 0.0;
  double mean_cpu_seconds = 0.0;
  double success_fraction = 0.0;
  std::size_t completed_runs = 0;
};

struct SweepResult {
  std::vector<RunRow> runs;  // sorted by population size, then run id
  std::vector<AggregateRow> aggregates;

  bool any_failed() const;
  const AggregateRow* aggregate_for(std::size_t pop_size) const;
};

/// One run with an explicit seed; failures become failed rows.
RunRow run_single(const ExperimentConfig& config, const ProblemInstance& instance, std::size_t pop_size,
                  std::size_t run_id, std::uint64_t seed);

/// runs_per_setting runs per population size with seeds base_seed + run id,
/// on up to `jobs` worker threads. Output order is canonical regardless of
/// completion order.
SweepResult run_sweep(const ExperimentConfig& config, const ProblemInstance& instance, std::size_t jobs = 1);
SweepResult run_sweep(const ExperimentConfig& config, std::size_t jobs = 1);

std::vector<AggregateRow> aggregate(const std::vector<RunRow>& runs);

inline constexpr std::string_view kRunsCsvHeader =
    "problem,n,k,model,pop_size,run_id,seed,generations,unique_evals,best_fitness,optimum_found,cpu_seconds";
inline constexpr std::string_view kAggregateCsvHeader =
    "problem,n,k,model,pop_size,mean_best_fitness,std_best_fitness,mean_unique_evals,mean_cpu_seconds,"
    "success_fraction";

/// One CSV line without newline. Failed runs carry NA in the result columns.
std::string format_run_row(const RunRow& row);
std::string format_aggregate_row(const AggregateRow& row);
void write_runs_csv(std::ostream& out, const std::vector<RunRow>& runs);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

/// Writes runs.csv, summary.csv and config.txt into `dir`.
void write_sweep(const std::filesystem::path& dir, const ExperimentConfig& config, const SweepResult& result);

struct VerifyReport {
  std::size_t n = 0;
  std::size_t k = 0;
  std::optional<double> stated_optimum;
  double brute_force_optimum = 0.0;
  Genotype maximizer;

  bool matches() const;
};

/// Brute-forces the optimum of an NK file; CapacityError above 24 bits.
VerifyReport verify_instance(const std::filesystem::path& path);
VerifyReport verify_instance(const ProblemInstance& instance);

}  // namespace ganeda
