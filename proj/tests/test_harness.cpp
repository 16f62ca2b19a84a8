#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ganeda/errors.hpp"
#include "ganeda/harness.hpp"

using namespace ganeda;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& line, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

std::vector<std::string> lines_of(const std::string& text) { return split(text, '\n'); }

// Drops the last column (cpu_seconds) of every data line.
std::string without_cpu(const std::string& csv) {
  std::string out;
  for (const auto& line : lines_of(csv)) out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("ganeda_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int parse_error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("config defaults") {
  const auto c = parse_config("problem=onemax\nn=30\nmodel=umda\n");
  CHECK(c.problem.kind == ProblemKind::OneMax);
  CHECK(c.problem.n == 30);
  CHECK(c.eda.model.kind == ModelKind::Umda);
  CHECK(c.eda.truncation == 0.5);
  CHECK(c.population_sizes == std::vector<std::size_t>{32, 64, 128, 256, 512});
  CHECK(c.runs_per_setting == 20);
  CHECK(c.base_seed == 42);
  CHECK(c.eda.max_generations == 200);
  CHECK(c.eda.stall_generations == 30);
}

TEST_CASE("config values") {
  const auto c = parse_config(
      "# trap run\n"
      "problem = trap\n"
      "n=30\n"
      "k=5\n"
      "model=gan\n"
      "\n"
      "gan.epochs=0\n"
      "gan.prior=normal\n"
      "gan.z_dim=7\n"
      "opt.alpha=0.02\n"
      "gan.d.alpha=0.03\n"
      "gan.g.alpha_schedule=0:0.02,10:0.01\n"
      "pop_sizes=64,16\n"
      "runs=3\n"
      "seed=9\n");
  CHECK(c.problem.kind == ProblemKind::ConcatTrap);
  CHECK(c.problem.k == 5);
  CHECK(c.eda.model.gan.epochs == 0);
  CHECK(c.eda.model.gan.prior.distribution == PriorKind::StandardNormal);
  CHECK(c.eda.model.gan.prior.z_dim == 7);
  CHECK(c.eda.model.gan.generator_optimizer.learning_rate == 0.02);
  CHECK(c.eda.model.gan.discriminator_optimizer.learning_rate == 0.03);
  CHECK(c.eda.model.dae.optimizer.learning_rate == 0.02);
  CHECK(c.eda.model.gan.generator_optimizer.learning_rate_schedule.at(10) == 0.01);
  CHECK(c.population_sizes == std::vector<std::size_t>{64, 16});
  CHECK(c.runs_per_setting == 3);
  CHECK(c.base_seed == 9);

  const auto round = parse_config(format_config(c));
  CHECK(format_config(round) == format_config(c));
}

TEST_CASE("config errors carry line numbers") {
  CHECK(parse_error_line("problem=onemax\nn=30\nmodel=umda\ntruncation=1.5\n") == 4);
  CHECK(parse_error_line("problem=onemax\nn=30\nmodel=umda\ncolour=red\n") == 4);
  CHECK(parse_error_line("problem=onemax\nn=30\nn=31\nmodel=umda\n") == 3);
  CHECK(parse_error_line("problem=onemax\nn 30\nmodel=umda\n") == 2);
  CHECK(parse_error_line("problem=onemax\nn=30\nmodel=umda\npop_sizes=\n") == 4);
  CHECK(parse_error_line("problem=onemax\nn=30\nmodel=umda\nruns=0\n") == 4);
  CHECK(parse_error_line("problem=onemax\nn=thirty\nmodel=umda\n") == 2);
  CHECK(parse_error_line("problem=onemax\nn=30\nmodel=umda\ngan.g.momentum=1\n") == 4);
  CHECK(parse_error_line("problem=trap\nn=30\nk=7\nmodel=umda\n") == 1);
  CHECK(parse_error_line("problem=hiff\nn=30\nmodel=umda\n") == 1);
  CHECK(parse_error_line("problem=onemax\nn=30\nmodel=umda\npop_sizes=2\n") > 0);
  CHECK(parse_error_line("problem=onemax\nn=30\n") > 0);
  CHECK(parse_error_line("n=30\nmodel=umda\n") > 0);
}

TEST_CASE("csv formatting") {
  RunRow row;
  row.problem = "trap";
  row.n = 30;
  row.k = 5;
  row.model = "dae";
  row.pop_size = 64;
  row.run_id = 3;
  row.seed = 45;
  row.record.generations_run = 12;
  row.record.unique_evaluations = 700;
  row.record.best_fitness = 29.5;
  row.record.optimum_found = false;
  row.record.cpu_seconds = 0.25;
  CHECK(format_run_row(row) == "trap,30,5,dae,64,3,45,12,700,29.5,0,0.250000");
  row.failed = true;
  CHECK(format_run_row(row) == "trap,30,5,dae,64,3,45,NA,NA,NA,NA,NA");
  CHECK(split(std::string(kRunsCsvHeader)).size() == 12);
  CHECK(split(std::string(kAggregateCsvHeader)).size() == 10);
}

TEST_CASE("aggregates skip failed runs and use the sample deviation") {
  std::vector<RunRow> rows(3);
  const double fitness[] = {2.0, 4.0, 100.0};
  for (std::size_t i = 0; i < 3; ++i) {
    rows[i].problem = "onemax";
    rows[i].model = "umda";
    rows[i].pop_size = 8;
    rows[i].run_id = i;
    rows[i].record.best_fitness = fitness[i];
    rows[i].record.unique_evaluations = 10 * (i + 1);
    rows[i].record.optimum_found = i == 1;
  }
  rows[2].failed = true;
  const auto agg = aggregate(rows);
  REQUIRE(agg.size() == 1);
  CHECK(agg[0].completed_runs == 2);
  CHECK(agg[0].mean_best_fitness == 3.0);
  CHECK(agg[0].std_best_fitness == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(agg[0].mean_unique_evals == 15.0);
  CHECK(agg[0].success_fraction == 0.5);
}

TEST_CASE("umda calibration sweep") {
  auto c = parse_config("problem=onemax\nn=30\nmodel=umda\npop_sizes=200,50,100\nruns=20\n");
  const auto result = run_sweep(c, 2);
  REQUIRE(result.runs.size() == 60);
  CHECK_FALSE(result.any_failed());
  for (std::size_t i = 0; i < result.runs.size(); ++i) {
    CHECK(result.runs[i].pop_size == (i < 20 ? 50 : i < 40 ? 100 : 200));
    CHECK(result.runs[i].run_id == i % 20);
    CHECK(result.runs[i].seed == 42 + i % 20);
  }
  const double s50 = result.aggregate_for(50)->success_fraction;
  const double s100 = result.aggregate_for(100)->success_fraction;
  const double s200 = result.aggregate_for(200)->success_fraction;
  CHECK(s50 <= s100);
  CHECK(s100 <= s200);
  CHECK(s200 == 1.0);

  // aggregates recomputed independently from the written per-run CSV
  std::ostringstream runs_csv;
  write_runs_csv(runs_csv, result.runs);
  const auto lines = lines_of(runs_csv.str());
  REQUIRE(lines.size() == 61);
  CHECK(lines[0] == kRunsCsvHeader);
  for (const auto& agg : result.aggregates) {
    std::vector<double> f;
    double evals = 0.0;
    double cpu = 0.0;
    double hits = 0.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto cells = split(lines[i]);
      if (std::stoul(cells[4]) != agg.pop_size) continue;
      f.push_back(std::stod(cells[9]));
      evals += std::stod(cells[8]);
      hits += std::stod(cells[10]);
      cpu += std::stod(cells[11]);
    }
    double mean = 0.0;
    for (double v : f) mean += v / f.size();
    double var = 0.0;
    for (double v : f) var += (v - mean) * (v - mean) / (f.size() - 1);
    CHECK(std::abs(agg.mean_best_fitness - mean) <= 1e-12);
    CHECK(std::abs(agg.std_best_fitness - std::sqrt(var)) <= 1e-12);
    CHECK(std::abs(agg.mean_unique_evals - evals / f.size()) <= 1e-12);
    CHECK(std::abs(agg.success_fraction - hits / f.size()) <= 1e-12);
    CHECK(std::abs(agg.mean_cpu_seconds - cpu / f.size()) <= 1e-5);
    CHECK(agg.mean_best_fitness <= 30.0);
  }
}

TEST_CASE("sweeps are deterministic apart from timing") {
  const auto c = parse_config("problem=trap\nn=20\nk=5\nmodel=dae\ndae.epochs=3\npop_sizes=16,32\nruns=2\n");
  auto csv = [&](std::size_t jobs) {
    std::ostringstream out;
    write_runs_csv(out, run_sweep(c, jobs).runs);
    return without_cpu(out.str());
  };
  const auto once = csv(1);
  CHECK(once == csv(1));
  CHECK(once == csv(3));

  const auto result = run_sweep(c);
  const auto instance = build_instance(c.problem);
  for (const auto& row : result.runs) {
    const auto again = run_single(c, instance, row.pop_size, row.run_id, row.seed);
    CHECK(without_cpu(format_run_row(again)) == without_cpu(format_run_row(row)));
  }
}

TEST_CASE("sweep outputs") {
  const auto c = parse_config("problem=onemax\nn=10\nmodel=umda\npop_sizes=8\nruns=2\n");
  const auto dir = scratch_dir("sweep");
  write_sweep(dir, c, run_sweep(c));
  CHECK(fs::exists(dir / "runs.csv"));
  CHECK(fs::exists(dir / "summary.csv"));
  std::ifstream cfg(dir / "config.txt");
  std::stringstream text;
  text << cfg.rdbuf();
  CHECK(format_config(parse_config(text.str())) == format_config(c));

  auto empty = c;
  empty.population_sizes.clear();
  CHECK_THROWS_AS(run_sweep(empty), ParameterError);
}

TEST_CASE("instance verification") {
  const auto dir = scratch_dir("verify");
  const auto inst = generate_nk_instance(12, 4, 1);
  save_nk_instance(dir / "ok.txt", inst);
  const auto report = verify_instance(dir / "ok.txt");
  CHECK(report.matches());
  CHECK(report.n == 12);
  CHECK(report.k == 4);

  save_nk_instance(dir / "bad.txt", inst.with_known_optimum(*inst.known_optimum() + 1.0));
  CHECK_FALSE(verify_instance(dir / "bad.txt").matches());

  const auto big = generate_nk_instance(30, 2, 1);
  save_nk_instance(dir / "big.txt", big);
  CHECK_THROWS_AS(verify_instance(dir / "big.txt"), CapacityError);
}
