#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "ganeda/dae.hpp"
#include "ganeda/gan.hpp"
#include "ganeda/genotype.hpp"
#include "ganeda/model.hpp"
#include "ganeda/problems.hpp"

namespace ganeda {

enum class ModelKind { Gan, Dae, Umda };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);

struct ModelConfig {
  ModelKind kind = ModelKind::Umda;
  GanConfig gan;
  DaeConfig dae;
};

std::unique_ptr<Model> make_model(const ModelConfig& config, std::size_t n, Rng& rng);

struct Population {
  std::vector<Genotype> genotypes;
  std::vector<double> fitnesses;

  std::size_t size() const noexcept { return genotypes.size(); }
};

/// ceil(fraction * size), guarded against floating-point fuzz in the product.
std::size_t selection_size(std::size_t population_size, double fraction);

/// The ceil(fraction * N) fittest individuals in descending fitness order;
/// ties keep the earlier index first.
Population select_truncation(const Population& pop, double fraction);

struct EdaConfig {
  std::size_t population_size = 100;
  double truncation = 0.5;
  std::size_t max_generations = 200;
  std::size_t stall_generations = 30;
  ModelConfig model;
  std::uint64_t seed = 1;
  // Re-evaluate every stored fitness each generation and throw on mismatch.
  bool verify_fitness = false;

  void validate() const;
};

struct RunRecord {
  std::vector<double> best_fitness_per_generation;  // entry 0 is the initial population
  std::vector<std::size_t> unique_evaluations_per_generation;
  std::size_t unique_evaluations = 0;  // incremental counter
  std::size_t cache_recount = 0;       // size of the evaluation cache at the end
  std::size_t generations_run = 0;
  std::size_t max_selection_size = 0;
  std::size_t min_selection_size = 0;
  bool optimum_found = false;
  double best_fitness = 0.0;
  Genotype best_genotype;
  double cpu_seconds = 0.0;
  std::uint64_t seed = 0;
};

std::size_t unique_eval_count(const RunRecord& record);

/// Generation 0 draws N uniform genotypes. Each generation then selects the
/// top ceil(tau N), fits the model, samples N candidates and keeps the top N
/// of candidates plus the previous selection. Stops at the known optimum,
/// after max_generations, or after stall_generations without improvement.
RunRecord run_eda(const ProblemInstance& instance, const EdaConfig& config);
RunRecord run_eda(const ProblemInstance& instance, const EdaConfig& config, Model& model);

}  // namespace ganeda
