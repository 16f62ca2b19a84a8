#include "ganeda/eda.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "ganeda/errors.hpp"
#include "ganeda/umda.hpp"

namespace ganeda {

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Gan: return "gan";
    case ModelKind::Dae: return "dae";
    case ModelKind::Umda: return "umda";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  if (text == "gan") return ModelKind::Gan;
  if (text == "dae") return ModelKind::Dae;
  if (text == "umda") return ModelKind::Umda;
  throw ParameterError("unknown model '" + std::string(text) + "' (expected gan|dae|umda)");
}

std::unique_ptr<Model> make_model(const ModelConfig& config, std::size_t n, Rng& rng) {
  switch (config.kind) {
    case ModelKind::Gan: return std::make_unique<GanModel>(n, config.gan, rng);
    case ModelKind::Dae: return std::make_unique<DaeModel>(n, config.dae, rng);
    case ModelKind::Umda: return std::make_unique<MarginalModel>(n);
  }
  throw ParameterError("unknown model kind");
}

std::size_t selection_size(std::size_t population_size, double fraction) {
  const double exact = fraction * static_cast<double>(population_size);
  return static_cast<std::size_t>(std::ceil(exact - 1e-9));
}

namespace {

std::vector<std::size_t> rank_descending(const std::vector<double>& fitnesses) {
  std::vector<std::size_t> idx(fitnesses.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return fitnesses[a] > fitnesses[b]; });
  return idx;
}

Population take(const Population& pop, const std::vector<std::size_t>& idx, std::size_t count) {
  Population out;
  out.genotypes.reserve(count);
  out.fitnesses.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    out.genotypes.push_back(pop.genotypes[idx[r]]);
    out.fitnesses.push_back(pop.fitnesses[idx[r]]);
  }
  return out;
}

}  // namespace

Population select_truncation(const Population& pop, double fraction) {
  if (pop.genotypes.size() != pop.fitnesses.size()) throw StructuralError("population lists are not parallel");
  if (!(fraction > 0.0 && fraction <= 1.0)) throw ParameterError("truncation fraction must be in (0,1]");
  const std::size_t keep = std::min(selection_size(pop.size(), fraction), pop.size());
  return take(pop, rank_descending(pop.fitnesses), keep);
}

void EdaConfig::validate() const {
  if (!(truncation > 0.0 && truncation <= 1.0)) throw ParameterError("truncation must be in (0,1]");
  if (selection_size(population_size, truncation) < 2) {
    throw ParameterError("truncation * population_size must keep at least 2 individuals");
  }
}

std::size_t unique_eval_count(const RunRecord& record) { return record.unique_evaluations; }

namespace {

class EvaluationCache {
 public:
  explicit EvaluationCache(const ProblemInstance& instance) : instance_(instance) {}

  double operator()(const Genotype& g) {
    auto it = cache_.find(g);
    if (it != cache_.end()) return it->second;
    const double f = evaluate(instance_, g);
    cache_.emplace(g, f);
    ++counter_;
    return f;
  }

  std::size_t counter() const noexcept { return counter_; }
  std::size_t recount() const noexcept { return cache_.size(); }

 private:
  const ProblemInstance& instance_;
  std::unordered_map<Genotype, double, GenotypeHash> cache_;
  std::size_t counter_ = 0;
};

bool reaches(const ProblemInstance& instance, double best) {
  const auto& opt = instance.known_optimum();
  return opt && best >= *opt - 1e-9 * std::max(1.0, std::abs(*opt));
}

}  // namespace

RunRecord run_eda(const ProblemInstance& instance, const EdaConfig& config) {
  config.validate();
  // construction draws from a separate stream so generation 0 is identical for every model
  Rng init_rng(config.seed ^ 0x9e3779b97f4a7c15ull);
  auto model = make_model(config.model, instance.n(), init_rng);
  return run_eda(instance, config, *model);
}

RunRecord run_eda(const ProblemInstance& instance, const EdaConfig& config, Model& model) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  Rng rng(config.seed);
  EvaluationCache eval(instance);
  const std::size_t n = instance.n();
  const std::size_t N = config.population_size;

  Population pop;
  for (std::size_t i = 0; i < N; ++i) {
    pop.genotypes.push_back(Genotype::random(n, rng));
    pop.fitnesses.push_back(eval(pop.genotypes.back()));
  }

  RunRecord rec;
  rec.seed = config.seed;
  rec.min_selection_size = N;
  double best = *std::max_element(pop.fitnesses.begin(), pop.fitnesses.end());
  rec.best_fitness_per_generation.push_back(best);
  rec.unique_evaluations_per_generation.push_back(eval.counter());
  rec.optimum_found = reaches(instance, best);

  std::size_t stall = 0;
  for (std::size_t gen = 1; gen <= config.max_generations && !rec.optimum_found; ++gen) {
    const Population selected = select_truncation(pop, config.truncation);
    rec.max_selection_size = std::max(rec.max_selection_size, selected.size());
    rec.min_selection_size = std::min(rec.min_selection_size, selected.size());
    try {
      if (!model.warm_start()) model.reset(rng);
      model.fit(selected.genotypes, rng);
    } catch (const Error& e) {
      throw Error("generation " + std::to_string(gen) + ": model fit failed: " + e.what());
    }
    std::vector<Genotype> candidates = model.sample(N, rng);
    if (candidates.size() != N) {
      throw Error("generation " + std::to_string(gen) + ": model returned " + std::to_string(candidates.size()) +
                  " samples, expected " + std::to_string(N));
    }

    Population merged;
    merged.genotypes = std::move(candidates);
    merged.fitnesses.reserve(N + selected.size());
    for (const auto& g : merged.genotypes) {
      if (g.size() != n) throw StructuralError("generation " + std::to_string(gen) + ": sample has wrong length");
      merged.fitnesses.push_back(eval(g));
    }
    merged.genotypes.insert(merged.genotypes.end(), selected.genotypes.begin(), selected.genotypes.end());
    merged.fitnesses.insert(merged.fitnesses.end(), selected.fitnesses.begin(), selected.fitnesses.end());
    pop = take(merged, rank_descending(merged.fitnesses), N);

    if (config.verify_fitness) {
      for (std::size_t i = 0; i < pop.size(); ++i) {
        if (evaluate(instance, pop.genotypes[i]) != pop.fitnesses[i]) {
          throw Error("generation " + std::to_string(gen) + ": stored fitness disagrees with evaluate");
        }
      }
    }

    rec.generations_run = gen;
    const double gen_best = pop.fitnesses.front();
    if (gen_best > best) {
      best = gen_best;
      stall = 0;
    } else {
      ++stall;
    }
    rec.best_fitness_per_generation.push_back(gen_best);
    rec.unique_evaluations_per_generation.push_back(eval.counter());
    rec.optimum_found = reaches(instance, best);
    if (stall >= config.stall_generations) break;
  }

  if (rec.generations_run == 0) rec.min_selection_size = 0;
  const auto best_it = std::max_element(pop.fitnesses.begin(), pop.fitnesses.end());
  rec.best_fitness = *best_it;
  rec.best_genotype = pop.genotypes[static_cast<std::size_t>(best_it - pop.fitnesses.begin())];
  rec.unique_evaluations = eval.counter();
  rec.cache_recount = eval.recount();
  rec.cpu_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

}  // namespace ganeda
