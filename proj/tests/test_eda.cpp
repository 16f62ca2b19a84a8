#include <doctest.h>

#include <set>
#include <string>

#include "ganeda/eda.hpp"
#include "ganeda/errors.hpp"

using namespace ganeda;

namespace {

class ConstantModel : public Model {
 public:
  explicit ConstantModel(Genotype g) : g_(std::move(g)) {}
  std::string_view name() const override { return "constant"; }
  void reset(Rng&) override { ++resets; }
  void fit(std::span<const Genotype>, Rng&) override { ++fits; }
  std::vector<Genotype> sample(std::size_t count, Rng&) override { return std::vector<Genotype>(count, g_); }

  bool warm = false;
  bool warm_start() const override { return warm; }
  int resets = 0;
  int fits = 0;

 private:
  Genotype g_;
};

// Emits genotypes never produced before: binary encodings of a counter.
class CountingModel : public Model {
 public:
  explicit CountingModel(std::size_t n) : n_(n) {}
  std::string_view name() const override { return "counting"; }
  void reset(Rng&) override {}
  void fit(std::span<const Genotype>, Rng&) override {}
  std::vector<Genotype> sample(std::size_t count, Rng&) override {
    std::vector<Genotype> out;
    for (std::size_t i = 0; i < count; ++i, ++next_) {
      Genotype g(n_);
      for (std::size_t b = 0; b < 32; ++b) g.set(n_ - 1 - b, (next_ >> b) & 1U);
      out.push_back(g);
    }
    return out;
  }

 private:
  std::size_t n_;
  std::uint64_t next_ = 1;
};

class ThrowingModel : public Model {
 public:
  std::string_view name() const override { return "throwing"; }
  void reset(Rng&) override {}
  void fit(std::span<const Genotype>, Rng&) override { throw NumericError("boom"); }
  std::vector<Genotype> sample(std::size_t, Rng&) override { return {}; }
};

Population make_population(std::vector<double> fitnesses) {
  Population p;
  for (std::size_t i = 0; i < fitnesses.size(); ++i) {
    Genotype g(4);
    for (std::size_t b = 0; b < 4; ++b) g.set(b, (i >> b) & 1U);
    p.genotypes.push_back(g);
  }
  p.fitnesses = std::move(fitnesses);
  return p;
}

void check_invariants(const RunRecord& r, std::size_t pop) {
  CHECK(r.unique_evaluations == r.cache_recount);
  CHECK(unique_eval_count(r) == r.unique_evaluations);
  CHECK(r.unique_evaluations <= pop * (r.generations_run + 1));
  REQUIRE(r.best_fitness_per_generation.size() == r.generations_run + 1);
  for (std::size_t g = 1; g < r.best_fitness_per_generation.size(); ++g) {
    CHECK(r.best_fitness_per_generation[g] >= r.best_fitness_per_generation[g - 1]);
    CHECK(r.unique_evaluations_per_generation[g] >= r.unique_evaluations_per_generation[g - 1]);
  }
}

}  // namespace

TEST_CASE("truncation selection") {
  auto sel = select_truncation(make_population({3, 1, 2, 4}), 0.5);
  REQUIRE(sel.size() == 2);
  CHECK(sel.fitnesses == std::vector<double>{4, 3});
  CHECK(sel.genotypes[0] == make_population({3, 1, 2, 4}).genotypes[3]);

  sel = select_truncation(make_population({3, 1, 2, 4}), 1.0);
  CHECK(sel.fitnesses == std::vector<double>{4, 3, 2, 1});

  const auto ties = make_population({2, 2, 2});
  sel = select_truncation(ties, 0.34);
  REQUIRE(sel.size() == 2);
  CHECK(sel.genotypes[0] == ties.genotypes[0]);
  CHECK(sel.genotypes[1] == ties.genotypes[1]);

  CHECK(selection_size(100, 0.5) == 50);
  CHECK(selection_size(10, 0.3) == 3);  // 0.3 * 10 is 3.0000000000000004
  CHECK(selection_size(3, 0.34) == 2);
  CHECK_THROWS_AS(select_truncation(ties, 0.0), ParameterError);
  CHECK_THROWS_AS(select_truncation(ties, 1.5), ParameterError);
}

TEST_CASE("config validation") {
  EdaConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.population_size = 3;
  cfg.truncation = 0.3;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg.truncation = 0.5;
  CHECK_NOTHROW(cfg.validate());
  cfg.truncation = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
}

TEST_CASE("umda solves onemax(30)") {
  EdaConfig cfg;
  cfg.population_size = 100;
  cfg.seed = 1;
  cfg.model.kind = ModelKind::Umda;
  cfg.verify_fitness = true;
  const auto rec = run_eda(ProblemInstance::onemax(30), cfg);
  CHECK(rec.optimum_found);
  CHECK(rec.generations_run <= 60);
  CHECK(rec.best_fitness == 30.0);
  CHECK(rec.best_genotype.count_ones() == 30);
  CHECK(rec.max_selection_size == 50);
  CHECK(rec.min_selection_size == 50);
  check_invariants(rec, 100);
}

TEST_CASE("zero generations") {
  EdaConfig cfg;
  cfg.max_generations = 0;
  const auto rec = run_eda(ProblemInstance::onemax(20), cfg);
  CHECK(rec.generations_run == 0);
  CHECK(rec.best_fitness_per_generation.size() == 1);
  CHECK(rec.unique_evaluations <= cfg.population_size);
  check_invariants(rec, cfg.population_size);
}

TEST_CASE("constant model: duplicates are not recounted") {
  EdaConfig cfg;
  cfg.population_size = 40;
  cfg.max_generations = 15;
  cfg.stall_generations = 100;
  const auto target = Genotype::from_string("1100110011001100110011001");
  ConstantModel model(target);
  const auto rec = run_eda(ProblemInstance::onemax(25), cfg, model);
  CHECK(rec.generations_run == 15);
  CHECK(rec.unique_evaluations <= cfg.population_size + 1);
  check_invariants(rec, cfg.population_size);
  CHECK(model.fits == 15);
  CHECK(model.resets == 15);

  ConstantModel warm(target);
  warm.warm = true;
  run_eda(ProblemInstance::onemax(25), cfg, warm);
  CHECK(warm.resets == 0);
}

TEST_CASE("distinct candidates attain the evaluation bound") {
  EdaConfig cfg;
  cfg.population_size = 30;
  cfg.max_generations = 10;
  cfg.stall_generations = 100;
  CountingModel model(48);
  const auto rec = run_eda(ProblemInstance::onemax(48), cfg, model);
  CHECK(rec.generations_run == 10);
  CHECK(rec.unique_evaluations == 30 + 30 * 10);
  check_invariants(rec, 30);
}

TEST_CASE("stall termination") {
  EdaConfig cfg;
  cfg.population_size = 20;
  cfg.stall_generations = 5;
  ConstantModel model(Genotype(30));
  const auto rec = run_eda(ProblemInstance::onemax(30), cfg, model);
  CHECK(rec.generations_run == 5);
  CHECK_FALSE(rec.optimum_found);
}

TEST_CASE("model failures carry the generation") {
  EdaConfig cfg;
  ThrowingModel model;
  try {
    run_eda(ProblemInstance::onemax(10), cfg, model);
    FAIL("expected an exception");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("generation 1") != std::string::npos);
    CHECK(std::string(e.what()).find("boom") != std::string::npos);
  }
}

TEST_CASE("runs are deterministic apart from timing") {
  for (auto kind : {ModelKind::Umda, ModelKind::Gan, ModelKind::Dae}) {
    EdaConfig cfg;
    cfg.population_size = 32;
    cfg.max_generations = 4;
    cfg.seed = 77;
    cfg.model.kind = kind;
    cfg.model.gan.epochs = 2;
    cfg.model.dae.epochs = 2;
    const auto inst = ProblemInstance::concat_trap(20, 5);
    const auto a = run_eda(inst, cfg);
    const auto b = run_eda(inst, cfg);
    CAPTURE(to_string(kind));
    CHECK(a.best_fitness_per_generation == b.best_fitness_per_generation);
    CHECK(a.unique_evaluations_per_generation == b.unique_evaluations_per_generation);
    CHECK(a.best_genotype == b.best_genotype);
    CHECK(a.generations_run == b.generations_run);
    check_invariants(a, 32);
  }
}

TEST_CASE("model kind names") {
  CHECK(parse_model_kind("gan") == ModelKind::Gan);
  CHECK(parse_model_kind("dae") == ModelKind::Dae);
  CHECK(parse_model_kind("umda") == ModelKind::Umda);
  CHECK(to_string(ModelKind::Dae) == "dae");
  CHECK_THROWS_AS(parse_model_kind("vae"), ParameterError);
}
