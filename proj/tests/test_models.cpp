#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <sstream>

#include "ganeda/dae.hpp"
#include "ganeda/errors.hpp"
#include "ganeda/gan.hpp"
#include "ganeda/umda.hpp"

using namespace ganeda;

namespace {

std::vector<double> bit_means(const std::vector<Genotype>& samples, std::size_t n) {
  std::vector<double> m(n, 0.0);
  for (const auto& g : samples) {
    for (std::size_t j = 0; j < n; ++j) m[j] += g[j];
  }
  for (auto& v : m) v /= static_cast<double>(samples.size());
  return m;
}

Genotype all_ones(std::size_t n) {
  Genotype g(n);
  for (std::size_t i = 0; i < n; ++i) g.set(i, true);
  return g;
}

void zero_network(nn::Network& net) {
  for (auto& l : net.layers()) {
    l.weights.fill(0.0);
    std::fill(l.biases.begin(), l.biases.end(), 0.0);
  }
  net.touch();
}

GanConfig small_gan(double alpha = 0.05) {
  GanConfig c;
  c.generator_optimizer.learning_rate = alpha;
  c.discriminator_optimizer.learning_rate = alpha;
  c.epochs = 5;
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// GAN

TEST_CASE("gan: no-op training") {
  Rng rng(1);
  std::vector<Genotype> data{Genotype::from_string("101010"), Genotype::from_string("111000")};

  auto cfg = small_gan();
  cfg.epochs = 0;
  GanModel untouched(6, cfg, rng);
  const auto g0 = untouched.generator();
  const auto d0 = untouched.discriminator();
  untouched.fit(data, rng);
  CHECK(untouched.generator().same_parameters(g0));
  CHECK(untouched.discriminator().same_parameters(d0));
  CHECK(untouched.last_trace().epochs.empty());

  auto frozen_cfg = small_gan(0.0);
  frozen_cfg.generator_optimizer.momentum = 0.9;
  GanModel frozen(6, frozen_cfg, rng);
  const auto g1 = frozen.generator();
  const auto d1 = frozen.discriminator();
  frozen.fit(data, rng);
  CHECK(frozen.last_trace().epochs.size() == 5);
  CHECK(frozen.generator().same_parameters(g1));
  CHECK(frozen.discriminator().same_parameters(d1));
}

TEST_CASE("gan: fresh discriminator is undecided") {
  Rng rng(2);
  GanConfig cfg = small_gan();
  cfg.init = nn::InitSpec::normal(0.01);
  GanModel model(20, cfg, rng);
  double real = 0.0;
  double fake = 0.0;
  for (int i = 0; i < 200; ++i) real += model.discriminator_score(Genotype::random(20, rng));
  for (const auto& g : model.sample(200, rng)) fake += model.discriminator_score(g);
  CHECK(std::abs(real / 200 - 0.5) <= 0.05);
  CHECK(std::abs(fake / 200 - 0.5) <= 0.05);
}

TEST_CASE("gan: sampling contracts") {
  Rng rng(3);
  GanModel model(12, small_gan(), rng);
  CHECK(model.sample(0, rng).empty());

  zero_network(model.generator());
  const auto samples = model.sample(10000, rng);
  REQUIRE(samples.size() == 10000);
  for (double m : bit_means(samples, 12)) {
    CHECK(m >= 0.47);
    CHECK(m <= 0.53);
  }

  // saturated output layer
  auto& out = model.generator().layers().back();
  std::fill(out.biases.begin(), out.biases.end(), 60.0);
  model.generator().touch();
  for (const auto& g : model.sample(100, rng)) CHECK(g == all_ones(12));
}

TEST_CASE("gan: discriminator score") {
  Rng rng(4);
  GanModel model(8, small_gan(), rng);
  const auto g = Genotype::from_string("10011010");
  CHECK(model.discriminator_score(g) == model.discriminator_score(g));
  CHECK_THROWS_AS(model.discriminator_score(Genotype(7)), StructuralError);
  zero_network(model.discriminator());
  CHECK(model.discriminator_score(g) == 0.5);
}

TEST_CASE("gan: discriminator learns a constant training set") {
  int wins = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    GanModel model(10, small_gan(), rng);
    std::vector<Genotype> data(20, all_ones(10));
    model.fit(data, rng);
    if (model.discriminator_score(all_ones(10)) > model.discriminator_score(Genotype(10))) ++wins;
  }
  CHECK(wins >= 18);
}

TEST_CASE("gan: generator matches Bernoulli(0.9) marginals") {
  Rng rng(5);
  std::vector<Genotype> data;
  for (int i = 0; i < 200; ++i) {
    Genotype g(10);
    for (std::size_t j = 0; j < 10; ++j) g.set(j, bernoulli(rng, 0.9));
    data.push_back(g);
  }
  GanConfig cfg = small_gan(0.01);
  cfg.epochs = 200;
  GanModel model(10, cfg, rng);
  model.fit(data, rng);
  int close = 0;
  for (double m : bit_means(model.sample(2000, rng), 10)) close += std::abs(m - 0.9) <= 0.15;
  CHECK(close >= 8);
}

TEST_CASE("gan: updates are isolated to the network being trained") {
  std::vector<Genotype> data{Genotype::from_string("110011"), Genotype::from_string("111100"),
                             Genotype::from_string("001111")};
  SUBCASE("generator steps leave the discriminator untouched") {
    Rng rng(6);
    auto cfg = small_gan();
    cfg.discriminator_optimizer.learning_rate = 0.0;
    GanModel model(6, cfg, rng);
    const auto g0 = model.generator();
    const auto d0 = model.discriminator();
    model.fit(data, rng);
    CHECK(model.discriminator().same_parameters(d0));
    CHECK_FALSE(model.generator().same_parameters(g0));
  }
  SUBCASE("discriminator steps leave the generator untouched") {
    Rng rng(6);
    auto cfg = small_gan();
    cfg.generator_optimizer.learning_rate = 0.0;
    GanModel model(6, cfg, rng);
    const auto g0 = model.generator();
    const auto d0 = model.discriminator();
    model.fit(data, rng);
    CHECK(model.generator().same_parameters(g0));
    CHECK_FALSE(model.discriminator().same_parameters(d0));
  }
}

TEST_CASE("gan: loss bookkeeping matches recorded steps") {
  Rng rng(7);
  auto cfg = small_gan();
  cfg.record_steps = true;
  cfg.epochs = 3;
  GanModel model(6, cfg, rng);
  std::vector<Genotype> data{Genotype::from_string("110011"), Genotype::from_string("111100"),
                             Genotype::from_string("001111"), Genotype::from_string("000000")};
  model.fit(data, rng);
  const auto& trace = model.last_trace();
  REQUIRE(trace.steps.size() == 3 * 2 * data.size());
  std::size_t s = 0;
  for (const auto& epoch : trace.epochs) {
    double sum = 0.0;
    double real = 0.0;
    double fake = 0.0;
    for (std::size_t i = 0; i < 2 * data.size(); ++i, ++s) {
      const auto& step = trace.steps[s];
      CHECK(step.target == static_cast<int>(i % 2));  // generated sample first, then the example
      CHECK(step.loss == nn::cross_entropy_loss(step.y, step.target));
      sum += nn::cross_entropy_loss(step.y, step.target);
      (step.target ? real : fake) += step.y;
    }
    CHECK(epoch.mean_loss_d == sum / (2.0 * data.size()));
    CHECK(epoch.mean_d_real == real / data.size());
    CHECK(epoch.mean_d_fake == fake / data.size());
  }
  std::ostringstream csv;
  trace.write_csv(csv);
  CHECK(csv.str().rfind("epoch,mean_loss_D,mean_loss_G,mean_D_real,mean_D_fake\n0,", 0) == 0);
}

TEST_CASE("gan: generator step ascends D(G(z))") {
  Rng rng(8);
  GanConfig cfg = small_gan();
  cfg.init = nn::InitSpec::normal(0.5);
  GanModel model(6, cfg, rng);
  const auto z = model.sample_prior(16, rng);
  auto mean_d = [&] {
    const auto y = nn::predict(model.discriminator(), model.generator_probabilities(z));
    double s = 0.0;
    for (double v : y.values()) s += v;
    return s / 16.0;
  };
  const double before = mean_d();
  const auto grads = generator_objective_gradient(model.generator(), model.discriminator(), z, rng);
  nn::OptimizerState state;
  nn::OptimizerConfig opt;
  opt.learning_rate = 0.01;
  nn::sgd_step(model.generator(), grads, state, opt, 0);
  CHECK(mean_d() > before);
}

TEST_CASE("gan: determinism") {
  std::vector<Genotype> data{Genotype::from_string("110011"), Genotype::from_string("111100")};
  auto run = [&] {
    Rng rng(9);
    GanModel model(6, small_gan(), rng);
    model.fit(data, rng);
    return model.sample(50, rng);
  };
  CHECK(run() == run());
}

TEST_CASE("gan: rejects bad input") {
  Rng rng(10);
  GanModel model(6, small_gan(), rng);
  CHECK_THROWS_AS(model.fit(std::vector<Genotype>{}, rng), ParameterError);
  CHECK_THROWS_AS(model.fit(std::vector<Genotype>{Genotype(5)}, rng), StructuralError);
  auto cfg = small_gan();
  cfg.batch_size = 0;
  CHECK_THROWS_AS(GanModel(6, cfg, rng), ParameterError);
}

// ---------------------------------------------------------------------------
// DAE

namespace {

DaeConfig small_dae() {
  DaeConfig c;
  c.hidden = 20;
  c.epochs = 200;
  c.optimizer.learning_rate = 0.1;
  return c;
}

}  // namespace

TEST_CASE("dae: zero corruption and zero learning rate change nothing") {
  Rng rng(11);
  DaeConfig cfg = small_dae();
  cfg.corruption = 0.0;
  cfg.optimizer.learning_rate = 0.0;
  cfg.epochs = 5;
  DaeModel model(8, cfg, rng);
  const auto before = model.network();
  model.fit(std::vector<Genotype>{Genotype::from_string("10101010")}, rng);
  CHECK(model.network().same_parameters(before));
}

TEST_CASE("dae: memorizes a point mass") {
  Rng rng(12);
  const auto target = Genotype::from_string("1101001110");
  DaeModel model(10, small_dae(), rng);
  model.fit(std::vector<Genotype>(20, target), rng);
  const auto p = model.reconstruct(target);
  for (std::size_t j = 0; j < 10; ++j) CHECK(std::abs(p[j] - target[j]) < 0.1);
  for (double loss : model.last_trace().mean_reconstruction_loss) CHECK(std::isfinite(loss));
  CHECK(model.last_trace().mean_reconstruction_loss.size() == 200);

  int near = 0;
  const auto samples = model.sample(1000, std::vector<Genotype>{Genotype(10), all_ones(10)}, rng);
  // 5 chain steps from arbitrary seeds
  DaeConfig five = small_dae();
  five.chain_steps = 5;
  Rng rng2(12);
  DaeModel chained(10, five, rng2);
  chained.fit(std::vector<Genotype>(20, target), rng2);
  for (const auto& g : chained.sample(1000, std::vector<Genotype>{Genotype(10), all_ones(10)}, rng2)) {
    near += hamming_distance(g, target) <= 1;
  }
  CHECK(near >= 900);
  CHECK(samples.size() == 1000);

  std::ostringstream csv;
  model.last_trace().write_csv(csv);
  CHECK(csv.str().rfind("epoch,mean_reconstruction_loss\n0,", 0) == 0);
}

TEST_CASE("dae: sampling chain") {
  Rng rng(13);
  DaeConfig cfg = small_dae();
  cfg.chain_steps = 0;
  DaeModel copy(6, cfg, rng);
  const std::vector<Genotype> seeds{Genotype::from_string("101100"), Genotype::from_string("000111")};
  const auto out = copy.sample(5, seeds, rng);
  REQUIRE(out.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(out[i] == seeds[i % 2]);
  CHECK(copy.sample(0, seeds, rng).empty());
  CHECK_THROWS_AS(copy.sample(1, std::vector<Genotype>{}, rng), ParameterError);

  cfg.chain_steps = 1;
  DaeModel untrained(12, cfg, rng);
  zero_network(untrained.network());
  const auto samples = untrained.sample(10000, std::vector<Genotype>{Genotype(12)}, rng);
  for (double m : bit_means(samples, 12)) {
    CHECK(m >= 0.47);
    CHECK(m <= 0.53);
  }
}

TEST_CASE("dae: deterministic given the seed") {
  const std::vector<Genotype> data{Genotype::from_string("110011"), Genotype::from_string("111100")};
  auto run = [&] {
    Rng rng(14);
    DaeConfig cfg = small_dae();
    cfg.epochs = 10;
    DaeModel model(6, cfg, rng);
    model.fit(data, rng);
    return model.sample(50, rng);
  };
  CHECK(run() == run());

  Rng rng(15);
  DaeConfig cfg = small_dae();
  cfg.epochs = 10;
  cfg.sample_corruption = 0.0;
  DaeModel model(6, cfg, rng);
  model.fit(data, rng);
  CHECK(model.reconstruct(data[0]) == model.reconstruct(data[0]));
  CHECK(model.corrupt(data[0], 0.0, rng) == data[0]);
}

// ---------------------------------------------------------------------------
// UMDA

TEST_CASE("umda: fit and clamp") {
  MarginalModel m(4);
  m.fit(std::vector<Genotype>{Genotype::from_string("0000"), Genotype::from_string("1111")});
  for (double p : m.probabilities()) CHECK(p == 0.5);
  m.fit(std::vector<Genotype>{Genotype::from_string("1111")});
  for (double p : m.probabilities()) CHECK(p == 0.75);
  m.fit(std::vector<Genotype>{Genotype::from_string("0000")});
  for (double p : m.probabilities()) CHECK(p == 0.25);
  CHECK_THROWS_AS(MarginalModel(2), ParameterError);
  CHECK_THROWS_AS(m.fit(std::vector<Genotype>{}), ParameterError);

  Rng rng(16);
  MarginalModel big(30);
  for (int t = 0; t < 50; ++t) {
    std::vector<Genotype> set;
    for (int i = 0; i < 7; ++i) set.push_back(Genotype::random(30, rng));
    big.fit(set);
    for (double p : big.probabilities()) {
      CHECK(p >= big.p_min());
      CHECK(p <= big.p_max());
    }
  }
}

TEST_CASE("umda: sampling") {
  MarginalModel m(100);
  m.fit(std::vector<Genotype>{all_ones(100)});
  Rng rng(17);
  const auto samples = m.sample(1000, rng);
  double mean = 0.0;
  for (double v : bit_means(samples, 100)) mean += v / 100.0;
  CHECK(mean >= 0.95);
  CHECK(m.sample(0, rng).empty());
  Rng a(5);
  Rng b(5);
  CHECK(m.sample(20, a) == m.sample(20, b));
}

TEST_CASE("umda: marginals pass a chi-square goodness-of-fit test") {
  Rng rng(18);
  const std::size_t n = 10;
  const std::size_t draws = 10000;
  const boost::math::chi_squared chi(static_cast<double>(n));
  const double critical = boost::math::quantile(boost::math::complement(chi, 0.01));
  for (int trial = 0; trial < 20; ++trial) {
    MarginalModel m(n);
    std::vector<double> p(n);
    for (auto& v : p) v = 0.05 + 0.9 * uniform01(rng);
    m.set_probabilities(p);
    const auto samples = m.sample(draws, rng);
    double stat = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      double ones = 0.0;
      for (const auto& g : samples) ones += g[j];
      const double expected = p[j] * draws;
      stat += (ones - expected) * (ones - expected) / (draws * p[j] * (1.0 - p[j]));
    }
    CHECK(stat < critical);
  }
}
