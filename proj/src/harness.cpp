#include "ganeda/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "ganeda/errors.hpp"

namespace ganeda {

ProblemInstance build_instance(const ProblemSpec& spec) {
  switch (spec.kind) {
    case ProblemKind::OneMax: return ProblemInstance::onemax(spec.n);
    case ProblemKind::ConcatTrap: return ProblemInstance::concat_trap(spec.n, spec.k);
    case ProblemKind::HIFF: return ProblemInstance::hiff(spec.n);
    case ProblemKind::NKLandscape:
      if (spec.instance_path) return load_nk_instance(*spec.instance_path);
      return generate_nk_instance(spec.n, spec.k, spec.nk_seed);
  }
  throw ParameterError("unknown problem kind");
}

// ---------------------------------------------------------------------------
// config parsing

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t to_u64(const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    throw ParameterError("expected a non-negative integer, got '" + v + "'");
  }
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    throw ParameterError("integer out of range: '" + v + "'");
  }
}

std::size_t to_size(const std::string& v) { return static_cast<std::size_t>(to_u64(v)); }

double to_double(const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ParameterError("expected a number, got '" + v + "'");
  }
  if (used != v.size() || !std::isfinite(d)) throw ParameterError("expected a number, got '" + v + "'");
  return d;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParameterError("expected true|false, got '" + v + "'");
}

double in_unit_open(const std::string& key, double d) {
  if (!(d >= 0.0 && d < 1.0)) throw ParameterError(key + " must be in [0,1), got " + std::to_string(d));
  return d;
}

std::vector<std::size_t> to_size_list(const std::string& v) {
  std::vector<std::size_t> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_size(trim(item)));
  return out;
}

nn::InitSpec::Kind to_init_kind(const std::string& v) {
  if (v == "normal") return nn::InitSpec::Kind::Normal;
  if (v == "uniform") return nn::InitSpec::Kind::Uniform;
  throw ParameterError("expected normal|uniform, got '" + v + "'");
}

std::string_view init_kind_name(nn::InitSpec::Kind k) { return k == nn::InitSpec::Kind::Normal ? "normal" : "uniform"; }

PriorKind to_prior(const std::string& v) {
  if (v == "uniform") return PriorKind::Uniform01;
  if (v == "normal") return PriorKind::StandardNormal;
  throw ParameterError("expected uniform|normal, got '" + v + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

void add_optimizer_keys(std::map<std::string, Setter>& table, const std::string& prefix,
                        std::function<nn::OptimizerConfig&(ExperimentConfig&)> pick) {
  table[prefix + "alpha"] = [pick, prefix](ExperimentConfig& c, const std::string& v) {
    pick(c).learning_rate = in_unit_open(prefix + "alpha", to_double(v));
  };
  table[prefix + "momentum"] = [pick, prefix](ExperimentConfig& c, const std::string& v) {
    pick(c).momentum = in_unit_open(prefix + "momentum", to_double(v));
  };
  table[prefix + "weight_decay"] = [pick, prefix](ExperimentConfig& c, const std::string& v) {
    const double d = to_double(v);
    if (d < 0.0) throw ParameterError(prefix + "weight_decay must be >= 0");
    pick(c).weight_decay = d;
  };
  table[prefix + "alpha_schedule"] = [pick](ExperimentConfig& c, const std::string& v) {
    pick(c).learning_rate_schedule = nn::Schedule::parse(v);
  };
  table[prefix + "momentum_schedule"] = [pick](ExperimentConfig& c, const std::string& v) {
    pick(c).momentum_schedule = nn::Schedule::parse(v);
  };
  table[prefix + "decay_schedule"] = [pick](ExperimentConfig& c, const std::string& v) {
    pick(c).weight_decay_schedule = nn::Schedule::parse(v);
  };
}

const std::map<std::string, Setter>& key_table() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["problem"] = [](ExperimentConfig& c, const std::string& v) { c.problem.kind = parse_problem_kind(v); };
    t["n"] = [](ExperimentConfig& c, const std::string& v) { c.problem.n = to_size(v); };
    t["k"] = [](ExperimentConfig& c, const std::string& v) { c.problem.k = to_size(v); };
    t["instance"] = [](ExperimentConfig& c, const std::string& v) {
      if (v.empty()) throw ParameterError("instance path is empty");
      c.problem.instance_path = v;
    };
    t["nk.seed"] = [](ExperimentConfig& c, const std::string& v) { c.problem.nk_seed = to_u64(v); };
    t["model"] = [](ExperimentConfig& c, const std::string& v) { c.eda.model.kind = parse_model_kind(v); };
    t["truncation"] = [](ExperimentConfig& c, const std::string& v) {
      const double d = to_double(v);
      if (!(d > 0.0 && d <= 1.0)) throw ParameterError("truncation must be in (0,1], got " + v);
      c.eda.truncation = d;
    };
    t["pop_sizes"] = [](ExperimentConfig& c, const std::string& v) {
      auto sizes = to_size_list(v);
      if (sizes.empty()) throw ParameterError("pop_sizes must list at least one size");
      c.population_sizes = std::move(sizes);
    };
    t["runs"] = [](ExperimentConfig& c, const std::string& v) {
      c.runs_per_setting = to_size(v);
      if (c.runs_per_setting == 0) throw ParameterError("runs must be >= 1");
    };
    t["seed"] = [](ExperimentConfig& c, const std::string& v) { c.base_seed = to_u64(v); };
    t["max_generations"] = [](ExperimentConfig& c, const std::string& v) { c.eda.max_generations = to_size(v); };
    t["stall_generations"] = [](ExperimentConfig& c, const std::string& v) {
      c.eda.stall_generations = to_size(v);
      if (c.eda.stall_generations == 0) throw ParameterError("stall_generations must be >= 1");
    };
    t["verify_fitness"] = [](ExperimentConfig& c, const std::string& v) { c.eda.verify_fitness = to_bool(v); };
    t["out"] = [](ExperimentConfig& c, const std::string& v) { c.output = v; };

    // gan
    t["gan.z_dim"] = [](ExperimentConfig& c, const std::string& v) { c.eda.model.gan.prior.z_dim = to_size(v); };
    t["gan.prior"] = [](ExperimentConfig& c, const std::string& v) {
      c.eda.model.gan.prior.distribution = to_prior(v);
    };
    t["gan.g_hidden"] = [](ExperimentConfig& c, const std::string& v) {
      c.eda.model.gan.generator_hidden = to_size(v);
    };
    t["gan.d_hidden"] = [](ExperimentConfig& c, const std::string& v) {
      c.eda.model.gan.discriminator_hidden = to_size(v);
    };
    t["gan.activation"] = [](ExperimentConfig& c, const std::string& v) {
      c.eda.model.gan.hidden_activation = nn::parse_activation(v);
    };
    t["gan.init"] = [](ExperimentConfig& c, const std::string& v) { c.eda.model.gan.init.kind = to_init_kind(v); };
    t["gan.init_scale"] = [](ExperimentConfig& c, const std::string& v) {
      const double d = to_double(v);
      if (d < 0.0) throw ParameterError("gan.init_scale must be >= 0");
      c.eda.model.gan.init.scale = d;
    };
    t["gan.g_dropout"] = [](ExperimentConfig& c, const std::string& v) {
      c.eda.model.gan.generator_dropout = in_unit_open("gan.g_dropout", to_double(v));
    };
    t["gan.d_dropout"] = [](ExperimentConfig& c, const std::string& v) {
      c.eda.model.gan.discriminator_dropout = in_unit_open("gan.d_dropout", to_double(v));
    };
    t["gan.epochs"] = [](ExperimentConfig& c, const std::string& v) { c.eda.model.gan.epochs = to_size(v); };
    t["gan.batch"] = [](ExperimentConfig& c, const std::string& v) {
      c.eda.model.gan.batch_size = to_size(v);
      if (c.eda.model.gan.batch_size == 0) throw ParameterError("gan.batch must be >= 1");
    };
    t["gan.warm_start"] = [](ExperimentConfig& c, const std::string& v) { c.eda.model.gan.warm_start = to_bool(v); };
    add_optimizer_keys(t, "gan.g.", [](ExperimentConfig& c) -> nn::OptimizerConfig& {
      return c.eda.model.gan.generator_optimizer;
    });
    add_optimizer_keys(t, "gan.d.", [](ExperimentConfig& c) -> nn::OptimizerConfig& {
      return c.eda.model.gan.discriminator_optimizer;
    });

    // dae
    t["dae.hidden"] = [](ExperimentConfig& c, const std::string& v) { c.eda.model.dae.hidden = to_size(v); };
    t["dae.activation"] = [](ExperimentConfig& c, const std::string& v) {
      c.eda.model.dae.hidden_activation = nn::parse_activation(v);
    };
    t["dae.init"] = [](ExperimentConfig& c, const std::string& v) { c.eda.model.dae.init.kind = to_init_kind(v); };
    t["dae.init_scale"] = [](ExperimentConfig& c, const std::string& v) {
      const double d = to_double(v);
      if (d < 0.0) throw ParameterError("dae.init_scale must be >= 0");
      c.eda.model.dae.init.scale = d;
    };
    t["dae.dropout"] = [](ExperimentConfig& c, const std::string& v) {
      c.eda.model.dae.hidden_dropout = in_unit_open("dae.dropout", to_double(v));
    };
    t["dae.rho"] = [](ExperimentConfig& c, const std::string& v) {
      c.eda.model.dae.corruption = in_unit_open("dae.rho", to_double(v));
    };
    t["dae.sample_rho"] = [](ExperimentConfig& c, const std::string& v) {
      c.eda.model.dae.sample_corruption = in_unit_open("dae.sample_rho", to_double(v));
    };
    t["dae.chain_steps"] = [](ExperimentConfig& c, const std::string& v) {
      c.eda.model.dae.chain_steps = to_size(v);
    };
    t["dae.epochs"] = [](ExperimentConfig& c, const std::string& v) { c.eda.model.dae.epochs = to_size(v); };
    t["dae.batch"] = [](ExperimentConfig& c, const std::string& v) {
      c.eda.model.dae.batch_size = to_size(v);
      if (c.eda.model.dae.batch_size == 0) throw ParameterError("dae.batch must be >= 1");
    };
    t["dae.warm_start"] = [](ExperimentConfig& c, const std::string& v) { c.eda.model.dae.warm_start = to_bool(v); };
    add_optimizer_keys(t, "dae.", [](ExperimentConfig& c) -> nn::OptimizerConfig& { return c.eda.model.dae.optimizer; });
    return t;
  }();
  return table;
}

// opt.<suffix> sets the same field on every network optimizer
constexpr const char* kSharedOptimizerSuffixes[] = {"alpha",          "momentum",          "weight_decay",
                                                    "alpha_schedule", "momentum_schedule", "decay_schedule"};

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  struct Entry {
    std::string value;
    std::size_t line;
  };
  std::map<std::string, Entry> entries;
  std::vector<std::string> order;
  std::size_t line_no = 0;
  std::string raw;
  std::istringstream in{std::string(text)};
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const auto line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", line_no);
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", line_no);
    const bool shared = key.rfind("opt.", 0) == 0;
    if (shared) {
      const auto suffix = key.substr(4);
      if (std::find(std::begin(kSharedOptimizerSuffixes), std::end(kSharedOptimizerSuffixes), suffix) ==
          std::end(kSharedOptimizerSuffixes)) {
        throw ParseError("unknown key '" + key + "'", line_no);
      }
    } else if (!key_table().contains(key)) {
      throw ParseError("unknown key '" + key + "'", line_no);
    }
    if (entries.contains(key)) throw ParseError("duplicate key '" + key + "'", line_no);
    entries[key] = {value, line_no};
    order.push_back(key);
  }

  ExperimentConfig config;
  auto apply = [&](const std::string& key, const Setter& setter) {
    const auto& e = entries.at(key);
    try {
      setter(config, e.value);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& err) {
      throw ParseError("invalid value for '" + key + "': " + err.what(), e.line);
    }
  };
  // shared optimizer keys first so namespaced keys override them
  for (const auto& key : order) {
    if (key.rfind("opt.", 0) != 0) continue;
    const auto suffix = key.substr(4);
    for (const char* prefix : {"gan.g.", "gan.d.", "dae."}) apply(key, key_table().at(prefix + suffix));
  }
  for (const auto& key : order) {
    if (key.rfind("opt.", 0) == 0) continue;
    apply(key, key_table().at(key));
  }

  auto line_of = [&](const std::string& key) { return entries.contains(key) ? entries.at(key).line : line_no; };
  if (!entries.contains("problem")) throw ParseError("missing required key 'problem'", line_no);
  if (!entries.contains("model")) throw ParseError("missing required key 'model'", line_no);
  const auto& p = config.problem;
  const bool nk_file = p.kind == ProblemKind::NKLandscape && p.instance_path;
  if (!nk_file && !entries.contains("n")) throw ParseError("missing required key 'n'", line_no);
  try {
    switch (p.kind) {
      case ProblemKind::ConcatTrap:
        if (!entries.contains("k")) throw ParameterError("trap needs k");
        (void)ProblemInstance::concat_trap(p.n, p.k);
        break;
      case ProblemKind::HIFF: (void)ProblemInstance::hiff(p.n); break;
      case ProblemKind::OneMax: (void)ProblemInstance::onemax(p.n); break;
      case ProblemKind::NKLandscape:
        if (!nk_file && (p.k < 1 || p.k >= p.n)) throw ParameterError("nk needs 1 <= k < n");
        break;
    }
  } catch (const Error& err) {
    throw ParseError(err.what(), line_of("problem"));
  }
  if (config.eda.model.kind == ModelKind::Umda && !nk_file && p.n < 3) {
    throw ParseError("umda needs n >= 3", line_of("n"));
  }
  for (std::size_t size : config.population_sizes) {
    if (selection_size(size, config.eda.truncation) < 2) {
      throw ParseError("population size " + std::to_string(size) + " keeps fewer than 2 individuals",
                       line_of("pop_sizes"));
    }
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace {

void format_optimizer(std::ostream& out, const std::string& prefix, const nn::OptimizerConfig& o) {
  out << prefix << "alpha=" << o.learning_rate << '\n';
  out << prefix << "momentum=" << o.momentum << '\n';
  out << prefix << "weight_decay=" << o.weight_decay << '\n';
  if (!o.learning_rate_schedule.points.empty()) {
    out << prefix << "alpha_schedule=" << o.learning_rate_schedule.to_string() << '\n';
  }
  if (!o.momentum_schedule.points.empty()) {
    out << prefix << "momentum_schedule=" << o.momentum_schedule.to_string() << '\n';
  }
  if (!o.weight_decay_schedule.points.empty()) {
    out << prefix << "decay_schedule=" << o.weight_decay_schedule.to_string() << '\n';
  }
}

}  // namespace

std::string format_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out.precision(17);
  out << std::boolalpha;
  out << "problem=" << to_string(c.problem.kind) << '\n';
  out << "n=" << c.problem.n << '\n';
  if (c.problem.kind == ProblemKind::ConcatTrap || c.problem.kind == ProblemKind::NKLandscape) {
    out << "k=" << c.problem.k << '\n';
  }
  if (c.problem.instance_path) out << "instance=" << c.problem.instance_path->string() << '\n';
  if (c.problem.kind == ProblemKind::NKLandscape) out << "nk.seed=" << c.problem.nk_seed << '\n';
  out << "model=" << to_string(c.eda.model.kind) << '\n';
  out << "truncation=" << c.eda.truncation << '\n';
  out << "pop_sizes=";
  for (std::size_t i = 0; i < c.population_sizes.size(); ++i) out << (i ? "," : "") << c.population_sizes[i];
  out << '\n';
  out << "runs=" << c.runs_per_setting << '\n';
  out << "seed=" << c.base_seed << '\n';
  out << "max_generations=" << c.eda.max_generations << '\n';
  out << "stall_generations=" << c.eda.stall_generations << '\n';
  out << "verify_fitness=" << c.eda.verify_fitness << '\n';
  out << "out=" << c.output.string() << '\n';

  const auto& g = c.eda.model.gan;
  out << "gan.z_dim=" << g.prior.z_dim << '\n';
  out << "gan.prior=" << (g.prior.distribution == PriorKind::Uniform01 ? "uniform" : "normal") << '\n';
  out << "gan.g_hidden=" << g.generator_hidden << '\n';
  out << "gan.d_hidden=" << g.discriminator_hidden << '\n';
  out << "gan.activation=" << nn::to_string(g.hidden_activation) << '\n';
  out << "gan.init=" << init_kind_name(g.init.kind) << '\n';
  out << "gan.init_scale=" << g.init.scale << '\n';
  out << "gan.g_dropout=" << g.generator_dropout << '\n';
  out << "gan.d_dropout=" << g.discriminator_dropout << '\n';
  out << "gan.epochs=" << g.epochs << '\n';
  out << "gan.batch=" << g.batch_size << '\n';
  out << "gan.warm_start=" << g.warm_start << '\n';
  format_optimizer(out, "gan.g.", g.generator_optimizer);
  format_optimizer(out, "gan.d.", g.discriminator_optimizer);

  const auto& d = c.eda.model.dae;
  out << "dae.hidden=" << d.hidden << '\n';
  out << "dae.activation=" << nn::to_string(d.hidden_activation) << '\n';
  out << "dae.init=" << init_kind_name(d.init.kind) << '\n';
  out << "dae.init_scale=" << d.init.scale << '\n';
  out << "dae.dropout=" << d.hidden_dropout << '\n';
  out << "dae.rho=" << d.corruption << '\n';
  if (d.sample_corruption) out << "dae.sample_rho=" << *d.sample_corruption << '\n';
  out << "dae.chain_steps=" << d.chain_steps << '\n';
  out << "dae.epochs=" << d.epochs << '\n';
  out << "dae.batch=" << d.batch_size << '\n';
  out << "dae.warm_start=" << d.warm_start << '\n';
  format_optimizer(out, "dae.", d.optimizer);
  return out.str();
}

// ---------------------------------------------------------------------------
// sweep

bool SweepResult::any_failed() const {
  return std::any_of(runs.begin(), runs.end(), [](const RunRow& r) { return r.failed; });
}

const AggregateRow* SweepResult::aggregate_for(std::size_t pop_size) const {
  for (const auto& a : aggregates) {
    if (a.pop_size == pop_size) return &a;
  }
  return nullptr;
}

RunRow run_single(const ExperimentConfig& config, const ProblemInstance& instance, std::size_t pop_size,
                  std::size_t run_id, std::uint64_t seed) {
  RunRow row;
  row.problem = std::string(instance.name());
  row.n = instance.n();
  row.k = instance.k();
  row.model = std::string(to_string(config.eda.model.kind));
  row.pop_size = pop_size;
  row.run_id = run_id;
  row.seed = seed;
  EdaConfig eda = config.eda;
  eda.population_size = pop_size;
  eda.seed = seed;
  try {
    row.record = run_eda(instance, eda);
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = e.what();
  }
  return row;
}

std::vector<AggregateRow> aggregate(const std::vector<RunRow>& runs) {
  std::vector<AggregateRow> out;
  std::map<std::size_t, std::vector<const RunRow*>> groups;
  for (const auto& r : runs) groups[r.pop_size].push_back(&r);
  for (const auto& [size, rows] : groups) {
    AggregateRow a;
    a.problem = rows.front()->problem;
    a.n = rows.front()->n;
    a.k = rows.front()->k;
    a.model = rows.front()->model;
    a.pop_size = size;
    std::vector<double> best;
    double evals = 0.0;
    double cpu = 0.0;
    double successes = 0.0;
    for (const RunRow* r : rows) {
      if (r->failed) continue;
      best.push_back(r->record.best_fitness);
      evals += static_cast<double>(r->record.unique_evaluations);
      cpu += r->record.cpu_seconds;
      successes += r->record.optimum_found ? 1.0 : 0.0;
    }
    a.completed_runs = best.size();
    if (!best.empty()) {
      const auto m = static_cast<double>(best.size());
      double sum = 0.0;
      for (double b : best) sum += b;
      a.mean_best_fitness = sum / m;
      if (best.size() > 1) {
        double ss = 0.0;
        for (double b : best) ss += (b - a.mean_best_fitness) * (b - a.mean_best_fitness);
        a.std_best_fitness = std::sqrt(ss / (m - 1.0));
      }
      a.mean_unique_evals = evals / m;
      a.mean_cpu_seconds = cpu / m;
      a.success_fraction = successes / m;
    }
    out.push_back(a);
  }
  return out;
}

SweepResult run_sweep(const ExperimentConfig& config, const ProblemInstance& instance, std::size_t jobs) {
  if (config.population_sizes.empty()) throw ParameterError("population_sizes is empty");
  if (config.runs_per_setting == 0) throw ParameterError("runs_per_setting must be >= 1");
  struct Task {
    std::size_t pop_size;
    std::size_t run_id;
  };
  std::vector<std::size_t> sizes = config.population_sizes;
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  std::vector<Task> tasks;
  for (std::size_t s : sizes) {
    for (std::size_t r = 0; r < config.runs_per_setting; ++r) tasks.push_back({s, r});
  }

  SweepResult result;
  result.runs.resize(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const auto& t = tasks[i];
      result.runs[i] = run_single(config, instance, t.pop_size, t.run_id, config.base_seed + t.run_id);
    }
  };
  jobs = std::clamp<std::size_t>(jobs, 1, tasks.size());
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  result.aggregates = aggregate(result.runs);
  return result;
}

SweepResult run_sweep(const ExperimentConfig& config, std::size_t jobs) {
  return run_sweep(config, build_instance(config.problem), jobs);
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_cpu(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string format_run_row(const RunRow& r) {
  std::ostringstream out;
  out << r.problem << ',' << r.n << ',' << r.k << ',' << r.model << ',' << r.pop_size << ',' << r.run_id << ','
      << r.seed << ',';
  if (r.failed) {
    out << "NA,NA,NA,NA,NA";
  } else {
    out << r.record.generations_run << ',' << r.record.unique_evaluations << ',' << fmt_double(r.record.best_fitness)
        << ',' << (r.record.optimum_found ? 1 : 0) << ',' << fmt_cpu(r.record.cpu_seconds);
  }
  return out.str();
}

std::string format_aggregate_row(const AggregateRow& a) {
  std::ostringstream out;
  out << a.problem << ',' << a.n << ',' << a.k << ',' << a.model << ',' << a.pop_size << ','
      << fmt_double(a.mean_best_fitness) << ',' << fmt_double(a.std_best_fitness) << ','
      << fmt_double(a.mean_unique_evals) << ',' << fmt_cpu(a.mean_cpu_seconds) << ','
      << fmt_double(a.success_fraction);
  return out.str();
}

void write_runs_csv(std::ostream& out, const std::vector<RunRow>& runs) {
  out << kRunsCsvHeader << '\n';
  for (const auto& r : runs) out << format_run_row(r) << '\n';
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << kAggregateCsvHeader << '\n';
  for (const auto& a : rows) out << format_aggregate_row(a) << '\n';
}

void write_sweep(const std::filesystem::path& dir, const ExperimentConfig& config, const SweepResult& result) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream f(dir / name);
    if (!f) throw Error("cannot write " + (dir / name).string());
    return f;
  };
  auto runs = open("runs.csv");
  write_runs_csv(runs, result.runs);
  auto summary = open("summary.csv");
  write_aggregate_csv(summary, result.aggregates);
  auto cfg = open("config.txt");
  cfg << format_config(config);
  for (const auto& r : result.runs) {
    if (r.failed) cfg << "# run " << r.pop_size << '/' << r.run_id << " failed: " << r.error << '\n';
  }
}

bool VerifyReport::matches() const {
  return stated_optimum &&
         std::abs(*stated_optimum - brute_force_optimum) <= 1e-9 * std::max(1.0, std::abs(brute_force_optimum));
}

VerifyReport verify_instance(const ProblemInstance& instance) {
  VerifyReport report;
  report.n = instance.n();
  report.k = instance.k();
  report.stated_optimum = instance.known_optimum();
  auto best = brute_force_optimum(instance);
  report.brute_force_optimum = best.fitness;
  report.maximizer = std::move(best.genotype);
  return report;
}

VerifyReport verify_instance(const std::filesystem::path& path) {
  const auto instance = load_nk_instance(path);
  if (instance.n() > kBruteForceMaxBits) {
    throw CapacityError("instance has n=" + std::to_string(instance.n()) + "; verification is limited to n <= " +
                        std::to_string(kBruteForceMaxBits));
  }
  return verify_instance(instance);
}

}  // namespace ganeda
