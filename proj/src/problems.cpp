#include "ganeda/problems.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>

#include "ganeda/errors.hpp"

namespace ganeda {

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::OneMax: return "onemax";
    case ProblemKind::ConcatTrap: return "trap";
    case ProblemKind::NKLandscape: return "nk";
    case ProblemKind::HIFF: return "hiff";
  }
  return "unknown";
}

ProblemKind parse_problem_kind(std::string_view text) {
  if (text == "onemax") return ProblemKind::OneMax;
  if (text == "trap") return ProblemKind::ConcatTrap;
  if (text == "nk") return ProblemKind::NKLandscape;
  if (text == "hiff") return ProblemKind::HIFF;
  throw ParameterError("unknown problem '" + std::string(text) + "' (expected onemax|trap|nk|hiff)");
}

ProblemInstance ProblemInstance::onemax(std::size_t n) {
  if (n == 0) throw ParameterError("onemax needs n >= 1");
  ProblemInstance p(ProblemKind::OneMax, n, 0);
  p.known_optimum_ = static_cast<double>(n);
  return p;
}

ProblemInstance ProblemInstance::concat_trap(std::size_t n, std::size_t k) {
  if (k == 0 || n == 0 || n % k != 0) {
    throw ParameterError("trap needs k >= 1 and n divisible by k");
  }
  ProblemInstance p(ProblemKind::ConcatTrap, n, k);
  p.known_optimum_ = static_cast<double>(n);
  return p;
}

ProblemInstance ProblemInstance::hiff(std::size_t n) {
  if (n == 0 || !std::has_single_bit(n)) throw ParameterError("hiff needs n a power of two");
  ProblemInstance p(ProblemKind::HIFF, n, 0);
  const auto levels = static_cast<double>(std::countr_zero(n)) + 1.0;
  p.known_optimum_ = static_cast<double>(n) * levels;
  return p;
}

ProblemInstance ProblemInstance::nk(std::size_t n, std::size_t k, std::vector<NkComponent> components,
                                    std::optional<double> known_optimum) {
  if (k >= n) throw InstanceCorruptError("nk needs k < n");
  if (k >= 30) throw InstanceCorruptError("nk neighbourhood too large");
  if (components.size() != n) {
    throw InstanceCorruptError("nk needs exactly n components, got " + std::to_string(components.size()));
  }
  const std::size_t table_size = std::size_t{1} << (k + 1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& c = components[i];
    if (c.neighbors.size() != k) {
      throw InstanceCorruptError("variable " + std::to_string(i) + " has " +
                                 std::to_string(c.neighbors.size()) + " neighbours, expected " +
                                 std::to_string(k));
    }
    for (std::size_t a = 0; a < k; ++a) {
      const auto j = c.neighbors[a];
      if (j >= n || j == i) {
        throw InstanceCorruptError("variable " + std::to_string(i) + " has invalid neighbour " +
                                   std::to_string(j));
      }
      for (std::size_t b = 0; b < a; ++b) {
        if (c.neighbors[b] == j) {
          throw InstanceCorruptError("variable " + std::to_string(i) + " repeats neighbour " +
                                     std::to_string(j));
        }
      }
    }
    if (c.payoffs.size() != table_size) {
      throw InstanceCorruptError("variable " + std::to_string(i) + " payoff table has " +
                                 std::to_string(c.payoffs.size()) + " entries, expected " +
                                 std::to_string(table_size));
    }
    for (double v : c.payoffs) {
      if (!std::isfinite(v)) throw InstanceCorruptError("non-finite payoff");
    }
  }
  ProblemInstance p(ProblemKind::NKLandscape, n, k);
  p.components_ = std::move(components);
  p.known_optimum_ = known_optimum;
  return p;
}

ProblemInstance ProblemInstance::with_known_optimum(std::optional<double> value) const {
  ProblemInstance copy = *this;
  copy.known_optimum_ = value;
  return copy;
}

double trap_value(std::size_t ones, std::size_t k) {
  return ones == k ? static_cast<double>(k) : static_cast<double>(k - 1 - ones);
}

namespace {

double eval_trap(std::span<const std::uint8_t> bits, std::size_t k) {
  double total = 0.0;
  for (std::size_t start = 0; start < bits.size(); start += k) {
    std::size_t ones = 0;
    for (std::size_t i = start; i < start + k; ++i) ones += bits[i];
    total += trap_value(ones, k);
  }
  return total;
}

// Bottom-up: each level merges pairs of blocks; a block is homogeneous when
// both halves are homogeneous with the same value.
double eval_hiff(std::span<const std::uint8_t> bits) {
  std::vector<int> level(bits.begin(), bits.end());  // -1 marks mixed
  double total = static_cast<double>(bits.size());
  double block = 1.0;
  while (level.size() > 1) {
    block *= 2.0;
    std::vector<int> next(level.size() / 2);
    for (std::size_t i = 0; i < next.size(); ++i) {
      const int a = level[2 * i];
      const int b = level[2 * i + 1];
      next[i] = (a != -1 && a == b) ? a : -1;
      if (next[i] != -1) total += block;
    }
    level = std::move(next);
  }
  return total;
}

double eval_nk(const ProblemInstance& p, std::span<const std::uint8_t> bits) {
  double total = 0.0;
  const auto& comps = p.nk_components();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    std::size_t index = bits[i];
    for (auto j : comps[i].neighbors) {
      if (j >= bits.size()) throw InstanceCorruptError("nk neighbour index out of range");
      index = (index << 1) | bits[j];
    }
    if (index >= comps[i].payoffs.size()) throw InstanceCorruptError("nk payoff index out of range");
    total += comps[i].payoffs[index];
  }
  return total;
}

}  // namespace

double evaluate(const ProblemInstance& instance, const Genotype& g) {
  if (g.size() != instance.n()) {
    throw StructuralError("genotype length " + std::to_string(g.size()) + " does not match n=" +
                          std::to_string(instance.n()));
  }
  const auto bits = g.bits();
  switch (instance.kind()) {
    case ProblemKind::OneMax: return static_cast<double>(g.count_ones());
    case ProblemKind::ConcatTrap: return eval_trap(bits, instance.k());
    case ProblemKind::HIFF: return eval_hiff(bits);
    case ProblemKind::NKLandscape: return eval_nk(instance, bits);
  }
  throw StructuralError("unknown problem kind");
}

Optimum brute_force_optimum(const ProblemInstance& instance) {
  const std::size_t n = instance.n();
  if (n > kBruteForceMaxBits) {
    throw CapacityError("brute force limited to n <= " + std::to_string(kBruteForceMaxBits) +
                        ", got n=" + std::to_string(n));
  }
  Genotype g(n);
  Optimum best{-std::numeric_limits<double>::infinity(), g};
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t v = 0; v < count; ++v) {
    for (std::size_t i = 0; i < n; ++i) g.set(i, (v >> (n - 1 - i)) & 1u);
    const double f = evaluate(instance, g);
    if (f > best.fitness) {
      best.fitness = f;
      best.genotype = g;
    }
  }
  return best;
}

ProblemInstance generate_nk_instance(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k < 1 || k >= n) throw ParameterError("nk generator needs 1 <= k < n");
  if (k >= 30) throw ParameterError("nk generator needs k < 30");
  Rng rng(seed);
  std::vector<NkComponent> comps(n);
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < n; ++i) {
    pool.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) pool.push_back(j);
    }
    // partial Fisher-Yates: the first k entries become a uniform k-subset
    for (std::size_t a = 0; a < k; ++a) {
      std::uniform_int_distribution<std::size_t> pick(a, pool.size() - 1);
      std::swap(pool[a], pool[pick(rng)]);
    }
    comps[i].neighbors.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    comps[i].payoffs.resize(std::size_t{1} << (k + 1));
    for (auto& v : comps[i].payoffs) v = uniform01(rng);
  }
  auto instance = ProblemInstance::nk(n, k, std::move(comps));
  if (n <= 20) {
    instance = instance.with_known_optimum(brute_force_optimum(instance).fitness);
  }
  return instance;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_token(std::istringstream& in, std::size_t line, const char* what) {
  std::string token;
  if (!(in >> token)) throw ParseError(std::string("missing ") + what, line);
  std::istringstream conv(token);
  T value{};
  conv >> value;
  if (conv.fail() || !conv.eof()) throw ParseError("invalid " + std::string(what) + " '" + token + "'", line);
  return value;
}

}  // namespace

ProblemInstance read_nk_instance(std::istream& in) {
  std::string raw;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<NkComponent> comps;
  std::vector<bool> seen;
  std::optional<double> optimum;
  std::size_t variables_read = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::istringstream tokens(line);
    if (!have_header) {
      std::string tag;
      tokens >> tag;
      if (tag != "nk") throw ParseError("expected header 'nk <n> <k>'", line_no);
      // signed parse so "-1" is rejected rather than wrapped
      const auto sn = parse_token<long long>(tokens, line_no, "n");
      const auto sk = parse_token<long long>(tokens, line_no, "k");
      if (sn < 2 || sk < 1 || sk >= sn || sk >= 30) throw ParseError("header needs 1 <= k < n", line_no);
      n = static_cast<std::size_t>(sn);
      k = static_cast<std::size_t>(sk);
      std::string extra;
      if (tokens >> extra) throw ParseError("trailing token '" + extra + "' in header", line_no);
      comps.resize(n);
      seen.assign(n, false);
      have_header = true;
      continue;
    }
    if (line.rfind("optimum", 0) == 0) {
      std::string tag;
      tokens >> tag;
      if (tag != "optimum") throw ParseError("unrecognised line", line_no);
      optimum = parse_token<double>(tokens, line_no, "optimum value");
      std::string extra;
      if (tokens >> extra) throw ParseError("trailing token '" + extra + "'", line_no);
      continue;
    }
    if (optimum) throw ParseError("variable line after 'optimum' line", line_no);
    const auto si = parse_token<long long>(tokens, line_no, "variable index");
    if (si < 0 || static_cast<std::size_t>(si) >= n) {
      throw ParseError("variable index " + std::to_string(si) + " out of range", line_no);
    }
    const auto i = static_cast<std::size_t>(si);
    if (seen[i]) throw ParseError("variable " + std::to_string(i) + " listed twice", line_no);
    seen[i] = true;
    auto& c = comps[i];
    for (std::size_t a = 0; a < k; ++a) {
      const auto j = parse_token<long long>(tokens, line_no, "neighbour index");
      if (j < 0) throw ParseError("negative neighbour index", line_no);
      c.neighbors.push_back(static_cast<std::size_t>(j));
    }
    const std::size_t table_size = std::size_t{1} << (k + 1);
    for (std::size_t t = 0; t < table_size; ++t) c.payoffs.push_back(parse_token<double>(tokens, line_no, "payoff"));
    std::string extra;
    if (tokens >> extra) throw ParseError("trailing token '" + extra + "'", line_no);
    ++variables_read;
  }
  if (!have_header) throw ParseError("missing 'nk <n> <k>' header", line_no);
  if (variables_read != n) {
    throw ParseError("expected " + std::to_string(n) + " variable lines, found " + std::to_string(variables_read),
                     line_no);
  }
  return ProblemInstance::nk(n, k, std::move(comps), optimum);
}

ProblemInstance load_nk_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open instance file " + path.string());
  return read_nk_instance(in);
}

void write_nk_instance(std::ostream& out, const ProblemInstance& instance) {
  if (instance.kind() != ProblemKind::NKLandscape) throw ParameterError("not an nk instance");
  const auto old_precision = out.precision(17);
  out << "nk " << instance.n() << ' ' << instance.k() << '\n';
  const auto& comps = instance.nk_components();
  for (std::size_t i = 0; i < comps.size(); ++i) {
    out << i;
    for (auto j : comps[i].neighbors) out << ' ' << j;
    out << ' ';
    for (double v : comps[i].payoffs) out << ' ' << v;
    out << '\n';
  }
  if (instance.known_optimum()) out << "optimum " << *instance.known_optimum() << '\n';
  out.precision(old_precision);
}

void save_nk_instance(const std::filesystem::path& path, const ProblemInstance& instance) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write instance file " + path.string());
  write_nk_instance(out, instance);
}

}  // namespace ganeda
