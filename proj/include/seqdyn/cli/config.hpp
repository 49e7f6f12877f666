#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seqdyn/core/budget.hpp"
#include "seqdyn/core/errors.hpp"
#include "seqdyn/core/geometry.hpp"
#include "seqdyn/core/partition.hpp"
#include "seqdyn/core/rational.hpp"
#include "seqdyn/seqentropy/index_family.hpp"
#include "seqdyn/seqentropy/join.hpp"

namespace seqdyn::cli {

enum class Experiment {
  kEntropyTrace,
  kSupEnvelope,
  kBoundaryGrowth,
  kMixingScan,
  kRigidityScan,
  kTripleCorrelation,
  kAsymmetryRatio,
  kMcEntropy,
};

enum class SystemKind {
  kIdentity,
  kIdentity2d,
  kIet,
  kRotation,
  kBernoulli,
  kBaker,
  kRectangle,
  kProductRotation,
  kVerticalSwap,
};

enum class PartitionKind {
  kTrivial,
  kHalves,
  kDyadic,
  kExplicit,
  kQuadrants,
  kVerticalHalves,
  kGrid,
  kRects,
  kSources,
  kCylinder,
};

enum class FamilyKind { kProgression, kGeometric, kExplicit };

enum class OutputFormat { kCsv, kJson, kBoth };

template <class E>
using NameTable = std::vector<std::pair<E, std::string_view>>;

inline const NameTable<Experiment>& experiment_names() {
  static const NameTable<Experiment> t{
      {Experiment::kEntropyTrace, "entropy-trace"},
      {Experiment::kSupEnvelope, "sup-envelope"},
      {Experiment::kBoundaryGrowth, "boundary-growth"},
      {Experiment::kMixingScan, "mixing-scan"},
      {Experiment::kRigidityScan, "rigidity-scan"},
      {Experiment::kTripleCorrelation, "triple-correlation"},
      {Experiment::kAsymmetryRatio, "asymmetry-ratio"},
      {Experiment::kMcEntropy, "mc-entropy"},
  };
  return t;
}

inline const NameTable<SystemKind>& system_names() {
  static const NameTable<SystemKind> t{
      {SystemKind::kIdentity, "identity"},
      {SystemKind::kIdentity2d, "identity-2d"},
      {SystemKind::kIet, "iet"},
      {SystemKind::kRotation, "rotation"},
      {SystemKind::kBernoulli, "bernoulli"},
      {SystemKind::kBaker, "baker"},
      {SystemKind::kRectangle, "rectangle"},
      {SystemKind::kProductRotation, "product-rotation"},
      {SystemKind::kVerticalSwap, "vertical-swap"},
  };
  return t;
}

inline const NameTable<PartitionKind>& partition_names() {
  static const NameTable<PartitionKind> t{
      {PartitionKind::kTrivial, "trivial"},
      {PartitionKind::kHalves, "halves"},
      {PartitionKind::kDyadic, "dyadic"},
      {PartitionKind::kExplicit, "explicit"},
      {PartitionKind::kQuadrants, "quadrants"},
      {PartitionKind::kVerticalHalves, "vertical-halves"},
      {PartitionKind::kGrid, "grid"},
      {PartitionKind::kRects, "rects"},
      {PartitionKind::kSources, "sources"},
      {PartitionKind::kCylinder, "cylinder"},
  };
  return t;
}

inline const NameTable<FamilyKind>& family_names() {
  static const NameTable<FamilyKind> t{
      {FamilyKind::kProgression, "progression"},
      {FamilyKind::kGeometric, "geometric"},
      {FamilyKind::kExplicit, "explicit"},
  };
  return t;
}

inline const NameTable<OutputFormat>& format_names() {
  static const NameTable<OutputFormat> t{
      {OutputFormat::kCsv, "csv"}, {OutputFormat::kJson, "json"}, {OutputFormat::kBoth, "both"}};
  return t;
}

inline const NameTable<Direction>& direction_names() {
  static const NameTable<Direction> t{{Direction::kForward, "forward"}, {Direction::kBackward, "backward"}};
  return t;
}

template <class E>
std::string name_of(const NameTable<E>& table, E value) {
  for (const auto& [v, n] : table)
    if (v == value) return std::string(n);
  return "?";
}

template <class E>
std::optional<E> lookup(const NameTable<E>& table, std::string_view name) {
  for (const auto& [v, n] : table)
    if (n == name) return v;
  return std::nullopt;
}

// Largest budgets a config may request.
inline Budget hard_limits() {
  Budget b;
  b.max_family = 1 << 16;
  b.max_power = 10'000'000;
  b.max_cuts = 100'000'000;
  b.max_pieces = 10'000'000;
  b.max_samples = 100'000'000;
  b.max_ledger_steps = 100'000;
  return b;
}

struct ExperimentConfig {
  std::string name;
  Experiment experiment = Experiment::kEntropyTrace;

  SystemKind system = SystemKind::kIdentity;
  std::optional<Rational> alpha;
  std::optional<Rational> beta;
  std::optional<std::int64_t> golden;
  std::vector<std::int64_t> cf;
  std::int64_t safety = 1000;
  std::vector<Rational> lengths;
  std::vector<std::int64_t> permutation;
  std::vector<Rational> masses;
  std::vector<Rect> sources;
  std::vector<Vec2> translations;

  PartitionKind partition = PartitionKind::kHalves;
  std::int64_t depth = 1;
  std::int64_t y_depth = 0;
  std::vector<Rational> cuts;
  std::vector<Label> labels;
  std::vector<LabeledRect> rects;

  FamilyKind family = FamilyKind::kProgression;
  GrowthSpec growth = GrowthSpec::linear();
  std::int64_t cap = 12;
  std::vector<std::int64_t> members;
  std::vector<std::int64_t> j_values;
  Direction direction = Direction::kForward;
  std::int64_t library_depth = 4;

  std::int64_t samples = 10'000;
  std::optional<std::uint64_t> seed;
  std::int64_t bootstrap = 200;

  std::int64_t test_depth = 6;
  Rational threshold = Rational(1, 20);
  std::int64_t scan_j = 0;
  std::int64_t m_cap = 100;
  std::vector<std::int64_t> m_values;
  std::vector<std::int64_t> n_values;
  std::vector<Rational> set;
  std::int64_t steps = 20;

  Budget budget;
  std::string out_dir = "results";
  OutputFormat format = OutputFormat::kBoth;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  std::string stem() const { return name.empty() ? name_of(experiment_names(), experiment) : name; }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const std::size_t end = s.find(sep, start);
    const std::string_view piece = trim(s.substr(start, end == std::string_view::npos ? s.npos : end - start));
    if (!piece.empty()) out.emplace_back(piece);
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return out;
}

// Whitespace- or comma-separated tokens.
inline std::vector<std::string> tokens(std::string_view s) {
  std::string t(s);
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream in(t);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

struct Field {
  std::string key;
  int line = 0;

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(key, line, what); }

  std::int64_t integer(std::string_view text) const {
    text = trim(text);
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size()) fail("'" + std::string(text) + "' is not an integer");
    return v;
  }

  std::int64_t non_negative(std::string_view text) const {
    const std::int64_t v = integer(text);
    if (v < 0) fail("must be >= 0, got " + std::to_string(v));
    return v;
  }

  Rational rational(std::string_view text) const {
    try {
      return Rational::parse(trim(text));
    } catch (const ParseError& e) {
      fail(e.what());
    }
  }

  std::vector<std::int64_t> integers(std::string_view text) const {
    std::vector<std::int64_t> out;
    for (const auto& t : tokens(text)) {
      const auto dots = t.find("..");
      if (dots != std::string::npos) {
        const std::int64_t lo = integer(t.substr(0, dots));
        const std::int64_t hi = integer(t.substr(dots + 2));
        if (hi < lo) fail("empty range '" + t + "'");
        if (hi - lo > 1'000'000) fail("range '" + t + "' is too long");
        for (std::int64_t v = lo; v <= hi; ++v) out.push_back(v);
      } else {
        out.push_back(integer(t));
      }
    }
    return out;
  }

  std::vector<Rational> rationals(std::string_view text) const {
    std::vector<Rational> out;
    for (const auto& t : tokens(text)) out.push_back(rational(t));
    return out;
  }

  // "x0 y0 x1 y1 [extra...]" groups separated by ';'.
  std::vector<std::vector<Rational>> groups(std::string_view text, std::size_t width) const {
    std::vector<std::vector<Rational>> out;
    for (const auto& g : split(text, ';')) {
      auto v = rationals(g);
      if (v.size() != width) {
        fail("group '" + g + "' needs " + std::to_string(width) + " numbers, got " + std::to_string(v.size()));
      }
      out.push_back(std::move(v));
    }
    return out;
  }

  template <class E>
  E choice(const NameTable<E>& table, std::string_view text) const {
    text = trim(text);
    if (auto v = lookup(table, text)) return *v;
    std::string options;
    for (const auto& [_, n] : table) options += (options.empty() ? "" : ", ") + std::string(n);
    fail("unknown value '" + std::string(text) + "' (expected one of: " + options + ")");
  }
};

inline std::string join_list(const std::vector<std::int64_t>& v) {
  std::string s;
  for (auto x : v) s += (s.empty() ? "" : " ") + std::to_string(x);
  return s;
}

inline std::string join_list(const std::vector<Rational>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : " ") + x.str();
  return s;
}

struct KeySpec {
  std::string key;
  std::function<void(ExperimentConfig&, const Field&, std::string_view)> parse;
  // Empty result means "omit from the echo".
  std::function<std::string(const ExperimentConfig&)> echo;
};

inline std::size_t as_size(std::int64_t v) { return static_cast<std::size_t>(v); }

inline const std::vector<KeySpec>& key_specs() {
  using C = ExperimentConfig;
  using F = Field;
  using SV = std::string_view;
  static const std::vector<KeySpec> specs{
      {"name", [](C& c, const F&, SV v) { c.name = std::string(trim(v)); }, [](const C& c) { return c.name; }},
      {"experiment", [](C& c, const F& f, SV v) { c.experiment = f.choice(experiment_names(), v); },
       [](const C& c) { return name_of(experiment_names(), c.experiment); }},
      {"system", [](C& c, const F& f, SV v) { c.system = f.choice(system_names(), v); },
       [](const C& c) { return name_of(system_names(), c.system); }},
      {"alpha", [](C& c, const F& f, SV v) { c.alpha = f.rational(v); },
       [](const C& c) { return c.alpha ? c.alpha->str() : ""; }},
      {"beta", [](C& c, const F& f, SV v) { c.beta = f.rational(v); },
       [](const C& c) { return c.beta ? c.beta->str() : ""; }},
      {"golden", [](C& c, const F& f, SV v) { c.golden = f.non_negative(v); },
       [](const C& c) { return c.golden ? std::to_string(*c.golden) : ""; }},
      {"cf", [](C& c, const F& f, SV v) { c.cf = f.integers(v); }, [](const C& c) { return join_list(c.cf); }},
      {"safety", [](C& c, const F& f, SV v) { c.safety = f.non_negative(v); },
       [](const C& c) { return std::to_string(c.safety); }},
      {"lengths", [](C& c, const F& f, SV v) { c.lengths = f.rationals(v); },
       [](const C& c) { return join_list(c.lengths); }},
      {"permutation", [](C& c, const F& f, SV v) { c.permutation = f.integers(v); },
       [](const C& c) { return join_list(c.permutation); }},
      {"masses", [](C& c, const F& f, SV v) { c.masses = f.rationals(v); },
       [](const C& c) { return join_list(c.masses); }},
      {"sources",
       [](C& c, const F& f, SV v) {
         c.sources.clear();
         for (auto& g : f.groups(v, 4)) c.sources.push_back({g[0], g[1], g[2], g[3]});
       },
       [](const C& c) {
         std::string s;
         for (const auto& r : c.sources) {
           s += (s.empty() ? "" : "; ") + join_list(std::vector<Rational>{r.x0, r.y0, r.x1, r.y1});
         }
         return s;
       }},
      {"translations",
       [](C& c, const F& f, SV v) {
         c.translations.clear();
         for (auto& g : f.groups(v, 2)) c.translations.push_back({g[0], g[1]});
       },
       [](const C& c) {
         std::string s;
         for (const auto& t : c.translations) s += (s.empty() ? "" : "; ") + join_list(std::vector<Rational>{t.dx, t.dy});
         return s;
       }},
      {"partition", [](C& c, const F& f, SV v) { c.partition = f.choice(partition_names(), v); },
       [](const C& c) { return name_of(partition_names(), c.partition); }},
      {"depth", [](C& c, const F& f, SV v) { c.depth = f.non_negative(v); },
       [](const C& c) { return std::to_string(c.depth); }},
      {"y_depth", [](C& c, const F& f, SV v) { c.y_depth = f.non_negative(v); },
       [](const C& c) { return std::to_string(c.y_depth); }},
      {"cuts", [](C& c, const F& f, SV v) { c.cuts = f.rationals(v); }, [](const C& c) { return join_list(c.cuts); }},
      {"labels", [](C& c, const F& f, SV v) { c.labels = f.integers(v); },
       [](const C& c) { return join_list(c.labels); }},
      {"rects",
       [](C& c, const F& f, SV v) {
         c.rects.clear();
         for (auto& g : f.groups(v, 5)) {
           if (g[4].denominator() != 1) f.fail("rectangle label '" + g[4].str() + "' must be an integer");
           c.rects.push_back({{g[0], g[1], g[2], g[3]}, g[4].numerator().convert_to<Label>()});
         }
       },
       [](const C& c) {
         std::string s;
         for (const auto& r : c.rects) {
           s += (s.empty() ? "" : "; ") +
                join_list(std::vector<Rational>{r.rect.x0, r.rect.y0, r.rect.x1, r.rect.y1, Rational(r.label)});
         }
         return s;
       }},
      {"family", [](C& c, const F& f, SV v) { c.family = f.choice(family_names(), v); },
       [](const C& c) { return name_of(family_names(), c.family); }},
      {"growth",
       [](C& c, const F& f, SV v) {
         try {
           c.growth = GrowthSpec::parse(std::string(trim(v)));
         } catch (const ValidationError& e) {
           f.fail(e.what());
         }
       },
       [](const C& c) { return c.growth.str(); }},
      {"cap", [](C& c, const F& f, SV v) { c.cap = f.non_negative(v); }, [](const C& c) { return std::to_string(c.cap); }},
      {"members", [](C& c, const F& f, SV v) { c.members = f.integers(v); },
       [](const C& c) { return join_list(c.members); }},
      {"j", [](C& c, const F& f, SV v) { c.j_values = f.integers(v); }, [](const C& c) { return join_list(c.j_values); }},
      {"direction", [](C& c, const F& f, SV v) { c.direction = f.choice(direction_names(), v); },
       [](const C& c) { return name_of(direction_names(), c.direction); }},
      {"library_depth", [](C& c, const F& f, SV v) { c.library_depth = f.non_negative(v); },
       [](const C& c) { return std::to_string(c.library_depth); }},
      {"samples", [](C& c, const F& f, SV v) { c.samples = f.non_negative(v); },
       [](const C& c) { return std::to_string(c.samples); }},
      {"seed",
       [](C& c, const F& f, SV v) {
         const std::string_view t = trim(v);
         std::uint64_t s = 0;
         const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), s);
         if (ec != std::errc() || ptr != t.data() + t.size()) f.fail("'" + std::string(t) + "' is not an unsigned 64-bit seed");
         c.seed = s;
       },
       [](const C& c) { return c.seed ? std::to_string(*c.seed) : ""; }},
      {"bootstrap", [](C& c, const F& f, SV v) { c.bootstrap = f.non_negative(v); },
       [](const C& c) { return std::to_string(c.bootstrap); }},
      {"test_depth", [](C& c, const F& f, SV v) { c.test_depth = f.non_negative(v); },
       [](const C& c) { return std::to_string(c.test_depth); }},
      {"threshold", [](C& c, const F& f, SV v) { c.threshold = f.rational(v); },
       [](const C& c) { return c.threshold.str(); }},
      {"scan_j", [](C& c, const F& f, SV v) { c.scan_j = f.non_negative(v); },
       [](const C& c) { return std::to_string(c.scan_j); }},
      {"m_cap", [](C& c, const F& f, SV v) { c.m_cap = f.non_negative(v); },
       [](const C& c) { return std::to_string(c.m_cap); }},
      {"m", [](C& c, const F& f, SV v) { c.m_values = f.integers(v); }, [](const C& c) { return join_list(c.m_values); }},
      {"n", [](C& c, const F& f, SV v) { c.n_values = f.integers(v); }, [](const C& c) { return join_list(c.n_values); }},
      {"set", [](C& c, const F& f, SV v) { c.set = f.rationals(v); }, [](const C& c) { return join_list(c.set); }},
      {"steps", [](C& c, const F& f, SV v) { c.steps = f.non_negative(v); },
       [](const C& c) { return std::to_string(c.steps); }},
      {"budget.max_family", [](C& c, const F& f, SV v) { c.budget.max_family = as_size(f.non_negative(v)); },
       [](const C& c) { return std::to_string(c.budget.max_family); }},
      {"budget.max_power", [](C& c, const F& f, SV v) { c.budget.max_power = f.non_negative(v); },
       [](const C& c) { return std::to_string(c.budget.max_power); }},
      {"budget.max_cuts", [](C& c, const F& f, SV v) { c.budget.max_cuts = as_size(f.non_negative(v)); },
       [](const C& c) { return std::to_string(c.budget.max_cuts); }},
      {"budget.max_pieces", [](C& c, const F& f, SV v) { c.budget.max_pieces = as_size(f.non_negative(v)); },
       [](const C& c) { return std::to_string(c.budget.max_pieces); }},
      {"budget.max_samples", [](C& c, const F& f, SV v) { c.budget.max_samples = as_size(f.non_negative(v)); },
       [](const C& c) { return std::to_string(c.budget.max_samples); }},
      {"budget.max_ledger_steps", [](C& c, const F& f, SV v) { c.budget.max_ledger_steps = f.non_negative(v); },
       [](const C& c) { return std::to_string(c.budget.max_ledger_steps); }},
      {"out_dir", [](C& c, const F&, SV v) { c.out_dir = std::string(trim(v)); }, [](const C& c) { return c.out_dir; }},
      {"format", [](C& c, const F& f, SV v) { c.format = f.choice(format_names(), v); },
       [](const C& c) { return name_of(format_names(), c.format); }},
  };
  return specs;
}

}  // namespace detail

// Parses the flat "key = value" format. '#' starts a comment; every key may
// appear at most once; "experiment" and "system" are required.
inline ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::map<std::string, int> seen;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("", line_no, "expected 'key = value'");
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    const auto& specs = detail::key_specs();
    const auto it = std::find_if(specs.begin(), specs.end(), [&](const auto& s) { return s.key == key; });
    if (it == specs.end()) throw ParseError(key, line_no, "unknown key");
    if (auto [prev, fresh] = seen.emplace(key, line_no); !fresh) {
      throw ParseError(key, line_no, "duplicate key (first set on line " + std::to_string(prev->second) + ")");
    }
    it->parse(cfg, detail::Field{key, line_no}, value);
  }
  if (!seen.contains("experiment")) throw ParseError("experiment", 0, "missing required key");
  if (!seen.contains("system")) throw ParseError("system", 0, "missing required key");
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

// Canonical text form; parse_config(echo_config(c)) == c.
inline std::string echo_config(const ExperimentConfig& cfg) {
  std::string out;
  for (const auto& spec : detail::key_specs()) {
    const std::string v = spec.echo(cfg);
    if (!v.empty()) out += spec.key + " = " + v + "\n";
  }
  return out;
}

}  // namespace seqdyn::cli
