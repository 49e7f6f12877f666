#pragma once

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "seqdyn/cli/build.hpp"
#include "seqdyn/seqentropy/asymmetry.hpp"
#include "seqdyn/seqentropy/boundary.hpp"
#include "seqdyn/seqentropy/monte_carlo.hpp"
#include "seqdyn/seqentropy/trace.hpp"
#include "seqdyn/weaklimits/scan.hpp"
#include "seqdyn/weaklimits/triple.hpp"

namespace seqdyn::cli {

inline constexpr const char* kToolVersion = "seqdyn 0.1.0";

using Json = nlohmann::ordered_json;
using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct ResultEnvelope {
  std::string tool_version = kToolVersion;
  std::string config_echo;
  std::string timestamp;
  double wall_seconds = 0.0;
  Table table;
  std::vector<std::string> warnings;
  Json summary = Json::object();
  Json detail = Json::object();
  std::string plot_x;
  std::string plot_y;
  std::vector<std::pair<double, double>> plot;
};

struct RunOptions {
  std::size_t jobs = 1;
  bool atoms = false;
};

inline std::string format_double(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

inline std::string cell_text(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  return std::get<std::string>(c);
}

inline Json cell_json(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) return *d;
  return std::get<std::string>(c);
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + csv_escape(t.columns[i]);
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_escape(cell_text(row[i]));
    out += "\n";
  }
  return out;
}

inline Json to_json(const ResultEnvelope& env) {
  Json rows = Json::array();
  for (const auto& row : env.table.rows) {
    Json r = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) r[env.table.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(r));
  }
  Json j;
  j["tool_version"] = env.tool_version;
  j["timestamp"] = env.timestamp;
  j["wall_seconds"] = env.wall_seconds;
  j["config"] = env.config_echo;
  j["warnings"] = env.warnings;
  j["summary"] = env.summary;
  j["rows"] = std::move(rows);
  if (!env.detail.empty()) j["detail"] = env.detail;
  return j;
}

inline std::string to_plot(const ResultEnvelope& env) {
  std::string out = "# " + env.plot_x + " " + env.plot_y + "\n";
  for (const auto& [x, y] : env.plot) out += format_double(x) + " " + format_double(y) + "\n";
  return out;
}

namespace detail {

inline std::string proxy_warning(const TraceSummary& s) {
  return "max/min of h_j over j in [" + std::to_string(s.j_first) + ", " + std::to_string(s.j_last) +
         "] are finite-range proxies for limsup/liminf, not limits";
}

inline void add_trace_rows(ResultEnvelope& env, const EntropyTrace& trace, const ExperimentConfig& cfg) {
  env.table.columns = {"j", "family_size", "entropy_bits", "h_j", "method", "ci_half_width", "atom_count", "note"};
  for (const auto& r : trace.rows) {
    std::string note;
    if (!r.ok()) {
      note = "error: " + *r.error;
      env.warnings.push_back("j = " + std::to_string(r.j) + ": " + *r.error);
    } else if (r.truncated) {
      note = "truncated: geometric cap " + std::to_string(cfg.cap) + " < j^2 = " + std::to_string(r.j * r.j);
      env.warnings.push_back("j = " + std::to_string(r.j) + ": family " + note);
    }
    env.table.rows.push_back({r.j, static_cast<std::int64_t>(r.family_size), r.entropy_bits, r.h,
                              std::string(to_string(r.method)), r.ci_half_width, r.atom_count.str(), note});
    if (r.ok()) env.plot.emplace_back(static_cast<double>(r.j), r.h);
  }
  const TraceSummary s = trace.summary();
  env.summary["rows_ok"] = s.rows_ok;
  env.summary["rows_failed"] = s.rows_failed;
  if (s.max_h) env.summary["max_h_j"] = *s.max_h;
  if (s.min_h) env.summary["min_h_j"] = *s.min_h;
  env.summary["j_range"] = {s.j_first, s.j_last};
  env.warnings.push_back(proxy_warning(s));
  env.plot_x = "j";
  env.plot_y = "h_j";
}

inline Json atoms_json(const JoinResult& r) {
  Json atoms = Json::array();
  for (std::size_t a = 0; a < r.atom_labels.size(); ++a) {
    Json atom;
    atom["labels"] = r.atom_labels[a];
    if (r.measures) atom["measure"] = (*r.measures)[a].str();
    atoms.push_back(std::move(atom));
  }
  return atoms;
}

inline McOptions mc_options(const ExperimentConfig& cfg, const RunOptions& opt) {
  McOptions mc;
  mc.n_samples = static_cast<std::size_t>(cfg.samples);
  mc.seed = cfg.seed.value_or(0);
  mc.bootstrap_resamples = static_cast<std::size_t>(cfg.bootstrap);
  mc.jobs = opt.jobs;
  mc.direction = cfg.direction;
  mc.budget = cfg.budget;
  return mc;
}

inline JoinFn planar_join(const System& sys, const RectanglePartition& xi, const McOptions& mc) {
  if (const auto* b = std::get_if<BakerMap>(&sys)) {
    return [b = *b, xi, mc](const IndexFamily& f) { return mc_join_entropy(b, xi, f, mc); };
  }
  return [t = std::get<RectangleExchange>(sys), xi, mc](const IndexFamily& f) { return mc_join_entropy(t, xi, f, mc); };
}

inline JoinFn join_for(const ExperimentConfig& cfg, const System& sys, const RunOptions& opt) {
  if (const auto* iet = std::get_if<IetSystem>(&sys)) {
    return [t = iet->map, xi = build_interval_partition(cfg), d = cfg.direction, b = cfg.budget](const IndexFamily& f) {
      return exact_join(t, xi, f, d, b);
    };
  }
  if (const auto* bern = std::get_if<BernoulliSystem>(&sys)) {
    return [s = *bern, block = cylinder_block(cfg), d = cfg.direction](const IndexFamily& f) {
      return bernoulli_join_entropy(s, f, block, d, 0);
    };
  }
  return planar_join(sys, build_rect_partition(cfg, sys), mc_options(cfg, opt));
}

inline FamilyGenerator family_generator(const ExperimentConfig& cfg) {
  return [cfg](std::int64_t j) { return build_family(cfg, j); };
}

inline void run_entropy_trace(ResultEnvelope& env, const ExperimentConfig& cfg, const System& sys,
                              const RunOptions& opt) {
  const JoinFn join = join_for(cfg, sys, opt);
  const auto js = j_values_of(cfg);
  const EntropyTrace trace = entropy_trace(join, family_generator(cfg), js, opt.jobs, cfg.stem());
  add_trace_rows(env, trace, cfg);
  if (opt.atoms) {
    Json per_j = Json::array();
    for (std::int64_t j : js) {
      try {
        const JoinResult r = join(build_family(cfg, j));
        per_j.push_back({{"j", j}, {"atoms", atoms_json(r)}});
      } catch (const Error&) {
        per_j.push_back({{"j", j}, {"atoms", nullptr}});
      }
    }
    env.detail["atoms"] = std::move(per_j);
  }
  if (domain_of(cfg.system) == Domain::kPlanar) {
    env.warnings.push_back("Monte Carlo rows: plug-in entropy with Miller-Madow correction; ci_half_width is a " +
                           std::to_string(cfg.bootstrap) + "-resample bootstrap 95% half-width");
  }
}

inline void run_sup_envelope(ResultEnvelope& env, const ExperimentConfig& cfg, const System& sys,
                             const RunOptions& opt) {
  const unsigned depth = checked_depth(cfg.library_depth, "library_depth", 12);
  if (depth == 0) throw ParseError("library_depth", 0, "must be >= 1");
  std::vector<NamedJoin> library;
  if (const auto* iet = std::get_if<IetSystem>(&sys)) library = dyadic_library(iet->map, depth, cfg.direction, cfg.budget);
  else library = dyadic_library(std::get<BernoulliSystem>(sys), depth, cfg.direction);
  const SupEnvelope sup = sup_over_partitions(library, family_generator(cfg), j_values_of(cfg), opt.jobs);

  env.table.columns = {"j", "partition", "family_size", "h_j", "note"};
  for (const auto& tr : sup.traces) {
    for (const auto& r : tr.rows) {
      env.table.rows.push_back({r.j, tr.name, static_cast<std::int64_t>(r.family_size), r.h,
                                r.ok() ? std::string() : "error: " + *r.error});
    }
  }
  for (const auto& e : sup.envelope) {
    env.table.rows.push_back({e.j, std::string("envelope"), std::int64_t{0}, e.h.value_or(0.0),
                              e.h ? "argmax " + e.argmax : std::string("no rows")});
    if (e.h) env.plot.emplace_back(static_cast<double>(e.j), *e.h);
  }
  env.warnings.push_back("the envelope is a max over a finite dyadic library (depth " + std::to_string(depth) +
                         ") and only bounds sup over all partitions from below");
  if (!sup.traces.empty()) env.warnings.push_back(proxy_warning(sup.traces.front().summary()));
  env.plot_x = "j";
  env.plot_y = "envelope_h_j";
}

inline void run_boundary(ResultEnvelope& env, const ExperimentConfig& cfg, const System& sys) {
  const auto& t = std::get<RectangleExchange>(sys);
  const RectanglePartition xi = build_rect_partition(cfg, sys);
  const BoundaryLedger ledger = boundary_growth(t, xi, cfg.steps, cfg.budget);
  env.table.columns = {"n", "B", "B_double", "growth", "n_times_D", "within_nD", "equality", "segments"};
  const Rational& b0 = ledger.initial();
  for (std::size_t n = 0; n < ledger.lengths.size(); ++n) {
    const Rational growth = ledger.lengths[n] - b0;
    const Rational bound = Rational(static_cast<std::int64_t>(n)) * ledger.discontinuity_length;
    env.table.rows.push_back({static_cast<std::int64_t>(n), ledger.lengths[n].str(), ledger.lengths[n].to_double(),
                              growth.str(), bound.str(), std::int64_t{growth <= bound ? 1 : 0},
                              std::int64_t{growth == bound ? 1 : 0},
                              static_cast<std::int64_t>(ledger.segment_counts[n])});
    env.plot.emplace_back(static_cast<double>(n), ledger.lengths[n].to_double());
  }
  env.summary["D"] = ledger.discontinuity_length.str();
  env.summary["B0"] = b0.str();
  env.summary["within_nD"] = ledger.within_discontinuity_bound();
  env.summary["within_linear_bound"] = ledger.within_linear_bound();
  env.summary["equality_steps"] = ledger.equality_steps();
  if (!ledger.within_discontinuity_bound()) {
    env.warnings.push_back("B(n) - B(0) <= n D fails for this partition; the bound B(n) <= B(0) + n (B(0) + D) " +
                           std::string(ledger.within_linear_bound() ? "holds" : "also fails"));
  }
  env.plot_x = "n";
  env.plot_y = "B";
}

inline void add_scan_rows(ResultEnvelope& env, const ScanReport& rep) {
  env.table.columns = {"m", rep.metric, "event"};
  for (std::size_t k = 0; k < rep.ms.size(); ++k) {
    env.table.rows.push_back({rep.ms[k], rep.values[k], std::int64_t{rep.is_event(rep.ms[k]) ? 1 : 0}});
    env.plot.emplace_back(static_cast<double>(rep.ms[k]), rep.values[k]);
  }
  env.summary["metric"] = rep.metric;
  env.summary["threshold"] = rep.threshold;
  env.summary["events"] = rep.events.size();
  if (rep.first_crossing) env.summary["first_event"] = *rep.first_crossing;
  else env.summary["first_event"] = nullptr;
  if (!rep.expected_times.empty()) {
    env.summary["expected_times"] = rep.expected_times;
    env.summary["expected_hits"] = rep.expected_hits;
    env.summary["expected_misses"] = rep.expected_misses;
  }
  env.plot_x = "m";
  env.plot_y = rep.metric;
}

template <class Fn>
auto with_scannable(const System& sys, Fn&& fn) {
  if (const auto* iet = std::get_if<IetSystem>(&sys)) return fn(iet->map);
  if (const auto* b = std::get_if<BakerMap>(&sys)) return fn(*b);
  return fn(std::get<RectangleExchange>(sys));
}

inline void run_scan(ResultEnvelope& env, const ExperimentConfig& cfg, const System& sys, const RunOptions& opt) {
  const TestFamily family = build_test_family(cfg, domain_of(cfg.system));
  const double threshold = cfg.threshold.to_double();
  ScanReport rep;
  if (cfg.experiment == Experiment::kMixingScan) {
    rep = with_scannable(sys, [&](const auto& t) {
      return mixing_time_scan(t, cfg.scan_j, threshold, cfg.m_cap, family, opt.jobs, cfg.budget);
    });
    env.summary["j"] = cfg.scan_j;
  } else if (const auto* iet = std::get_if<IetSystem>(&sys); iet && iet->rotation) {
    rep = rigidity_scan(*iet->rotation, cfg.m_cap, threshold, family, opt.jobs, cfg.budget);
    if (!rep.expected_misses.empty()) {
      env.warnings.push_back(std::to_string(rep.expected_misses.size()) +
                             " convergent denominators within the cap are not detected at this threshold");
    }
  } else {
    rep = with_scannable(sys, [&](const auto& t) {
      return rigidity_scan(t, cfg.m_cap, threshold, family, opt.jobs, cfg.budget);
    });
  }
  env.summary["test_family"] = family.describe();
  add_scan_rows(env, rep);
}

// The configured test set: an interval for 1D, a rectangle for planar
// systems (dyadic for the baker map), a symbol at coordinate 0 for the shift.
inline Rational run_triple_one(const ExperimentConfig& cfg, const System& sys, std::int64_t m, std::int64_t n,
                               Rational& mu) {
  const auto& s = cfg.set;
  if (const auto* iet = std::get_if<IetSystem>(&sys)) {
    if (s.size() != 0 && s.size() != 2) throw ParseError("set", 0, "needs 'lo hi' for an interval exchange");
    const Interval a = s.empty() ? Interval{Rational(0), Rational(1, 2)} : Interval{s[0], s[1]};
    if (a.empty() || a.lo.sign() < 0 || Rational(1) < a.hi) throw ParseError("set", 0, "needs 0 <= lo < hi <= 1");
    mu = a.length();
    return triple_correlation(iet->map, a, m, n, cfg.budget);
  }
  if (const auto* bern = std::get_if<BernoulliSystem>(&sys)) {
    if (s.size() > 1 || (s.size() == 1 && s[0].denominator() != 1)) {
      throw ParseError("set", 0, "needs a single symbol for the shift");
    }
    const int symbol = s.empty() ? 0 : s[0].numerator().convert_to<int>();
    if (symbol < 0 || static_cast<std::size_t>(symbol) >= bern->symbol_count()) throw ParseError("set", 0, "unknown symbol");
    const Cylinder a(std::map<std::int64_t, int>{{0, symbol}});
    mu = a.measure(*bern);
    return triple_correlation(*bern, a, m, n);
  }
  if (s.size() != 0 && s.size() != 4) throw ParseError("set", 0, "needs 'x0 y0 x1 y1' for a planar system");
  const Rect r = s.empty() ? Rect{Rational(0), Rational(0), Rational(1, 2), Rational(1)} : Rect{s[0], s[1], s[2], s[3]};
  mu = r.area();
  if (const auto* b = std::get_if<BakerMap>(&sys)) {
    auto level = [](const Rational& w) -> std::optional<unsigned> {
      for (unsigned l = 0; l <= 60; ++l)
        if (w == pow2_inverse(l)) return l;
      return std::nullopt;
    };
    const auto a = level(r.width());
    const auto bl = level(r.height());
    const Rational xi = r.x0 / r.width();
    const Rational yi = r.y0 / r.height();
    if (!a || !bl || xi.denominator() != 1 || yi.denominator() != 1) {
      throw ParseError("set", 0, "the baker map needs a dyadic rectangle");
    }
    const DyadicCell cell{*a, xi.numerator().convert_to<std::uint64_t>(), *bl, yi.numerator().convert_to<std::uint64_t>()};
    return triple_correlation(*b, cell, m, n);
  }
  return triple_correlation(std::get<RectangleExchange>(sys), r, m, n, cfg.budget);
}

inline void run_triple(ResultEnvelope& env, const ExperimentConfig& cfg, const System& sys) {
  env.table.columns = {"m", "n", "value", "value_double", "mu", "limit_forward", "limit_backward"};
  std::int64_t idx = 0;
  for (std::int64_t m : cfg.m_values) {
    for (std::int64_t n : cfg.n_values) {
      if (m == n) continue;
      Rational mu;
      const Rational v = run_triple_one(cfg, sys, m, n, mu);
      env.table.rows.push_back({m, n, v.str(), v.to_double(), mu.str(), triple_limit_forward(mu).str(),
                                triple_limit_backward(mu).str()});
      env.plot.emplace_back(static_cast<double>(idx++), v.to_double());
    }
  }
  env.summary["value"] = "mu(A n T^-m A n T^-n A)";
  env.plot_x = "row";
  env.plot_y = "triple_correlation";
}

inline void run_asymmetry(ResultEnvelope& env, const ExperimentConfig& cfg, const System& sys) {
  const auto& t = std::get<IetSystem>(sys).map;
  const IntervalPartition xi = build_interval_partition(cfg);
  env.table.columns = {"N", "m", "n", "direction", "ratio", "base_entropy_bits", "triple_entropy_bits"};
  std::int64_t idx = 0;
  for (std::int64_t m : cfg.m_values) {
    for (std::int64_t n : cfg.n_values) {
      for (Direction d : {Direction::kForward, Direction::kBackward}) {
        const AsymmetryResult r = asymmetry_ratio(t, xi, cfg.steps, m, n, d, cfg.budget);
        env.table.rows.push_back({cfg.steps, m, n, std::string(to_string(d)), r.ratio, r.base_entropy_bits,
                                  r.triple_entropy_bits});
        env.plot.emplace_back(static_cast<double>(idx++), r.ratio);
      }
    }
  }
  env.plot_x = "row";
  env.plot_y = "ratio";
}

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

}  // namespace detail

inline ResultEnvelope run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {}) {
  const auto start = std::chrono::steady_clock::now();
  check_config(cfg);
  const System sys = build_system(cfg);
  ResultEnvelope env;
  env.config_echo = echo_config(cfg);
  env.timestamp = detail::utc_timestamp();
  switch (cfg.experiment) {
    case Experiment::kEntropyTrace:
    case Experiment::kMcEntropy: detail::run_entropy_trace(env, cfg, sys, opt); break;
    case Experiment::kSupEnvelope: detail::run_sup_envelope(env, cfg, sys, opt); break;
    case Experiment::kBoundaryGrowth: detail::run_boundary(env, cfg, sys); break;
    case Experiment::kMixingScan:
    case Experiment::kRigidityScan: detail::run_scan(env, cfg, sys, opt); break;
    case Experiment::kTripleCorrelation: detail::run_triple(env, cfg, sys); break;
    case Experiment::kAsymmetryRatio: detail::run_asymmetry(env, cfg, sys); break;
  }
  env.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return env;
}

// Writes <stem>.csv and <stem>.dat (csv/both) and <stem>.json (json/both);
// returns the written paths.
inline std::vector<std::string> write_outputs(const ResultEnvelope& env, const ExperimentConfig& cfg,
                                              const std::string& out_dir, OutputFormat format) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;
  auto put = [&](const std::string& ext, const std::string& body) {
    const fs::path p = fs::path(out_dir) / (cfg.stem() + ext);
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    out << body;
    written.push_back(p.string());
  };
  if (format != OutputFormat::kJson) {
    put(".csv", to_csv(env.table));
    put(".dat", to_plot(env));
  }
  if (format != OutputFormat::kCsv) put(".json", to_json(env).dump(2) + "\n");
  return written;
}

}  // namespace seqdyn::cli
