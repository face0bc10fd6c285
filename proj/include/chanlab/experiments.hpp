#pragma once

// Config-driven experiments on random covariant channels: limit-law histograms of the
// lambda parameters, Monte Carlo against exact moments, spectra of the C matrix, PPT
// threshold scans and PPT^2 sweeps. Output is samples.csv plus summary.json.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <climits>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "blas.hpp"
#include "config.hpp"
#include "covariant.hpp"
#include "errors.hpp"
#include "quantum.hpp"
#include "sampling.hpp"
#include "stats.hpp"
#include "twirl.hpp"
#include "weingarten.hpp"

namespace chanlab {

inline constexpr int kSchemaVersion = 1;

enum class ExperimentKind { histogram, oracle_check, spectral, ppt_scan, ppt2, oracle };

inline const char* to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::histogram: return "histogram";
    case ExperimentKind::oracle_check: return "oracle-check";
    case ExperimentKind::spectral: return "spectral";
    case ExperimentKind::ppt_scan: return "ppt-scan";
    case ExperimentKind::ppt2: return "ppt2";
    case ExperimentKind::oracle: return "oracle";
  }
  return "histogram";
}

inline ExperimentKind experiment_kind_from_string(const std::string& s) {
  if (s == "histogram" || s == "lambda-histogram") return ExperimentKind::histogram;
  if (s == "oracle-check") return ExperimentKind::oracle_check;
  if (s == "spectral") return ExperimentKind::spectral;
  if (s == "ppt-scan") return ExperimentKind::ppt_scan;
  if (s == "ppt2") return ExperimentKind::ppt2;
  if (s == "oracle") return ExperimentKind::oracle;
  throw Error(ErrorCode::config, "unknown experiment kind '" + s + "'");
}

enum class SpectralScale { s, sqrt_ds, d };

inline const char* to_string(SpectralScale k) {
  switch (k) {
    case SpectralScale::s: return "s";
    case SpectralScale::sqrt_ds: return "sqrt_ds";
    case SpectralScale::d: return "d";
  }
  return "s";
}

enum class Family { uu, uubar, oo, hh, duc, cduc, doc, unstructured };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::uu: return "UU";
    case Family::uubar: return "UUbar";
    case Family::oo: return "OO";
    case Family::hh: return "HH";
    case Family::duc: return "DUC";
    case Family::cduc: return "CDUC";
    case Family::doc: return "DOC";
    case Family::unstructured: return "unstructured";
  }
  return "UU";
}

inline Family family_from_string(const std::string& s) {
  for (auto f : {Family::uu, Family::uubar, Family::oo, Family::hh, Family::duc, Family::cduc,
                 Family::doc, Family::unstructured})
    if (s == to_string(f)) return f;
  throw Error(ErrorCode::config, "unknown family '" + s + "'");
}

enum class CorrelationMode { independent, equal, conjugate };

inline const char* to_string(CorrelationMode m) {
  switch (m) {
    case CorrelationMode::independent: return "independent";
    case CorrelationMode::equal: return "equal";
    case CorrelationMode::conjugate: return "conjugate";
  }
  return "independent";
}

inline CorrelationMode correlation_mode_from_string(const std::string& s) {
  for (auto m : {CorrelationMode::independent, CorrelationMode::equal, CorrelationMode::conjugate})
    if (s == to_string(m)) return m;
  throw Error(ErrorCode::config, "unknown correlation mode '" + s + "'");
}

struct GridPoint {
  int d = 0;
  int s = 0;
  std::string rule;  // "s", "c", "t" or "points"
  double param = 0;
  int s2 = 0;  // environment dimension of the second channel (ppt2)
};

struct Tolerances {
  double psd = kPsdTol;
  double inequality = kInequalityTol;
  double z_gate = 4.0;
};

struct HistogramSpec {
  std::vector<int> which{1, 2, 3};
  int max_moment = 4;
};

struct OracleCheckSpec {
  std::vector<std::pair<MomentTarget, std::vector<int>>> targets;
};

struct SpectralSpec {
  SpectralScale scale = SpectralScale::s;
  int max_moment = 4;
  bool write_spectra = true;
};

struct PptScanSpec {
  std::vector<Family> families;
};

struct Ppt2Spec {
  CorrelationMode mode = CorrelationMode::independent;
  DiagonalClass class1 = DiagonalClass::doc;
  DiagonalClass class2 = DiagonalClass::doc;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::histogram;
  std::uint64_t seed = 0;
  std::int64_t n_samples = 0;
  std::string out;
  int threads = 1;
  std::vector<GridPoint> grid;
  Tolerances tol;
  HistogramSpec histogram;
  OracleCheckSpec oracle_check;
  SpectralSpec spectral;
  PptScanSpec ppt_scan;
  Ppt2Spec ppt2;
  std::vector<MomentQuery> queries;
  nlohmann::json echo;
};

// ceil(x) with a relative guard so that c d and d^t landing on an integer stay there.
inline int ceil_rule(double x, const std::string& what) {
  require(std::isfinite(x) && x > 0 && x < static_cast<double>(INT_MAX), ErrorCode::config,
          what + " gives an invalid environment dimension");
  return static_cast<int>(std::ceil(x * (1 - 1e-12)));
}

namespace detail {

inline int positive_int(std::int64_t v, const std::string& what) {
  require(v >= 1 && v <= INT_MAX, ErrorCode::config, what + " must be a positive integer");
  return static_cast<int>(v);
}

inline std::uint64_t parse_seed(const nlohmann::json& v) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) {
    require(v.get<std::int64_t>() >= 0, ErrorCode::config, "seed must be nonnegative");
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  require(v.is_string(), ErrorCode::config, "seed must be an integer or a decimal string");
  const std::string s = v.get<std::string>();
  require(!s.empty() && s.find_first_not_of("0123456789") == std::string::npos,
          ErrorCode::config, "seed string must be decimal digits");
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw Error(ErrorCode::config, "seed '" + s + "' does not fit in 64 bits");
  }
}

// One of s, c (s = ceil(c d)) or t (s = ceil(d^t)); returns the rule name and values.
inline std::optional<std::pair<std::string, std::vector<double>>> s_rule(const ConfigTable& t,
                                                                          const std::string& sfx) {
  std::optional<std::pair<std::string, std::vector<double>>> out;
  for (const std::string rule : {"s", "c", "t"}) {
    if (!t.has(rule + sfx)) continue;
    require(!out, ErrorCode::config,
            t.path() + " must give only one of s" + sfx + ", c" + sfx + ", t" + sfx);
    const std::string key = rule + sfx;
    const nlohmann::json& raw = t.json().at(key);
    const nlohmann::json wrapped = raw.is_array() ? raw : nlohmann::json::array({raw});
    const nlohmann::json holder{{key, wrapped}};
    const ConfigTable view(holder, t.path());
    if (rule == "s") {
      std::vector<double> vals;
      for (auto v : view.integers(key)) vals.push_back(positive_int(v, t.path() + "." + key));
      out.emplace(rule, vals);
    } else {
      const std::vector<double> vals = view.numbers(key);
      for (double v : vals)
        require(v > 0 && std::isfinite(v), ErrorCode::config,
                t.path() + "." + rule + sfx + " entries must be positive");
      out.emplace(rule, vals);
    }
  }
  return out;
}

inline int apply_rule(const std::string& rule, double param, int d) {
  if (rule == "s") return static_cast<int>(param);
  if (rule == "c") return ceil_rule(param * d, "c = " + std::to_string(param));
  return ceil_rule(std::pow(static_cast<double>(d), param), "t = " + std::to_string(param));
}

inline std::vector<GridPoint> parse_schedule(const ConfigTable& t) {
  t.allow_only({"d", "s", "c", "t", "points"});
  std::vector<GridPoint> grid;
  if (t.has("points")) {
    require(!t.has("d") && !t.has("s") && !t.has("c") && !t.has("t"), ErrorCode::config,
            "schedule.points excludes d, s, c and t");
    for (const auto& p : t.array("points")) {
      require(p.is_array() && p.size() == 2 && p[0].is_number_integer() &&
                  p[1].is_number_integer(),
              ErrorCode::config, "schedule.points entries must be [d, s] integer pairs");
      const int d = positive_int(p[0].get<std::int64_t>(), "schedule.points d");
      const int s = positive_int(p[1].get<std::int64_t>(), "schedule.points s");
      grid.push_back({d, s, "points", static_cast<double>(s), s});
    }
    return grid;
  }
  const auto rule = s_rule(t, "");
  require(rule.has_value(), ErrorCode::config, "schedule needs one of s, c, t or points");
  for (auto dv : t.integers("d")) {
    const int d = positive_int(dv, "schedule.d");
    for (double param : rule->second) {
      const int s = apply_rule(rule->first, param, d);
      grid.push_back({d, s, rule->first, param, s});
    }
  }
  return grid;
}

inline std::vector<int> parse_which(const ConfigTable& t) {
  std::vector<int> out;
  for (const auto& w : t.strings("which")) {
    int i = 0;
    if (w == "lambda1") i = 1;
    if (w == "lambda2") i = 2;
    if (w == "lambda3") i = 3;
    require(i != 0, ErrorCode::config, "histogram.which entries must be lambda1, lambda2, lambda3");
    out.push_back(i);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace detail

// Validates the whole config before any sampling. `expected` is the CLI subcommand.
inline ExperimentConfig parse_experiment_config(const nlohmann::json& j,
                                                std::optional<ExperimentKind> expected = {}) {
  const ConfigTable root(j, "");
  root.allow_only({"kind", "seed", "n_samples", "out", "threads", "schedule", "tolerance",
                   "histogram", "oracle_check", "spectral", "ppt_scan", "ppt2", "query"});
  ExperimentConfig cfg;
  cfg.echo = j;
  if (root.has("kind")) {
    cfg.kind = experiment_kind_from_string(root.string("kind"));
    require(!expected || *expected == cfg.kind, ErrorCode::config,
            std::string("config kind '") + to_string(cfg.kind) + "' does not match subcommand '" +
                to_string(*expected) + "'");
  } else {
    require(expected.has_value(), ErrorCode::config, "missing key 'kind'");
    cfg.kind = *expected;
  }
  if (root.has("seed")) cfg.seed = detail::parse_seed(j.at("seed"));
  cfg.out = root.string("out", "");
  cfg.threads = detail::positive_int(root.integer("threads", 1), "threads");

  const ConfigTable tol = root.table_or_empty("tolerance");
  tol.allow_only({"psd", "inequality", "z_gate"});
  cfg.tol.psd = tol.number("psd", kPsdTol);
  cfg.tol.inequality = tol.number("inequality", kInequalityTol);
  cfg.tol.z_gate = tol.number("z_gate", 4.0);
  require(cfg.tol.psd >= 0 && cfg.tol.inequality >= 0 && cfg.tol.z_gate > 0, ErrorCode::config,
          "tolerances must be nonnegative and z_gate positive");

  const auto forbid_other_tables = [&](const std::string& own) {
    for (const std::string key : {"histogram", "oracle_check", "spectral", "ppt_scan", "ppt2",
                                  "query"})
      require(key == own || !root.has(key), ErrorCode::config,
              "table '" + key + "' does not belong to a " + to_string(cfg.kind) + " config");
  };

  if (cfg.kind == ExperimentKind::oracle) {
    forbid_other_tables("query");
    require(!root.has("schedule") && !root.has("n_samples"), ErrorCode::config,
            "oracle configs take [[query]] entries only");
    for (const auto& q : root.array("query")) {
      const ConfigTable qt(q, "query");
      qt.allow_only({"target", "d", "s", "p"});
      MomentQuery mq;
      try {
        mq.target = moment_target_from_string(qt.string("target"));
      } catch (const Error& e) {
        throw Error(ErrorCode::config, e.what());
      }
      mq.d = detail::positive_int(qt.integer("d"), "query.d");
      mq.s = detail::positive_int(qt.integer("s"), "query.s");
      mq.p = detail::positive_int(qt.integer("p"), "query.p");
      cfg.queries.push_back(mq);
    }
    return cfg;
  }

  require(root.has("seed"), ErrorCode::config, "missing key 'seed'");
  cfg.n_samples = root.integer("n_samples");
  require(cfg.n_samples >= 1 && cfg.n_samples <= 0xffffffffLL, ErrorCode::config,
          "n_samples must be in [1, 2^32 - 1]");
  cfg.grid = detail::parse_schedule(root.table("schedule"));
  for (const auto& g : cfg.grid)
    require(g.d >= 2, ErrorCode::config, "schedule.d entries must be at least 2");

  switch (cfg.kind) {
    case ExperimentKind::histogram: {
      forbid_other_tables("histogram");
      const ConfigTable t = root.table_or_empty("histogram");
      t.allow_only({"which", "max_moment"});
      if (t.has("which")) cfg.histogram.which = detail::parse_which(t);
      cfg.histogram.max_moment = static_cast<int>(t.integer("max_moment", 4));
      require(cfg.histogram.max_moment >= 1 && cfg.histogram.max_moment <= 6, ErrorCode::config,
              "histogram.max_moment must be in [1, 6]");
      break;
    }
    case ExperimentKind::oracle_check: {
      forbid_other_tables("oracle_check");
      const ConfigTable t = root.table("oracle_check");
      t.allow_only({"targets"});
      const ConfigTable targets = t.table("targets");
      for (const auto& [name, ps] : targets.json().items()) {
        MomentTarget target{};
        try {
          target = moment_target_from_string(name);
        } catch (const Error& e) {
          throw Error(ErrorCode::config, e.what());
        }
        std::vector<int> orders;
        for (auto p : targets.integers(name))
          orders.push_back(detail::positive_int(p, "oracle_check.targets." + name));
        cfg.oracle_check.targets.emplace_back(target, orders);
      }
      require(!cfg.oracle_check.targets.empty(), ErrorCode::config,
              "oracle_check.targets must not be empty");
      break;
    }
    case ExperimentKind::spectral: {
      forbid_other_tables("spectral");
      const ConfigTable t = root.table_or_empty("spectral");
      t.allow_only({"scale", "max_moment", "write_spectra"});
      const std::string scale = t.string("scale", "s");
      if (scale == "s") cfg.spectral.scale = SpectralScale::s;
      else if (scale == "sqrt_ds") cfg.spectral.scale = SpectralScale::sqrt_ds;
      else if (scale == "d") cfg.spectral.scale = SpectralScale::d;
      else throw Error(ErrorCode::config, "spectral.scale must be s, sqrt_ds or d");
      cfg.spectral.max_moment = static_cast<int>(t.integer("max_moment", 4));
      require(cfg.spectral.max_moment >= 1 && cfg.spectral.max_moment <= 8, ErrorCode::config,
              "spectral.max_moment must be in [1, 8]");
      cfg.spectral.write_spectra = t.boolean("write_spectra", true);
      break;
    }
    case ExperimentKind::ppt_scan: {
      forbid_other_tables("ppt_scan");
      const ConfigTable t = root.table("ppt_scan");
      t.allow_only({"families"});
      for (const auto& f : t.strings("families")) {
        const Family fam = family_from_string(f);
        require(std::find(cfg.ppt_scan.families.begin(), cfg.ppt_scan.families.end(), fam) ==
                    cfg.ppt_scan.families.end(),
                ErrorCode::config, "ppt_scan.families lists '" + f + "' twice");
        cfg.ppt_scan.families.push_back(fam);
      }
      for (const auto& g : cfg.grid)
        require(g.d <= 40 || std::find(cfg.ppt_scan.families.begin(),
                                       cfg.ppt_scan.families.end(),
                                       Family::unstructured) == cfg.ppt_scan.families.end(),
                ErrorCode::config, "the unstructured family needs d <= 40");
      break;
    }
    case ExperimentKind::ppt2: {
      forbid_other_tables("ppt2");
      const ConfigTable t = root.table("ppt2");
      t.allow_only({"mode", "class1", "class2", "s2", "c2", "t2"});
      cfg.ppt2.mode = correlation_mode_from_string(t.string("mode"));
      try {
        cfg.ppt2.class1 = diagonal_class_from_string(t.string("class1", "DOC"));
        cfg.ppt2.class2 = diagonal_class_from_string(t.string("class2", "DOC"));
      } catch (const Error& e) {
        throw Error(ErrorCode::config, e.what());
      }
      const auto rule2 = detail::s_rule(t, "2");
      if (rule2) {
        require(rule2->second.size() == 1, ErrorCode::config,
                "ppt2.s2, c2 or t2 must hold a single value");
        for (auto& g : cfg.grid) g.s2 = detail::apply_rule(rule2->first, rule2->second[0], g.d);
      }
      if (cfg.ppt2.mode != CorrelationMode::independent) {
        require(cfg.ppt2.class2 == cfg.ppt2.class1 && !rule2, ErrorCode::config,
                "equal and conjugate modes use one channel: class2 and s2 must not differ");
      }
      break;
    }
    case ExperimentKind::oracle: break;
  }
  return cfg;
}

// Tabular output; cells are integers, doubles (printed with %.17g) or strings.
using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
  std::string file;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct ExperimentResult {
  Table samples{"samples.csv", {}, {}};
  std::vector<Table> extra;
  nlohmann::json summary;
  bool gate_failed = false;
};

struct RunOptions {
  int threads = 1;
  bool keep_rows = true;
  std::ostream* progress = nullptr;
};

namespace detail {

inline std::uint64_t stream_index(std::size_t grid_index, std::size_t sample) {
  return (static_cast<std::uint64_t>(grid_index) << 32) | static_cast<std::uint64_t>(sample);
}

inline nlohmann::json estimate_json(const Estimate& e) { return {{"value", e.value}, {"se", e.se}}; }

inline nlohmann::json proportion_json(const Proportion& p) {
  return {{"hits", p.hits}, {"n", p.n}, {"value", p.value}, {"se", p.se}, {"wilson_lo", p.lo},
          {"wilson_hi", p.hi}};
}

inline nlohmann::json point_json(const GridPoint& g) {
  return {{"d", g.d}, {"s", g.s}, {"rule", g.rule}, {"param", g.param}};
}

inline std::optional<Rational> try_exact(const MomentQuery& q, std::string* error = nullptr) {
  try {
    return evaluate(q);
  } catch (const Error& e) {
    if (error) *error = e.what();
    return std::nullopt;
  }
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

inline void report(const RunOptions& opt, const ExperimentConfig& cfg, const GridPoint& g,
                   double seconds) {
  if (!opt.progress) return;
  char buf[160];
  std::snprintf(buf, sizeof buf, "[%s] d=%d s=%d: %lld samples in %.2f s\n", to_string(cfg.kind),
                g.d, g.s, static_cast<long long>(cfg.n_samples), seconds);
  *opt.progress << buf << std::flush;
}

}  // namespace detail

// Evaluates f(0..n-1) on a worker pool; results are stored by index, so the output does not
// depend on the number of threads.
template <class F>
auto parallel_map(std::size_t n, int threads, F&& f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<R> out(n);
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(1, threads)), std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        out[i] = f(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

// s lambda1 ~ Gamma(s, 1), s lambda2 ~ N(s, s) and lambda3 -> 1, with exact moments alongside.
inline ExperimentResult run_histogram(const ExperimentConfig& cfg, const RunOptions& opt = {}) {
  ExperimentResult res;
  res.samples.columns = {"d", "s", "sample"};
  for (int w : cfg.histogram.which)
    res.samples.columns.push_back(w == 3 ? "lambda3" : "s_lambda" + std::to_string(w));
  nlohmann::json points = nlohmann::json::array();
  for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
    const GridPoint& g = cfg.grid[gi];
    const detail::Stopwatch clock;
    const auto params = parallel_map(static_cast<std::size_t>(cfg.n_samples), opt.threads,
                                     [&](std::size_t i) {
                                       RngStream rng(cfg.seed, detail::stream_index(gi, i));
                                       return covariant_params(sample_haar_isometry(g.d, g.s, rng));
                                     });
    std::map<int, std::vector<double>> values;
    for (int w : cfg.histogram.which) {
      auto& v = values[w];
      v.reserve(params.size());
      for (const auto& p : params) {
        if (w == 1) v.push_back(g.s * p.lambda1);
        if (w == 2) v.push_back(g.s * p.lambda2);
        if (w == 3) v.push_back(p.lambda3);
      }
    }
    if (opt.keep_rows) {
      for (std::size_t i = 0; i < params.size(); ++i) {
        std::vector<Cell> row{std::int64_t{g.d}, std::int64_t{g.s}, static_cast<std::int64_t>(i)};
        for (int w : cfg.histogram.which) row.emplace_back(values[w][i]);
        res.samples.rows.push_back(std::move(row));
      }
    }
    nlohmann::json stats = nlohmann::json::array();
    const Rational s_rat(g.s);
    for (int w : cfg.histogram.which) {
      const SampleSummary sm = summarize(values[w], cfg.histogram.max_moment);
      const double scale = (w == 3) ? 1.0 : g.s;
      nlohmann::json moments = nlohmann::json::array();
      for (int p = 1; p <= cfg.histogram.max_moment; ++p) {
        const MomentQuery q{g.d, g.s, p,
                            w == 1 ? MomentTarget::lambda1
                                   : (w == 2 ? MomentTarget::lambda2 : MomentTarget::lambda3)};
        const auto exact = detail::try_exact(q);
        nlohmann::json m{{"p", p},
                         {"empirical", sm.raw[p - 1].value},
                         {"se", sm.raw[p - 1].se},
                         {"exact", exact ? nlohmann::json(std::pow(scale, p) * to_double(*exact))
                                         : nlohmann::json(nullptr)}};
        if (w != 3) {
          const double ref =
              to_double(w == 1 ? gamma_moment(s_rat, p) : normal_ss_moment(s_rat, p));
          m["reference"] = ref;
          m["rel_err_reference"] = (sm.raw[p - 1].value - ref) / ref;
        }
        moments.push_back(m);
      }
      const auto second = detail::try_exact(
          {g.d, g.s, 2,
           w == 1 ? MomentTarget::lambda1
                  : (w == 2 ? MomentTarget::lambda2 : MomentTarget::lambda3)});
      nlohmann::json st{
          {"which", "lambda" + std::to_string(w)},
          {"statistic", w == 3 ? "lambda3" : "s*lambda" + std::to_string(w)},
          {"reference_law", w == 1 ? "gamma(s,1)" : (w == 2 ? "normal(s,s)" : "point mass 1")},
          {"mean", detail::estimate_json(sm.mean)},
          {"variance", detail::estimate_json(sm.variance)},
          {"variance_exact", second ? nlohmann::json(scale * scale * (to_double(*second) - 1))
                                    : nlohmann::json(nullptr)},
          {"min", sm.min},
          {"max", sm.max},
          {"moments", moments}};
      stats.push_back(st);
    }
    nlohmann::json pj = detail::point_json(g);
    pj["n"] = params.size();
    pj["stats"] = stats;
    points.push_back(pj);
    detail::report(opt, cfg, g, clock.seconds());
  }
  res.summary["points"] = points;
  return res;
}

namespace detail {

// Per-sample value whose expectation is the oracle quantity.
inline double oracle_statistic(MomentTarget target, int p, const DOCTriple& t,
                               const CovariantParams& prm) {
  const int d = t.d;
  switch (target) {
    case MomentTarget::lambda1: return std::pow(prm.lambda1, p);
    case MomentTarget::lambda2: return std::pow(prm.lambda2, p);
    case MomentTarget::lambda3: return std::pow(prm.lambda3, p);
    case MomentTarget::trace_a: {
      RealMatrix x = RealMatrix::Identity(d, d);
      for (int k = 0; k < p; ++k) x = x * t.a;
      return x.trace();
    }
    case MomentTarget::trace_b:
    case MomentTarget::trace_c: {
      const Matrix& m = (target == MomentTarget::trace_b) ? t.b : t.c;
      Matrix x = Matrix::Identity(d, d);
      for (int k = 0; k < p; ++k) x = x * m;
      return x.trace().real();
    }
    case MomentTarget::entry_a: return t.a.array().pow(p).mean();
    case MomentTarget::entry_b2:
    case MomentTarget::entry_c2: {
      const Matrix& m = (target == MomentTarget::entry_b2) ? t.b : t.c;
      double acc = 0;
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          if (i != j) acc += std::pow(std::norm(m(i, j)), p);
      return acc / (d * (d - 1.0));
    }
  }
  return 0;
}

}  // namespace detail

// Monte Carlo means against exact oracle values; |z| above the gate fails the run.
inline ExperimentResult run_oracle_check(const ExperimentConfig& cfg, const RunOptions& opt = {}) {
  ExperimentResult res;
  res.samples.columns = {"d", "s", "target", "p", "n", "mc", "se", "exact", "exact_approx", "z",
                         "flagged", "error"};
  nlohmann::json rows = nlohmann::json::array();
  std::vector<std::pair<MomentTarget, int>> stats;
  for (const auto& [target, orders] : cfg.oracle_check.targets)
    for (int p : orders) stats.emplace_back(target, p);
  std::size_t flagged = 0;
  for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
    const GridPoint& g = cfg.grid[gi];
    const detail::Stopwatch clock;
    const auto per_sample = parallel_map(
        static_cast<std::size_t>(cfg.n_samples), opt.threads, [&](std::size_t i) {
          RngStream rng(cfg.seed, detail::stream_index(gi, i));
          const DOCTriple t = abc_of_isometry(sample_haar_isometry(g.d, g.s, rng));
          const CovariantParams prm = covariant_params(t);
          std::vector<double> v;
          v.reserve(stats.size());
          for (const auto& [target, p] : stats) v.push_back(detail::oracle_statistic(target, p, t, prm));
          return v;
        });
    for (std::size_t k = 0; k < stats.size(); ++k) {
      const auto [target, p] = stats[k];
      std::vector<double> x(per_sample.size());
      for (std::size_t i = 0; i < x.size(); ++i) x[i] = per_sample[i][k];
      const SampleSummary sm = summarize(x, 1);
      std::string error;
      const auto exact = detail::try_exact({g.d, g.s, p, target}, &error);
      nlohmann::json row{{"d", g.d},         {"s", g.s},           {"target", to_string(target)},
                         {"p", p},           {"n", x.size()},      {"mc", sm.mean.value},
                         {"se", sm.mean.se}};
      std::vector<Cell> cells{std::int64_t{g.d}, std::int64_t{g.s}, std::string(to_string(target)),
                              std::int64_t{p}, static_cast<std::int64_t>(x.size()),
                              sm.mean.value, sm.mean.se};
      if (exact) {
        const double ex = to_double(*exact);
        // Rounding floor for statistics that are constant per sample (entry A at p = 1).
        const double se = std::hypot(sm.mean.se, 1e-12 * std::max(1.0, std::abs(ex)));
        const double z = (sm.mean.value - ex) / se;
        const bool flag = std::abs(z) > cfg.tol.z_gate;
        flagged += flag;
        row["exact"] = to_fraction_string(*exact);
        row["exact_approx"] = ex;
        row["z"] = z;
        row["flagged"] = flag;
        cells.insert(cells.end(), {to_fraction_string(*exact), ex, z, std::int64_t{flag},
                                   std::string()});
      } else {
        row["error"] = error;
        cells.insert(cells.end(), {std::string(), std::nan(""), std::nan(""), std::int64_t{0},
                                   error});
      }
      rows.push_back(row);
      res.samples.rows.push_back(std::move(cells));
    }
    detail::report(opt, cfg, g, clock.seconds());
  }
  res.gate_failed = flagged > 0;
  res.summary["rows"] = rows;
  res.summary["flagged"] = flagged;
  res.summary["z_gate"] = cfg.tol.z_gate;
  res.summary["gate"] = res.gate_failed ? "fail" : "pass";
  return res;
}

namespace detail {

struct SpectrumSample {
  std::vector<double> eigenvalues;
  std::vector<double> moments;
  double min = 0;
  double max = 0;
  double norm_dev = 0;  // max |x - 1|
};

inline double spectral_factor(SpectralScale scale, int d, int s) {
  switch (scale) {
    case SpectralScale::s: return s;
    case SpectralScale::sqrt_ds: return std::sqrt(static_cast<double>(d) * s);
    case SpectralScale::d: return d;
  }
  return s;
}

}  // namespace detail

// Spectrum of x C with x in {s, sqrt(ds), d}; references are SC(s/d, s/d), SC(0, 1) and the
// point mass at 1.
inline ExperimentResult run_spectral(const ExperimentConfig& cfg, const RunOptions& opt = {}) {
  ExperimentResult res;
  const int mm = cfg.spectral.max_moment;
  res.samples.columns = {"d", "s", "sample", "lambda_min", "lambda_max"};
  for (int p = 1; p <= mm; ++p) res.samples.columns.push_back("m" + std::to_string(p));
  res.samples.columns.push_back("norm_dev");
  Table spectra{"spectra.csv", {"d", "s", "sample", "index", "eigenvalue"}, {}};
  nlohmann::json points = nlohmann::json::array();
  for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
    const GridPoint& g = cfg.grid[gi];
    const detail::Stopwatch clock;
    const double factor = detail::spectral_factor(cfg.spectral.scale, g.d, g.s);
    const auto samples = parallel_map(
        static_cast<std::size_t>(cfg.n_samples), opt.threads, [&](std::size_t i) {
          RngStream rng(cfg.seed, detail::stream_index(gi, i));
          const DOCTriple t = abc_of_isometry(sample_haar_isometry(g.d, g.s, rng));
          const Matrix c = factor * (t.c + t.c.adjoint()) / 2.0;
          const RealVector ev = hermitian_eigenvalues(c);
          detail::SpectrumSample out;
          out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
          out.min = ev.minCoeff();
          out.max = ev.maxCoeff();
          out.norm_dev = (ev.array() - 1.0).abs().maxCoeff();
          for (int p = 1; p <= mm; ++p) out.moments.push_back(ev.array().pow(p).mean());
          return out;
        });
    std::size_t positive = 0, negative = 0;
    std::vector<double> mins, maxs, devs;
    std::vector<std::vector<double>> moments(static_cast<std::size_t>(mm));
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& sp = samples[i];
      positive += sp.min > 0;
      negative += sp.min < 0;
      mins.push_back(sp.min);
      maxs.push_back(sp.max);
      devs.push_back(sp.norm_dev);
      for (int p = 0; p < mm; ++p) moments[p].push_back(sp.moments[p]);
      if (opt.keep_rows) {
        std::vector<Cell> row{std::int64_t{g.d}, std::int64_t{g.s}, static_cast<std::int64_t>(i),
                              sp.min, sp.max};
        for (double m : sp.moments) row.emplace_back(m);
        row.emplace_back(sp.norm_dev);
        res.samples.rows.push_back(std::move(row));
        if (cfg.spectral.write_spectra)
          for (std::size_t k = 0; k < sp.eigenvalues.size(); ++k)
            spectra.rows.push_back({std::int64_t{g.d}, std::int64_t{g.s},
                                    static_cast<std::int64_t>(i), static_cast<std::int64_t>(k),
                                    sp.eigenvalues[k]});
      }
    }
    nlohmann::json mj = nlohmann::json::array();
    for (int p = 1; p <= mm; ++p) {
      const Estimate e = summarize(moments[p - 1], 1).mean;
      double ref = 1;
      if (cfg.spectral.scale == SpectralScale::s) {
        const Rational c(Rational(g.s) / Rational(g.d));
        ref = to_double(semicircle_moment(c, c, p));
      } else if (cfg.spectral.scale == SpectralScale::sqrt_ds) {
        ref = to_double(semicircle_moment(Rational(0), Rational(1), p));
      }
      mj.push_back({{"p", p}, {"empirical", e.value}, {"se", e.se}, {"reference", ref},
                    {"rel_err_reference", ref != 0 ? (e.value - ref) / ref : e.value}});
    }
    const std::size_t n = samples.size();
    nlohmann::json pj = detail::point_json(g);
    pj["n"] = n;
    pj["scale"] = to_string(cfg.spectral.scale);
    pj["reference_law"] = cfg.spectral.scale == SpectralScale::s
                              ? "semicircle(s/d, s/d)"
                              : (cfg.spectral.scale == SpectralScale::sqrt_ds ? "semicircle(0, 1)"
                                                                              : "point mass 1");
    pj["moments"] = mj;
    pj["lambda_min"] = detail::estimate_json(summarize(mins, 1).mean);
    pj["lambda_max"] = detail::estimate_json(summarize(maxs, 1).mean);
    pj["lambda_min_worst"] = n ? *std::min_element(mins.begin(), mins.end()) : std::nan("");
    pj["lambda_max_worst"] = n ? *std::max_element(maxs.begin(), maxs.end()) : std::nan("");
    pj["fraction_min_positive"] = detail::proportion_json(proportion(positive, n));
    pj["fraction_min_negative"] = detail::proportion_json(proportion(negative, n));
    pj["norm_dev"] = detail::estimate_json(summarize(devs, 1).mean);
    pj["norm_dev_max"] = n ? *std::max_element(devs.begin(), devs.end()) : std::nan("");
    points.push_back(pj);
    detail::report(opt, cfg, g, clock.seconds());
  }
  if (cfg.spectral.write_spectra) res.extra.push_back(std::move(spectra));
  res.summary["points"] = points;
  return res;
}

namespace detail {

struct FamilyOutcome {
  bool ppt = false;
  double margin = 0;
};

inline double finite_min(double a, double b) {
  if (!std::isfinite(a)) return b;
  if (!std::isfinite(b)) return a;
  return std::min(a, b);
}

inline FamilyOutcome ppt_outcome(Family f, const HaarIsometry& v, const CovariantParams& prm,
                                 const std::optional<DOCTriple>& t, const Tolerances& tol) {
  switch (f) {
    case Family::uu:
    case Family::uubar:
    case Family::oo:
    case Family::hh: {
      const TwirlKind k = f == Family::uu      ? TwirlKind::uu
                          : f == Family::uubar ? TwirlKind::uubar
                          : f == Family::oo    ? TwirlKind::oo
                                               : TwirlKind::hh;
      const InequalityResult r = ppt_eb_test(k, prm, tol.inequality);
      return {r.pass, r.margin};
    }
    case Family::duc:
    case Family::cduc:
    case Family::doc: {
      const DiagonalClass cls = f == Family::duc    ? DiagonalClass::duc
                                : f == Family::cduc ? DiagonalClass::cduc
                                                    : DiagonalClass::doc;
      const PptResult r = ppt_test(twirl_diagonal(*t, cls), tol.inequality);
      return {r.ppt, finite_min(r.min_eig_c, r.min_pair_margin)};
    }
    case Family::unstructured: {
      const Matrix pt = partial_transpose(stinespring_choi(v).matrix());
      return {is_psd(pt, tol.psd), min_eigenvalue(pt)};
    }
  }
  return {};
}

inline bool is_twirl_family(Family f) {
  return f == Family::uu || f == Family::uubar || f == Family::oo || f == Family::hh;
}

inline bool is_diagonal_family(Family f) {
  return f == Family::duc || f == Family::cduc || f == Family::doc;
}

}  // namespace detail

// PPT fractions of the twirls of one Haar Stinespring channel per sample, for each family.
inline ExperimentResult run_ppt_scan(const ExperimentConfig& cfg, const RunOptions& opt = {}) {
  ExperimentResult res;
  const auto& fams = cfg.ppt_scan.families;
  const bool need_triple = std::any_of(fams.begin(), fams.end(), detail::is_diagonal_family);
  res.samples.columns = {"d", "s", "sample"};
  for (Family f : fams) {
    res.samples.columns.push_back(std::string(to_string(f)) + "_ppt");
    res.samples.columns.push_back(std::string(to_string(f)) + "_margin");
  }
  nlohmann::json points = nlohmann::json::array();
  // family -> d -> [(s, fraction, se)] for the monotonicity check
  std::map<std::string, std::map<int, std::vector<std::tuple<int, double, double>>>> rows_by_d;
  for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
    const GridPoint& g = cfg.grid[gi];
    const detail::Stopwatch clock;
    const auto outcomes = parallel_map(
        static_cast<std::size_t>(cfg.n_samples), opt.threads, [&](std::size_t i) {
          RngStream rng(cfg.seed, detail::stream_index(gi, i));
          const HaarIsometry v = sample_haar_isometry(g.d, g.s, rng);
          std::optional<DOCTriple> t;
          CovariantParams prm;
          if (need_triple) {
            t = abc_of_isometry(v);
            prm = covariant_params(*t);
          } else {
            prm = covariant_params(v);
          }
          std::vector<detail::FamilyOutcome> out;
          for (Family f : fams) out.push_back(detail::ppt_outcome(f, v, prm, t, cfg.tol));
          return out;
        });
    if (opt.keep_rows) {
      for (std::size_t i = 0; i < outcomes.size(); ++i) {
        std::vector<Cell> row{std::int64_t{g.d}, std::int64_t{g.s}, static_cast<std::int64_t>(i)};
        for (const auto& o : outcomes[i]) {
          row.emplace_back(std::int64_t{o.ppt});
          row.emplace_back(o.margin);
        }
        res.samples.rows.push_back(std::move(row));
      }
    }
    nlohmann::json fj = nlohmann::json::array();
    for (std::size_t k = 0; k < fams.size(); ++k) {
      std::size_t hits = 0;
      std::vector<double> margins;
      for (const auto& o : outcomes) {
        hits += o[k].ppt;
        margins.push_back(o[k].margin);
      }
      const Proportion pr = proportion(hits, outcomes.size());
      nlohmann::json e{{"family", to_string(fams[k])},
                       {"ppt_fraction", detail::proportion_json(pr)},
                       {"margin", detail::estimate_json(summarize(margins, 1).mean)}};
      if (fams[k] == Family::uubar || fams[k] == Family::oo || fams[k] == Family::hh)
        e["reference_fixed_s"] = normal_cdf(std::sqrt(static_cast<double>(g.s)));
      fj.push_back(e);
      rows_by_d[to_string(fams[k])][g.d].emplace_back(g.s, pr.value, pr.se);
    }
    nlohmann::json pj = detail::point_json(g);
    pj["n"] = outcomes.size();
    pj["families"] = fj;
    points.push_back(pj);
    detail::report(opt, cfg, g, clock.seconds());
  }
  nlohmann::json mono = nlohmann::json::array();
  for (auto& [fam, by_d] : rows_by_d)
    for (auto& [d, row] : by_d) {
      std::sort(row.begin(), row.end());
      std::size_t violations = 0;
      for (std::size_t k = 1; k < row.size(); ++k) {
        const auto [s0, f0, e0] = row[k - 1];
        const auto [s1, f1, e1] = row[k];
        if (s1 > s0 && f1 < f0 - 3 * std::hypot(e0, e1)) ++violations;
      }
      mono.push_back({{"family", fam}, {"d", d}, {"violations", violations}});
    }
  res.summary["points"] = points;
  res.summary["monotonicity"] = mono;
  return res;
}

// Pairs (Phi1, Phi2) of random diagonal channels and the PPT^2 conditions of Phi1 o Phi2.
inline ExperimentResult run_ppt2(const ExperimentConfig& cfg, const RunOptions& opt = {}) {
  ExperimentResult res;
  res.samples.columns = {"d", "s1", "s2", "sample", "ppt1", "ppt2", "conditions", "margin1",
                         "margin2", "verdict", "worst_block_margin"};
  nlohmann::json points = nlohmann::json::array();
  struct PairOutcome {
    bool ppt1 = false, ppt2 = false, conditions = false;
    double margin1 = 0, margin2 = 0, block_margin = 0;
    EBVerdict verdict = EBVerdict::unknown;
  };
  for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
    const GridPoint& g = cfg.grid[gi];
    const detail::Stopwatch clock;
    const auto outcomes = parallel_map(
        static_cast<std::size_t>(cfg.n_samples), opt.threads, [&](std::size_t i) {
          RngStream rng(cfg.seed, detail::stream_index(gi, i));
          const DOCChannel c1 = sample_diagonal_channel(g.d, g.s, cfg.ppt2.class1, rng);
          DOCChannel c2;
          switch (cfg.ppt2.mode) {
            case CorrelationMode::independent:
              c2 = sample_diagonal_channel(g.d, g.s2, cfg.ppt2.class2, rng);
              break;
            case CorrelationMode::equal: c2 = c1; break;
            case CorrelationMode::conjugate:
              c2 = {{g.d, c1.triple.a, c1.triple.b.conjugate(), c1.triple.c.conjugate()}, c1.cls};
              break;
          }
          PairOutcome o;
          o.ppt1 = ppt_test(c1, cfg.tol.inequality).ppt;
          o.ppt2 = ppt_test(c2, cfg.tol.inequality).ppt;
          const Ppt2Result r = ppt2_conditions(c1.triple, c2.triple, cfg.tol.inequality);
          o.conditions = r.pass;
          o.margin1 = r.margin1;
          o.margin2 = r.margin2;
          const EBCertificate cert = certify_composition(c1, c2, cfg.tol.inequality);
          o.verdict = cert.verdict;
          o.block_margin = cert.worst_margin;
          return o;
        });
    std::size_t n1 = 0, n2 = 0, nc = 0, ncert = 0, nref = 0, mismatch = 0;
    double w1 = HUGE_VAL, w2 = HUGE_VAL, wb = HUGE_VAL;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
      const auto& o = outcomes[i];
      n1 += o.ppt1;
      n2 += o.ppt2;
      nc += o.conditions;
      ncert += o.verdict == EBVerdict::certified;
      nref += o.verdict == EBVerdict::refuted;
      mismatch += o.conditions != (o.verdict == EBVerdict::certified);
      w1 = std::min(w1, o.margin1);
      w2 = std::min(w2, o.margin2);
      wb = std::min(wb, o.block_margin);
      if (opt.keep_rows)
        res.samples.rows.push_back({std::int64_t{g.d}, std::int64_t{g.s}, std::int64_t{g.s2},
                                    static_cast<std::int64_t>(i), std::int64_t{o.ppt1},
                                    std::int64_t{o.ppt2}, std::int64_t{o.conditions}, o.margin1,
                                    o.margin2, std::string(to_string(o.verdict)),
                                    o.block_margin});
    }
    const std::size_t n = outcomes.size();
    nlohmann::json pj = detail::point_json(g);
    pj["s2"] = g.s2;
    pj["mode"] = to_string(cfg.ppt2.mode);
    pj["class1"] = to_string(cfg.ppt2.class1);
    pj["class2"] = to_string(cfg.ppt2.mode == CorrelationMode::independent ? cfg.ppt2.class2
                                                                           : cfg.ppt2.class1);
    pj["n"] = n;
    pj["ppt_fraction_1"] = detail::proportion_json(proportion(n1, n));
    pj["ppt_fraction_2"] = detail::proportion_json(proportion(n2, n));
    pj["conditions_rate"] = detail::proportion_json(proportion(nc, n));
    pj["certified_rate"] = detail::proportion_json(proportion(ncert, n));
    pj["refuted"] = nref;
    pj["conditions_certificate_mismatch"] = mismatch;
    pj["worst_margin1"] = n ? w1 : std::nan("");
    pj["worst_margin2"] = n ? w2 : std::nan("");
    pj["worst_block_margin"] = n ? wb : std::nan("");
    points.push_back(pj);
    detail::report(opt, cfg, g, clock.seconds());
  }
  res.summary["points"] = points;
  return res;
}

// Exact oracle values for each query; bound errors are reported per query.
inline ExperimentResult run_oracle(const ExperimentConfig& cfg, const RunOptions& = {}) {
  ExperimentResult res;
  res.samples.columns = {"target", "d", "s", "p", "exact", "approx", "error"};
  nlohmann::json out = nlohmann::json::array();
  for (const auto& q : cfg.queries) {
    nlohmann::json query{{"target", to_string(q.target)}, {"d", q.d}, {"s", q.s}, {"p", q.p}};
    std::string error;
    const auto exact = detail::try_exact(q, &error);
    nlohmann::json e{{"query", query}};
    std::vector<Cell> row{std::string(to_string(q.target)), std::int64_t{q.d}, std::int64_t{q.s},
                          std::int64_t{q.p}};
    if (exact) {
      e["exact"] = to_fraction_string(*exact);
      e["approx"] = to_double(*exact);
      row.insert(row.end(), {to_fraction_string(*exact), to_double(*exact), std::string()});
    } else {
      e["error"] = error;
      row.insert(row.end(), {std::string(), std::nan(""), error});
    }
    out.push_back(e);
    res.samples.rows.push_back(std::move(row));
  }
  res.summary["results"] = out;
  return res;
}

// Runs the experiment and fills the common summary fields.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {}) {
  pin_blas_threads();
  ExperimentResult res;
  switch (cfg.kind) {
    case ExperimentKind::histogram: res = run_histogram(cfg, opt); break;
    case ExperimentKind::oracle_check: res = run_oracle_check(cfg, opt); break;
    case ExperimentKind::spectral: res = run_spectral(cfg, opt); break;
    case ExperimentKind::ppt_scan: res = run_ppt_scan(cfg, opt); break;
    case ExperimentKind::ppt2: res = run_ppt2(cfg, opt); break;
    case ExperimentKind::oracle: res = run_oracle(cfg, opt); break;
  }
  nlohmann::json summary{{"schema", kSchemaVersion},
                         {"seed", cfg.seed},
                         {"kind", to_string(cfg.kind)},
                         {"config", cfg.echo},
                         {"n", res.samples.rows.size()}};
  summary.update(res.summary);
  res.summary = std::move(summary);
  return res;
}

namespace detail {

inline std::string format_cell(const Cell& c) {
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  const double v = std::get<double>(c);
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  out << text;
  out.close();
  require(static_cast<bool>(out), ErrorCode::io, "failed writing '" + path.string() + "'");
}

}  // namespace detail

inline std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t k = 0; k < t.columns.size(); ++k) out += (k ? "," : "") + t.columns[k];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ",";
      out += detail::format_cell(row[k]);
    }
    out += "\n";
  }
  return out;
}

// Writes samples.csv, any extra tables and summary.json into `dir`.
inline void emit(const ExperimentResult& res, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, ErrorCode::io, "cannot create output directory '" + dir + "': " + ec.message());
  detail::write_file(fs::path(dir) / res.samples.file, to_csv(res.samples));
  for (const auto& t : res.extra) detail::write_file(fs::path(dir) / t.file, to_csv(t));
  detail::write_file(fs::path(dir) / "summary.json", res.summary.dump(2) + "\n");
}

}  // namespace chanlab
