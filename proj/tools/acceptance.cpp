// chanlab_acceptance [--only N,...] [--threads K] [--fixtures DIR]
//
// One PASS/FAIL line per acceptance criterion. Exit code 0 when every selected
// criterion passes, 1 otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "chanlab/covariant.hpp"
#include "chanlab/experiments.hpp"
#include "chanlab/perm.hpp"
#include "chanlab/weingarten.hpp"

#ifndef CHANLAB_FIXTURE_DIR
#define CHANLAB_FIXTURE_DIR "fixtures"
#endif

namespace {

using namespace chanlab;
using nlohmann::json;

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

struct Context {
  int threads = 1;
  std::string fixtures = CHANLAB_FIXTURE_DIR;
};

struct Criterion {
  int id;
  const char* title;
  double budget_s;  // 0 when the criterion has no runtime bound
  std::function<Outcome(const Context&)> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

ExperimentResult run(const Context& ctx, json cfg) {
  const ExperimentConfig c = parse_experiment_config(cfg);
  RunOptions opt;
  opt.threads = ctx.threads;
  opt.keep_rows = false;
  return run_experiment(c, opt);
}

const json& stat_of(const json& point, const std::string& which) {
  for (const auto& st : point.at("stats"))
    if (st.at("which") == which) return st;
  throw Error(ErrorCode::invalid_parameter, "missing statistic " + which);
}

const json& family_of(const json& point, const std::string& fam) {
  for (const auto& f : point.at("families"))
    if (f.at("family") == fam) return f;
  throw Error(ErrorCode::invalid_parameter, "missing family " + fam);
}

// Random valid DOC-type channel with d in [2, 6] and s spanning the PPT transition.
DOCChannel random_channel(int k, DiagonalClass cls = DiagonalClass::doc) {
  const int d = 2 + k % 5;
  const int s = 1 + (k / 5) % (2 * d * d);
  RngStream rng(9000, k);
  return sample_diagonal_channel(d, s, cls, rng);
}

Outcome ac1(const Context&) {
  Outcome o;
  int checked = 0, bad = 0;
  for (int p = 1; p <= 5; ++p) {
    const auto g = enumerate_symmetric_group(p);
    for (std::int64_t n = p; n <= p + 4; ++n) {
      const auto t = weingarten_table(p, n);
      Rational wsum = 0, nsum = 0;
      for (const auto& s : g) {
        wsum += (*t)(s);
        nsum += rpow(Rational(n), s.cycle_count());
      }
      const Rational rising = rising_factorial(Rational(n), p);
      bad += wsum != 1 / rising;
      bad += nsum != rising;
      checked += 2;
    }
  }
  o.check(bad == 0, fmt("sum Wg = 1/(n)_p and sum n^#s = (n)_p exactly, p<=5, n=p..p+4: "
                        "%d of %d identities hold",
                        checked - bad, checked));
  return o;
}

Outcome ac2(const Context& ctx) {
  Outcome o;
  const std::vector<int> ds{2, 3, 5, 10}, ss{1, 2, 5};
  json points = json::array();
  for (int d : ds)
    for (int s : ss) points.push_back({d, s});
  const ExperimentResult r =
      run(ctx, {{"kind", "histogram"},
                {"seed", 2002},
                {"n_samples", 100000},
                {"schedule", {{"points", points}}},
                {"histogram", {{"which", "lambda1"}, {"max_moment", 2}}}});
  for (const auto& pt : r.summary.at("points")) {
    const int d = pt.at("d"), s = pt.at("s");
    const json& st = stat_of(pt, "lambda1");
    const double var = st.at("variance").at("value").get<double>() / (s * s);
    const double se = st.at("variance").at("se").get<double>() / (s * s);
    const Rational exact_var = Rational(s * (d * d - 1)) / Rational((d * s) * (d * s) - 1);
    const double ev = to_double(exact_var);
    const double z = (var - ev) / se;
    o.check(std::abs(z) <= 4,
            fmt("d=%d s=%d Var(lambda1) %.6g vs %.6g (z=%+.2f, |z|<=4)", d, s, var, ev, z));
    o.check(moment_lambda(1, d, s, 2) == 1 + exact_var,
            fmt("d=%d s=%d E[lambda1^2] = 1 + s(d^2-1)/((ds)^2-1) exactly", d, s));
  }
  return o;
}

Outcome ac3(const Context& ctx) {
  Outcome o;
  const ExperimentResult r = run(ctx, {{"kind", "histogram"},
                                       {"seed", 3003},
                                       {"n_samples", 10000},
                                       {"schedule", {{"d", {100}}, {"s", {1, 5, 10}}}},
                                       {"histogram", {{"which", {"lambda1", "lambda2", "lambda3"}}, {"max_moment", 3}}}});
  for (const auto& pt : r.summary.at("points")) {
    const int s = pt.at("s");
    const json& m1 = stat_of(pt, "lambda1").at("moments");
    for (int p = 1; p <= 3; ++p) {
      const double rel = m1.at(p - 1).at("rel_err_reference");
      o.check(std::abs(rel) <= 0.05,
              fmt("s=%d E[(s lambda1)^%d] %.5g vs gamma %.5g (rel %+.4f, <=0.05)", s, p,
                  m1.at(p - 1).at("empirical").get<double>(),
                  m1.at(p - 1).at("reference").get<double>(), rel));
    }
    if (s == 1 || s == 5) {
      const json& m2 = stat_of(pt, "lambda2").at("moments");
      for (int p = 1; p <= 2; ++p) {
        const double rel = m2.at(p - 1).at("rel_err_reference");
        o.check(std::abs(rel) <= 0.05,
                fmt("s=%d E[(s lambda2)^%d] %.5g vs normal %.5g (rel %+.4f, <=0.05)", s, p,
                    m2.at(p - 1).at("empirical").get<double>(),
                    m2.at(p - 1).at("reference").get<double>(), rel));
      }
    }
    const double mean3 = stat_of(pt, "lambda3").at("mean").at("value");
    o.check(std::abs(mean3 - 1) <= 0.01, fmt("s=%d mean lambda3 %.5f (within 1 +- 0.01)", s, mean3));
  }
  return o;
}

Outcome ac4(const Context& ctx) {
  Outcome o;
  auto config = [](std::uint64_t seed) {
    return json{{"kind", "oracle-check"},
                {"seed", seed},
                {"n_samples", 100000},
                {"schedule", {{"points", {{2, 1}, {3, 2}, {2, 2}}}}},
                {"oracle_check",
                 {{"targets",
                   {{"lambda1", {1, 2}},
                    {"lambda2", {1, 2}},
                    {"lambda3", {1, 2}},
                    {"trC", {1, 2}},
                    {"entryA", {1, 2}},
                    {"entryB2", {1}}}}}}};
  };
  auto describe = [](const ExperimentResult& r, std::uint64_t seed) {
    double worst = 0;
    std::string where;
    for (const auto& row : r.summary.at("rows")) {
      if (!row.contains("z") || !row.at("z").is_number()) continue;
      const double z = row.at("z");
      if (std::abs(z) >= worst) {
        worst = std::abs(z);
        where = fmt("%s p=%d at (%d,%d)", row.at("target").get<std::string>().c_str(),
                    row.at("p").get<int>(), row.at("d").get<int>(), row.at("s").get<int>());
      }
    }
    return fmt("seed %llu: %zu rows, %d with |z|>4, max |z| %.2f (%s)",
               static_cast<unsigned long long>(seed), r.summary.at("rows").size(),
               r.summary.at("flagged").get<int>(), worst, where.c_str());
  };
  const ExperimentResult first = run(ctx, config(4242));
  if (!first.gate_failed) {
    o.check(true, describe(first, 4242));
    return o;
  }
  o.details.push_back("note " + describe(first, 4242) + ", one reseeded rerun allowed");
  const ExperimentResult second = run(ctx, config(4243));
  o.check(!second.gate_failed, describe(second, 4243));
  return o;
}

Outcome ac5(const Context& ctx) {
  Outcome o;
  const ExperimentResult r =
      run(ctx, {{"kind", "spectral"},
                {"seed", 5005},
                {"n_samples", 100},
                {"schedule", {{"d", {200}}, {"c", {1.0, 2.0, 4.0, 9.0}}}},
                {"spectral", {{"scale", "s"}, {"max_moment", 2}, {"write_spectra", false}}}});
  for (const auto& pt : r.summary.at("points")) {
    const double c = pt.at("param");
    const int s = pt.at("s");
    if (c == 1.0 || c == 4.0) {
      const double m1 = pt.at("moments").at(0).at("empirical");
      const double m2 = pt.at("moments").at(1).at("empirical");
      const double var = m2 - m1 * m1;
      o.check(std::abs(m1 - c) <= 0.1 * c,
              fmt("c=%g s=%d ESD mean %.4f vs %g (within 10%%)", c, s, m1, c));
      o.check(std::abs(var - c) <= 0.1 * c,
              fmt("c=%g s=%d ESD variance %.4f vs %g (within 10%%)", c, s, var, c));
    }
    if (c == 2.0) {
      const double f = pt.at("fraction_min_negative").at("value");
      o.check(f >= 0.95, fmt("c=2 s=%d fraction lambda_min < 0 is %.3f (>=0.95)", s, f));
    }
    if (c == 9.0) {
      const double f = pt.at("fraction_min_positive").at("value");
      o.check(f >= 0.95, fmt("c=9 s=%d fraction lambda_min > 0 is %.3f (>=0.95)", s, f));
    }
  }
  return o;
}

Outcome ac6(const Context& ctx) {
  Outcome o;
  const ExperimentResult r = run(ctx, {{"kind", "ppt-scan"},
                                       {"seed", 6006},
                                       {"n_samples", 10000},
                                       {"schedule", {{"points", {{200, 1}}}}},
                                       {"ppt_scan", {{"families", {"UUbar", "HH"}}}}});
  const json& pt = r.summary.at("points").at(0);
  const json& ub = family_of(pt, "UUbar").at("ppt_fraction");
  const json& hh = family_of(pt, "HH").at("ppt_fraction");
  const double fu = ub.at("value"), fh = hh.at("value");
  const double target = normal_cdf(1.0);
  o.check(std::abs(fu - target) <= 0.02,
          fmt("UUbar PPT fraction %.4f vs Phi(1) = %.4f (within 0.02)", fu, target));
  const double tol = 3 * std::hypot(ub.at("se").get<double>(), hh.at("se").get<double>());
  o.check(std::abs(fh - fu) <= tol,
          fmt("HH PPT fraction %.4f, |HH - UUbar| %.4f (<= 3 SE = %.4f)", fh, std::abs(fh - fu),
              tol));
  return o;
}

Outcome ac7(const Context& ctx) {
  Outcome o;
  const ExperimentResult r = run(ctx, {{"kind", "ppt-scan"},
                                       {"seed", 7007},
                                       {"n_samples", 500},
                                       {"schedule", {{"points", {{100, 1}, {100, 10}}}}},
                                       {"ppt_scan", {{"families", {"DUC"}}}}});
  for (const auto& pt : r.summary.at("points")) {
    const int s = pt.at("s");
    const double f = family_of(pt, "DUC").at("ppt_fraction").at("value");
    if (s == 1)
      o.check(f <= 0.02, fmt("d=100 s=1 DUC PPT fraction %.3f (<=0.02)", f));
    else
      o.check(f >= 0.95, fmt("d=100 s=10 DUC PPT fraction %.3f (>=0.95)", f));
  }
  return o;
}

Outcome ac8(const Context&) {
  Outcome o;
  double worst = 0;
  int invalid = 0;
  for (int k = 0; k < 200; ++k) {
    const DOCChannel c1 = random_channel(k);
    RngStream rng(9100, k);
    const DOCChannel c2 =
        sample_diagonal_channel(c1.triple.d, 1 + k % 7, static_cast<DiagonalClass>(k % 3), rng);
    const ChoiMatrix dense = choi_of_map(compose(doc_map(c1.triple), doc_map(c2.triple)));
    const DOCChannel out = compose_doc(c1, c2);
    worst = std::max(worst, max_abs_diff(choi_of_triple(out.triple).matrix(), dense.matrix()));
    invalid += !validate(out).ok();
  }
  o.check(worst <= 1e-10, fmt("200 pairs, d in [2,6]: max |J_structured - J_dense| %.2e (<=1e-10)",
                              worst));
  o.check(invalid == 0, fmt("composed triples failing validation: %d", invalid));
  return o;
}

Outcome ac9(const Context& ctx) {
  Outcome o;
  for (const char* mode : {"independent", "equal", "conjugate"}) {
    const ExperimentResult r = run(ctx, {{"kind", "ppt2"},
                                         {"seed", 7001},
                                         {"n_samples", 200},
                                         {"schedule", {{"d", {30}}, {"t", {2.0}}}},
                                         {"ppt2", {{"mode", mode}}}});
    const json& pt = r.summary.at("points").at(0);
    const json& cond = pt.at("conditions_rate");
    const json& cert = pt.at("certified_rate");
    o.check(cond.at("hits") == cond.at("n") && cert.at("hits") == cert.at("n"),
            fmt("%s d=30 s=%d: conditions %d/%d, certified %d/%d, worst margins %.3g %.3g", mode,
                pt.at("s").get<int>(), cond.at("hits").get<int>(), cond.at("n").get<int>(),
                cert.at("hits").get<int>(), cert.at("n").get<int>(),
                pt.at("worst_margin1").get<double>(), pt.at("worst_margin2").get<double>()));
  }
  return o;
}

Outcome ac10(const Context& ctx) {
  Outcome o;
  auto load = [&](const std::string& name) {
    std::ifstream in(ctx.fixtures + "/" + name);
    require(in.good(), ErrorCode::io, "cannot open fixture " + ctx.fixtures + "/" + name);
    return triple_from_json(json::parse(in));
  };
  const DOCChannel doc = load("ppt_doc_d3.json");
  const DOCChannel cduc = load("ppt_cduc_d3.json");
  o.check(validate(doc).ok() && validate(cduc).ok(), "both fixtures are valid channels");
  o.check(ppt_test(doc).ppt && ppt_test(cduc).ppt, "both fixtures are PPT");
  const EBCertificate ab = certify_composition(doc, cduc);
  const EBCertificate ba = certify_composition(cduc, doc);
  o.check(ab.verdict == EBVerdict::certified,
          std::string("DOC then CDUC composition: ") + to_string(ab.verdict));
  o.check(ba.verdict == EBVerdict::certified,
          std::string("CDUC then DOC composition: ") + to_string(ba.verdict));
  return o;
}

Outcome ac11(const Context&) {
  Outcome o;

  int parity_bad = 0;
  for (int p = 1; p <= 5; ++p) {
    const auto g = enumerate_symmetric_group(p);
    std::vector<Permutation> inv;
    for (const auto& x : g) inv.push_back(x.inverse());
    for (std::size_t i1 = 0; i1 < g.size(); ++i1)
      for (std::size_t i2 = 0; i2 < g.size(); ++i2) {
        const int base = (inv[i1] * g[i2]).length();
        for (std::size_t a = 0; a < g.size(); ++a) {
          const int excess = (inv[i1] * g[a]).length() + (inv[a] * g[i2]).length() - base;
          parity_bad += excess < 0 || excess % 2 != 0;
        }
      }
  }
  o.check(parity_bad == 0, fmt("excess is even and nonnegative, p<=5: %d violations", parity_bad));

  int geo_bad = 0;
  for (int p = 1; p <= 5; ++p) {
    const auto s = full_cycle(p);
    std::int64_t count = 0;
    for (const auto& a : enumerate_symmetric_group(p)) {
      if (!is_geodesic(a, s)) continue;
      ++count;
      geo_bad += !SetPartition::of_permutation(a).is_noncrossing();
    }
    geo_bad += count != catalan(p);
  }
  o.check(geo_bad == 0,
          fmt("full-cycle geodesics are non-crossing and Catalan many, p<=5: %d violations",
              geo_bad));

  int bound_bad = 0;
  for (int p = 1; p <= 5; ++p) {
    const auto s = full_cycle(p);
    const auto s_inv = s.inverse();
    const int rhs2 = (s * s).length();
    const auto g = enumerate_symmetric_group(p);
    for (const auto& a : g)
      for (const auto& b : g) {
        const int jr = join_rank(s_inv * a, s_inv * b.inverse());
        const int ab = (a * b.inverse()).length();
        const int v = a.length() + 2 * ab + jr;
        const bool tight = (a == b) && a.is_involution() && is_geodesic(a, s);
        bound_bad += tight ? v != s.length() : v < s.length() + 2;
        bound_bad += 2 * (ab + jr) < rhs2;
      }
  }
  o.check(bound_bad == 0, fmt("optimization bounds and their equality cases, p<=5: %d violations",
                              bound_bad));

  double lattice_dev = 0;
  for (int d = 2; d <= 6; ++d) {
    RngStream rng(600 + d, 0);
    const ChoiMatrix j = stinespring_choi(sample_haar_isometry(d, 2, rng));
    const ChoiMatrix jhh = choi_of_map(twirl_hh(j).map);
    auto dev = [&](const Matrix& x, const Matrix& y) {
      lattice_dev = std::max(lattice_dev, max_abs_diff(x, y));
    };
    for (TwirlKind k : {TwirlKind::uu, TwirlKind::uubar, TwirlKind::oo})
      dev(choi_of_map(twirl(k, jhh).map).matrix(), choi_of_map(twirl(k, j).map).matrix());
    dev(choi_of_map(twirl_hh(jhh).map).matrix(), jhh.matrix());
    const ChoiMatrix jdoc = choi_of_triple(twirl_diagonal(j, DiagonalClass::doc).triple);
    dev(choi_of_map(twirl_hh(jdoc).map).matrix(), jhh.matrix());
    dev(choi_of_triple(twirl_diagonal(jhh, DiagonalClass::doc).triple).matrix(), jhh.matrix());
    const ChoiMatrix juu = choi_of_map(twirl_uu(j).map);
    dev(choi_of_map(twirl_oo(juu).map).matrix(), juu.matrix());
    dev(choi_of_triple(twirl_diagonal(juu, DiagonalClass::duc).triple).matrix(), juu.matrix());
    const ChoiMatrix jub = choi_of_map(twirl_uubar(j).map);
    dev(choi_of_triple(twirl_diagonal(jub, DiagonalClass::cduc).triple).matrix(), jub.matrix());
  }
  o.check(lattice_dev <= 1e-10,
          fmt("twirl lattice relations, d in [2,6]: max deviation %.2e (<=1e-10)", lattice_dev));

  int tested = 0, disagreements = 0, ppt = 0;
  for (int k = 0; k < 200; ++k) {
    const DOCChannel ch = random_channel(k, static_cast<DiagonalClass>(k % 3));
    const PptResult r = ppt_test(ch);
    const Matrix dense = choi_of_triple(ch.triple).matrix();
    const double dense_min = min_eigenvalue(partial_transpose(dense));
    const double margin =
        std::min({std::abs(dense_min), std::abs(r.min_eig_c), std::abs(r.min_pair_margin)});
    if (margin <= 1e-7) continue;
    ++tested;
    ppt += r.ppt;
    disagreements += r.ppt != is_ppt(dense);
  }
  o.check(disagreements == 0,
          fmt("structured vs dense PPT: %d disagreements over %d cases with margin > 1e-7 "
              "(%d PPT)",
              disagreements, tested, ppt));

  double transpose_dev = 0;
  for (int k = 0; k < 30; ++k) {
    const DOCChannel ch = random_channel(k);
    const ChannelMap lhs = compose(doc_map(ch.triple), transpose_map(ch.triple.d));
    transpose_dev = std::max(transpose_dev,
                             max_abs_diff(choi_of_map(lhs).matrix(),
                                          choi_of_triple(compose_transpose(ch.triple)).matrix()));
  }
  o.check(transpose_dev <= 1e-10,
          fmt("composition with the transpose swaps B and C: max deviation %.2e (<=1e-10)",
              transpose_dev));
  return o;
}

std::vector<int> parse_only(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const int v = std::stoi(item);
    require(v >= 1 && v <= 11, ErrorCode::config, "criterion must be in [1, 11], got " + item);
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria for chanlab"};
  Context ctx;
  ctx.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string only;
  app.add_option("--only", only, "Comma-separated criterion numbers, e.g. 1,4,9");
  app.add_option("--threads", ctx.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--fixtures", ctx.fixtures, "Fixture directory");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "Weingarten sum identities", 5, ac1},
      {2, "variance of lambda1", 120, ac2},
      {3, "limit laws at d = 100", 300, ac3},
      {4, "Monte Carlo against exact moments", 180, ac4},
      {5, "semicircle and edge of sC", 600, ac5},
      {6, "UUbar and HH PPT fractions at s = 1", 0, ac6},
      {7, "DUC PPT transition", 0, ac7},
      {8, "structured composition", 0, ac8},
      {9, "PPT^2 at s = d^2", 300, ac9},
      {10, "PPT DOC with PPT CDUC", 0, ac10},
      {11, "combinatorial and structural properties", 0, ac11},
  };

  std::vector<int> selected;
  try {
    selected = parse_only(only);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  pin_blas_threads();
  bool all_pass = true;
  for (const Criterion& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end())
      continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(ctx);
    } catch (const std::exception& e) {
      o.check(false, std::string("error: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0)
      o.check(secs <= c.budget_s, fmt("runtime %.1f s (budget %.0f s)", secs, c.budget_s));
    else
      o.details.push_back(fmt("note runtime %.1f s", secs));
    all_pass = all_pass && o.pass;
    std::cout << fmt("AC%-2d %s  %s", c.id, o.pass ? "PASS" : "FAIL", c.title) << "\n";
    for (const auto& d : o.details) std::cout << "       " << d << "\n";
    std::cout.flush();
  }
  return all_pass ? 0 : 1;
}
