#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "chanlab/experiments.hpp"

using namespace chanlab;

namespace {

ExperimentConfig parse(const std::string& text,
                       std::optional<ExperimentKind> kind = std::nullopt) {
  return parse_experiment_config(parse_config_text(text), kind);
}

ErrorCode config_error_code(const std::string& text,
                            std::optional<ExperimentKind> kind = std::nullopt) {
  try {
    parse(text, kind);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error for:\n" << text;
  return ErrorCode::io;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* kHistogram = R"(
kind = "histogram"
seed = 11
n_samples = 50
[schedule]
d = [3, 5]
s = [1, 2]
)";

}  // namespace

TEST(Stats, SummaryOfKnownSample) {
  const SampleSummary s = summarize({1, 2, 3, 4}, 2);
  EXPECT_EQ(s.n, 4u);
  EXPECT_DOUBLE_EQ(s.mean.value, 2.5);
  EXPECT_NEAR(s.mean.se, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
  EXPECT_DOUBLE_EQ(s.variance.value, 5.0 / 3.0);
  EXPECT_DOUBLE_EQ(s.raw[1].value, 7.5);
  EXPECT_DOUBLE_EQ(s.min, 1);
  EXPECT_DOUBLE_EQ(s.max, 4);
  const SampleSummary e = summarize({}, 3);
  EXPECT_EQ(e.n, 0u);
  EXPECT_TRUE(std::isnan(e.mean.value));
  EXPECT_EQ(e.raw.size(), 3u);
}

TEST(Stats, NormalCdfAndWilson) {
  EXPECT_NEAR(normal_cdf(1.0), 0.8413447460685429, 1e-15);
  EXPECT_NEAR(normal_cdf(0.0), 0.5, 0);
  const Proportion z = proportion(0, 10);
  EXPECT_DOUBLE_EQ(z.lo, 0);
  EXPECT_NEAR(z.hi, 0.2775328, 1e-6);
  const Proportion h = proportion(50, 100);
  EXPECT_NEAR(h.lo, 0.4038315, 1e-6);
  EXPECT_NEAR(h.hi, 0.5961685, 1e-6);
  EXPECT_TRUE(std::isnan(proportion(0, 0).value));
}

TEST(Experiments, ScheduleRules) {
  const auto c = parse(R"(
kind = "spectral"
seed = 1
n_samples = 1
[schedule]
d = [10, 200]
c = [1.1, 4.0, 9.0]
)");
  ASSERT_EQ(c.grid.size(), 6u);
  EXPECT_EQ(c.grid[0].s, 11);
  EXPECT_EQ(c.grid[1].s, 40);
  EXPECT_EQ(c.grid[3].s, 220);
  EXPECT_EQ(c.grid[4].s, 800);
  EXPECT_EQ(c.grid[5].s, 1800);
  const auto t = parse(R"(
kind = "ppt2"
seed = 1
n_samples = 1
[schedule]
d = [100, 30, 20]
t = [0.5]
[ppt2]
mode = "independent"
t2 = 2.0
)");
  EXPECT_EQ(t.grid[0].s, 10);
  EXPECT_EQ(t.grid[1].s, 6);
  EXPECT_EQ(t.grid[2].s, 5);
  EXPECT_EQ(t.grid[1].s2, 900);
  const auto p = parse(R"(
kind = "ppt-scan"
seed = 1
n_samples = 1
[schedule]
points = [[100, 1], [100, 10]]
[ppt_scan]
families = "DUC"
)");
  ASSERT_EQ(p.grid.size(), 2u);
  EXPECT_EQ(p.grid[1].s, 10);
  EXPECT_EQ(p.ppt_scan.families, std::vector<Family>{Family::duc});
}

TEST(Experiments, SeedAcceptsFull64Bits) {
  const auto c = parse(R"(
kind = "histogram"
seed = "18446744073709551615"
n_samples = 1
[schedule]
d = [2]
s = [1]
)");
  EXPECT_EQ(c.seed, 18446744073709551615ULL);
}

TEST(Experiments, ConfigErrorsAreReportedBeforeSampling) {
  const std::vector<std::string> bad = {
      "kind = ",                                                      // TOML syntax
      "kind = \"histogram\"\nn_samples = 1\n[schedule]\nd=[2]\ns=[1]",  // no seed
      "kind = \"histogram\"\nseed = 1\nn_samples = 0\n[schedule]\nd=[2]\ns=[1]",
      "kind = \"histogram\"\nseed = 1\nn_samples = 1\nbogus = 3\n[schedule]\nd=[2]\ns=[1]",
      "kind = \"histogram\"\nseed = 1\nn_samples = 1\n[schedule]\nd=[2]\ns=[1]\nc=[1.0]",
      "kind = \"histogram\"\nseed = 1\nn_samples = 1\n[schedule]\nd=[1]\ns=[1]",
      "kind = \"histogram\"\nseed = 1\nn_samples = 1\n[schedule]\nd=[2]\ns=[0]",
      "kind = \"histogram\"\nseed = -4\nn_samples = 1\n[schedule]\nd=[2]\ns=[1]",
      "kind = \"histogram\"\nseed = 1\nn_samples = 1\n[schedule]\nd=[2]\ns=[1]\n"
      "[histogram]\nwhich = [\"lambda4\"]",
      "kind = \"histogram\"\nseed = 1\nn_samples = 1\n[schedule]\nd=[2]\ns=[1]\n"
      "[spectral]\nscale = \"s\"",
      "kind = \"spectral\"\nseed = 1\nn_samples = 1\n[schedule]\nd=[2]\ns=[1]\n"
      "[spectral]\nscale = \"log\"",
      "kind = \"ppt-scan\"\nseed = 1\nn_samples = 1\n[schedule]\nd=[50]\ns=[1]\n"
      "[ppt_scan]\nfamilies = [\"unstructured\"]",
      "kind = \"ppt-scan\"\nseed = 1\nn_samples = 1\n[schedule]\nd=[5]\ns=[1]\n"
      "[ppt_scan]\nfamilies = [\"XYZ\"]",
      "kind = \"ppt2\"\nseed = 1\nn_samples = 1\n[schedule]\nd=[5]\ns=[1]\n"
      "[ppt2]\nmode = \"equal\"\nclass2 = \"CDUC\"",
      "kind = \"oracle-check\"\nseed = 1\nn_samples = 1\n[schedule]\nd=[2]\ns=[1]\n"
      "[oracle_check.targets]\nlambda9 = [1]",
      "kind = \"oracle\"\n[[query]]\ntarget = \"lambda1\"\nd = 2\ns = 1",
      "kind = \"nonsense\"",
  };
  for (const auto& text : bad) EXPECT_EQ(config_error_code(text), ErrorCode::config) << text;
  EXPECT_EQ(config_error_code(kHistogram, ExperimentKind::spectral), ErrorCode::config);
  EXPECT_THROW(load_config("/nonexistent/chanlab.toml"), Error);
}

TEST(Experiments, SubcommandSuppliesMissingKind) {
  const auto c = parse("seed = 1\nn_samples = 2\n[schedule]\nd=[2]\ns=[1]\n",
                       ExperimentKind::histogram);
  EXPECT_EQ(c.kind, ExperimentKind::histogram);
}

TEST(Experiments, ParallelMapKeepsOrderAndPropagatesErrors) {
  const auto v = parallel_map(100, 4, [](std::size_t i) { return static_cast<int>(i * i); });
  for (std::size_t i = 0; i < v.size(); ++i) EXPECT_EQ(v[i], static_cast<int>(i * i));
  EXPECT_THROW(parallel_map(50, 3,
                            [](std::size_t i) -> int {
                              if (i == 17) throw std::runtime_error("boom");
                              return 0;
                            }),
               std::runtime_error);
}

TEST(Experiments, DeterministicAcrossRunsAndThreads) {
  const auto cfg = parse(kHistogram);
  const std::string a = to_csv(run_experiment(cfg).samples);
  RunOptions four;
  four.threads = 4;
  const ExperimentResult b = run_experiment(cfg, four);
  EXPECT_EQ(a, to_csv(b.samples));
  EXPECT_EQ(run_experiment(cfg).summary.dump(), b.summary.dump());
  auto other = cfg;
  other.seed = 12;
  EXPECT_NE(a, to_csv(run_experiment(other).samples));
}

TEST(Experiments, EmitWritesHeaderOnlyCsvForEmptyRecords) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "chanlab_emit_empty";
  fs::remove_all(dir);
  auto cfg = parse(kHistogram);
  RunOptions opt;
  opt.keep_rows = false;
  const ExperimentResult res = run_experiment(cfg, opt);
  emit(res, dir.string());
  EXPECT_EQ(read_file(dir / "samples.csv"), "d,s,sample,s_lambda1,s_lambda2,lambda3\n");
  const auto summary = nlohmann::json::parse(read_file(dir / "summary.json"));
  EXPECT_EQ(summary.at("n"), 0);
  EXPECT_EQ(summary.at("schema"), 1);
  EXPECT_EQ(summary.at("seed"), 11);
  EXPECT_EQ(summary.at("config").at("n_samples"), 50);
  fs::remove_all(dir);
}

TEST(Experiments, EmitRoundTripsAndReportsIoErrors) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "chanlab_emit_full";
  fs::remove_all(dir);
  const ExperimentResult res = run_experiment(parse(kHistogram));
  emit(res, dir.string());
  const std::string csv = read_file(dir / "samples.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 4 * 50);
  emit(res, dir.string());
  EXPECT_EQ(read_file(dir / "samples.csv"), csv);
  std::ofstream(dir / "blocker") << "x";
  try {
    emit(res, (dir / "blocker" / "sub").string());
    ADD_FAILURE() << "expected an io error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::io);
    EXPECT_NE(std::string(e.what()).find("blocker"), std::string::npos);
  }
  fs::remove_all(dir);
}

TEST(Experiments, HistogramCarriesReferencesAndExactMoments) {
  const ExperimentResult res = run_experiment(parse(kHistogram));
  const auto& pt = res.summary.at("points").at(1);  // d = 3, s = 2
  EXPECT_EQ(pt.at("d"), 3);
  EXPECT_EQ(pt.at("s"), 2);
  const auto& l1 = pt.at("stats").at(0);
  EXPECT_EQ(l1.at("which"), "lambda1");
  // s^2 E[lambda1^2] = 4 * 51/35 and Gamma(2,1) second moment 6.
  EXPECT_NEAR(l1.at("moments").at(1).at("exact").get<double>(), 4 * 51.0 / 35, 1e-12);
  EXPECT_NEAR(l1.at("moments").at(1).at("reference").get<double>(), 6, 0);
  EXPECT_NEAR(l1.at("variance_exact").get<double>(), 4 * 16.0 / 35, 1e-12);
  const auto& l3 = pt.at("stats").at(2);
  EXPECT_FALSE(l3.at("moments").at(0).contains("reference"));
  EXPECT_NEAR(l3.at("moments").at(0).at("exact").get<double>(), 1, 1e-15);
}

TEST(Experiments, OracleCheckGateAndPerRowErrors) {
  const std::string base = R"(
kind = "oracle-check"
seed = 5
n_samples = 4000
[schedule]
points = [[2, 1], [3, 2]]
[oracle_check.targets]
lambda1 = [1, 2]
entryA = [1, 2]
entryB2 = [1, 2]
)";
  const ExperimentResult ok = run_experiment(parse(base));
  EXPECT_FALSE(ok.gate_failed);
  std::size_t errors = 0;
  for (const auto& row : ok.summary.at("rows")) {
    if (row.contains("error")) {
      ++errors;
      EXPECT_EQ(row.at("target"), "entryB2");
      EXPECT_EQ(row.at("p"), 2);
      EXPECT_EQ(row.at("d"), 2);
    } else {
      EXPECT_LE(std::abs(row.at("z").get<double>()), 4.0);
    }
  }
  EXPECT_EQ(errors, 1u);
  auto strict = parse(base + "[tolerance]\nz_gate = 1e-6\n");
  EXPECT_TRUE(run_experiment(strict).gate_failed);
}

TEST(Experiments, OracleQueries) {
  const auto cfg = parse(R"(
kind = "oracle"
[[query]]
target = "lambda1"
d = 3
s = 2
p = 2
[[query]]
target = "entryB2"
d = 2
s = 1
p = 2
)");
  const ExperimentResult res = run_experiment(cfg);
  const auto& r = res.summary.at("results");
  EXPECT_EQ(r.at(0).at("exact"), "51/35");
  EXPECT_NEAR(r.at(0).at("approx").get<double>(), 51.0 / 35, 1e-15);
  EXPECT_TRUE(r.at(1).contains("error"));
  EXPECT_EQ(res.samples.rows.size(), 2u);
}

TEST(Experiments, PptScanFractionsAndReferences) {
  const auto cfg = parse(R"(
kind = "ppt-scan"
seed = 8
n_samples = 40
[schedule]
d = [6]
s = [1, 4, 64]
[ppt_scan]
families = ["UU", "UUbar", "OO", "HH", "DUC", "CDUC", "DOC", "unstructured"]
)");
  const ExperimentResult res = run_experiment(cfg);
  EXPECT_EQ(res.samples.columns.size(), 3u + 2 * 8);
  for (const auto& pt : res.summary.at("points")) {
    for (const auto& f : pt.at("families")) {
      const double v = f.at("ppt_fraction").at("value");
      EXPECT_GE(v, 0);
      EXPECT_LE(v, 1);
      const std::string fam = f.at("family");
      EXPECT_EQ(f.contains("reference_fixed_s"), fam == "UUbar" || fam == "OO" || fam == "HH");
    }
  }
  const auto& last = res.summary.at("points").at(2).at("families");
  EXPECT_EQ(last.at(0).at("ppt_fraction").at("value"), 1.0);  // UU at s = 64
  EXPECT_NEAR(res.summary.at("points").at(0).at("families").at(1).at("reference_fixed_s").get<double>(),
              normal_cdf(1.0), 1e-15);
  EXPECT_EQ(res.summary.at("monotonicity").size(), 8u);
}

TEST(Experiments, PptScanTwirlFamiliesMatchDirectTests) {
  const auto cfg = parse(R"(
kind = "ppt-scan"
seed = 21
n_samples = 10
[schedule]
d = [4]
s = [2]
[ppt_scan]
families = ["UUbar", "DOC"]
)");
  const ExperimentResult res = run_experiment(cfg);
  for (std::size_t i = 0; i < 10; ++i) {
    RngStream rng(21, detail::stream_index(0, i));
    const HaarIsometry v = sample_haar_isometry(4, 2, rng);
    const DOCTriple t = abc_of_isometry(v);
    const auto& row = res.samples.rows[i];
    EXPECT_EQ(std::get<std::int64_t>(row[3]), ppt_eb_test_uubar(covariant_params(t)).pass);
    EXPECT_EQ(std::get<std::int64_t>(row[5]), ppt_test({t, DiagonalClass::doc}).ppt);
  }
}

TEST(Experiments, SpectralMomentsAndSpectra) {
  const auto cfg = parse(R"(
kind = "spectral"
seed = 4
n_samples = 5
[schedule]
d = [20]
c = [1.0]
[spectral]
scale = "s"
max_moment = 2
)");
  const ExperimentResult res = run_experiment(cfg);
  ASSERT_EQ(res.extra.size(), 1u);
  EXPECT_EQ(res.extra[0].rows.size(), 5u * 20);
  const auto& m = res.summary.at("points").at(0).at("moments");
  EXPECT_EQ(m.at(0).at("reference"), 1.0);
  EXPECT_EQ(m.at(1).at("reference"), 2.0);
  // Tr(sC)/d = s lambda3/d, and lambda3 has mean 1.
  EXPECT_NEAR(m.at(0).at("empirical").get<double>(), 1.0, 0.1);
  for (std::size_t i = 1; i < 20; ++i)
    EXPECT_LE(std::get<double>(res.extra[0].rows[i - 1][4]), std::get<double>(res.extra[0].rows[i][4]));
}

TEST(Experiments, Ppt2ModesAndConsistency) {
  for (const std::string mode : {"independent", "equal", "conjugate"}) {
    const auto cfg = parse(R"(
kind = "ppt2"
seed = 3
n_samples = 20
[schedule]
d = [6]
t = [2.0]
[ppt2]
mode = ")" + mode + "\"\n");
    const ExperimentResult res = run_experiment(cfg);
    const auto& pt = res.summary.at("points").at(0);
    EXPECT_EQ(pt.at("conditions_certificate_mismatch"), 0) << mode;
    EXPECT_EQ(pt.at("mode"), mode);
    if (mode != "independent") {
      EXPECT_EQ(pt.at("ppt_fraction_1").at("hits"), pt.at("ppt_fraction_2").at("hits"));
    }
  }
}
