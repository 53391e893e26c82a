#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "swhomog/harness.hpp"

using namespace swhomog;

namespace {

ScenarioConfig small_scenario() {
  ScenarioConfig sc;
  sc.name = "tiny";
  sc.bathymetry = PiecewiseConstant{{0.5, 1.0}, {1.0, 0.3}};
  sc.half_length = 50.0;
  sc.modes = 512;
  sc.reference_length = 50.0;
  sc.cells_per_period = 64;
  sc.output_times = {2.0, 4.0};
  sc.initial = GaussianPulse{1e-3, 3.0, 0.0};
  return sc;
}

std::string run_cli(const std::string& args, int& exit_code, const std::string& env = "") {
  const std::string cmd =
      (env.empty() ? "" : env + " ") + std::string(SWHOMOG_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  EXPECT_NE(p, nullptr);
  std::string out;
  char buf[512];
  while (p && fgets(buf, sizeof buf, p)) out += buf;
  const int status = p ? pclose(p) : -1;
  exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

double summary_value(const std::string& out, const std::string& key) {
  std::istringstream in(out);
  std::string line;
  while (std::getline(in, line)) {
    const std::string pre = key + " = ";
    if (line.rfind(pre, 0) == 0) return std::strtod(line.c_str() + pre.size(), nullptr);
  }
  ADD_FAILURE() << "missing key " << key << " in:\n" << out;
  return 0.0;
}

}  // namespace

TEST(Format, ShortestRoundTripIsExact) {
  for (double v : {1.0 / 3.0, 1e-300, -0.0, 0.1, 12345.6789, 2.1278374721045563, -1e22}) {
    const std::string s = format_double(v);
    char* end = nullptr;
    const double back = std::strtod(s.c_str(), &end);
    EXPECT_EQ(*end, '\0');
    EXPECT_EQ(std::memcmp(&back, &v, sizeof v), 0) << s;
  }
}

TEST(Format, CsvWriterShapesRows) {
  std::ostringstream out;
  CsvWriter csv(out, {"a", "b"});
  csv.row({1.0, 2.5});
  EXPECT_EQ(out.str(), "a,b\n1,2.5\n");
  EXPECT_THROW(csv.row({1.0}), InvalidInput);
}

TEST(Format, SnapshotWriterChecksColumns) {
  std::ostringstream out;
  SnapshotWriter snap(out, false, true);
  const std::vector<double> x{0.0, 1.0}, eta{0.1, 0.2}, q{0.0, 0.0}, ref{0.1, 0.3};
  snap.add(2.0, x, eta, q, nullptr, &ref);
  EXPECT_EQ(out.str(),
            "t,x,eta_bar,q_bar,eta_reference\n"
            "2,0,0.1,0,0.1\n"
            "2,1,0.2,0,0.3\n");
  EXPECT_THROW(snap.add(3.0, x, eta, q), InvalidInput);
  const std::vector<double> shorter{0.1};
  EXPECT_THROW(snap.add(3.0, x, eta, q, nullptr, &shorter), InvalidInput);
}

TEST(Config, RoundTripsEveryVariant) {
  std::vector<ScenarioConfig> cases;
  cases.push_back(small_scenario());

  ScenarioConfig sine = small_scenario();
  sine.bathymetry = Sinusoidal{0.6, -0.4, 0.25};
  sine.initial = SolitaryStart{5, 2.1787, -10.0};
  sine.order = 5;
  cases.push_back(sine);

  ScenarioConfig sampled = small_scenario();
  sampled.bathymetry = Sampled{std::vector<double>(32, 1.0)};
  sampled.initial = SampledStart{std::vector<double>(512, 1e-4), std::vector<double>(512, 0.0)};
  sampled.dt_control.adaptive = false;
  sampled.dt_control.dt = 1.0 / 3.0;
  cases.push_back(sampled);

  for (const ScenarioConfig& sc : cases) {
    const std::string text = serialize(sc);
    const ScenarioConfig back = parse_scenario(text);
    EXPECT_EQ(serialize(back), text);
  }
}

TEST(Config, ParsesHandwrittenText) {
  const ScenarioConfig sc = parse_scenario(
      "# comment\n"
      "[scenario]\n"
      "name = demo\n"
      "gravity = 9.8\n"
      "[bathymetry]\n"
      "kind = sinusoidal\n"
      "mean = 0.7\n"
      "amplitude = 0.2\n"
      "[domain]\n"
      "half_length = 100\n"
      "modes = 256\n"
      "reference_length = 60\n"
      "[time]\n"
      "output = 1 2.5 10\n"
      "[solver]\n"
      "order = 4\n"
      "dealias = half\n");
  EXPECT_EQ(sc.name, "demo");
  EXPECT_DOUBLE_EQ(sc.g, 9.8);
  const auto& s = std::get<Sinusoidal>(sc.bathymetry);
  EXPECT_DOUBLE_EQ(s.mean, 0.7);
  EXPECT_DOUBLE_EQ(s.amplitude, 0.2);
  EXPECT_EQ(sc.modes, 256u);
  EXPECT_DOUBLE_EQ(sc.reference_length, 60.0);
  ASSERT_EQ(sc.output_times.size(), 3u);
  EXPECT_DOUBLE_EQ(sc.output_times[1], 2.5);
  EXPECT_EQ(sc.order, 4);
  EXPECT_EQ(sc.dealias, Dealias::half);
  EXPECT_TRUE(std::holds_alternative<GaussianPulse>(sc.initial));
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_scenario("[nope]\n"), InvalidInput);
  EXPECT_THROW(parse_scenario("[scenario]\nwhat = 1\n"), InvalidInput);
  EXPECT_THROW(parse_scenario("key = 1\n"), InvalidInput);
  EXPECT_THROW(parse_scenario("[scenario]\nbroken line\n"), InvalidInput);
  EXPECT_THROW(parse_scenario("[scenario]\ngravity = fast\n"), InvalidInput);
  EXPECT_THROW(parse_scenario("[bathymetry]\nkind = flat\n"), InvalidInput);
  EXPECT_THROW(parse_scenario("[initial]\nkind = step\n"), InvalidInput);
  EXPECT_THROW(parse_scenario("[solver]\nadaptive = maybe\n"), InvalidInput);
  EXPECT_THROW(parse_scenario("[domain]\nmodes = 100\n"), InvalidInput);
  EXPECT_THROW(parse_scenario("[time]\noutput = 2 1\n"), InvalidInput);

  ScenarioConfig sc = small_scenario();
  sc.order = 6;
  EXPECT_THROW(validate(sc), InvalidInput);
  sc = small_scenario();
  sc.initial = SolitaryStart{4, 2.0, 0.0};
  EXPECT_THROW(validate(sc), InvalidInput);
  sc = small_scenario();
  sc.initial = SampledStart{std::vector<double>(100, 0.0), {}};
  EXPECT_THROW(validate(sc), InvalidInput);
  sc = small_scenario();
  sc.name = "two\nlines";
  EXPECT_THROW(validate(sc), InvalidInput);
}

TEST(Config, FileRoundTripAndMissingFile) {
  const std::string path = testing::TempDir() + "roundtrip.ini";
  const ScenarioConfig sc = small_scenario();
  save_scenario(path, sc);
  const ScenarioConfig back = load_scenario(path);
  EXPECT_EQ(serialize(back), serialize(sc));
  EXPECT_THROW(load_scenario(testing::TempDir() + "missing.ini"), InvalidInput);
}

TEST(Config, ShippedScenariosLoad) {
  const std::string dir = SWHOMOG_CONFIG_DIR;
  const ScenarioConfig a = load_scenario(dir + "/scenario_a.ini");
  EXPECT_EQ(a.name, "scenario_a");
  const auto& pwc = std::get<PiecewiseConstant>(a.bathymetry);
  EXPECT_DOUBLE_EQ(pwc.values[0], 1.0);
  EXPECT_DOUBLE_EQ(pwc.values[1], 0.3);
  EXPECT_EQ(a.modes, 8192u);
  EXPECT_EQ(a.order, 3);
  ASSERT_EQ(a.output_times.size(), 4u);
  EXPECT_DOUBLE_EQ(a.output_times.front(), 25.2);
  EXPECT_DOUBLE_EQ(a.output_times.back(), 150.0);

  const ScenarioConfig b = load_scenario(dir + "/scenario_b.ini");
  EXPECT_EQ(b.name, "scenario_b");
  const auto& sine = std::get<Sinusoidal>(b.bathymetry);
  EXPECT_DOUBLE_EQ(sine.mean, 0.6);
  EXPECT_DOUBLE_EQ(sine.amplitude, -0.4);
  EXPECT_EQ(b.order, 5);
  EXPECT_TRUE(translation_even(b.bathymetry));
}

TEST(Harness, OutputPathHonorsEnvironment) {
  unsetenv("SWHOMOG_OUTPUT_DIR");
  EXPECT_EQ(output_path("a.csv"), "a.csv");
  EXPECT_EQ(output_path("/abs/a.csv"), "/abs/a.csv");
  setenv("SWHOMOG_OUTPUT_DIR", "/tmp/out", 1);
  EXPECT_EQ(output_path("a.csv"), "/tmp/out/a.csv");
  EXPECT_EQ(output_path("/abs/a.csv"), "/abs/a.csv");
  setenv("SWHOMOG_OUTPUT_DIR", "/tmp/out/", 1);
  EXPECT_EQ(output_path("a.csv"), "/tmp/out/a.csv");
  unsetenv("SWHOMOG_OUTPUT_DIR");
}

TEST(Harness, ProfileIdentitiesHoldPerFamily) {
  const std::vector<PeriodicProfile> profiles = {
      PiecewiseConstant{{0.5, 1.0}, {1.0, 0.3}},
      Sinusoidal{0.6, -0.4, 0.3},
      PiecewiseConstant{{0.3, 0.55, 1.0}, {1.0, 0.4, 0.8}},  // skewed, not even
  };
  for (const PeriodicProfile& p : profiles) {
    const auto checks = verify_profile_identities(p);
    EXPECT_GE(checks.size(), 6u);
    for (const auto& c : checks) EXPECT_TRUE(c.ok) << c.name << " diff " << c.diff;
  }
  EXPECT_EQ(verify_profile_identities(profiles[2]).size(), 6u);
  EXPECT_EQ(verify_profile_identities(profiles[0]).size(), 8u);
}

TEST(Harness, SolverFactoriesRealizeInitialData) {
  const ScenarioConfig sc = small_scenario();
  HomogenizedSolver avg = make_averaged_solver(sc);
  const auto& st = avg.state();
  // peak near x = 0 with the configured height, discharge zero
  const std::size_t mid = st.size() / 2;
  EXPECT_NEAR(st.eta[mid], 1e-3, 1e-5);
  EXPECT_DOUBLE_EQ(st.q[mid], 0.0);

  FvReference ref = make_reference_solver(sc);
  const std::vector<double> surf = ref.surface();
  double peak = 0.0;
  for (double v : surf) peak = std::max(peak, v);
  EXPECT_NEAR(peak, 1e-3, 1e-5);
}

TEST(Harness, ComparisonReportIsDeterministic) {
  const ScenarioConfig sc = small_scenario();
  std::ostringstream csv1, csv2, aligned;
  const ComparisonReport r1 = run_comparison(sc, 0, &aligned);
  write_report_csv(csv1, r1);
  const ComparisonReport r2 = run_comparison(sc);
  write_report_csv(csv2, r2);
  EXPECT_EQ(csv1.str(), csv2.str());

  ASSERT_EQ(r1.snapshots.size(), 2u);
  for (const SnapshotMetrics& m : r1.snapshots) {
    EXPECT_GT(m.linf, 0.0);
    EXPECT_LT(m.linf, 1e-3);
    EXPECT_NEAR(m.crest_x_averaged, m.crest_x_reference, 0.5);
    EXPECT_NEAR(m.crest_amplitude_averaged, m.crest_amplitude_reference,
                0.1 * m.crest_amplitude_reference);
  }
  EXPECT_GT(r1.steps_averaged, 0u);
  EXPECT_GT(r1.steps_reference, 0u);

  // aligned output carries the header plus one row per grid point and time
  std::istringstream in(aligned.str());
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_EQ(line, "t,x,eta_bar,q_bar,eta_reference");
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 2u * 50u * 64u);
}

TEST(Harness, ComparisonNeedsOutputTimes) {
  ScenarioConfig sc = small_scenario();
  sc.output_times.clear();
  EXPECT_THROW(run_comparison(sc), InvalidInput);
}

TEST(Cli, DispersionTableIsMonotone) {
  int code = 0;
  const std::string out = run_cli("dispersion --form xxt --kmin 0.1 --kmax 5 --points 25", code);
  EXPECT_EQ(code, 0);
  std::istringstream in(out);
  std::string line;
  ASSERT_TRUE(std::getline(in, line));
  EXPECT_EQ(line, "K,branch,omega_re,omega_im,unstable");
  double prev = 2.0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    double K, branch, re, im, unstable;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &K, &branch, &re, &im, &unstable),
              5);
    EXPECT_DOUBLE_EQ(im, 0.0);
    EXPECT_DOUBLE_EQ(unstable, 0.0);
    if (branch == 0.0) {  // positive branch decreases with K
      EXPECT_LT(re, prev);
      prev = re;
      ++rows;
    }
  }
  EXPECT_EQ(rows, 25u);
}

TEST(Cli, FlatBottomCoefficientsDegenerate) {
  const std::string cfg = testing::TempDir() + "flat.ini";
  {
    ScenarioConfig sc = small_scenario();
    sc.name = "flat";
    sc.bathymetry = PiecewiseConstant{{1.0}, {1.0}};
    save_scenario(cfg, sc);
  }
  int code = 0;
  const std::string out = run_cli("dump-coefficients --config " + cfg, code);
  EXPECT_EQ(code, 0);
  for (const char* key : {"mu", "gamma", "nu1", "nu2", "alpha_8", "alpha_9", "zeta_13"})
    EXPECT_LT(std::abs(summary_value(out, key)), 1e-15) << key;
  EXPECT_NEAR(summary_value(out, "c"), std::sqrt(9.81), 1e-12);
  EXPECT_NE(out.find("translation_even = true"), std::string::npos);
}

TEST(Cli, UnknownVerbFails) {
  int code = 0;
  const std::string out = run_cli("frobnicate", code);
  EXPECT_NE(code, 0);
  EXPECT_NE(out.find("error:"), std::string::npos);
}

TEST(Cli, SimulateWritesSnapshotCsv) {
  const std::string dir = testing::TempDir();
  const std::string cfg = dir + "sim.ini";
  {
    ScenarioConfig sc = small_scenario();
    sc.modes = 64;
    sc.output_times = {0.5};
    save_scenario(cfg, sc);
  }
  int code = 0;
  const std::string out = run_cli("simulate --config " + cfg + " --output sim_out.csv", code,
                                  "SWHOMOG_OUTPUT_DIR=" + dir);
  EXPECT_EQ(code, 0);
  EXPECT_NE(out.find("steps = "), std::string::npos);
  std::ifstream f(dir + "sim_out.csv");
  ASSERT_TRUE(f.good());
  std::string line;
  ASSERT_TRUE(std::getline(f, line));
  EXPECT_EQ(line, "t,x,eta_bar,q_bar");
  std::size_t rows = 0;
  while (std::getline(f, line)) ++rows;
  EXPECT_EQ(rows, 64u);
}

TEST(Cli, VerifyIdentitiesPasses) {
  const std::string cfg = std::string(SWHOMOG_CONFIG_DIR) + "/scenario_a.ini";
  int code = 0;
  const std::string out = run_cli("verify-identities --config " + cfg + " --samples 1024", code);
  EXPECT_EQ(code, 0) << out;
  EXPECT_EQ(out.find("FAIL"), std::string::npos) << out;
  EXPECT_NE(out.find("all passed"), std::string::npos);
}
