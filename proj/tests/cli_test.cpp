#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include <qdiag/cli.hpp>

namespace qdiag {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> args;
  std::istringstream in(line);
  for (std::string a; in >> a;) args.push_back(a);
  return args;
}

Result run(const std::string& line, const cli::Hooks& hooks = {}) {
  std::ostringstream out, err;
  const int code = cli::run(split(line), out, err, hooks);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(QDIAG_TEST_DATA_DIR) + "/" + name; }

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

class TempFile {
 public:
  explicit TempFile(const std::string& body) {
    path_ = std::filesystem::temp_directory_path() /
            ("qdiag_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             std::to_string(counter_++) + ".json");
    std::ofstream(path_) << body;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  std::string path() const { return path_.string(); }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

TEST(CliAnalyze, WPairText) {
  const Result r = run("analyze --state w --n 3");
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(contains(r.out, "w4 = -0.012345679")) << r.out;
  EXPECT_TRUE(contains(r.out, "M = 0.888889"));
  EXPECT_TRUE(contains(r.out, "F_max = 0.777778"));
  EXPECT_TRUE(contains(r.out, "note: F_max = 0.777778"));
}

TEST(CliAnalyze, WPairFourQubitsHasNoNote) {
  const Result r = run("analyze --state w --n 4");
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_TRUE(contains(r.out, "F_max = 0.666667"));
  EXPECT_FALSE(contains(r.out, "note:"));
}

TEST(CliAnalyze, MixtureJson) {
  const Result r = run("analyze --state mixture --n 3 --p 0.9 --format json");
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const OutputRecord rec = record_from_json(ordered_json::parse(r.out));
  EXPECT_EQ(rec.state_kind, "mixture");
  EXPECT_EQ(rec.n, 3);
  EXPECT_EQ(rec.p, 0.9);
  const DiagnosticsReport direct = full_report(mixture_ghz_w({3, 0.9}));
  EXPECT_EQ(rec.report.w4, direct.w4);
  EXPECT_EQ(rec.report.m_value, direct.m_value);
  EXPECT_EQ(rec.report.f_max, direct.f_max);
  EXPECT_TRUE(rec.report.teleport_useful);
  EXPECT_FALSE(rec.report.bell_violating);
}

TEST(CliAnalyze, SingletFile) {
  const Result r = run("analyze --input " + data("singlet.json"));
  EXPECT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(contains(r.out, "state: file"));
  EXPECT_TRUE(contains(r.out, "M = 2.000000"));
  EXPECT_TRUE(contains(r.out, "bell_violating = yes"));
}

TEST(CliAnalyze, InvalidDensityExitsThree) {
  TempFile f(R"({"dim": 4, "re": [[0.3,0,0,0],[0,0.2,0,0],[0,0,0.2,0],[0,0,0,0.2]],
                 "im": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]})");
  const Result r = run("analyze --input " + f.path());
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_TRUE(contains(r.err, "trace")) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(CliAnalyze, NonHermitianExitsThree) {
  TempFile f(R"({"dim": 4, "re": [[0.5,0.1,0,0],[0,0.5,0,0],[0,0,0,0],[0,0,0,0]],
                 "im": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]})");
  EXPECT_EQ(run("analyze --input " + f.path()).code, cli::kExitData);
}

TEST(CliAnalyze, MissingFileExitsThree) {
  EXPECT_EQ(run("analyze --input /nonexistent/qdiag_missing.json").code, cli::kExitData);
}

TEST(CliAnalyze, UsageErrors) {
  EXPECT_EQ(run("analyze").code, cli::kExitUsage);
  EXPECT_EQ(run("analyze --state w").code, cli::kExitUsage);
  EXPECT_EQ(run("analyze --state w --n 2").code, cli::kExitUsage);
  EXPECT_EQ(run("analyze --state mixture --n 3").code, cli::kExitUsage);
  EXPECT_EQ(run("analyze --state mixture --n 3 --p 1.5").code, cli::kExitUsage);
  EXPECT_EQ(run("analyze --state w --n 3 --p 0.5").code, cli::kExitUsage);
  EXPECT_EQ(run("analyze --state bogus --n 3").code, cli::kExitUsage);
  EXPECT_EQ(run("analyze --state w --n 3 --format xml").code, cli::kExitUsage);
  EXPECT_EQ(run("analyze --state w --n 3 --input " + data("singlet.json")).code, cli::kExitUsage);
  EXPECT_EQ(run("analyze --input " + data("singlet.json") + " --n 3").code, cli::kExitUsage);
}

TEST(CliAnalyze, EmitDensityRoundTrips) {
  const Result emitted = run("analyze --state mixture --n 4 --p 0.37 --emit-density");
  ASSERT_EQ(emitted.code, cli::kExitOk);
  EXPECT_EQ(load_density(emitted.out).matrix(), mixture_ghz_w({4, 0.37}).matrix());

  TempFile f(emitted.out);
  const Result from_file = run("analyze --input " + f.path() + " --format json");
  const Result from_state = run("analyze --state mixture --n 4 --p 0.37 --format json");
  ASSERT_EQ(from_file.code, cli::kExitOk);
  const auto a = record_from_json(ordered_json::parse(from_file.out)).report;
  const auto b = record_from_json(ordered_json::parse(from_state.out)).report;
  EXPECT_EQ(a.w4, b.w4);
  EXPECT_EQ(a.ppt_spectrum, b.ppt_spectrum);
  EXPECT_EQ(a.m_value, b.m_value);
  EXPECT_EQ(a.f_max, b.f_max);
}

TEST(CliSweep, CsvHasOneEntanglementTransition) {
  const Result r = run("sweep --n 3 --p-start 0 --p-end 1 --steps 101");
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kCsvHeader);
  std::vector<std::pair<double, bool>> rows;
  while (std::getline(in, line)) {
    const double p = parse_full(line.substr(0, line.find(',')));
    std::vector<std::string> cells;
    std::istringstream cs(line);
    for (std::string c; std::getline(cs, c, ',');) cells.push_back(c);
    ASSERT_EQ(cells.size(), 12u);
    rows.emplace_back(p, cells[9] == "true");
  }
  ASSERT_EQ(rows.size(), 101u);
  int flips = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].second != rows[i - 1].second) {
      ++flips;
      EXPECT_NEAR(rows[i - 1].first, 0.70, 1e-12);
      EXPECT_NEAR(rows[i].first, 0.71, 1e-12);
    }
  }
  EXPECT_EQ(flips, 1);
}

TEST(CliSweep, FiveQubitsNeverTeleports) {
  const Result r = run("sweep --n 5 --p-start 0 --p-end 1 --steps 21 --format json");
  ASSERT_EQ(r.code, cli::kExitOk);
  std::istringstream in(r.out);
  int count = 0;
  for (std::string line; std::getline(in, line); ++count) {
    const OutputRecord rec = record_from_json(ordered_json::parse(line));
    EXPECT_FALSE(rec.report.teleport_useful);
    EXPECT_FALSE(rec.report.bell_violating);
    EXPECT_EQ(rec.n, 5);
  }
  EXPECT_EQ(count, 21);
}

TEST(CliSweep, UsageErrors) {
  EXPECT_EQ(run("sweep --n 3 --p-start 0.5 --p-end 0.5 --steps 3").code, cli::kExitUsage);
  EXPECT_EQ(run("sweep --n 3 --p-start 0 --p-end 1 --steps 1").code, cli::kExitUsage);
  EXPECT_EQ(run("sweep --n 2 --p-start 0 --p-end 1 --steps 3").code, cli::kExitUsage);
  EXPECT_EQ(run("sweep --n 3 --p-start 0 --p-end 1.2 --steps 3").code, cli::kExitUsage);
  EXPECT_EQ(run("sweep --n 3 --p-start 0 --p-end 1").code, cli::kExitUsage);
  EXPECT_EQ(run("sweep --n 3 --p-start 0 --p-end 1 --steps 3 --format text").code, cli::kExitUsage);
}

TEST(CliThresholds, Text) {
  const Result r3 = run("thresholds --n 3");
  EXPECT_EQ(r3.code, cli::kExitOk);
  EXPECT_TRUE(contains(r3.out, "p_entangled = 0.708204")) << r3.out;
  EXPECT_TRUE(contains(r3.out, "p_teleport = 0.750000"));
  EXPECT_TRUE(contains(r3.out, "p_bell = absent"));

  const Result r4 = run("thresholds --n 4");
  EXPECT_TRUE(contains(r4.out, "p_entangled = 0.828427"));
  EXPECT_TRUE(contains(r4.out, "p_teleport = 1.000000 (boundary"));

  const Result r5 = run("thresholds --n 5");
  EXPECT_TRUE(contains(r5.out, "p_teleport = absent"));
}

TEST(CliThresholds, Json) {
  const Result r = run("thresholds --n 3 --format json");
  ASSERT_EQ(r.code, cli::kExitOk);
  const auto j = ordered_json::parse(r.out);
  EXPECT_NEAR(j["p_entangled"].get<double>(), -6.0 + std::sqrt(45.0), 1e-12);
  EXPECT_TRUE(j["certified"].get<bool>());
  EXPECT_EQ(j["p_teleport"].get<double>(), 0.75);
  EXPECT_TRUE(j["p_bell"].is_null());
}

TEST(CliThresholds, SmallNIsUsageError) {
  const Result r = run("thresholds --n 2");
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_FALSE(r.err.empty());
}

TEST(CliTable1, VerifyPasses) {
  const Result r = run("table1 --verify");
  EXPECT_EQ(r.code, cli::kExitOk) << r.out;
  EXPECT_TRUE(contains(r.out, "all cells PASS"));
  EXPECT_FALSE(contains(r.out, "FAIL"));
  EXPECT_TRUE(contains(r.out, "3 | (0.708204, 1] | 8p^2/9 | Yes | Yes (0.750000, 1], No (0.708204, 0.750000]"))
      << r.out;
  EXPECT_TRUE(contains(r.out, "4 | (0.828427, 1] | p^2/2 | Yes | No"));
  EXPECT_TRUE(contains(r.out, "5 | (0.891973, 1] | 8p^2/25 | Yes | No"));
}

TEST(CliTable1, JsonRows) {
  const Result r = run("table1 --format json --verify");
  ASSERT_EQ(r.code, cli::kExitOk);
  const auto j = ordered_json::parse(r.out);
  ASSERT_EQ(j["rows"].size(), 3u);
  EXPECT_EQ(j["rows"][0]["m_formula"], "8p^2/9");
  EXPECT_EQ(j["rows"][1]["m_formula"], "p^2/2");
  EXPECT_EQ(j["rows"][2]["m_formula"], "8p^2/25");
  EXPECT_EQ(j["rows"][0]["p_teleport"].get<double>(), 0.75);
  EXPECT_TRUE(j["rows"][1]["p_teleport"].is_null());
  EXPECT_EQ(j["verify"].size(), 12u);
  for (const auto& c : j["verify"]) EXPECT_TRUE(c["pass"].get<bool>()) << c.dump();
}

TEST(CliTable1, InjectedFaultFailsVerification) {
  cli::Hooks hooks;
  hooks.evaluate = [](const TwoQubitDensity& rho) {
    DiagnosticsReport r = full_report(rho);
    r.w4 = -r.w4;
    r.entangled = !r.entangled;
    return r;
  };
  const Result r = run("table1 --verify", hooks);
  EXPECT_EQ(r.code, cli::kExitData);
  EXPECT_TRUE(contains(r.out, "FAIL"));
  EXPECT_TRUE(contains(r.out, "verification FAILED"));
}

TEST(CliTable1, WithoutVerifyPrintsNoChecks) {
  const Result r = run("table1");
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_FALSE(contains(r.out, "PASS"));
}

TEST(CliOracle, ChshMixture) {
  const Result r = run("oracle --kind chsh --state mixture --n 3 --p 0.9 --seed 7 --format json");
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto j = ordered_json::parse(r.out);
  EXPECT_LT(j["gap"].get<double>(), 1e-6);
  EXPECT_EQ(j["seed"].get<std::uint64_t>(), 7u);
  EXPECT_NEAR(j["target"].get<double>(), 2.0 * std::sqrt(8 * 0.81 / 9), 1e-12);
}

TEST(CliOracle, FefWPair) {
  const Result r = run("oracle --kind fef --state w --n 3");
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(contains(r.out, "f = 0.666667")) << r.out;
  EXPECT_TRUE(contains(r.out, "implied fidelity (2f+1)/3 = 0.777778"));
  EXPECT_TRUE(contains(r.out, "F_max = 0.777778"));
  EXPECT_TRUE(contains(r.out, "note: (2f+1)/3 and F_max"));
}

TEST(CliOracle, ChshSingletFile) {
  const Result r = run("oracle --kind chsh --input " + data("singlet.json"));
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  EXPECT_TRUE(contains(r.out, "chsh_max = 2.828427")) << r.out;
}

TEST(CliOracle, UsageErrors) {
  EXPECT_EQ(run("oracle --state w --n 3").code, cli::kExitUsage);
  EXPECT_EQ(run("oracle --kind bell --state w --n 3").code, cli::kExitUsage);
  EXPECT_EQ(run("oracle --kind chsh --state w --n 3 --restarts 0").code, cli::kExitUsage);
  EXPECT_EQ(run("oracle --kind chsh --state w --n 3 --iters 0").code, cli::kExitUsage);
}

TEST(Cli, DeterministicOutput) {
  for (const char* line : {"analyze --state mixture --n 7 --p 0.42 --format json",
                           "oracle --kind chsh --state mixture --n 4 --p 0.6 --seed 3 --restarts 4",
                           "oracle --kind fef --state ghz --n 5 --seed 11 --restarts 4 --format json",
                           "sweep --n 4 --p-start 0.1 --p-end 0.9 --steps 9", "table1 --verify --format json"}) {
    EXPECT_EQ(run(line).out, run(line).out) << line;
  }
}

TEST(Cli, HelpAndUnknownCommands) {
  const Result help = run("--help");
  EXPECT_EQ(help.code, cli::kExitOk);
  EXPECT_TRUE(contains(help.out, "analyze"));
  EXPECT_EQ(run("--version").code, cli::kExitOk);
  EXPECT_EQ(run("frobnicate").code, cli::kExitUsage);
  EXPECT_EQ(run("").code, cli::kExitUsage);
  EXPECT_EQ(run("analyze --bogus").code, cli::kExitUsage);
}

}  // namespace
}  // namespace qdiag
