#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "torus/cli.h"
#include "torus/errors.h"
#include "torus/io.h"

namespace torus {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("torus_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string str() const { return path_.string(); }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult RunTool(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

const EquilibriumSolution& SmallSolution() {
  static const EquilibriumSolution sol = [] {
    TorusConfig cfg;
    cfg.epsilon = 0.02;
    SolverConfig solver;
    solver.modes = 8;
    return FixedPointSolve(cfg, solver);
  }();
  return sol;
}

TEST(SeriesJson, RoundTrip) {
  PeriodicSeries s(3);
  s.set_half_a0(0.1);
  s.set_cos_coeff(2, -1.0 / 3.0);
  s.set_sin_coeff(3, 1e-300);
  const PeriodicSeries back = SeriesFromJson(SeriesToJson(s));
  EXPECT_EQ(back.half_a0(), s.half_a0());
  for (int n = 1; n <= 3; ++n) {
    EXPECT_EQ(back.cos_coeff(n), s.cos_coeff(n));
    EXPECT_EQ(back.sin_coeff(n), s.sin_coeff(n));
  }
  EXPECT_THROW(SeriesFromJson("{\"half_a0\": 1}"), TorusError);
}

TEST(SolutionJson, RoundTripIsLossless) {
  const EquilibriumSolution& sol = SmallSolution();
  const std::string text = SolutionToJson(sol);
  const EquilibriumSolution back = SolutionFromJson(text);
  EXPECT_EQ(SolutionToJson(back), text);
  EXPECT_EQ(back.c_eps, sol.c_eps);
  EXPECT_EQ(back.state.w.cos_coeff(1), sol.state.w.cos_coeff(1));
  EXPECT_EQ(back.diagnostics.iterations, sol.diagnostics.iterations);
  EXPECT_EQ(back.solver.modes, 8);
  const auto doc = nlohmann::json::parse(text);
  EXPECT_EQ(doc.at("schema_version").get<int>(), kSolutionSchemaVersion);
}

TEST(SolutionJson, RejectsMalformedOrForeignDocuments) {
  auto code_of = [](const std::string& text) {
    try {
      SolutionFromJson(text);
    } catch (const TorusError& e) {
      return e.code();
    }
    return ErrorCode::kPrecondition;
  };
  EXPECT_EQ(code_of("not json"), ErrorCode::kIo);
  EXPECT_EQ(code_of("{}"), ErrorCode::kIo);
  auto doc = nlohmann::json::parse(SolutionToJson(SmallSolution()));
  doc["schema_version"] = kSolutionSchemaVersion + 1;
  EXPECT_EQ(code_of(doc.dump()), ErrorCode::kIo);
}

TEST(ProfilesCsv, HeaderAndRows) {
  const std::string csv = ProfilesCsv(SmallSolution(), 16);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "# torus-profiles v1");
  std::getline(in, line);
  EXPECT_EQ(line, "theta,r,omega,s,Omega");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 16);
}

TEST(Files, AtomicWriteAndMissingRead) {
  TempDir dir;
  WriteFileAtomic(dir / "a.txt", "hello");
  EXPECT_EQ(ReadFile(dir / "a.txt"), "hello");
  EXPECT_FALSE(fs::exists(dir / "a.txt.tmp"));
  try {
    ReadFile(dir / "missing.json");
    FAIL();
  } catch (const TorusError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
  EXPECT_THROW(WriteFileAtomic(dir / "no/such/dir/x", "y"), TorusError);
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(ExitCodeFor(ErrorCode::kInvalidConfig), kExitUsage);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kUnderResolved), kExitUsage);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kIo), kExitIo);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kInvalidRegime), kExitInvalidRegime);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kNoConvergence), kExitFailure);
  EXPECT_EQ(ExitCodeFor(ErrorCode::kOutsideBall), kExitFailure);
}

TEST(Cli, SolveWritesDeterministicOutputs) {
  TempDir a, b;
  const CliResult r1 = RunTool({"solve", "--epsilon", "0.02", "--modes", "8", "--out", a.str()});
  const CliResult r2 = RunTool({"--modes", "8", "--out", b.str(), "solve", "--epsilon", "0.02"});
  ASSERT_EQ(r1.code, 0) << r1.err;
  ASSERT_EQ(r2.code, 0) << r2.err;
  EXPECT_EQ(ReadFile(a / "solution.json"), ReadFile(b / "solution.json"));
  EXPECT_EQ(ReadFile(a / "profiles.csv"), ReadFile(b / "profiles.csv"));
  EXPECT_NE(r1.out.find("converged"), std::string::npos);
  EXPECT_NE(r1.out.find("left the ball"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(RunTool({}).code, kExitUsage);
  EXPECT_EQ(RunTool({"solve", "--modes", "2"}).code, kExitUsage);
  EXPECT_EQ(RunTool({"solve", "--epsilon", "-1"}).code, kExitUsage);
  EXPECT_EQ(RunTool({"solve", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(RunTool({"validate", "--format", "xml"}).code, kExitUsage);
  EXPECT_EQ(RunTool({"sweep", "--eps-from", "0.01", "--eps-to", "0.04", "--eps-factor", "0.5"}).code,
            kExitUsage);
  EXPECT_EQ(RunTool({"sweep"}).code, kExitUsage);
  EXPECT_EQ(RunTool({"kernels", "--eps", "0.5"}).code, kExitUsage);
  EXPECT_EQ(RunTool({"--help"}).code, kExitOk);
}

TEST(Cli, LargeAspectRatioReportsContractionFailure) {
  TempDir dir;
  const CliResult r =
      RunTool({"solve", "--epsilon", "0.5", "--modes", "8", "--out", dir.str()});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find("contraction"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "solution.json"));
}

TEST(Cli, ValidateFromFile) {
  TempDir dir;
  WriteFileAtomic(dir / "solution.json", SolutionToJson(SmallSolution()));
  const CliResult ok = RunTool({"validate", "--solution", dir / "solution.json", "--out", dir.str()});
  EXPECT_EQ(ok.code, kExitOk) << ok.out << ok.err;
  const auto report = nlohmann::json::parse(ReadFile(dir / "report.json"));
  EXPECT_TRUE(report.at("all_pass").get<bool>());
  EXPECT_NE(ok.out.find("random_state_kinematic_power"), std::string::npos);

  auto doc = nlohmann::json::parse(ReadFile(dir / "solution.json"));
  doc["rho"]["cos"][2] = doc["rho"]["cos"][2].get<double>() + 1e-3;
  WriteFileAtomic(dir / "bad.json", doc.dump());
  const CliResult bad = RunTool({"validate", "--solution", dir / "bad.json", "--out", dir.str(),
                             "--format", "csv"});
  EXPECT_EQ(bad.code, kExitFailure);
  EXPECT_NE(ReadFile(dir / "report.csv").find("force_balance"), std::string::npos);

  EXPECT_EQ(RunTool({"validate", "--solution", dir / "missing.json"}).code, kExitIo);
  WriteFileAtomic(dir / "junk.json", "{");
  EXPECT_EQ(RunTool({"validate", "--solution", dir / "junk.json"}).code, kExitIo);
}

TEST(Cli, ConfigFileAndPrecedence) {
  TempDir dir;
  {
    std::ofstream cfg(dir / "run.toml");
    cfg << "epsilon = 0.03\nmodes = 8\n";
  }
  const CliResult r = RunTool({"--config", dir / "run.toml", "--epsilon", "0.02", "--out",
                           dir.str(), "solve"});
  ASSERT_EQ(r.code, 0) << r.err;
  const EquilibriumSolution sol = SolutionFromJson(ReadFile(dir / "solution.json"));
  EXPECT_EQ(sol.config.epsilon, 0.02);
  EXPECT_EQ(sol.solver.modes, 8);

  {
    std::ofstream cfg(dir / "bad.toml");
    cfg << "epsilon = 0.03\nunknown_key = 1\n";
  }
  EXPECT_EQ(RunTool({"--config", dir / "bad.toml", "solve"}).code, kExitUsage);
}

TEST(Cli, SweepWritesTableAndSubdirectories) {
  TempDir dir;
  const CliResult r =
      RunTool({"sweep", "--eps", "0.04,0.02,0.01", "--modes", "8", "--out", dir.str()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string csv = ReadFile(dir / "sweep.csv");
  EXPECT_EQ(csv.rfind("# torus-sweep v1\n", 0), 0u);
  int ok_rows = 0;
  for (size_t pos = 0; (pos = csv.find(",ok\n", pos)) != std::string::npos; ++pos) ++ok_rows;
  EXPECT_EQ(ok_rows, 3);
  for (const char* sub : {"eps_0.04", "eps_0.02", "eps_0.01"}) {
    EXPECT_TRUE(fs::exists(fs::path(dir.str()) / sub / "solution.json")) << sub;
  }
}

TEST(Cli, GeometricSweepRange) {
  TempDir dir;
  const CliResult r = RunTool({"sweep", "--eps-from", "0.04", "--eps-to", "0.01", "--eps-factor",
                               "0.5", "--modes", "8", "--out", dir.str()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* sub : {"eps_0.04", "eps_0.02", "eps_0.01"}) {
    EXPECT_TRUE(fs::exists(fs::path(dir.str()) / sub / "profiles.csv")) << sub;
  }
  EXPECT_NE(r.out.find("rho_norm_decreasing"), std::string::npos);
}

TEST(Cli, SweepRecordsFailuresAndContinues) {
  TempDir dir;
  const CliResult r =
      RunTool({"sweep", "--eps", "0.02,0.5", "--modes", "8", "--out", dir.str()});
  EXPECT_EQ(r.code, kExitFailure);
  const std::string csv = ReadFile(dir / "sweep.csv");
  EXPECT_NE(csv.find(",ok\n"), std::string::npos);
  EXPECT_NE(csv.find("0.5,,,,,,,"), std::string::npos);
  EXPECT_TRUE(fs::exists(fs::path(dir.str()) / "eps_0.02" / "solution.json"));
  EXPECT_FALSE(fs::exists(fs::path(dir.str()) / "eps_0.5" / "solution.json"));
}

TEST(Cli, KernelTables) {
  TempDir dir;
  const CliResult r = RunTool({"kernels", "--eps", "0.1,0.01", "--out", dir.str()});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"K3.csv", "canonical.csv", "image_comparison.csv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  EXPECT_NE(ReadFile(dir / "K3.csv").find("epsilon,K3,error_estimate,K3_over_log"),
            std::string::npos);
}

}  // namespace
}  // namespace torus
