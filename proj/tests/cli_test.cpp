#include "diracstep/cli.hpp"
#include "diracstep/io/csv.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace diracstep::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "diracstep");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::path(DIRACSTEP_TEST_TMPDIR) / ("cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

// ------------------------------------------------------------------ scatter

TEST(CliScatter, KleinPoint) {
  const auto r = invoke({"scatter", "--coupling", "vector", "--E", "1.5", "--V0", "3"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("r=2.25 t=-1.25 regime=klein_zone"), std::string::npos) << r.out;
}

TEST(CliScatter, ScalarDefaultsMassToOne) {
  const auto r = invoke({"scatter", "--coupling", "scalar", "--E", "2", "--V0", "4"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("r=1 t=0 regime=evanescent"), std::string::npos) << r.out;
}

TEST(CliScatter, BelowThresholdFails) {
  const auto r = invoke({"scatter", "--coupling", "vector", "--E", "0.5", "--V0", "1"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("E > m0"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(CliScatter, PseudoscalarRejected) {
  const auto r = invoke({"scatter", "--coupling", "pseudoscalar", "--E", "2", "--V0", "1"});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find("pseudoscalar"), std::string::npos);
}

TEST(CliScatter, UsageErrors) {
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"scatter", "--bogus", "1"}).code, kExitUsage);
  EXPECT_EQ(invoke({"scatter", "--E", "two", "--V0", "1"}).code, kExitFailure);
  EXPECT_EQ(invoke({"scatter", "--E", "2", "--V0", "1", "--coupling", "tensor"}).code,
            kExitFailure);
  EXPECT_EQ(invoke({"scatter", "--E", "2", "--V0", "1", "--format", "xml"}).code, kExitFailure);
}

TEST(CliScatter, SweepPartitionsAtThresholds) {
  const auto dir = scratch_dir("sweep");
  const auto r = invoke({"scatter", "--coupling", "vector", "--E", "2", "--m0", "1", "--sweep",
                         "V0:0:4:401", "--output", (dir / "s.csv").string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("singular"), std::string::npos);
  std::ifstream in(dir / "s.csv");
  const auto table = io::parse_csv(in);
  ASSERT_EQ(table.rows.size(), 401u);
  const auto regime = table.column("regime");
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const double v0 = table.number(i, "V0");
    const std::string& got = table.rows[i][regime];
    if (v0 < 1.0 - 1e-12) {
      EXPECT_EQ(got, "transmission") << v0;
    } else if (v0 <= 3.0 + 1e-12) {
      if (i == 300) {  // V0 = E + m0
        EXPECT_EQ(got, "singular");
      } else {
        EXPECT_EQ(got, "evanescent") << v0;
      }
    } else {
      EXPECT_EQ(got, "klein_zone") << v0;
      EXPECT_GT(table.number(i, "r"), 1.0);
    }
  }
}

TEST(CliScatter, SweepSvgIsDeterministicAndMarksThreshold) {
  const auto dir = scratch_dir("svg");
  const std::vector<std::string> base = {"scatter", "--E", "2", "--sweep", "V0:0:4:101",
                                         "--format", "svg", "--output"};
  auto a = base, b = base;
  a.push_back((dir / "a.svg").string());
  b.push_back((dir / "b.svg").string());
  EXPECT_EQ(invoke(a).code, 0);
  EXPECT_EQ(invoke(b).code, 0);
  const auto svg = slurp(dir / "a.svg");
  EXPECT_EQ(svg, slurp(dir / "b.svg"));
  EXPECT_NE(svg.find("class=\"rule\""), std::string::npos);
  EXPECT_NE(svg.find("data-x=\"3\""), std::string::npos);
}

TEST(CliScatter, InvalidSweepRowsFailButFileIsComplete) {
  const auto dir = scratch_dir("invalid");
  const auto r = invoke({"scatter", "--V0", "0.5", "--sweep", "E:0.5:2:16", "--output",
                         (dir / "e.csv").string()});
  EXPECT_EQ(r.code, kExitFailure);
  std::ifstream in(dir / "e.csv");
  const auto table = io::parse_csv(in);
  ASSERT_EQ(table.rows.size(), 16u);
  EXPECT_EQ(table.rows[0][table.column("regime")], "invalid");
  EXPECT_EQ(table.rows[15][table.column("regime")], "transmission");
}

TEST(CliScatter, JsonSweep) {
  const auto r = invoke({"scatter", "--E", "2", "--sweep", "V0:0:1:3", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc.size(), 3u);
  EXPECT_EQ(doc[0]["r"].get<double>(), 0.0);
  EXPECT_EQ(doc[1]["regime"], "transmission");
}

// ------------------------------------------------------------------- config

TEST(CliConfig, FlagsOverrideConfig) {
  const auto dir = scratch_dir("config");
  std::ofstream(dir / "c.json") << R"({"coupling": "vector", "E": 2, "V0": 1, "m0": 1})";
  const auto from_file = invoke({"scatter", "--config", (dir / "c.json").string()});
  EXPECT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_NE(from_file.out.find("regime=evanescent"), std::string::npos) << from_file.out;
  const auto overridden = invoke(
      {"scatter", "--config", (dir / "c.json").string(), "--E", "1.5", "--V0", "3"});
  EXPECT_NE(overridden.out.find("r=2.25 t=-1.25 regime=klein_zone"), std::string::npos)
      << overridden.out;
}

TEST(CliConfig, UnknownKeyRejected) {
  const auto dir = scratch_dir("config_bad");
  std::ofstream(dir / "c.json") << R"({"E": 2, "V0": 1, "potential": 3})";
  const auto r = invoke({"scatter", "--config", (dir / "c.json").string()});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.err.find("potential"), std::string::npos) << r.err;
  std::ofstream(dir / "broken.json") << "{not json";
  EXPECT_EQ(invoke({"scatter", "--config", (dir / "broken.json").string()}).code, kExitFailure);
}

// ------------------------------------------------------------------ algebra

TEST(CliAlgebra, SmallDimensions) {
  const auto two = invoke({"algebra", "--n", "2"});
  EXPECT_EQ(two.code, 0);
  EXPECT_NE(two.out.find("dim=2 "), std::string::npos) << two.out;
  EXPECT_NE(two.out.find("passed=true"), std::string::npos);
  const auto three = invoke({"algebra", "--n", "3"});
  EXPECT_EQ(three.code, 0);
  EXPECT_NE(three.out.find("dim=4 "), std::string::npos) << three.out;
  EXPECT_NE(three.out.find("max_deviation=0"), std::string::npos) << three.out;
  EXPECT_EQ(invoke({"algebra", "--n", "0"}).code, kExitFailure);
}

TEST(CliAlgebra, EmitAndReverify) {
  const auto dir = scratch_dir("algebra");
  const auto path = (dir / "rep8.json").string();
  const auto emit = invoke({"algebra", "--n", "8", "--emit-json", path});
  EXPECT_EQ(emit.code, 0) << emit.err;
  const auto doc = nlohmann::json::parse(slurp(path));
  EXPECT_EQ(doc["dim"], 16);
  const auto check = invoke({"algebra", "--input", path});
  EXPECT_EQ(check.code, 0) << check.err;
  EXPECT_NE(check.out.find("passed=true"), std::string::npos);

  auto broken = doc;
  broken["beta"][0][0] = nlohmann::json::array({0.5, 0.0});
  std::ofstream(dir / "broken.json") << broken.dump();
  const auto fail = invoke({"algebra", "--input", (dir / "broken.json").string()});
  EXPECT_EQ(fail.code, kExitFailure);
  EXPECT_NE(fail.out.find("passed=false"), std::string::npos) << fail.out;
}

// ------------------------------------------------------------------- evolve

nlohmann::json evolve_summary(std::vector<std::string> extra) {
  std::vector<std::string> args = {"evolve", "--grid-n", "2048", "--domain-l", "400",
                                   "--t-final", "200", "--record-every", "500"};
  args.insert(args.end(), extra.begin(), extra.end());
  const auto r = invoke(args);
  EXPECT_EQ(r.code, 0) << r.err;
  return nlohmann::json::parse(r.out);
}

TEST(CliEvolve, FreePacketReachesTheRight) {
  const auto s = evolve_summary({"--coupling", "vector", "--E", "2", "--V0", "0", "--dt", "0.08"});
  EXPECT_GE(s["p_right_final"].get<double>(), 0.999);
  EXPECT_LE(s["norm_drift"].get<double>(), 1e-10);
}

TEST(CliEvolve, VectorStepMatchesAnalytic) {
  const auto s = evolve_summary(
      {"--coupling", "vector", "--E", "2", "--V0", "0.5", "--dt", "0.08", "--smoothing", "0.4"});
  EXPECT_NEAR(s["p_right_final"].get<double>(), s["analytic_t"].get<double>(), 0.02);
  EXPECT_EQ(s["analytic_regime"], "transmission");
}

TEST(CliEvolve, ScalarStepReflects) {
  const auto s = evolve_summary({"--coupling", "scalar", "--E", "1.5", "--V0", "3", "--dt", "0.08",
                                 "--xc", "-60"});
  EXPECT_LE(s["p_right_final"].get<double>(), 1e-3);
  EXPECT_EQ(s["analytic_r"].get<double>(), 1.0);
}

TEST(CliEvolve, OutputsAndSnapshots) {
  const auto dir = scratch_dir("evolve");
  const auto r = invoke({"evolve", "--grid-n", "512", "--domain-l", "200", "--dt", "0.1",
                         "--steps", "20", "--record-every", "10", "--sigma", "5", "--output",
                         (dir / "obs.csv").string(), "--summary", (dir / "sum.json").string(),
                         "--snapshots", (dir / "snaps").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir / "obs.csv");
  EXPECT_EQ(io::parse_csv(in).rows.size(), 3u);
  EXPECT_EQ(nlohmann::json::parse(slurp(dir / "sum.json")), nlohmann::json::parse(r.out));
  EXPECT_TRUE(fs::exists(dir / "snaps" / "snapshot_00000010.csv"));
  EXPECT_EQ(std::distance(fs::directory_iterator(dir / "snaps"), fs::directory_iterator{}), 3);
}

TEST(CliEvolve, RejectionsWriteNoOutput) {
  const auto dir = scratch_dir("evolve_bad");
  const auto out = (dir / "obs.csv").string();
  const auto too_coarse = invoke({"evolve", "--dt", "0.2", "--output", out});
  EXPECT_EQ(too_coarse.code, kExitFailure);
  EXPECT_NE(too_coarse.err.find("dt"), std::string::npos);
  EXPECT_EQ(invoke({"evolve", "--E", "0.9", "--output", out}).code, kExitFailure);
  EXPECT_EQ(invoke({"evolve", "--grid-n", "1000", "--output", out}).code, kExitFailure);
  EXPECT_EQ(invoke({"evolve", "--sigma", "0.01", "--output", out}).code, kExitFailure);
  EXPECT_TRUE(fs::is_empty(dir));
}

}  // namespace
}  // namespace diracstep::cli
