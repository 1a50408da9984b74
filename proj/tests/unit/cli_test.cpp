#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "commands.hpp"
#include "config.hpp"
#include "sparsetail/error.hpp"
#include "sparsetail/io.hpp"

using namespace sparsetail;
using namespace sparsetail::cli;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = SPARSETAIL_CONFIG_DIR;

fs::path tmpDir(const std::string& name) {
  const fs::path dir = fs::path(SPARSETAIL_TEST_TMP) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string replaced(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  EXPECT_NE(pos, std::string::npos) << from;
  if (pos != std::string::npos) text.replace(pos, from.size(), to);
  return text;
}

std::string configError(const std::string& text) {
  try {
    resolve(parseConfig(text, "test.yaml"));
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

Errc configCode(const std::string& text) {
  try {
    resolve(parseConfig(text, "test.yaml"));
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return Errc::Format;
}

}  // namespace

TEST(Config, ExamplesResolve) {
  for (const char* name : {"demo.yaml", "target_quarter.yaml", "golden_mean.yaml"}) {
    const Model m = resolve(loadConfig(kConfigs / name));
    EXPECT_EQ(m.scale.depth(), 3) << name;
    EXPECT_LT(m.rangeLo, m.params.target);
    EXPECT_LT(m.params.target, m.rangeHi);
  }
  const Model golden = resolve(loadConfig(kConfigs / "golden_mean.yaml"));
  EXPECT_EQ(golden.rangeLo, Rational(-1, 2));
  EXPECT_EQ(golden.rangeHi, 1);
  EXPECT_FALSE(golden.sft.allowed(1, 1));
}

TEST(Config, DiagnosticsCarryPositions) {
  const std::string base = readText(kConfigs / "demo.yaml");
  const std::string unknown = configError(replaced(base, "depth: 3\n", "depth: 3\nbogus: 1\n"));
  EXPECT_NE(unknown.find("test.yaml:12:1"), std::string::npos) << unknown;
  EXPECT_NE(unknown.find("bogus"), std::string::npos);
  const std::string decimal = configError(replaced(base, "alpha0: \"4/3\"", "alpha0: 1.5"));
  EXPECT_NE(decimal.find("test.yaml:13:11"), std::string::npos) << decimal;
  EXPECT_NE(decimal.find("control.alpha0"), std::string::npos);
  const std::string syntax = configError("sft: [1, 2\n");
  EXPECT_NE(syntax.find("test.yaml:"), std::string::npos) << syntax;
  const std::string missing = configError(replaced(base, "target: \"0\"\n", ""));
  EXPECT_NE(missing.find("target"), std::string::npos) << missing;
}

TEST(Config, SemanticErrors) {
  const std::string base = readText(kConfigs / "demo.yaml");
  EXPECT_EQ(configCode(replaced(base, "target: \"0\"", "target: \"2\"")), Errc::TargetOutOfRange);
  EXPECT_EQ(configCode(replaced(base, "target: \"0\"", "target: \"1\"")), Errc::TargetOutOfRange);
  EXPECT_EQ(configCode(replaced(base, "t0: 6", "t0: 4")), Errc::NotMultipleOf3);
  EXPECT_EQ(configCode(replaced(base, "factors: auto", "factors: [5, 4, 40]")), Errc::RatioNotIncreasing);
  EXPECT_EQ(configCode(replaced(base, "alphabet: 2", "alphabet: 2\n  forbidden: [\"01\"]")), Errc::NotMixing);
  EXPECT_EQ(configCode(replaced(base, "{\"0\": \"1\", \"1\": \"-1\"}", "{\"0\": \"1\"}")), Errc::InvalidPotential);
  const std::string where = configError(replaced(base, "t0: 6", "t0: 4"));
  EXPECT_NE(where.find("scale.t0"), std::string::npos) << where;
  EXPECT_NE(where.find("test.yaml:9:7"), std::string::npos) << where;
}

TEST(Config, FormatRoundTrip) {
  for (const char* name : {"demo.yaml", "target_quarter.yaml", "golden_mean.yaml"}) {
    const RunConfig c = loadConfig(kConfigs / name);
    const std::string text = formatConfig(c);
    EXPECT_EQ(formatConfig(parseConfig(text)), text) << name;
  }
  EXPECT_EQ(formatConfig(demoConfig()), formatConfig(loadConfig(kConfigs / "demo.yaml")));
}

TEST(Cli, TargetOutsideRangeFailsBeforeWork) {
  const fs::path dir = tmpDir("cli-target");
  const std::string text = replaced(readText(kConfigs / "demo.yaml"), "target: \"0\"", "target: \"2\"");
  writeText(dir / "bad.yaml", text);
  Options o;
  o.config = dir / "bad.yaml";
  o.out = dir / "out";
  std::ostringstream out, err;
  EXPECT_EQ(run("synth", o, out, err), Failure);
  EXPECT_NE(err.str().find("TargetOutOfRange"), std::string::npos) << err.str();
  EXPECT_FALSE(fs::exists(dir / "out" / "prefix.bin"));
}

TEST(Cli, UnknownCommandAndMissingConfig) {
  std::ostringstream out, err;
  EXPECT_EQ(run("frobnicate", {}, out, err), Failure);
  EXPECT_EQ(run("synth", {}, out, err), Failure);
  EXPECT_NE(err.str().find("--config"), std::string::npos);
}

TEST(Cli, ScaleTailPattern) {
  const fs::path dir = tmpDir("cli-stages");
  Options o;
  o.config = kConfigs / "demo.yaml";
  o.out = dir;
  o.depth = 2;
  std::ostringstream out, err;
  ASSERT_EQ(run("scale", o, out, err), Clean) << err.str();
  const Scale scale = scaleFromJson(Json::parse(readText(dir / "scale.json"))["scale"]);
  EXPECT_EQ(scale.depth(), 2);
  EXPECT_EQ(scale.t0, 6);
  ASSERT_EQ(run("tail", o, out, err), Clean) << err.str();
  EXPECT_EQ(tailFromJson(Json::parse(readText(dir / "tail.json"))), buildTail(scale, 2));
  ASSERT_EQ(run("pattern", o, out, err), Clean) << err.str();
  EXPECT_TRUE(fs::exists(dir / "patterns.json"));
}

TEST(Cli, DemoIsCleanAndDeterministic) {
  const fs::path a = tmpDir("cli-demo-a"), b = tmpDir("cli-demo-b");
  Options o;
  o.depth = 2;
  o.out = a;
  std::ostringstream out, err;
  ASSERT_EQ(run("demo", o, out, err), Clean) << err.str() << out.str();
  o.out = b;
  o.seedless = true;
  ASSERT_EQ(run("demo", o, out, err), Clean) << err.str();
  for (const char* f : {"prefix.bin", "ledger.json", "report.json", "series.csv"}) {
    EXPECT_EQ(readText(a / f), readText(b / f)) << f;
  }
  const Json report = Json::parse(readText(a / "report.json"));
  EXPECT_TRUE(report["clean"].get<bool>());
  EXPECT_TRUE(report["control"]["average_violations"].empty());
  EXPECT_TRUE(report["control"]["density_violations"].empty());
}

TEST(Cli, AnalyzeReportsMutatedPrefix) {
  const fs::path dir = tmpDir("cli-mutate");
  Options o;
  o.config = kConfigs / "golden_mean.yaml";
  o.depth = 2;
  o.out = dir;
  std::ostringstream out, err;
  ASSERT_EQ(run("synth", o, out, err), Clean) << err.str();
  Word x = readBytes(dir / "prefix.bin");
  x[x.size() / 2] = 1;
  x[x.size() / 2 + 1] = 1;
  writeBytes(dir / "prefix.bin", x);
  EXPECT_EQ(run("analyze", o, out, err), Violations) << err.str();
  const Json report = Json::parse(readText(dir / "report.json"));
  EXPECT_FALSE(report["clean"].get<bool>());
}
