#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "krpac/cli/commands.hpp"
#include "krpac/io.hpp"

namespace krpac::cli {
namespace {

namespace fs = std::filesystem;

const fs::path kConfigs = fs::path(KRPAC_DATA_DIR) / "configs";

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = dispatch(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("krpac_cli_" + name);
  fs::remove_all(p);
  return p;
}

nlohmann::json read_json(const fs::path& p) { return nlohmann::json::parse(read_text_file(p)); }

TEST(Cli, ToyWritesFiguresAndManifest) {
  const fs::path out = scratch("toy");
  const Result r = run({"toy", "--seed", "1", "--grid", "12", "--mc", "128", "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("L12 max"), std::string::npos);
  for (const char* f : {"landscape.csv", "tradeoff.csv", "pushforward.csv", "manifest.json", "run_manifest.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  const auto m = read_json(out / "run_manifest.json");
  EXPECT_EQ(m["command"], "toy");
  EXPECT_EQ(m["seed"], 1);
  EXPECT_EQ(m["config_hash"], "none");
  EXPECT_TRUE(m["versions"].contains("eigen"));
}

TEST(Cli, ToyRepeatRunsAreByteIdentical) {
  const fs::path a = scratch("rep_a");
  const fs::path b = scratch("rep_b");
  ASSERT_EQ(run({"toy", "--seed", "9", "--grid", "10", "--mc", "64", "--out", a.string()}).code, kExitOk);
  ASSERT_EQ(run({"toy", "--seed", "9", "--grid", "10", "--mc", "64", "--threads", "1", "--out", b.string()}).code,
            kExitOk);
  for (const char* f : {"landscape.csv", "tradeoff.csv", "pushforward.csv", "manifest.json", "run_manifest.json"}) {
    EXPECT_EQ(read_text_file(a / f), read_text_file(b / f)) << f;
  }
}

TEST(Cli, MissingConfigExitsWithConfigCode) {
  const Result r = run({"certify", "--config", "missing.toml", "--out", scratch("missing").string()});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(run({"deps", "--out", scratch("noconf").string()}).code, kExitConfig);
}

TEST(Cli, UnknownSubcommandAndFlag) {
  EXPECT_EQ(run({"frobnicate"}).code, kExitConfig);
  EXPECT_EQ(run({"toy", "--bogus"}).code, kExitConfig);
  EXPECT_EQ(run({}).code, kExitConfig);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(Cli, BadSchemaVersionIsConfigError) {
  const fs::path dir = scratch("schema");
  write_text_file(dir / "c.toml", "schema_version = 2\n");
  EXPECT_EQ(run({"mgf-check", "--config", (dir / "c.toml").string(), "--out", dir.string()}).code, kExitConfig);
}

TEST(Cli, NumericalFailureExitsOne) {
  const fs::path dir = scratch("numeric");
  write_text_file(dir / "c.json", R"({"schema_version": 1, "dimensions": [2], "n": 1})");
  EXPECT_EQ(run({"mgf-check", "--config", (dir / "c.json").string(), "--out", dir.string()}).code, kExitNumerical);
}

TEST(Cli, MgfCheckFromToml) {
  const fs::path dir = scratch("mgf");
  write_text_file(dir / "c.toml", "schema_version = 1\ndimensions = [2, 4]\nn = 20000\n");
  const Result r = run({"mgf-check", "--config", (dir / "c.toml").string(), "--out", dir.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(dir / "mgf_d2.csv"));
  EXPECT_TRUE(fs::exists(dir / "mgf_d4.csv"));
  EXPECT_NE(read_json(dir / "run_manifest.json")["config_hash"], "none");
}

TEST(Cli, CertifyShippedConfig) {
  const fs::path out = scratch("certify");
  const Result r = run({"certify", "--config", (kConfigs / "certify.toml").string(), "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rep = read_json(out / "report.json");
  EXPECT_GT(rep["certificate"]["gap"].get<double>(), 0.0);
  EXPECT_EQ(rep["inputs"]["d"], 2);
  EXPECT_GE(rep["certificate"]["total"].get<double>(), rep["inputs"]["empirical_risk"].get<double>());
}

TEST(Cli, CertifyWithBadSetCandidates) {
  const fs::path out = scratch("certify_bs");
  const Result r = run({"certify", "--config", (kConfigs / "certify_badset.json").string(), "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rep = read_json(out / "report.json");
  EXPECT_EQ(rep["bad_set"]["candidates"].size(), 4u);
}

TEST(Cli, DepsShippedConfig) {
  const fs::path out = scratch("deps");
  const Result r = run({"deps", "--config", (kConfigs / "deps.toml").string(), "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(out / "profile_1_2.csv"));
  const auto dep = read_json(out / "dependency.json");
  EXPECT_GT(dep["L"][0][1].get<double>(), 0.0);
}

TEST(Cli, BadsetShippedConfig) {
  const fs::path out = scratch("badset");
  const Result r = run({"badset", "--config", (kConfigs / "badset.toml").string(), "--seed", "2", "--out",
                     out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto rep = read_json(out / "report.json");
  EXPECT_EQ(rep["candidates"].size(), 5u);
  EXPECT_EQ(read_json(out / "run_manifest.json")["seed"], 2);
  // Nested probe grid: every coarse violation remains one.
  const auto& fine = rep["probe_sensitivity"]["candidates"];
  ASSERT_EQ(fine.size(), 5u);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_GE(fine[k]["count"].get<std::size_t>(), rep["candidates"][k]["count"].get<std::size_t>());
}

}  // namespace
}  // namespace krpac::cli
