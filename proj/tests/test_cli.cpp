#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "raf/io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "raf_cli_test";

fs::path fresh(const std::string& name) {
  const auto dir = kRoot / name;
  fs::remove_all(dir);
  fs::create_directories(dir.parent_path());
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(RAF_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> contents(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) out[e.path().filename().string()] = raf::io::read_file(e.path());
  return out;
}

void expect_same_outputs(const std::string& name, const std::string& args) {
  const auto a = fresh(name + "_w1"), b = fresh(name + "_w3");
  ASSERT_EQ(run(args + " --workers 1 --out " + a.string()), 0) << args;
  ASSERT_EQ(run(args + " --workers 3 --out " + b.string()), 0) << args;
  const auto ca = contents(a), cb = contents(b);
  EXPECT_GT(ca.size(), 1u);
  ASSERT_EQ(ca.size(), cb.size());
  for (const auto& [file, bytes] : ca) {
    ASSERT_TRUE(cb.count(file)) << file;
    EXPECT_TRUE(bytes == cb.at(file)) << name << ": " << file << " differs across worker counts";
  }
}

}  // namespace

TEST(Cli, KernelCheckIsReproducible) {
  expect_same_outputs("kernel", "kernel-check --triples 500 --configs 10 --seed 5");
}

TEST(Cli, SampleZerosIsReproducible) {
  expect_same_outputs("sample", "sample-zeros --kappa -1 --abs-u 0.6 --samples 60 --seed 9 --raster 33");
}

TEST(Cli, ConvergeTestIsReproducible) {
  expect_same_outputs("converge", "converge-test --kappa -1 --ensemble rademacher --abs-u 0.3,0.7 --samples 40");
}

TEST(Cli, LittlewoodIsReproducible) {
  expect_same_outputs("littlewood", "littlewood --n 8 --alphabet pm1 --symmetry --raster 65 --holes 1,-1");
}

TEST(Cli, FractalIsReproducible) {
  expect_same_outputs("fractal", "fractal --z 0.3+0.4i --alphabet quaternary --depth 6 --boxdim --raster 64");
}

TEST(Cli, BoxdimIsReproducible) {
  const auto src = fresh("boxdim_src");
  ASSERT_EQ(run("fractal --z 0.333333 --depth 12 --out " + src.string()), 0);
  std::string input;
  for (const auto& e : fs::directory_iterator(src))
    if (e.path().extension() == ".bin") input = e.path().string();
  ASSERT_FALSE(input.empty());
  expect_same_outputs("boxdim", "boxdim --input " + input + " --scales 6");
}

TEST(Cli, ManifestRoundTrip) {
  const std::vector<std::string> runs{
      "fractal --z 0.5i --depth 14 --boxdim --raster 31",
      "kernel-check --triples 200 --configs 5 --kappa -0.5,-2 --abs-u 0.2",
      "sample-zeros --kappa -0.5 --ensemble rademacher --phi smoothed-indicator --samples 20 --abs-u 0.4",
      "converge-test --kappa -1 --abs-u 0.5 --samples 30 --alpha 0.01",
      "littlewood --n 6 --alphabet quaternary --quotient --symmetry --holes 1 --raster 17"};
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const auto a = fresh("manifest_a" + std::to_string(k)), b = fresh("manifest_b" + std::to_string(k));
    ASSERT_EQ(run(runs[k] + " --out " + a.string()), 0) << runs[k];
    const std::string sub = runs[k].substr(0, runs[k].find(' '));
    // The config may come before the subcommand name.
    ASSERT_EQ(run("--config " + (a / "manifest.json").string() + " " + sub + " --out " + b.string()), 0) << runs[k];
    EXPECT_EQ(contents(a), contents(b)) << runs[k];
  }
}

TEST(Cli, FlagsOverrideConfig) {
  const auto dir = fresh("override");
  fs::create_directories(dir);
  raf::io::atomic_write(dir / "cfg.json", R"({"z": "0.5", "depth": 4, "alphabet": "pm1"})");
  const auto out = dir / "out";
  ASSERT_EQ(run("fractal --config " + (dir / "cfg.json").string() + " --depth 6 --out " + out.string()), 0);
  const auto manifest = raf::io::json::parse(raf::io::read_file(out / "manifest.json"));
  EXPECT_EQ(manifest["config"]["depth"], 6);
  EXPECT_EQ(manifest["config"]["z"], 0.5);
  EXPECT_EQ(manifest["subcommand"], "fractal");
}

TEST(Cli, ValidationErrorsExitOne) {
  const auto out = fresh("errors").string();
  EXPECT_EQ(run("sample-zeros --kappa 0.5 --samples 2 --out " + out), 1);
  EXPECT_EQ(run("sample-zeros --kappa -1 --abs-u 1.0 --samples 2 --out " + out), 1);
  EXPECT_EQ(run("sample-zeros --no-such-flag --out " + out), 1);
  EXPECT_EQ(run("fractal --depth 3 --out " + out), 1);
  EXPECT_EQ(run("littlewood --n 12 --budget 100 --out " + out), 1);
  EXPECT_EQ(run("fractal --z 0.5 --config /nonexistent/cfg.json --out " + out), 1);
  EXPECT_EQ(run(""), 1);
}

TEST(Cli, UnwritableOutputExitsOne) {
  const auto dir = fresh("unwritable");
  fs::create_directories(dir);
  raf::io::atomic_write(dir / "file", "x");
  EXPECT_EQ(run("fractal --z 0.5 --depth 3 --out " + (dir / "file" / "sub").string()), 1);
}

TEST(Cli, NumericalFailureExitsTwo) {
  const auto dir = fresh("degenerate");
  fs::create_directories(dir);
  raf::io::atomic_write(dir / "one.bin", std::string(16, '\0'));
  const std::string input = "boxdim --input " + (dir / "one.bin").string() + " --out " + (dir / "out").string();
  // Two scales cannot support a fit.
  EXPECT_EQ(run(input + " --delta-min 0.1 --delta-max 0.2 --scales 2"), 2);
  // A zero-diameter cloud has no automatic range.
  EXPECT_EQ(run(input), 1);
}

TEST(Cli, WorkersFromEnvironment) {
  const auto a = fresh("env_a"), b = fresh("env_b");
  ASSERT_EQ(run("littlewood --n 7 --out " + a.string()), 0);
  ASSERT_EQ(std::system(("RAF_WORKERS=2 " + std::string(RAF_CLI_PATH) + " littlewood --n 7 --out " + b.string() +
                         " >/dev/null 2>&1")
                            .c_str()),
            0);
  EXPECT_EQ(contents(a), contents(b));
}
