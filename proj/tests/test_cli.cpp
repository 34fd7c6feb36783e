#include <gtest/gtest.h>
#include <nlohmann/json.hpp>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Invocation {
  int code;
  std::string err;
};

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("lietrack_cli_" + std::string(info->name()) + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Invocation run(const std::string& args) const {
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string(LIETRACK_CLI) + " " + args + " > /dev/null 2> " + err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, read(err)};
  }

  static std::string read(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path write_config(const std::string& name, const json& j) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << j.dump();
    return p;
  }

  std::string out(const std::string& sub) const { return (dir_ / sub).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SimulateIsReproducible) {
  ASSERT_EQ(run("simulate --model se2xse2 --seed 5 --sigma-omega 1 --out " + out("a")).code, 0);
  ASSERT_EQ(run("simulate --model se2xse2 --seed 5 --sigma-omega 1 --out " + out("b")).code, 0);
  for (const char* f : {"trajectory.json", "trajectory.csv"}) {
    const auto a = read(dir_ / "a" / f);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, read(dir_ / "b" / f)) << f;
  }
  const json j = json::parse(read(dir_ / "a" / "trajectory.json"));
  EXPECT_EQ(j.at("schema"), "lietrack.trajectory/1");
  EXPECT_EQ(j.at("params").at("seed"), 5);
}

TEST_F(Cli, SimulateZeroNoiseIsStraightLine) {
  ASSERT_EQ(run("simulate --model se2xr3 --sigma-v 0 --sigma-omega 0 --meas-std 0 --steps 5 --out " + out("z")).code, 0);
  const json j = json::parse(read(dir_ / "z" / "trajectory.json"));
  for (int k = 0; k < 5; ++k) {
    EXPECT_NEAR(j["measurements"][k][0].get<double>(), k, 1e-12);
    EXPECT_NEAR(j["measurements"][k][1].get<double>(), 0.0, 1e-12);
  }
}

TEST_F(Cli, SimulateMissingModelNamesKey) {
  const auto cfg = write_config("c.json", {{"steps", 10}});
  const auto r = run("simulate --config " + cfg.string() + " --out " + out("m"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("'model'"), std::string::npos) << r.err;
}

TEST_F(Cli, UnknownConfigKeyRejected) {
  const auto cfg = write_config("c.json", {{"model", "se2xse2"}, {"stepz", 10}});
  const auto r = run("simulate --config " + cfg.string() + " --out " + out("u"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("'stepz'"), std::string::npos) << r.err;
}

TEST_F(Cli, TrackNoiseFreeReportsNearZeroRmse) {
  ASSERT_EQ(run("simulate --model se2xse2 --sigma-v 0 --sigma-omega 0 --meas-std 0 --out " + out("t")).code, 0);
  const auto traj = (dir_ / "t" / "trajectory.json").string();
  ASSERT_EQ(run("track --trajectory " + traj + " --filters lgekf-se2xse2,lgekf-se2xr3 --init exact --out " + out("e")).code, 0);
  for (const char* name : {"lgekf-se2xse2", "lgekf-se2xr3"}) {
    const json j = json::parse(read(dir_ / "e" / ("estimates-" + std::string(name) + ".json")));
    EXPECT_EQ(j.at("schema"), "lietrack.estimates/1");
    EXPECT_LT(j.at("rmse").get<double>(), 1e-8);
    ASSERT_EQ(j.at("steps").size(), 100u);
    for (const auto& s : j.at("steps")) EXPECT_GT(s.at("cov_trace").get<double>(), 0.0);
  }
}

TEST_F(Cli, TrackUnknownFilterListsValidNames) {
  ASSERT_EQ(run("simulate --model se2xse2 --steps 5 --out " + out("t")).code, 0);
  const auto r = run("track --trajectory " + (dir_ / "t" / "trajectory.json").string() + " --filters ukf --out " + out("e"));
  EXPECT_EQ(r.code, 1);
  for (const char* n : {"lgekf-se2xse2", "lgekf-se2xr3", "kf-cv", "ekf-ctrv", "measurement"}) {
    EXPECT_NE(r.err.find(n), std::string::npos) << r.err;
  }
}

TEST_F(Cli, SweepByteIdenticalAcrossRerunsAndWorkers) {
  const std::string base = "sweep --grid-count 3 --n-traj 3 --steps 25 --seed 9";
  ASSERT_EQ(run(base + " --out " + out("s1")).code, 0);
  ASSERT_EQ(run(base + " --out " + out("s2")).code, 0);
  ASSERT_EQ(run(base + " --parallel 3 --out " + out("s3")).code, 0);
  for (const char* f : {"sweep.json", "sweep.csv"}) {
    const auto a = read(dir_ / "s1" / f);
    EXPECT_FALSE(a.empty());
    EXPECT_EQ(a, read(dir_ / "s2" / f)) << f;
    EXPECT_EQ(a, read(dir_ / "s3" / f)) << f;
  }
}

TEST_F(Cli, SweepUnitsChangeGrid) {
  const std::string base = "sweep --grid-min 0 --grid-max 2 --grid-count 2 --n-traj 2 --steps 20 --no-tune "
                           "--filters lgekf-se2xse2,measurement";
  ASSERT_EQ(run(base + " --units deg --out " + out("d")).code, 0);
  ASSERT_EQ(run(base + " --units rad --out " + out("r")).code, 0);
  const json d = json::parse(read(dir_ / "d" / "sweep.json"));
  const json r = json::parse(read(dir_ / "r" / "sweep.json"));
  EXPECT_NEAR(d["sigma_grid"][1].get<double>(), 2.0 * M_PI / 180.0, 1e-15);
  EXPECT_NEAR(r["sigma_grid"][1].get<double>(), 2.0, 1e-15);
  // identical seeds: the sigma = 0 columns agree, the other does not
  EXPECT_EQ(d["results"]["lgekf-se2xse2"]["rmse_mean"][0], r["results"]["lgekf-se2xse2"]["rmse_mean"][0]);
  EXPECT_NE(d["results"]["lgekf-se2xse2"]["rmse_mean"][1], r["results"]["lgekf-se2xse2"]["rmse_mean"][1]);
}

TEST_F(Cli, ContourSampleCountAndZeroRotation) {
  ASSERT_EQ(run("contour --samples 50 --compound 2 --sigma-omega 0 --out " + out("c")).code, 0);
  std::istringstream in(read(dir_ / "c" / "contour.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "sample,step,x,y,theta");
  int rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    EXPECT_EQ(std::stod(line.substr(line.rfind(',') + 1)), 0.0) << line;
  }
  EXPECT_EQ(rows, 100);
}

TEST_F(Cli, BadInvocationsExitOne) {
  EXPECT_EQ(run("").code, 1);
  EXPECT_EQ(run("simulate --model se2xse2 --units grad").code, 1);
  EXPECT_EQ(run("simulate --model so3 --out " + out("x")).code, 1);
  EXPECT_EQ(run("sweep --grid-count 0 --out " + out("x")).code, 1);
}
