#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "polex/persistence.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& input = "") {
  const fs::path in = fs::temp_directory_path() / ("polex-cli-stdin-" + std::to_string(::getpid()));
  std::ofstream(in) << input;
  const std::string cmd = std::string(POLEX_CLI) + " " + args + " < " + in.string() + " 2>&1";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  fs::remove(in);
  return r;
}

std::string fx(const char* name) { return testing_support::fixture(name).string(); }

struct Workdir : ::testing::Test {
  fs::path dir;
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("polex-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::string copy(const char* name) {
    const auto to = dir / name;
    fs::copy_file(fx(name), to);
    return to.string();
  }
};

}  // namespace

TEST(Cli, PredictHome) {
  const auto r = run("predict --dataset " + fx("bob.json") + " --target WorkCloud Home");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "DENY (majority; nearest: Home+Photo @ 5/6)");
}

TEST(Cli, PredictJson) {
  const auto r = run("predict -d " + fx("bob.json") + " --json Home+Document");
  ASSERT_EQ(r.status, 0) << r.out;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["neighbors"].size(), 1u);
  EXPECT_EQ(j["similarity"], "5/6");
}

TEST(Cli, InvalidInputExitsTwo) {
  EXPECT_EQ(run("predict -d " + fx("bob.json") + " Nope").status, 2);
  EXPECT_EQ(run("predict -d " + fx("cyclic_order.json") + " A").status, 2);
  EXPECT_EQ(run("predict -d /nonexistent.json Home").status, 2);
  EXPECT_EQ(run("predict").status, 2);
  EXPECT_EQ(run("eval -d " + fx("bob.json") + " --generate").status, 2);
  const auto cyc = run("weights -d " + fx("cyclic_order.json"));
  EXPECT_NE(cyc.out.find("a -> b -> c -> a"), std::string::npos) << cyc.out;
}

TEST(Cli, WeightsTable) {
  const auto r = run("weights -d " + fx("chain_order.json") + " --json");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["Share"][2]["w1"], 3);
}

TEST_F(Workdir, ReviewAcceptFirstThenRejectRest) {
  const auto ds = copy("bob_extended.json");
  const auto r = run("review -d " + ds + " -t WorkCloud", "y\nn\nn\nn\nn\n");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("Suggestion: For {Home,Memo}, WorkCloud = DENY. Agree?(y/n)"), std::string::npos);
  EXPECT_NE(r.out.find("1 accepted"), std::string::npos);
  const auto d = polex::load_dataset(ds);
  EXPECT_EQ(d.rows()[4].decisions[0], polex::Decision::kDeny);
  EXPECT_TRUE(fs::exists(ds + ".session.json"));
}

TEST_F(Workdir, ReviewRejectAllLeavesFileUntouched) {
  const auto ds = copy("bob_extended.json");
  const std::string before = polex::read_file(ds);
  const auto r = run("review -d " + ds, "n\nn\nn\nn\nn\n");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("exhausted"), std::string::npos);
  EXPECT_EQ(polex::read_file(ds), before);
}

TEST_F(Workdir, ReviewResumeContinues) {
  const auto ds = copy("bob_extended.json");
  ASSERT_EQ(run("review -d " + ds, "y\n").status, 0);
  const auto r = run("review -d " + ds + " --resume", "n\n");
  ASSERT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("For {Work,Photo}"), std::string::npos) << r.out;
}

TEST_F(Workdir, EvalIsByteIdentical) {
  const std::string base = "eval -d " + fx("persona_home.json") + " --tests " + fx("persona_home_tests.json") +
                           " --seed 5 --report ";
  ASSERT_EQ(run(base + (dir / "a.json").string()).status, 0);
  ASSERT_EQ(run(base + (dir / "b.json").string()).status, 0);
  EXPECT_EQ(polex::read_file(dir / "a.json"), polex::read_file(dir / "b.json"));
  const auto text = run("eval -d " + fx("persona_home.json") + " --tests " + fx("persona_home_tests.json"));
  EXPECT_NE(text.out.find("1.000"), std::string::npos);
}

TEST_F(Workdir, GenTestsAndImport) {
  const auto out = (dir / "t.json").string();
  ASSERT_EQ(run("gen-tests -d " + fx("bob.json") + " --seed 3 --count 4 --out " + out).status, 0);
  EXPECT_EQ(polex::read_json_file(out)["tests"].size(), 4u);
  EXPECT_EQ(run("gen-tests -d " + fx("bob.json") + " --count 12").status, 2);

  const auto ds = (dir / "csv.json").string();
  ASSERT_EQ(run("import-csv --csv " + fx("bob.csv") + " --out " + ds).status, 0);
  EXPECT_EQ(polex::load_dataset(ds).targets().size(), 2u);
}
