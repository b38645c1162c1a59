#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "jastrow/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result run(const std::string& args, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + JASTROW_LAB_BIN + std::string(" ") + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("jastrow_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) + "_" +
           std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  fs::path dir;
};

}  // namespace

TEST_F(Cli, ZooListsAllModels) {
  Result r = run("zoo list --format json");
  ASSERT_EQ(r.code, 0) << r.out;
  json j = json::parse(r.out);
  EXPECT_EQ(j["schema"], "jastrow-lab/1");
  EXPECT_GE(j["result"].size(), 13u);
}

TEST_F(Cli, ZooRingFilter) {
  Result r = run("zoo list --geometry ring --format json");
  ASSERT_EQ(r.code, 0);
  std::vector<std::string> names;
  json list = json::parse(r.out)["result"];
  for (const auto& e : list) names.push_back(e["name"]);
  EXPECT_EQ(names, (std::vector<std::string>{"sutherland", "sutherland-trig-trap"}));
}

TEST_F(Cli, ZooShowRoundTripsEveryEntry) {
  json list = json::parse(run("zoo list --format json").out)["result"];
  for (const auto& e : list) {
    Result r = run("zoo show --model " + e["name"].get<std::string>() + " --format json");
    ASSERT_EQ(r.code, 0) << r.out;
    json m = json::parse(r.out)["result"];
    for (const char* key : {"name", "params", "N", "zeta", "geometry", "e0", "citations"}) {
      EXPECT_TRUE(m.contains(key)) << key;
    }
    EXPECT_EQ(m["name"], e["name"]);
    for (const auto& p : e["params"]) EXPECT_EQ(m["params"][p["name"].get<std::string>()], p["default"]);
  }
}

TEST_F(Cli, VerifyLocalEnergyCoulombExample) {
  Result r = run("verify local-energy --model lieb-liniger-coulomb --params g=1,omega=1 --n 3 --samples 2000 --seed 7 "
              "--format json");
  ASSERT_EQ(r.code, 0) << r.out;
  json res = json::parse(r.out)["result"];
  EXPECT_NEAR(res["mean"].get<double>(), -2.5, 1e-10);
  EXPECT_EQ(res["samples"], 2000);
  EXPECT_EQ(res["seed"], 7);
  EXPECT_TRUE(res["pass"].get<bool>());
}

TEST_F(Cli, DroppedThreeBodyFails) {
  EXPECT_EQ(run("verify local-energy --model toda-bessel --n 3 --drop-term three-body --samples 200").code, 1);
  EXPECT_EQ(run("verify local-energy --model lieb-liniger-coulomb --n 3 --drop-term cross --samples 200").code, 1);
}

TEST_F(Cli, DroppingAbsentTermIsInvalid) {
  EXPECT_EQ(run("verify local-energy --model lieb-liniger --drop-term cross").code, 2);
  EXPECT_EQ(run("verify local-energy --model lieb-liniger --drop-term sideways").code, 2);
}

TEST_F(Cli, CuspExample) {
  Result r = run("verify cusp --model lieb-liniger --params g=1.7 --format json");
  ASSERT_EQ(r.code, 0) << r.out;
  json res = json::parse(r.out)["result"];
  EXPECT_NEAR(res["jump"].get<double>(), 3.4, 1e-10);
  EXPECT_EQ(run("verify cusp --model calogero-trapped").code, 2);  // no delta term
}

TEST_F(Cli, InvalidInputExitsTwo) {
  EXPECT_EQ(run("verify local-energy --model nope").code, 2);
  EXPECT_EQ(run("verify local-energy --model calogero --params lambda=-1").code, 2);
  EXPECT_EQ(run("verify local-energy --model calogero --params colour=3").code, 2);
  EXPECT_EQ(run("verify local-energy --model calogero --params lambda").code, 2);
  EXPECT_EQ(run("verify local-energy --model calogero --bogus").code, 2);
  EXPECT_EQ(run("verify local-energy").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("--format xml zoo list").code, 2);
  EXPECT_EQ(run("algebra commute --n 5").code, 2);
  EXPECT_EQ(run("algebra commute --family trig").code, 2);
  EXPECT_EQ(run("--hbar -1 verify local-energy --model calogero").code, 2);
}

TEST_F(Cli, AlgebraCommuteExamples) {
  Result r = run("algebra commute --family rational --n 3 --orders 2,3");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("0 (exact)"), std::string::npos);
  Result t = run("algebra commute --orders 1,1");
  EXPECT_EQ(t.code, 0);
  EXPECT_NE(t.out.find("0 (exact)"), std::string::npos);
}

TEST_F(Cli, ProjectI2RendersHamiltonian) {
  Result r = run("algebra project-i2 --family rational --n 3");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("pair 12      (-2*hbar*lambda + 2*lambda^2)/((x1-x2)^2)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("three-body 123 0"), std::string::npos);
  EXPECT_NE(r.out.find("equals the sum above: yes"), std::string::npos);
}

TEST_F(Cli, AlgebraBudgetExitsThree) {
  EXPECT_EQ(run("algebra commute --n 4 --orders 2,3 --max-terms 50").code, 3);
}

TEST_F(Cli, LatticeExamples) {
  EXPECT_EQ(run("lattice axioms --sites 6 --n 3").code, 0);
  Result r = run("lattice overlap --model quadratic-pair --n 2 --sites 32 --format json");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_GE(json::parse(r.out)["result"]["overlap"].get<double>(), 0.999);
  EXPECT_EQ(run("lattice axioms --sites 40 --n 4").code, 3);
  EXPECT_EQ(run("lattice overlap --model calogero-trapped --sites 16").code, 2);
}

TEST_F(Cli, ExportWritesCoordinateFile) {
  fs::path m = dir / "m.txt";
  Result r = run("lattice export --operator exchange --sites 4 --n 2 --matrix " + m.string());
  ASSERT_EQ(r.code, 0) << r.out;
  std::istringstream is(slurp(m));
  int lines = 0;
  for (std::string l; std::getline(is, l);) ++lines;
  EXPECT_EQ(lines, 16);
}

TEST_F(Cli, ConfigFileAndFlagPrecedence) {
  fs::path cfg = dir / "run.cfg";
  std::ofstream(cfg) << "# comment\nmodel = lieb-liniger-coulomb\nparams = g=1,omega=1\nn = 3\nsamples = 100\n"
                        "seed = 7\nformat = json\n";
  Result r = run("--config " + cfg.string() + " verify local-energy --n 4");
  ASSERT_EQ(r.code, 0) << r.out;
  json res = json::parse(r.out)["result"];
  EXPECT_EQ(res["N"], 4);  // the flag wins
  EXPECT_EQ(res["samples"], 100);
  EXPECT_NEAR(res["mean"].get<double>(), 4 * 0.5 - 60.0 / 6.0, 1e-9);

  std::ofstream(dir / "bad.cfg") << "model = calogero\nunknown_key = 1\n";
  EXPECT_EQ(run("--config " + (dir / "bad.cfg").string() + " verify local-energy").code, 2);
  std::ofstream(dir / "bad2.cfg") << "samples = many\nmodel = calogero\n";
  EXPECT_EQ(run("--config " + (dir / "bad2.cfg").string() + " verify local-energy").code, 2);
  std::ofstream(dir / "bad3.cfg") << "just words\n";
  EXPECT_EQ(run("--config " + (dir / "bad3.cfg").string() + " zoo list").code, 2);
  EXPECT_EQ(run("--config " + (dir / "missing.cfg").string() + " zoo list").code, 2);
}

TEST_F(Cli, ReportsWrittenAtomically) {
  fs::path out = dir / "sub" / "report.json", csv = dir / "sub" / "eloc.csv";
  Result r = run("verify local-energy --model sutherland --n 3 --samples 20 --out " + out.string() + " --csv " +
              csv.string());
  ASSERT_EQ(r.code, 0) << r.out;
  json j = json::parse(slurp(out));
  EXPECT_EQ(j["command"], "verify local-energy");
  EXPECT_TRUE(j["pass"].get<bool>());
  std::string table = slurp(csv);
  EXPECT_EQ(table.substr(0, table.find('\n')), "index,x1,x2,x3,e_loc");
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 21);
  for (const auto& e : fs::directory_iterator(dir / "sub")) {
    EXPECT_EQ(e.path().filename().string().find(".tmp."), std::string::npos);
  }
  // a failing check still writes its report
  fs::path bad = dir / "bad.json";
  EXPECT_EQ(run("verify local-energy --model toda-bessel --drop-term three-body --samples 20 --out " + bad.string()).code,
            1);
  EXPECT_FALSE(json::parse(slurp(bad))["pass"].get<bool>());
}

TEST_F(Cli, DeterministicAcrossThreadCounts) {
  std::vector<std::string> cmds{"verify local-energy --model hybrid-lr-ll --n 5 --samples 300 --seed 11",
                                "verify oracle --model sutherland-trig-trap --n 4",
                                "algebra commute --n 3 --orders 2,3 --orders 1,2",
                                "lattice axioms --sites 5 --n 3 --zeta -1"};
  for (const auto& c : cmds) {
    json a = json::parse(run("--format json --threads 1 " + c).out);
    json b = json::parse(run("--format json --threads 4 " + c).out);
    json e = json::parse(run("--format json " + c, "JASTROW_LAB_THREADS=3").out);
    EXPECT_EQ(jastrow::report::without_timestamp(a).dump(), jastrow::report::without_timestamp(b).dump()) << c;
    EXPECT_EQ(jastrow::report::without_timestamp(a).dump(), jastrow::report::without_timestamp(e).dump()) << c;
  }
}

TEST_F(Cli, CsvOutput) {
  Result r = run("--format csv zoo list");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "name,geometry,params,e0");
  EXPECT_EQ(run("--format csv algebra commute --orders 1,1").code, 2);
}
