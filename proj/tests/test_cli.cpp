#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "run_store.hpp"

namespace fs = std::filesystem;
using namespace sharplab::cli;

namespace {

struct Proc {
  int status = -1;
  std::string out;
};

Proc run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + SHARPLAB_CLI_PATH + " " + args + " 2>&1";
  Proc p;
  FILE* f = popen(cmd.c_str(), "r");
  if (!f) return p;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, f)) > 0) p.out.append(buf, n);
  const int st = pclose(f);
  p.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return p;
}

class Scratch : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sharplab_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

}  // namespace

TEST(RunStore, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(RunStore, Formatting) {
  EXPECT_EQ(fmt(0.1), "0.10000000000000001");
  EXPECT_EQ(fmt(2.0), "2");
  EXPECT_EQ(fmt(std::nan("")), "nan");
}

TEST(RunStore, ParseConfig) {
  const auto c = parse_config("# header\n dim = 3\n--budget=50  # trailing\n\nspacing=linear-in-ratio\n");
  EXPECT_EQ(c.at("dim"), "3");
  EXPECT_EQ(c.at("budget"), "50");
  EXPECT_EQ(c.at("spacing"), "linear-in-ratio");
  EXPECT_THROW(parse_config("novalue\n"), std::invalid_argument);
  EXPECT_THROW(parse_config("a=1\na=2\n"), std::invalid_argument);
}

TEST(RunStore, ManifestRoundTrip) {
  RunManifest m;
  m.command = "identity";
  m.config = {{"dim", "2"}, {"ab", "2 2"}};
  m.version = "0.1.0";
  m.timestamp = "20260101T000000Z";
  m.input_hashes = {{"cfg.txt", sha256_hex("x")}};
  m.outputs = {"sweep.csv", "summary.csv"};
  m.summary = {{"gap", "0.01"}};
  const RunManifest back = manifest_from_json(to_json(m));
  EXPECT_EQ(back.command, m.command);
  EXPECT_EQ(back.config, m.config);
  EXPECT_EQ(back.version, m.version);
  EXPECT_EQ(back.timestamp, m.timestamp);
  EXPECT_EQ(back.input_hashes, m.input_hashes);
  EXPECT_EQ(back.outputs, m.outputs);
  EXPECT_EQ(back.summary, m.summary);
  EXPECT_EQ(to_json(back), to_json(m));
}

TEST(RunStore, PlotData) {
  EXPECT_THROW(plot_csv({"x"}, {"abscissa"}, {}), std::invalid_argument);
  EXPECT_THROW(plot_csv({"x", "y"}, {"a", "b"}, {{1.0}}), std::invalid_argument);
  EXPECT_EQ(plot_csv({"x", "y"}, {"a", "b"}, {{1.0, 2.5}}), "# x: a\n# y: b\nx,y\n1,2.5\n");
}

TEST_F(Scratch, PersistIsAtomicAndListsOutputs) {
  const auto written = persist_run(dir_ / "run", RunManifest{}, {{"a.csv", "x\n1\n"}});
  ASSERT_EQ(written.size(), 2u);
  EXPECT_TRUE(fs::exists(dir_ / "run" / "a.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "run" / "a.csv.tmp"));
  const RunManifest m = manifest_from_json(read_file(dir_ / "run" / "manifest.json"));
  ASSERT_EQ(m.outputs.size(), 1u);
  EXPECT_EQ(m.outputs[0], "a.csv");
  // Empty output set: manifest only.
  persist_run(dir_ / "empty", RunManifest{}, {});
  EXPECT_TRUE(fs::exists(dir_ / "empty" / "manifest.json"));
  EXPECT_EQ(std::distance(fs::directory_iterator(dir_ / "empty"), fs::directory_iterator{}), 1);
}

TEST(Cli, HelpListsEverySubcommand) {
  const Proc p = run_cli("--help");
  EXPECT_EQ(p.status, 0);
  for (const char* s : {"constants", "eval", "norms", "sequence", "sweep-at", "sweep-ata", "search-mt", "search-a",
                        "identity", "report"}) {
    EXPECT_NE(p.out.find(s), std::string::npos) << s;
  }
}

TEST_F(Scratch, ExitCodes) {
  EXPECT_EQ(run_cli("constants --dim notanumber --out " + path("a")).status, 2);
  EXPECT_EQ(run_cli("nosuchcommand").status, 2);
  EXPECT_EQ(run_cli("sequence moser --dim 2 --beta 2 --out " + path("b")).status, 3);
  EXPECT_EQ(run_cli("sweep-at --q-max 1.5 --out " + path("c")).status, 3);
  std::ofstream(path("bad.txt")) << "radial-profile v1 N=2\n0 1\n-1 0\n";
  EXPECT_EQ(run_cli("norms --profile " + path("bad.txt") + " --out " + path("d")).status, 3);
  EXPECT_EQ(run_cli("norms --profile " + path("missing.txt") + " --out " + path("e")).status, 4);
}

TEST_F(Scratch, ConstantsPrintsAlphaAndOmega) {
  const Proc p = run_cli("constants --dim 2 --out " + path("c"));
  EXPECT_EQ(p.status, 0);
  auto value = [&](const std::string& key) {
    const auto at = p.out.find(key + " = ");
    return at == std::string::npos ? 0.0 : std::stod(p.out.substr(at + key.size() + 3));
  };
  EXPECT_NEAR(value("alpha_2"), 4 * M_PI, 1e-12 * 4 * M_PI) << p.out;
  EXPECT_NEAR(value("omega_1"), 2 * M_PI, 1e-12 * 2 * M_PI) << p.out;
  const RunManifest m = manifest_from_json(read_file(path("c") + "/manifest.json"));
  EXPECT_TRUE(m.outputs.empty());
}

TEST_F(Scratch, SequenceExportFeedsEvalAndNorms) {
  ASSERT_EQ(run_cli("sequence moser --n 100 --dim 2 --beta 0 --check-norms --out " + path("s")).status, 0);
  const Proc n = run_cli("norms --profile " + path("s") + "/profile.txt --out " + path("n"));
  EXPECT_EQ(n.status, 0);
  EXPECT_NE(n.out.find("gradient_norm_N = 1"), std::string::npos) << n.out;
  const RunManifest m = manifest_from_json(read_file(path("n") + "/manifest.json"));
  ASSERT_EQ(m.input_hashes.size(), 1u);
  EXPECT_EQ(m.input_hashes.begin()->second, sha256_hex(read_file(path("s") + "/profile.txt")));
  EXPECT_EQ(run_cli("eval --profile " + path("s") + "/profile.txt --alpha-ratio 0.5 --out " + path("e")).status, 0);
}

TEST_F(Scratch, SweepIsByteReproducible) {
  const std::string args = "sweep-at --dim 2 --points 6 --budget 40 --seed 7 --fit --plot-data --out ";
  ASSERT_EQ(run_cli(args + path("r1")).status, 0);
  ASSERT_EQ(run_cli(args + path("r2")).status, 0);
  for (const char* f : {"sweep.csv", "ratefit_plot.csv"}) {
    EXPECT_EQ(read_file(path("r1") + "/" + f), read_file(path("r2") + "/" + f)) << f;
  }
  const RunManifest m1 = manifest_from_json(read_file(path("r1") + "/manifest.json"));
  RunManifest m2 = manifest_from_json(read_file(path("r2") + "/manifest.json"));
  m2.timestamp = m1.timestamp;
  EXPECT_EQ(to_json(m1), to_json(m2));
  for (const auto& o : m1.outputs) EXPECT_TRUE(fs::exists(path("r1") + "/" + o)) << o;
  std::istringstream csv(read_file(path("r1") + "/sweep.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "N,beta,a,b,alpha,alpha_ratio,estimate,factor,product,gap_x");
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 9);
  }
  EXPECT_EQ(rows, 6);
}

TEST_F(Scratch, IdentityWritesSweepAndSummary) {
  const Proc p = run_cli("identity --regime tm --ab 2 2 --points 4 --budget 60 --out " + path("i"));
  ASSERT_EQ(p.status, 0) << p.out;
  const RunManifest m = manifest_from_json(read_file(path("i") + "/manifest.json"));
  EXPECT_EQ(m.outputs, (std::vector<std::string>{"sweep.csv", "summary.csv"}));
  EXPECT_EQ(m.config.at("ab"), "2 2");
  EXPECT_EQ(m.config.at("regime"), "tm");
}

TEST_F(Scratch, FlagsBeatConfigBeatDefaults) {
  std::ofstream(path("cfg.txt")) << "dim = 3\nbudget = 30\npoints = 4\n";
  ASSERT_EQ(run_cli("sweep-at --config " + path("cfg.txt") + " --dim 2 --out " + path("k")).status, 0);
  const RunManifest m = manifest_from_json(read_file(path("k") + "/manifest.json"));
  EXPECT_EQ(m.config.at("dim"), "2");
  EXPECT_EQ(m.config.at("budget"), "30");
  EXPECT_EQ(m.config.at("points"), "4");
  EXPECT_EQ(m.config.at("spacing"), "geometric-in-gap");
  EXPECT_EQ(m.input_hashes.at(path("cfg.txt")), sha256_hex(read_file(path("cfg.txt"))));
  std::ofstream(path("bad.txt")) << "nokey\n";
  EXPECT_EQ(run_cli("sweep-at --config " + path("bad.txt") + " --out " + path("b")).status, 2);
}

TEST_F(Scratch, DefaultDirectoryUnderResultsRoot) {
  const Proc p = run_cli("constants --dim 3", "SHARPLAB_RESULTS_DIR=" + path("root"));
  ASSERT_EQ(p.status, 0);
  int runs = 0;
  for (const auto& e : fs::directory_iterator(path("root"))) {
    ++runs;
    EXPECT_NE(e.path().filename().string().find("-constants"), std::string::npos);
    EXPECT_TRUE(fs::exists(e.path() / "manifest.json"));
  }
  EXPECT_EQ(runs, 1);
  const Proc r = run_cli("report --dir " + path("root") + " --out " + path("rep"));
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(read_file(path("rep") + "/report.csv").find(",constants,"), std::string::npos);
}
