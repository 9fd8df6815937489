#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "app.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using shgcn::cli::run_app;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_app(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("shgcn_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& body) const {
    std::ofstream(dir_ / name) << body;
    return dir_ / name;
  }
  json report(const fs::path& out) const {
    std::ifstream in(out / "report.json");
    return json::parse(in);
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, RunLinkPredictionSeeds) {
  const auto out = dir_ / "lp";
  const auto r = call({"run", "--task", "lp", "--model", "shgcn", "--synthetic", "tree:3,3", "--seeds", "0,1,2",
                       "--epochs", "30", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = report(out);
  ASSERT_EQ(rep["per_seed"].size(), 3u);
  for (const auto& s : rep["per_seed"]) EXPECT_TRUE(s["test"].contains("auc"));
  EXPECT_TRUE(rep["summary"]["auc"].contains("mean"));
  EXPECT_TRUE(rep["summary"]["auc"].contains("std"));
  EXPECT_TRUE(rep.contains("timing"));
  EXPECT_TRUE(fs::exists(out / "report.txt"));
  EXPECT_NE(r.out.find("auc"), std::string::npos);
}

TEST_F(Cli, ReportEchoesDefaults) {
  const auto out = dir_ / "o";
  ASSERT_EQ(call({"run", "--synthetic", "cycle:12", "--epochs", "3", "--out", out.string()}).code, 0);
  const json cfg = report(out)["config"];
  EXPECT_EQ(cfg["task"], "lp");
  EXPECT_EQ(cfg["model"], "shgcn");
  EXPECT_EQ(cfg["layers"], 2);
  EXPECT_EQ(cfg["dim"], 16);
  EXPECT_EQ(cfg["activation"], "relu");
  EXPECT_EQ(cfg["lr"], 0.01);
  EXPECT_EQ(cfg["patience"], 100);
  EXPECT_EQ(cfg["precision"], "double");
  EXPECT_EQ(cfg["ratios"], json({0.85, 0.05, 0.1}));
  EXPECT_EQ(cfg["fd_r"], 2.0);
}

TEST_F(Cli, RunNodeClassificationFromFiles) {
  std::string edges, feats, labels;
  for (int i = 0; i < 20; ++i) {
    if (i + 1 < 20 && i != 9) edges += std::to_string(i) + "," + std::to_string(i + 1) + "\n";
    feats += std::to_string(i < 10 ? 1.0 : -1.0) + "," + std::to_string(0.1 * i) + "\n";
    labels += std::to_string(i < 10 ? 0 : 1) + "\n";
  }
  const auto out = dir_ / "nc";
  const auto r = call({"run", "--task", "nc", "--model", "gcn", "--edges", write("e.csv", edges).string(), "--features",
                       write("x.csv", feats).string(), "--labels", write("y.csv", labels).string(), "--epochs", "50",
                       "--ratios", "0.6,0.2,0.2", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json test = report(out)["per_seed"][0]["test"];
  EXPECT_TRUE(test.contains("accuracy"));
  EXPECT_TRUE(test.contains("f1"));
  EXPECT_GE(test["accuracy"].get<double>(), 0.75);
}

TEST_F(Cli, MissingFeatureFileIsUsageErrorWithoutOutput) {
  const auto out = dir_ / "never";
  const auto r = call({"run", "--task", "nc", "--edges", write("e.txt", "0 1\n").string(), "--features",
                       (dir_ / "missing.csv").string(), "--out", out.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());
  EXPECT_TRUE(r.out.empty());
  EXPECT_FALSE(fs::exists(out));
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(call({}).code, 2);
  EXPECT_EQ(call({"frobnicate"}).code, 2);
  EXPECT_EQ(call({"run", "--synthetic", "tree:2,3", "--no-such-flag"}).code, 2);
  EXPECT_EQ(call({"run", "--synthetic", "tree:2,3", "--precision", "quad"}).code, 2);
  EXPECT_EQ(call({"run", "--synthetic", "tree:2,3", "--ratios", "0.5,0.1,0.1"}).code, 2);
  EXPECT_EQ(call({"run", "--synthetic", "hexagon:4"}).code, 2);
  EXPECT_EQ(call({"run"}).code, 2);
  EXPECT_EQ(call({"bench", "--models", "shgcn", "--synthetic", "tree:2,3"}).code, 2);
  EXPECT_EQ(call({"run", "--edges", write("bad.txt", "0 1\n1 x\n").string()}).code, 2);
  // Output directory under a regular file: the run succeeds, writing fails.
  const auto blocker = write("file", "x");
  const auto r = call({"run", "--synthetic", "cycle:8", "--epochs", "2", "--out", (blocker / "sub").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("runtime error"), std::string::npos);
}

TEST_F(Cli, ConfigFilePrecedence) {
  const auto cfg = write("exp.cfg", "# experiment\ntask = lp\nmodel = gcn\nsynthetic = cycle:10\nepochs = 4\nlr=0.05\nfd_r = 3\n");
  const auto out = dir_ / "c";
  ASSERT_EQ(call({"run", "--config", cfg.string(), "--epochs", "6", "--out", out.string()}).code, 0);
  const json c = report(out)["config"];
  EXPECT_EQ(c["model"], "gcn");
  EXPECT_EQ(c["epochs"], 6);
  EXPECT_EQ(c["lr"], 0.05);
  EXPECT_EQ(c["fd_r"], 3.0);
  EXPECT_EQ(call({"run", "--config", write("broken.cfg", "epochs 4\n").string()}).code, 2);
  EXPECT_EQ(call({"run", "--config", (dir_ / "absent.cfg").string()}).code, 2);
}

TEST_F(Cli, ReportsReproducibleFromSameConfig) {
  const auto cfg = write("r.cfg", "synthetic = tree:2,4\nseeds = 0,3\nepochs = 25\nmodel = agg0\n");
  const auto a = dir_ / "a", b = dir_ / "b";
  ASSERT_EQ(call({"run", "--config", cfg.string(), "--out", a.string()}).code, 0);
  ASSERT_EQ(call({"run", "--config", cfg.string(), "--out", b.string(), "--threads", "2"}).code, 0);
  json ra = report(a), rb = report(b);
  EXPECT_EQ(ra["summary"], rb["summary"]);
  ASSERT_EQ(ra["per_seed"].size(), rb["per_seed"].size());
  for (std::size_t i = 0; i < ra["per_seed"].size(); ++i) {
    for (const char* key : {"test", "best_epoch", "best_val_metric", "final_train_loss", "curvatures"}) {
      EXPECT_EQ(ra["per_seed"][i][key], rb["per_seed"][i][key]) << key;
    }
  }
}

TEST_F(Cli, OutputDirectoryFromEnvironment) {
  const auto out = dir_ / "env";
  ::setenv("SHGCN_OUT_DIR", out.string().c_str(), 1);
  const auto r = call({"stability"});
  ::unsetenv("SHGCN_OUT_DIR");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(fs::exists(out / "thresholds.csv"));
  EXPECT_TRUE(fs::exists(out / "report.json"));
}

TEST_F(Cli, Stability) {
  const auto r = call({"stability"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("mode,epsilon,max_k,radius,threshold"), std::string::npos);
  EXPECT_NE(r.out.find("float16"), std::string::npos);
  EXPECT_NE(r.out.find("float64"), std::string::npos);
}

TEST_F(Cli, Hyperbolicity) {
  const auto t = dir_ / "t";
  ASSERT_EQ(call({"hyperbolicity", "--synthetic", "tree:2,5", "--out", t.string()}).code, 0);
  EXPECT_EQ(report(t)["summary"]["delta"], 0.0);
  const auto c = dir_ / "c";
  ASSERT_EQ(call({"hyperbolicity", "--synthetic", "cycle:4", "--out", c.string()}).code, 0);
  EXPECT_EQ(report(c)["summary"]["delta"], 1.0);
  const auto dis = call({"hyperbolicity", "--edges", write("d.txt", "0 1\n2 3\n").string()});
  EXPECT_EQ(dis.code, 2);
  const auto cap = call({"hyperbolicity", "--synthetic", "tree:3,5", "--max-nodes", "100"});
  EXPECT_EQ(cap.code, 2);
  EXPECT_NE(cap.err.find("max-nodes"), std::string::npos);
}

TEST_F(Cli, BenchReportsSpeedups) {
  const auto out = dir_ / "b";
  const auto r = call({"bench", "--models", "shgcn,gcn", "--synthetic", "tree:2,4", "--epochs", "12", "--runs", "2",
                       "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = report(out);
  const json sp = rep["summary"]["speedups"];
  ASSERT_EQ(sp.size(), 1u);
  EXPECT_EQ(sp[0]["subject"], "shgcn");
  EXPECT_EQ(sp[0]["baseline"], "gcn");
  const double ratio = rep["per_seed"][1]["epoch_seconds"]["mean"].get<double>() /
                       rep["per_seed"][0]["epoch_seconds"]["mean"].get<double>();
  EXPECT_DOUBLE_EQ(sp[0]["speedup"].get<double>(), ratio);
  EXPECT_LE(sp[0]["lower_95"].get<double>(), sp[0]["speedup"].get<double>());
  EXPECT_NE(r.out.find("Speedup"), std::string::npos);
}

// Same model twice: the ratio reflects only timing noise. On this class of
// machine 20 repetitions of this exact command stayed within [0.90, 1.06].
TEST_F(Cli, BenchSelfComparisonWithinNoiseBand) {
  const auto out = dir_ / "self";
  const auto r = call({"bench", "--models", "shgcn,shgcn", "--synthetic", "tree:3,5", "--epochs", "50", "--runs", "5",
                       "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const double s = report(out)["summary"]["speedups"][0]["speedup"].get<double>();
  EXPECT_NEAR(s, 1.0, 0.10);
}
