#include <sys/wait.h>

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "mpf/app.hpp"
#include "mpf/error.hpp"

using namespace mpf;
using namespace mpf::app;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / ("mpf_cli_" + std::to_string(::getpid()) + "_" +
                                       std::to_string(counter()++));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

void write(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

std::string read(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Small cohort and light resampling so the whole pipeline runs in seconds.
std::string quick_config(const fs::path& out, const std::string& extra = "") {
  return R"({
  "paths": {"out": ")" + out.string() + R"("},
  "cohort": {"n_total": 400, "rho": 9.0},
  "evaluation": {"bootstrap_replicates": 1000, "permutation_iterations": 1000,
                 "noise_levels": [0.0, 0.1, 0.2], "noise_repeats": 1,
                 "interpretability": {"importance_repeats": 1}},
  "ablation": {"permutation_iterations": 1000})" +
         extra + "\n}\n";
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  std::vector<const char*> argv{"mpf"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("unknown config key is rejected before any output") {
  Workspace ws;
  const auto out = ws.dir / "out";
  const auto cfg = ws.dir / "bad.json";
  write(cfg, quick_config(out, R"(, "pipeline": {"fusion": {"alpha_nbb": 0.5}})"));
  for (const char* cmd : {"generate", "train", "evaluate", "ablate", "report"}) {
    const auto r = cli({cmd, "--config", cfg.string()});
    CHECK(r.code == kConfigError);
    CHECK(r.err.find("alpha_nbb") != std::string::npos);
  }
  CHECK_FALSE(fs::exists(out));

  write(cfg, R"({"cohort": {"seed": 4}})");
  CHECK(cli({"train", "--config", cfg.string()}).code == kConfigError);
  write(cfg, R"({"pipeline": {"fusion": {"alpha_nb": 0.5}}})");
  CHECK(cli({"train", "--config", cfg.string()}).code == kConfigError);
  write(cfg, "{not json");
  CHECK(cli({"train", "--config", cfg.string()}).code == kConfigError);
  CHECK(cli({"train", "--config", (ws.dir / "missing.json").string()}).code == kConfigError);
}

TEST_CASE("argument errors") {
  CHECK(cli({}).code == kConfigError);
  CHECK(cli({"fly"}).code == kConfigError);
  CHECK(cli({"train", "--seed", "abc"}).code == kConfigError);
  const auto help = cli({"--help"});
  CHECK(help.code == kOk);
  CHECK(help.out.find("evaluate") != std::string::npos);
}

TEST_CASE("generate, train, evaluate, ablate and report") {
  Workspace ws;
  const auto out = ws.dir / "out";
  const auto cfg = ws.dir / "run.json";
  write(cfg, quick_config(out));

  REQUIRE(cli({"generate", "--config", cfg.string()}).code == kOk);
  CHECK(fs::exists(out / "cohort.csv"));
  CHECK(count_lines(read(out / "cohort.csv")) == 401);
  const auto meta = Json::parse(read(out / "cohort.json"));
  CHECK(meta.contains("config_fingerprint"));
  CHECK(cli({"generate", "--config", cfg.string()}).code == kConfigError);
  CHECK(cli({"generate", "--config", cfg.string(), "--force"}).code == kOk);

  REQUIRE(cli({"train", "--config", cfg.string()}).code == kOk);
  const auto model = Json::parse(read(out / "model.json"));
  CHECK(model["schema"] == "mpf.model/1");
  CHECK(fs::exists(out / "train_summary.json"));

  REQUIRE(cli({"evaluate", "--config", cfg.string()}).code == kOk);
  const std::string report = read(out / "report.json");
  CHECK(Json::parse(report)["schema"] == "mpf.evaluation/1");
  CHECK(count_lines(read(out / "folds.csv")) == 6);

  REQUIRE(cli({"ablate", "--config", cfg.string()}).code == kOk);
  CHECK(Json::parse(read(out / "ablation.json"))["rows"].size() == 6);

  REQUIRE(cli({"report", "--config", cfg.string()}).code == kOk);
  const std::string summary = read(out / "summary.txt");
  CHECK(summary.find("grade:") != std::string::npos);
  CHECK(count_lines(read(out / "robustness.csv")) == 1 + 3);
  CHECK(count_lines(read(out / "threshold_curve.csv")) == 1 + 19);
  CHECK(count_lines(read(out / "ablation.csv")) == 1 + 6);

  // Rerunning report on the same inputs is idempotent; rerunning evaluate is byte-identical.
  REQUIRE(cli({"report", "--config", cfg.string()}).code == kOk);
  CHECK(read(out / "summary.txt") == summary);
  REQUIRE(cli({"evaluate", "--config", cfg.string()}).code == kOk);
  CHECK(read(out / "report.json") == report);

  // The output directory is not part of the experiment.
  const auto copy = ws.dir / "copy";
  REQUIRE(cli({"evaluate", "--config", cfg.string(), "--out", copy.string()}).code == kOk);
  CHECK(read(copy / "report.json") == report);

  // Seed override changes the run.
  const auto other = ws.dir / "other";
  REQUIRE(cli({"evaluate", "--config", cfg.string(), "--out", other.string(), "--seed", "5"}).code == kOk);
  CHECK(read(other / "report.json") != report);
}

TEST_CASE("data errors map to exit code 3") {
  Workspace ws;
  const auto out = ws.dir / "out";
  const auto cfg = ws.dir / "run.json";
  const auto csv = ws.dir / "data.csv";
  write(csv, "age,bmi,z13,z18,z21,label\n30,22,0,0,0,0\n31,abc,0,0,1,1\n");
  write(cfg, quick_config(out, R"(, "paths": {"out": ")" + out.string() + R"(", "data": ")" +
                                    csv.string() + R"("})"));
  const auto r = cli({"train", "--config", cfg.string()});
  CHECK(r.code == kDataError);
  CHECK(r.err.find("row 2") != std::string::npos);

  write(csv, "age,bmi,z13,z18,z21\n30,22,0,0,0\n");
  CHECK(cli({"train", "--config", cfg.string()}).code == kDataError);
  write(csv, "age,bmi,z13,z18,z21,label\n30,22,0,0,0,0\n31,23,0,0,1,0\n");
  CHECK(cli({"train", "--config", cfg.string()}).code == kDataError);

  // report without an evaluation
  CHECK(cli({"report", "--config", cfg.string()}).code == kDataError);
}

TEST_CASE("the installed binary returns the same exit codes") {
  const char* exe = std::getenv("MPF_CLI");
  if (!exe) {
    MESSAGE("MPF_CLI not set; skipping process-level checks");
    return;
  }
  Workspace ws;
  const auto cfg = ws.dir / "bad.json";
  write(cfg, R"({"surprise": 1})");
  const auto status = [&](const std::string& args) {
    const int raw = std::system((std::string(exe) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("train --config " + cfg.string()) == kConfigError);
  CHECK(status("--help") == kOk);
  CHECK(status("") == kConfigError);
}
