#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Run vaep_cli(const std::string& args, const fs::path& scratch) {
  const auto out = scratch / "stdout.txt", err = scratch / "stderr.txt";
  const std::string cmd = std::string(VAEP_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

// synth -> dataset -> train x2 -> eval -> value -> rate -> report, all under `dir`.
void pipeline(const fs::path& dir, const std::string& jobs) {
  const auto d = dir.string();
  const auto ok = [&](const std::string& args) {
    const Run r = vaep_cli(jobs + " " + args, dir);
    INFO(args << "\n" << r.err);
    REQUIRE(r.code == 0);
  };
  ok("synth --seed 7 --games 6 --teams 3 --actions 700 --out " + d + "/games");
  ok("dataset --in " + d + "/games --w 3 --k 10 --out " + d + "/train.csv --test-out " + d + "/test.csv");
  ok("train --features " + d + "/train.csv --target scores --seed 7 --n-trees 6 --min-leaf 30 --out " + d +
     "/ms.bin");
  ok("train --features " + d + "/train.csv --target concedes --seed 7 --n-trees 6 --min-leaf 30 --out " + d +
     "/mc.bin");
  ok("eval --model " + d + "/ms.bin --features " + d + "/test.csv --report " + d + "/report.json --svg " + d +
     "/cal.svg");
  ok("value --game " + d + "/games --model-scores " + d + "/ms.bin --model-concedes " + d + "/mc.bin --out " + d +
     "/values");
  ok("rate --values " + d + "/values --meta " + d + "/games/meta.csv --min-minutes 100 --out " + d + "/rate");
  ok("report --ratings " + d + "/rate --eval-report " + d + "/report.json --top 10 --out " + d + "/report");
}

std::map<std::string, std::string> artifacts(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), dir).string();
    if (rel == "stdout.txt" || rel == "stderr.txt") continue;
    out[rel] = slurp(e.path());
  }
  return out;
}

}  // namespace

TEST_CASE("cli: help lists every flag") {
  testsupport::TempDir dir("cli_help");
  const Run r = vaep_cli("--help", dir.path());
  CHECK(r.code == 0);
  for (const char* flag : {"--in", "--mapping", "--strict", "--out", "--seed", "--games", "--w", "--k", "--features",
                           "--target", "--learner", "--model", "--report", "--svg", "--game", "--model-scores",
                           "--model-concedes", "--values", "--meta", "--min-minutes", "--jobs", "--help",
                           "--n-trees", "--ma-window", "--config"}) {
    const bool listed = r.out.find(std::string(flag) + " ") != std::string::npos ||
                        r.out.find(std::string(flag) + ",") != std::string::npos;
    CHECK_MESSAGE(listed, flag);
  }
  for (const char* sub : {"convert", "synth", "dataset", "train", "eval", "value", "rate", "report"}) {
    CHECK_MESSAGE(r.out.find(sub) != std::string::npos, sub);
  }
}

TEST_CASE("cli: end-to-end pipeline is byte-identical across runs and thread counts") {
  testsupport::TempDir a("cli_a"), b("cli_b");
  pipeline(a.path(), "--jobs 1");
  pipeline(b.path(), "--jobs 3");
  const auto fa = artifacts(a.path()), fb = artifacts(b.path());
  CHECK(fa.size() == fb.size());
  for (const auto& [name, bytes] : fa) {
    REQUIRE_MESSAGE(fb.count(name), name);
    CHECK_MESSAGE(fb.at(name) == bytes, name);
  }
  for (const char* must : {"ms.bin", "report.json", "cal.svg", "values/g0001.values.csv", "rate/leaderboard.csv",
                           "rate/profiles.json", "report/calibration.svg", "report/summary.md"}) {
    CHECK_MESSAGE(fa.count(must), must);
  }
  CHECK(fa.at("cal.svg").find("<svg") != std::string::npos);
}

TEST_CASE("cli: missing input exits 2 and names the path") {
  testsupport::TempDir dir("cli_missing");
  const Run r = vaep_cli("eval --model /nonexistent/ms.bin --features nowhere.csv", dir.path());
  CHECK(r.code == 2);
  const auto j = nlohmann::json::parse(r.err);
  CHECK(j["error"]["module"] == "io");
  CHECK(j["error"]["code"] == "MissingFile");
  CHECK(r.err.find("/nonexistent/ms.bin") != std::string::npos);
}

TEST_CASE("cli: schema mismatch exits 3") {
  testsupport::TempDir dir("cli_schema");
  const auto d = dir.path().string();
  REQUIRE(vaep_cli("synth --seed 1 --games 2 --actions 400 --out " + d + "/g", dir.path()).code == 0);
  REQUIRE(vaep_cli("dataset --in " + d + "/g --w 3 --out " + d + "/w3.csv", dir.path()).code == 0);
  REQUIRE(vaep_cli("dataset --in " + d + "/g --w 2 --out " + d + "/w2.csv", dir.path()).code == 0);
  REQUIRE(vaep_cli("train --features " + d + "/w3.csv --n-trees 2 --out " + d + "/m.bin", dir.path()).code == 0);
  const Run r = vaep_cli("eval --model " + d + "/m.bin --features " + d + "/w2.csv", dir.path());
  CHECK(r.code == 3);
  CHECK(r.err.find("SchemaMismatch") != std::string::npos);
  CHECK_FALSE(fs::exists(d + "/report.json"));
}

TEST_CASE("cli: usage errors exit 2 and leave no partial outputs") {
  testsupport::TempDir dir("cli_usage");
  const Run r = vaep_cli("train --features x.csv --target goals --out m.bin", dir.path());
  CHECK(r.code == 2);
  CHECK(r.err.find("\"error\"") != std::string::npos);
  CHECK(vaep_cli("frobnicate", dir.path()).code == 2);
}

TEST_CASE("cli: convert with the built-in mapping") {
  testsupport::TempDir dir("cli_convert");
  {
    std::ofstream ev(dir / "events.jsonl");
    ev << R"({"game_id":"m1","ts":0,"type":"pass","team":"A","player":"a1","x":50,"y":50,"end_x":60,"end_y":50,"outcome":"complete"})"
       << '\n'
       << R"({"game_id":"m1","ts":3,"type":"ball_recovery","team":"B","player":"b1","x":40,"y":50})" << '\n'
       << R"({"game_id":"m1","ts":5,"type":"shot","team":"A","player":"a2","x":90,"y":50,"outcome":"goal"})" << '\n';
  }
  const auto d = dir.path().string();
  Run r = vaep_cli("convert --in " + d + "/events.jsonl --out " + d + "/m1.spadl.csv", dir.path());
  CHECK(r.code == 0);
  const auto csv = slurp(dir / "m1.spadl.csv");
  CHECK(csv.find("m1,0,1,0,0,52.5,34,63,34,a1,A,pass,foot,success") != std::string::npos);
  CHECK(fs::exists(dir / "m1.meta.json"));

  r = vaep_cli("convert --strict --in " + d + "/events.jsonl --out " + d + "/strict.spadl.csv", dir.path());
  CHECK(r.code == 2);
  CHECK(r.err.find("UnmappedType") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "strict.spadl.csv"));
}

TEST_CASE("cli: config file supplies options, flags win") {
  testsupport::TempDir dir("cli_config");
  const auto d = dir.path().string();
  {
    std::ofstream cfg(dir / "run.toml");
    cfg << "[synth]\nseed = 3\ngames = 2\nactions = 300\nout = \"" << d << "/from_config\"\n";
  }
  CHECK(vaep_cli("--config " + d + "/run.toml synth", dir.path()).code == 0);
  CHECK(fs::exists(dir / "from_config/g0002.spadl.csv"));
  CHECK(vaep_cli("--config " + d + "/run.toml synth --games 1 --out " + d + "/flags", dir.path()).code == 0);
  CHECK(fs::exists(dir / "flags/g0001.spadl.csv"));
  CHECK_FALSE(fs::exists(dir / "flags/g0002.spadl.csv"));
}
