#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bearguard/cli.hpp"

namespace fs = std::filesystem;
using bearguard::run_cli;
using nlohmann::ordered_json;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("bearguard_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary);
  f << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path write_basic_scenario(const fs::path& dir, std::uint64_t seed,
                              bool with_human = false) {
  ordered_json scenario;
  scenario["duration_s"] = 30.0;
  scenario["detector"] = {{"true_positive_rate", 1.0},
                          {"seed", seed},
                          {"confidence",
                           {{"Bear", {{"mean", 0.9}, {"spread", 0.05}}},
                            {"Human", {{"mean", 0.9}, {"spread", 0.0}}}}}};
  ordered_json tracks = ordered_json::array();
  tracks.push_back(
      {{"class", "Bear"},
       {"size_m", 1.8},
       {"waypoints",
        ordered_json::array(
            {{{"t", 0.0}, {"x", 12.0}, {"y", 1.0}},
             {{"t", 30.0}, {"x", 12.0}, {"y", 1.0}}})}});
  if (with_human) {
    tracks.push_back(
        {{"class", "Human"},
         {"size_m", 1.7},
         {"waypoints",
          ordered_json::array(
              {{{"t", 0.0}, {"x", 10.0}, {"y", -2.0}},
               {{"t", 30.0}, {"x", 10.0}, {"y", -2.0}}})}});
  }
  scenario["tracks"] = std::move(tracks);
  fs::path p = dir / (with_human ? "scenario_human.json" : "scenario.json");
  write_file(p, scenario.dump(2) + "\n");
  return p;
}

const std::string kTinyGt =
    "frame,class,conf,x,y,w,h\n"
    "0,Bear,1.0,10,10,50,50\n"
    "1,Yak,1.0,80,80,40,40\n";

}  // namespace

TEST_CASE("help exits cleanly") {
  CliResult r = cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("simulate") != std::string::npos);
}

TEST_CASE("unknown subcommand is an input error") {
  CliResult r = cli({"frobnicate"});
  CHECK(r.code == 2);
}

TEST_CASE("simulate writes the four outputs and succeeds") {
  fs::path dir = fresh_dir("sim_ok");
  fs::path scenario = write_basic_scenario(dir, 5);
  fs::path out = dir / "out";
  CliResult r = cli({"simulate", scenario.string(), "--out", out.string()});
  CHECK(r.code == 0);
  CHECK(fs::exists(out / "events.jsonl"));
  CHECK(fs::exists(out / "segments.csv"));
  CHECK(fs::exists(out / "metrics.json"));
  CHECK(fs::exists(out / "manifest.json"));
  auto manifest = ordered_json::parse(read_file(out / "manifest.json"));
  CHECK(manifest.at("seed").get<std::uint64_t>() == 5);
  CHECK(manifest.at("command") == "simulate");
}

TEST_CASE("simulate refuses to overwrite without --force") {
  fs::path dir = fresh_dir("sim_force");
  fs::path scenario = write_basic_scenario(dir, 5);
  fs::path out = dir / "out";
  CHECK(cli({"simulate", scenario.string(), "--out", out.string()}).code == 0);
  CliResult refused = cli({"simulate", scenario.string(), "--out", out.string()});
  CHECK(refused.code == 3);
  CHECK(refused.err.find("--force") != std::string::npos);
  CHECK(cli({"simulate", scenario.string(), "--out", out.string(), "--force"})
            .code == 0);
}

TEST_CASE("simulate with a missing scenario file is an input error") {
  fs::path dir = fresh_dir("sim_missing");
  CliResult r = cli({"simulate", (dir / "nope.json").string(), "--out",
                     (dir / "out").string()});
  CHECK(r.code == 2);
}

TEST_CASE("simulate with malformed scenario JSON names the file") {
  fs::path dir = fresh_dir("sim_badjson");
  fs::path bad = dir / "bad.json";
  write_file(bad, "{\"duration_s\": 30,,}\n");
  CliResult r = cli({"simulate", bad.string(), "--out", (dir / "out").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("bad.json") != std::string::npos);
}

TEST_CASE("simulate with an invalid scenario value is an input error") {
  fs::path dir = fresh_dir("sim_badval");
  fs::path bad = dir / "bad.json";
  write_file(bad, "{\"duration_s\": -5}\n");
  CliResult r = cli({"simulate", bad.string(), "--out", (dir / "out").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("duration") != std::string::npos);
}

TEST_CASE("same seed twice produces bitwise-identical event logs") {
  fs::path dir = fresh_dir("sim_seed");
  fs::path scenario = write_basic_scenario(dir, 99);
  fs::path out1 = dir / "a";
  fs::path out2 = dir / "b";
  CHECK(cli({"simulate", scenario.string(), "--seed", "4242", "--out",
             out1.string()})
            .code == 0);
  CHECK(cli({"simulate", scenario.string(), "--seed", "4242", "--out",
             out2.string()})
            .code == 0);
  CHECK(read_file(out1 / "events.jsonl") == read_file(out2 / "events.jsonl"));
  CHECK(read_file(out1 / "segments.csv") == read_file(out2 / "segments.csv"));
  CHECK(read_file(out1 / "metrics.json") == read_file(out2 / "metrics.json"));

  fs::path out3 = dir / "c";
  CHECK(cli({"simulate", scenario.string(), "--seed", "1", "--out",
             out3.string()})
            .code == 0);
  CHECK(read_file(out1 / "events.jsonl") != read_file(out3 / "events.jsonl"));
}

TEST_CASE("evaluate of predictions equal to ground truth is perfect") {
  fs::path dir = fresh_dir("eval_perfect");
  write_file(dir / "gt.csv", kTinyGt);
  write_file(dir / "pred.csv", kTinyGt);
  CliResult r = cli({"evaluate", (dir / "pred.csv").string(),
                     (dir / "gt.csv").string()});
  REQUIRE(r.code == 0);
  auto report = ordered_json::parse(r.out);
  CHECK(report.at("map").get<double>() == doctest::Approx(1.0));
  CHECK(report.at("recall").get<double>() == doctest::Approx(1.0));
  CHECK(report.at("precision").get<double>() == doctest::Approx(1.0));
}

TEST_CASE("evaluate with no predictions reports zero recall") {
  fs::path dir = fresh_dir("eval_empty_pred");
  write_file(dir / "gt.csv", kTinyGt);
  write_file(dir / "pred.csv", "frame,class,conf,x,y,w,h\n");
  CliResult r = cli({"evaluate", (dir / "pred.csv").string(),
                     (dir / "gt.csv").string()});
  REQUIRE(r.code == 0);
  auto report = ordered_json::parse(r.out);
  CHECK(report.at("recall").get<double>() == 0.0);
  CHECK(report.at("map").get<double>() == 0.0);
}

TEST_CASE("evaluate with empty ground truth is a domain error") {
  fs::path dir = fresh_dir("eval_empty_gt");
  write_file(dir / "gt.csv", "frame,class,conf,x,y,w,h\n");
  write_file(dir / "pred.csv", kTinyGt);
  CliResult r = cli({"evaluate", (dir / "pred.csv").string(),
                     (dir / "gt.csv").string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("ground truth") != std::string::npos);
}

TEST_CASE("evaluate with disjoint classes is a domain error") {
  fs::path dir = fresh_dir("eval_mismatch");
  write_file(dir / "gt.csv",
             "frame,class,conf,x,y,w,h\n0,Bear,1.0,10,10,50,50\n");
  write_file(dir / "pred.csv",
             "frame,class,conf,x,y,w,h\n0,Other,0.9,10,10,50,50\n");
  CliResult r = cli({"evaluate", (dir / "pred.csv").string(),
                     (dir / "gt.csv").string()});
  CHECK(r.code == 3);
  CHECK(r.err.find("class mismatch") != std::string::npos);
}

TEST_CASE("evaluate with an unknown class name is an input error") {
  fs::path dir = fresh_dir("eval_unknown");
  write_file(dir / "gt.csv",
             "frame,class,conf,x,y,w,h\n0,Wolf,1.0,10,10,50,50\n");
  write_file(dir / "pred.csv", kTinyGt);
  CliResult r = cli({"evaluate", (dir / "pred.csv").string(),
                     (dir / "gt.csv").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("Wolf") != std::string::npos);
}

TEST_CASE("evaluate with an out-of-range IoU threshold is a domain error") {
  fs::path dir = fresh_dir("eval_iou");
  write_file(dir / "gt.csv", kTinyGt);
  write_file(dir / "pred.csv", kTinyGt);
  CliResult r = cli({"evaluate", (dir / "pred.csv").string(),
                     (dir / "gt.csv").string(), "--iou-threshold", "1.5"});
  CHECK(r.code == 3);
}

TEST_CASE("evaluate reproduces the bundled fixture's operating point") {
  fs::path fixture = fs::path(BEARGUARD_DATA_DIR) / "fixtures" / "map914";
  CliResult r = cli({"evaluate", (fixture / "predictions.csv").string(),
                     (fixture / "ground_truth.csv").string()});
  REQUIRE(r.code == 0);
  auto report = ordered_json::parse(r.out);
  // Exact arithmetic of the fixture layout; the acceptance suite checks the
  // looser published bands.
  CHECK(report.at("map").get<double>() ==
        doctest::Approx(0.9140122712006232).epsilon(1e-9));
  CHECK(report.at("recall").get<double>() == doctest::Approx(0.936).epsilon(1e-12));
  CHECK(report.at("precision").get<double>() ==
        doctest::Approx(936.0 / 977.0).epsilon(1e-12));
  CHECK(report.at("fpr").get<double>() ==
        doctest::Approx(6.0 / 158.0).epsilon(1e-12));
  CHECK(report.at("video_misid").at("Yak").get<double>() ==
        doctest::Approx(1.0 / 45.0).epsilon(1e-12));
  CHECK(report.at("video_misid").at("TibetanMastiff").get<double>() ==
        doctest::Approx(1.0 / 41.0).epsilon(1e-12));
  CHECK(report.at("video_misid").at("Human").get<double>() == 0.0);
  CHECK(report.at("counts").at("ground_truth").get<int>() == 1000);
  CHECK(report.at("counts").at("predictions").get<int>() == 977);
}

TEST_CASE("power prints the no-solar runtime and writes soc.csv") {
  fs::path dir = fresh_dir("power_basic");
  CliResult r = cli({"power", "--out", (dir / "out").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("3.39 days") != std::string::npos);
  CHECK(r.out.find("capacity: 40.700 Wh") != std::string::npos);
  CHECK(fs::exists(dir / "out" / "soc.csv"));
  std::string soc = read_file(dir / "out" / "soc.csv");
  CHECK(soc.rfind("time_s,energy_wh\n", 0) == 0);
}

TEST_CASE("power reports unbounded runtime when harvest covers draw") {
  fs::path dir = fresh_dir("power_unbounded");
  write_file(dir / "cfg.json",
             R"({"power": {"duty_cycle_active": 0.0, "panel_rating_w": 2.0}})");
  CliResult r = cli({"power", "--config", (dir / "cfg.json").string(), "--out",
                     (dir / "out").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("unbounded (horizon-clamped)") != std::string::npos);
}

TEST_CASE("power duty-cycle sweep includes a 30-day row") {
  fs::path dir = fresh_dir("power_sweep");
  CliResult r = cli({"power", "--sweep-duty-cycle", "--out",
                     (dir / "out").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("(>= 30 days)") != std::string::npos);
  CHECK(r.out.find("max swept duty cycle achieving >= 30 days") !=
        std::string::npos);
}

TEST_CASE("power with a bad config is an input error") {
  fs::path dir = fresh_dir("power_badcfg");
  write_file(dir / "cfg.json", R"({"power": {"unknown_knob": 1}})");
  CliResult r = cli({"power", "--config", (dir / "cfg.json").string(), "--out",
                     (dir / "out").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("unknown_knob") != std::string::npos);
}

TEST_CASE("replay of an empty log prints zero counts") {
  fs::path dir = fresh_dir("replay_empty");
  write_file(dir / "events.jsonl", "");
  CliResult r = cli({"replay", (dir / "events.jsonl").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("summary: segments=0 sprays=0 inhibits=0 battery_low=0") !=
        std::string::npos);
}

TEST_CASE("replay of a malformed log names the line") {
  fs::path dir = fresh_dir("replay_bad");
  write_file(dir / "events.jsonl",
             R"({"device_id":"d","timestamp":1.0,"kind":"BatteryLow","payload":{}})"
             "\nnot json\n");
  CliResult r = cli({"replay", (dir / "events.jsonl").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("replay counts three sprays in a hand-authored log") {
  fs::path dir = fresh_dir("replay_three");
  std::ostringstream log;
  for (int i = 0; i < 3; ++i) {
    log << R"({"device_id":"unit-1","timestamp":)" << (10.0 + i * 100.0)
        << R"(,"kind":"SprayTriggered","payload":{"trigger_time":)"
        << (10.05 + i * 100.0) << R"(}})" << "\n";
  }
  write_file(dir / "events.jsonl", log.str());
  CliResult r = cli({"replay", (dir / "events.jsonl").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("sprays=3") != std::string::npos);
}

TEST_CASE("replay counts agree with the simulate outputs") {
  fs::path dir = fresh_dir("replay_roundtrip");
  fs::path scenario = write_basic_scenario(dir, 7, /*with_human=*/true);
  fs::path out = dir / "out";
  REQUIRE(cli({"simulate", scenario.string(), "--out", out.string()}).code == 0);
  CliResult r = cli({"replay", (out / "events.jsonl").string()});
  REQUIRE(r.code == 0);
  // 30 s at 10 fps in 10-frame segments: 30 segment decisions, every one
  // bear+human, so 30 inhibits and zero sprays.
  CHECK(r.out.find("summary: segments=30 sprays=0 inhibits=30 battery_low=0") !=
        std::string::npos);
  // The segment count in the replay summary matches segments.csv rows.
  std::string csv = read_file(out / "segments.csv");
  auto rows = std::count(csv.begin(), csv.end(), '\n') - 1;  // minus header
  CHECK(rows == 30);
}

TEST_CASE("sliding windowing flows from the config into the pipeline") {
  fs::path dir = fresh_dir("sliding");
  fs::path scenario = write_basic_scenario(dir, 3);
  write_file(dir / "cfg.json", R"({"filter": {"windowing": "Sliding"}})");
  fs::path out = dir / "out";
  CliResult r = cli({"simulate", scenario.string(), "--config",
                     (dir / "cfg.json").string(), "--out", out.string()});
  REQUIRE(r.code == 0);
  // 300 frames, window 10: 300 - 10 + 1 sliding segments.
  std::string csv = read_file(out / "segments.csv");
  auto rows = std::count(csv.begin(), csv.end(), '\n') - 1;
  CHECK(rows == 291);
}

TEST_CASE("bundled scenarios simulate cleanly") {
  fs::path scenarios = fs::path(BEARGUARD_DATA_DIR) / "scenarios";
  fs::path config = fs::path(BEARGUARD_DATA_DIR) / "config.json";
  fs::path dir = fresh_dir("bundled");
  int i = 0;
  for (const char* name :
       {"bear_approach.json", "bear_and_human.json", "mastiff_night.json"}) {
    fs::path out = dir / ("out" + std::to_string(i++));
    CliResult r = cli({"simulate", (scenarios / name).string(), "--config",
                       config.string(), "--out", out.string()});
    CHECK(r.code == 0);
    CHECK(fs::exists(out / "events.jsonl"));
  }
  // The inhibition demo never sprays.
  CliResult replayed = cli({"replay", (dir / "out1" / "events.jsonl").string()});
  REQUIRE(replayed.code == 0);
  CHECK(replayed.out.find(" sprays=0 ") != std::string::npos);
  // The approach demo does spray.
  CliResult approach = cli({"replay", (dir / "out0" / "events.jsonl").string()});
  REQUIRE(approach.code == 0);
  CHECK(approach.out.find("SprayTriggered") != std::string::npos);
}
