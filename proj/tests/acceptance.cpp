// Acceptance suite: one line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "bearguard/cli.hpp"
#include "bearguard/dataset_eval.hpp"
#include "bearguard/event_log.hpp"
#include "bearguard/metrics.hpp"
#include "bearguard/power_model.hpp"
#include "bearguard/random.hpp"
#include "bearguard/segment_filter.hpp"
#include "bearguard/simulator.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace bearguard;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str());
  if (!pass) ++g_failures;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, ...) {
  va_list args;
  va_start(args, format);
  char buf[512];
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// ---- criterion 1: AP oracle equivalence on random matching instances ----

void criterion_1() {
  auto start = Clock::now();
  std::mt19937_64 rng(190301);
  double max_err = 0.0;
  const int instances = 1000;
  for (int i = 0; i < instances; ++i) {
    std::size_t n_pred = rng() % 9;  // <= 8
    std::size_t n_gt = 1 + rng() % 5;  // 1..5
    std::vector<Detection> preds, gts;
    for (std::size_t k = 0; k < n_pred; ++k) {
      preds.emplace_back(ObjectClass::Bear, uniform01(rng),
                         oracles::random_box(rng));
    }
    for (std::size_t k = 0; k < n_gt; ++k) {
      gts.emplace_back(ObjectClass::Bear, 1.0, oracles::random_box(rng));
    }
    MatchResult match = match_greedy(preds, gts, 0.5);
    std::vector<bool> tp(preds.size(), false);
    for (const auto& [pi, gi, v] : match.matched_pairs) tp[pi] = true;

    std::vector<std::size_t> order(preds.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return preds[a].confidence > preds[b].confidence;
    });
    std::vector<RankedPrediction> ranked;
    for (std::size_t idx : order) {
      ranked.push_back({preds[idx].confidence, tp[idx]});
    }
    double lib = average_precision(ranked, n_gt);
    double ref = oracles::ap_staircase(ranked, n_gt);
    max_err = std::max(max_err, std::abs(lib - ref));
  }
  double elapsed = seconds_since(start);
  bool pass = max_err <= 1e-9 && elapsed < 10.0;
  report(1, pass,
         fmt("AP vs brute-force staircase oracle on %d instances: max |diff| "
             "= %.3g (limit 1e-9), %.2f s (limit 10 s)",
             instances, max_err, elapsed));
}

// ---- criterion 2: bundled fixture reproduces the published operating point ----

void criterion_2() {
  fs::path fixture = fs::path(BEARGUARD_DATA_DIR) / "fixtures" / "map914";
  std::ostringstream out, err;
  int code = run_cli({"evaluate", (fixture / "predictions.csv").string(),
                      (fixture / "ground_truth.csv").string()},
                     out, err);
  if (code != 0) {
    report(2, false, "cmd_evaluate failed: " + err.str());
    return;
  }
  auto j = nlohmann::ordered_json::parse(out.str());
  double map = j.at("map").get<double>();
  double recall = j.at("recall").get<double>();
  double f1 = j.at("f1").get<double>();
  bool pass = std::abs(map - 0.914) <= 0.005 &&
              std::abs(recall - 0.936) <= 0.005 &&
              std::abs(f1 - 0.947) <= 0.005;
  report(2, pass,
         fmt("fixture mAP = %.4f (0.914 +/- 0.005), recall = %.4f (0.936 +/- "
             "0.005), F1 = %.4f (0.947 +/- 0.005)",
             map, recall, f1));
}

// ---- criterion 3: segment-filter properties and rule examples ----

Frame conf_frame(std::int64_t index, double bear_conf) {
  std::vector<Detection> dets;
  if (bear_conf > 0.0) {
    dets.emplace_back(ObjectClass::Bear, bear_conf, BoundingBox(10, 10, 30, 30));
  }
  return Frame(index, static_cast<double>(index) * 0.1, std::move(dets));
}

void criterion_3() {
  FilterConfig cfg;
  std::mt19937_64 rng(330033);
  bool pass = true;
  std::string why = "ok";

  // The published rule examples, exact.
  {
    std::vector<Frame> frames;
    for (int i = 0; i < 10; ++i) frames.push_back(conf_frame(i, i == 3 ? 0.71 : 0.0));
    if (classify_segment(frames, cfg).decision != SegmentDecision::BearDetected) {
      pass = false;
      why = "single 0.71 frame did not flag the segment";
    }
    frames.clear();
    for (int i = 0; i < 10; ++i) frames.push_back(conf_frame(i, 0.69));
    if (classify_segment(frames, cfg).decision != SegmentDecision::NoBear) {
      pass = false;
      why = "all-0.69 segment was flagged";
    }
    frames.clear();
    for (int i = 0; i < 10; ++i) frames.push_back(conf_frame(i, i == 0 ? 0.70 : 0.0));
    if (classify_segment(frames, cfg).decision != SegmentDecision::BearDetected) {
      pass = false;
      why = "threshold-equal confidence did not flag (>= semantics)";
    }
  }

  const int segments = 10000;
  for (int iter = 0; pass && iter < segments; ++iter) {
    std::vector<Frame> frames;
    std::vector<double> confs(10, 0.0);
    for (int i = 0; i < 10; ++i) {
      if (rng() % 3 == 0) confs[i] = uniform01(rng);
      frames.push_back(conf_frame(i, confs[i]));
    }
    Segment before = classify_segment(frames, cfg);

    // Monotonicity: raising one confidence can only raise the decision.
    int target = static_cast<int>(rng() % 10);
    double raised = confs[target] + (1.0 - confs[target]) * uniform01(rng);
    std::vector<Frame> raised_frames;
    for (int i = 0; i < 10; ++i) {
      raised_frames.push_back(conf_frame(i, i == target ? raised : confs[i]));
    }
    Segment after = classify_segment(raised_frames, cfg);
    if (before.decision == SegmentDecision::BearDetected &&
        after.decision != SegmentDecision::BearDetected) {
      pass = false;
      why = "monotonicity violated";
    }

    // Permutation invariance.
    std::shuffle(confs.begin(), confs.end(), rng);
    std::vector<Frame> shuffled;
    for (int i = 0; i < 10; ++i) shuffled.push_back(conf_frame(i, confs[i]));
    if (classify_segment(shuffled, cfg).decision != before.decision) {
      pass = false;
      why = "permutation changed the decision";
    }

    // Threshold boundary: decision must equal max >= threshold exactly.
    bool expect = before.max_bear_confidence >= cfg.bear_threshold;
    if ((before.decision == SegmentDecision::BearDetected) != expect) {
      pass = false;
      why = "decision disagrees with >= threshold semantics";
    }
  }
  report(3, pass,
         fmt("filter properties over %d segments + rule examples (%s)",
             segments, why.c_str()));
}

// ---- criterion 4: Monte-Carlo segment rate vs closed form ----

struct RateCheck {
  double p;
  double expected;
  double observed;
  double limit;
  bool pass;
};

RateCheck segment_rate_check(double p, std::uint64_t seed) {
  const std::size_t segments = 100000;
  Scenario s;
  s.duration_s = static_cast<double>(segments);  // 10 fps, 10-frame segments
  s.detector.true_positive_rate = 0.0;
  s.detector.confusion[ObjectClass::TibetanMastiff] = p;
  s.detector.seed = seed;
  EntityTrack track;
  track.entity_class = ObjectClass::TibetanMastiff;
  track.size_m = 0.8;
  track.waypoints = {{0.0, 10.0, 0.0}, {s.duration_s, 10.0, 0.0}};
  s.tracks.push_back(track);

  std::size_t flagged = 0;
  std::size_t total = 0;
  for_each_tumbling_segment(s, FilterConfig{}, [&](const Segment& seg) {
    ++total;
    if (seg.decision == SegmentDecision::BearDetected) ++flagged;
  });
  RateCheck check;
  check.p = p;
  check.expected = 1.0 - std::pow(1.0 - p, 10.0);
  check.observed = static_cast<double>(flagged) / static_cast<double>(total);
  double se = std::sqrt(check.expected * (1.0 - check.expected) /
                        static_cast<double>(total));
  check.limit = 4.0 * se;
  check.pass = total == segments &&
               std::abs(check.observed - check.expected) <= check.limit;
  return check;
}

void criterion_4() {
  auto start = Clock::now();
  RateCheck mastiff = segment_rate_check(0.00243, 440001);
  double yak_p = 1.0 - std::pow(1.0 - 0.022, 0.1);
  RateCheck yak = segment_rate_check(yak_p, 440002);
  double elapsed = seconds_since(start);
  bool pass = mastiff.pass && yak.pass && elapsed < 60.0;
  report(4, pass,
         fmt("segment rate over 100k segments: p=%.5f -> %.5f (expect %.5f "
             "+/- %.5f); p=%.6f -> %.5f (expect %.5f +/- %.5f); %.1f s "
             "(limit 60 s)",
             mastiff.p, mastiff.observed, mastiff.expected, mastiff.limit,
             yak.p, yak.observed, yak.expected, yak.limit, elapsed));
}

// ---- criterion 5: controller safety, timing, and oracle equality ----

void criterion_5() {
  std::mt19937_64 rng(550055);
  ControllerConfig cfg;
  cfg.canister_total_sprays = 6;
  cfg.cooldown = 15.0;
  bool pass = true;
  std::string why = "ok";
  const int timelines = 10000;
  std::size_t sprays_seen = 0;

  for (int iter = 0; pass && iter < timelines; ++iter) {
    std::vector<TimelineEntry> entries;
    double t = 0.0;
    std::size_t n = rng() % 30;
    for (std::size_t i = 0; i < n; ++i) {
      t += 0.5 + uniform01(rng) * 12.0;
      TimelineEntry e;
      e.time = t;
      e.human_present = rng() % 4 == 0;
      Segment seg;
      seg.decision = rng() % 2 == 0 ? SegmentDecision::BearDetected
                                    : SegmentDecision::NoBear;
      seg.max_bear_confidence =
          seg.decision == SegmentDecision::BearDetected ? 0.9 : 0.0;
      seg.frames.emplace_back(0, 0.0, std::vector<Detection>{});
      e.segment = std::move(seg);
      entries.push_back(std::move(e));
    }

    TimelineResult lib = run_timeline(entries, cfg);
    auto ref = oracles::interpret_timeline(entries, cfg);
    if (lib.events.size() != ref.size()) {
      pass = false;
      why = "event count differs from the straight-line interpreter";
      break;
    }
    for (std::size_t i = 0; i < ref.size(); ++i) {
      if (!(lib.events[i] == ref[i])) {
        pass = false;
        why = "event differs from the straight-line interpreter";
      }
    }

    double prev_trigger = -1e18;
    std::size_t sprays = 0;
    std::size_t entry_at = 0;
    for (const EventRecord& e : lib.events) {
      if (e.kind != EventKind::SprayTriggered) continue;
      ++sprays;
      ++sprays_seen;
      double trigger = e.payload.at("trigger_time").get<double>();
      double decision = e.payload.at("decision_time").get<double>();
      if (trigger - decision > 0.2 + 1e-12) {
        pass = false;
        why = "trigger latency above 0.2 s";
      }
      if (trigger - prev_trigger < cfg.spray_duration + cfg.cooldown - 1e-9) {
        pass = false;
        why = "cooldown spacing violated";
      }
      while (entry_at < entries.size() && entries[entry_at].time < decision) {
        ++entry_at;
      }
      if (entry_at >= entries.size() || entries[entry_at].time != decision ||
          entries[entry_at].human_present) {
        pass = false;
        why = "spray fired with a human present at decision time";
      }
      prev_trigger = trigger;
    }
    if (static_cast<int>(sprays) + lib.final_state.sprays_remaining !=
        cfg.canister_total_sprays) {
      pass = false;
      why = "spray conservation violated";
    }
  }
  report(5, pass,
         fmt("%d random timelines, %zu sprays: safety, latency <= 0.2 s, "
             "conservation, spacing, oracle equality (%s)",
             timelines, sprays_seen, why.c_str()));
}

// ---- criterion 6: power model closed form, simulation, 30-day sweep ----

void criterion_6() {
  PowerConfig cfg;
  bool pass = true;
  std::string detail;

  auto no_solar = runtime_days(cfg, false);
  double expected_days = 40.7 / 0.5 / 24.0;
  if (!no_solar || std::abs(*no_solar - expected_days) > 1e-9) {
    pass = false;
  }

  const double dt = 60.0;
  SocSeries series = simulate_soc(cfg, 10.0, dt, [](double) { return 0.0; });
  double expected_s = expected_days * 86400.0;
  bool sim_ok = series.depletion_time_s &&
                *series.depletion_time_s >= expected_s - 1e-6 &&
                *series.depletion_time_s - expected_s <= dt + 1e-6;
  if (!sim_ok) pass = false;

  // Sweep duty cycles for a >= 30 day configuration with the stock setup.
  std::optional<double> best_duty;
  std::optional<double> best_days;
  for (int i = 0; i <= 100; ++i) {
    PowerConfig swept = cfg;
    swept.duty_cycle_active = 0.01 * i;
    auto days = runtime_days(swept, true);
    if (!days || *days >= 30.0) {
      if (!best_duty || swept.duty_cycle_active > *best_duty) {
        best_duty = swept.duty_cycle_active;
        best_days = days ? *days : -1.0;
      }
    }
  }
  if (!best_duty) pass = false;

  detail = fmt(
      "no-solar runtime %.4f days (closed form %.4f), simulated depletion "
      "%.0f s (within %.0f s step), 30-day feasible duty cycle: %s",
      no_solar ? *no_solar : -1.0, expected_days,
      series.depletion_time_s ? *series.depletion_time_s : -1.0, dt,
      best_duty ? fmt("<= %.2f (%.1f days at the limit)", *best_duty,
                      best_days && *best_days > 0 ? *best_days : 0.0)
                      .c_str()
                : "none");
  report(6, pass, detail);
}

// ---- criterion 7: end-to-end determinism and the human-inhibit scenario ----

fs::path write_scenario_file(const fs::path& dir, bool with_human) {
  nlohmann::ordered_json scenario;
  scenario["duration_s"] = 60.0;
  scenario["detector"] = {
      {"true_positive_rate", 0.9},
      {"seed", 20250811},
      {"confidence",
       {{"Bear", {{"mean", 0.88}, {"spread", 0.06}}},
        {"Human", {{"mean", 0.9}, {"spread", 0.03}}}}}};
  nlohmann::ordered_json tracks = nlohmann::ordered_json::array();
  tracks.push_back({{"class", "Bear"},
                    {"size_m", 1.8},
                    {"waypoints",
                     nlohmann::ordered_json::array(
                         {{{"t", 0.0}, {"x", 18.0}, {"y", 2.0}},
                          {{"t", 60.0}, {"x", 8.0}, {"y", -1.0}}})}});
  if (with_human) {
    tracks.push_back({{"class", "Human"},
                      {"size_m", 1.7},
                      {"waypoints",
                       nlohmann::ordered_json::array(
                           {{{"t", 0.0}, {"x", 10.0}, {"y", 3.0}},
                            {{"t", 60.0}, {"x", 10.0}, {"y", 3.0}}})}});
  }
  scenario["tracks"] = std::move(tracks);
  fs::path p = dir / (with_human ? "bear_human.json" : "bear.json");
  std::ofstream f(p);
  f << scenario.dump(2) << "\n";
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void criterion_7() {
  fs::path dir = fs::temp_directory_path() / "bearguard_acceptance_c7";
  fs::remove_all(dir);
  fs::create_directories(dir);
  fs::path scenario = write_scenario_file(dir, false);

  std::ostringstream out1, err1, out2, err2;
  int c1 = run_cli({"simulate", scenario.string(), "--seed", "31415", "--out",
                    (dir / "a").string()},
                   out1, err1);
  int c2 = run_cli({"simulate", scenario.string(), "--seed", "31415", "--out",
                    (dir / "b").string()},
                   out2, err2);
  bool identical = c1 == 0 && c2 == 0 &&
                   slurp(dir / "a" / "events.jsonl") ==
                       slurp(dir / "b" / "events.jsonl") &&
                   !slurp(dir / "a" / "events.jsonl").empty();

  fs::path human_scenario = write_scenario_file(dir, true);
  std::ostringstream out3, err3;
  int c3 = run_cli({"simulate", human_scenario.string(), "--out",
                    (dir / "c").string()},
                   out3, err3);
  bool inhibited = false;
  bool no_sprays = true;
  if (c3 == 0) {
    std::ifstream f(dir / "c" / "events.jsonl", std::ios::binary);
    auto records = read_event_log(f);
    for (const EventRecord& r : records) {
      if (r.kind == EventKind::SprayInhibited) inhibited = true;
      if (r.kind == EventKind::SprayTriggered) no_sprays = false;
    }
  }
  bool pass = identical && c3 == 0 && inhibited && no_sprays;
  report(7, pass,
         fmt("two seeded runs bitwise-identical: %s; bear+human run: "
             "inhibits %s, sprays %s",
             identical ? "yes" : "NO", inhibited ? "present" : "MISSING",
             no_sprays ? "zero" : "NONZERO"));
}

// ---- criterion 8: explicitly out-of-scope field results ----

void criterion_8() {
  report(8, true,
         "field deterrence counts, hardware trigger reliability, and the "
         "real detector's accuracy are represented by fixtures and property "
         "suites only; no re-derivation is attempted");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  if (g_failures == 0) {
    std::printf("acceptance: all criteria passed\n");
  } else {
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
