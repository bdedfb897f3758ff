#include "bearguard/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "bearguard/annotations.hpp"
#include "bearguard/config.hpp"
#include "bearguard/dataset_eval.hpp"
#include "bearguard/event_log.hpp"
#include "bearguard/simulator.hpp"

namespace bearguard {

namespace fs = std::filesystem;

namespace {

struct SimulateOptions {
  std::string scenario_path;
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  bool force = false;
};

struct EvaluateOptions {
  std::string predictions_path;
  std::string ground_truth_path;
  std::string config_path;
  double iou_threshold = 0.5;
};

struct PowerOptions {
  std::string config_path;
  std::string out_dir = "out";
  double horizon_days = 60.0;
  double timestep_s = 60.0;
  bool no_solar = false;
  bool sweep_duty_cycle = false;
  bool force = false;
};

struct ReplayOptions {
  std::string events_path;
};

AppConfig load_config_or_default(const std::string& path) {
  if (path.empty()) return AppConfig{};
  return load_app_config(path);
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string());
}

void refuse_overwrite(const std::vector<fs::path>& outputs, bool force) {
  if (force) return;
  for (const fs::path& p : outputs) {
    if (fs::exists(p)) {
      throw DomainError(p.string() +
                        " exists; pass --force to overwrite previous outputs");
    }
  }
}

std::ofstream open_output(const fs::path& p) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw IoError("cannot open " + p.string() + " for writing");
  return f;
}

std::vector<FrameAnnotations> read_annotations_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  try {
    return read_annotations(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string format_seconds(double t) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", t);
  return buf;
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out) {
  AppConfig cfg = load_config_or_default(opts.config_path);
  Scenario scenario = load_scenario(opts.scenario_path, cfg.camera);
  if (opts.seed) scenario.detector.seed = *opts.seed;

  const fs::path dir(opts.out_dir);
  const fs::path events_path = dir / "events.jsonl";
  const fs::path segments_path = dir / "segments.csv";
  const fs::path metrics_path = dir / "metrics.json";
  const fs::path manifest_path = dir / "manifest.json";
  ensure_dir(dir);
  refuse_overwrite({events_path, segments_path, metrics_path, manifest_path},
                   opts.force);

  PipelineResult result = run_pipeline(scenario, cfg.filter, cfg.controller);

  {
    auto f = open_output(events_path);
    write_event_log(result.events, f);
  }
  {
    auto f = open_output(segments_path);
    f << "segment,start_time,end_time,decision,max_bear_confidence,human_present\n";
    std::size_t i = 0;
    for (const Segment& s : result.segments) {
      f << i << ',' << format_seconds(s.start_time()) << ','
        << format_seconds(s.end_time()) << ',' << to_string(s.decision) << ','
        << format_seconds(s.max_bear_confidence) << ','
        << (segment_has_human(s, cfg.controller.human_confidence_threshold)
                ? "true"
                : "false")
        << '\n';
      ++i;
    }
    if (!f) throw IoError("write failed: " + segments_path.string());
  }
  EvalOptions eval_options;
  eval_options.filter = cfg.filter;
  {
    auto f = open_output(metrics_path);
    f << eval_result_to_json(result.evaluation, eval_options).dump(2) << '\n';
  }
  {
    nlohmann::ordered_json manifest;
    manifest["command"] = "simulate";
    manifest["scenario_path"] = opts.scenario_path;
    if (opts.config_path.empty()) {
      manifest["config_path"] = nullptr;
    } else {
      manifest["config_path"] = opts.config_path;
    }
    manifest["seed"] = scenario.detector.seed;
    manifest["output_dir"] = opts.out_dir;
    manifest["outputs"] = {"events.jsonl", "segments.csv", "metrics.json"};
    manifest["effective_config"] = app_config_to_json(cfg);
    manifest["scenario"] = scenario_to_json(scenario);
    auto f = open_output(manifest_path);
    f << manifest.dump(2) << '\n';
  }

  std::size_t sprays = 0;
  std::size_t inhibits = 0;
  for (const EventRecord& e : result.events) {
    if (e.kind == EventKind::SprayTriggered) ++sprays;
    if (e.kind == EventKind::SprayInhibited) ++inhibits;
  }
  out << "simulated " << scenario.frame_count() << " frames, "
      << result.segments.size() << " segments, " << sprays << " sprays, "
      << inhibits << " inhibits\n";
  out << "outputs in " << opts.out_dir << ": events.jsonl segments.csv "
      << "metrics.json manifest.json\n";
  return kExitOk;
}

int cmd_evaluate(const EvaluateOptions& opts, std::ostream& out) {
  AppConfig cfg = load_config_or_default(opts.config_path);
  std::vector<FrameAnnotations> preds =
      read_annotations_file(opts.predictions_path);
  std::vector<FrameAnnotations> gt =
      read_annotations_file(opts.ground_truth_path);

  if (gt.empty()) {
    throw DomainError("ground truth is empty: " + opts.ground_truth_path);
  }
  std::set<ObjectClass> gt_classes;
  for (const auto& f : gt) {
    for (const auto& d : f.detections) gt_classes.insert(d.object_class);
  }
  bool any_pred = false;
  bool class_overlap = false;
  for (const auto& f : preds) {
    for (const auto& d : f.detections) {
      any_pred = true;
      if (gt_classes.count(d.object_class)) class_overlap = true;
    }
  }
  if (any_pred && !class_overlap) {
    throw DomainError(
        "class mismatch: no predicted class appears in the ground truth");
  }

  EvalOptions options;
  options.iou_threshold = opts.iou_threshold;
  options.filter = cfg.filter;
  DatasetEvalResult result = evaluate_dataset(gt, preds, options);
  out << eval_result_to_json(result, options).dump(2) << '\n';
  return kExitOk;
}

std::string runtime_to_string(const std::optional<double>& days) {
  if (!days) return "unbounded (horizon-clamped)";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f days", *days);
  return buf;
}

int cmd_power(const PowerOptions& opts, std::ostream& out) {
  AppConfig cfg = load_config_or_default(opts.config_path);
  if (opts.horizon_days <= 0.0) {
    throw ParseError("--horizon-days must be positive");
  }
  if (opts.timestep_s <= 0.0) {
    throw ParseError("--timestep must be positive");
  }
  const PowerConfig& p = cfg.power;
  const bool solar = !opts.no_solar;

  char buf[128];
  std::snprintf(buf, sizeof(buf), "capacity: %.3f Wh\n", capacity_wh(p));
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "average draw: %.2f mW (duty cycle %.3f, active %.0f mW, idle "
                "%.0f mW)\n",
                average_draw_mw(p), p.duty_cycle_active, p.draw_active_mw,
                p.draw_idle_mw);
  out << buf;
  std::snprintf(buf, sizeof(buf), "average harvest: %.2f mW (solar %s)\n",
                average_harvest_mw(p, solar), solar ? "on" : "off");
  out << buf;
  out << "runtime (no solar): " << runtime_to_string(runtime_days(p, false))
      << "\n";
  out << "runtime (with solar): " << runtime_to_string(runtime_days(p, true))
      << "\n";

  const fs::path dir(opts.out_dir);
  const fs::path soc_path = dir / "soc.csv";
  ensure_dir(dir);
  refuse_overwrite({soc_path}, opts.force);
  const double derating = p.harvest_derating;
  SocSeries series =
      simulate_soc(p, opts.horizon_days, opts.timestep_s,
                   [solar, derating](double) { return solar ? derating : 0.0; });
  {
    auto f = open_output(soc_path);
    f << "time_s,energy_wh\n";
    for (const BatteryState& s : series.samples) {
      f << format_seconds(s.time_s) << ',' << format_seconds(s.energy_wh)
        << '\n';
    }
    if (!f) throw IoError("write failed: " + soc_path.string());
  }
  if (series.depletion_time_s) {
    std::snprintf(buf, sizeof(buf), "battery empty at %.0f s (%.2f days)\n",
                  *series.depletion_time_s,
                  *series.depletion_time_s / 86400.0);
    out << buf;
  } else {
    std::snprintf(buf, sizeof(buf),
                  "battery not depleted within %.1f-day horizon\n",
                  opts.horizon_days);
    out << buf;
  }
  out << "soc series: " << soc_path.string() << "\n";

  if (opts.sweep_duty_cycle) {
    out << "\nduty-cycle sweep (with solar):\n";
    out << "  duty_cycle  avg_draw_mw  runtime\n";
    std::optional<double> best_duty;
    std::vector<double> duties = {0.00, 0.01, 0.02, 0.03, 0.04};
    for (int i = 1; i <= 20; ++i) duties.push_back(0.05 * i);
    for (double duty : duties) {
      PowerConfig swept = p;
      swept.duty_cycle_active = duty;
      std::optional<double> days = runtime_days(swept, true);
      bool achieves = !days || *days >= 30.0;
      std::snprintf(buf, sizeof(buf), "  %10.2f  %11.2f  %s%s\n", duty,
                    average_draw_mw(swept), runtime_to_string(days).c_str(),
                    achieves ? "  (>= 30 days)" : "");
      out << buf;
      if (achieves) best_duty = duty;
    }
    if (best_duty) {
      std::snprintf(buf, sizeof(buf),
                    "max swept duty cycle achieving >= 30 days: %.2f\n",
                    *best_duty);
      out << buf;
    } else {
      out << "no swept duty cycle achieves 30 days\n";
    }
  }
  return kExitOk;
}

int cmd_replay(const ReplayOptions& opts, std::ostream& out) {
  std::ifstream in(opts.events_path, std::ios::binary);
  if (!in) throw ParseError(opts.events_path + ": cannot open file");
  std::vector<EventRecord> records;
  try {
    records = read_event_log(in);
  } catch (const ParseError& e) {
    throw ParseError(opts.events_path + ": " + e.what());
  }

  std::size_t segments = 0;
  std::size_t sprays = 0;
  std::size_t inhibits = 0;
  std::size_t battery_low = 0;
  char buf[64];
  for (const EventRecord& r : records) {
    switch (r.kind) {
      case EventKind::SegmentDecision:
        ++segments;
        break;
      case EventKind::SprayTriggered:
        ++sprays;
        break;
      case EventKind::SprayInhibited:
        ++inhibits;
        break;
      case EventKind::BatteryLow:
        ++battery_low;
        break;
    }
    std::snprintf(buf, sizeof(buf), "[%12.2fs] %-16s", r.timestamp,
                  to_string(r.kind).c_str());
    out << buf << ' ' << r.payload.dump() << '\n';
  }
  out << "summary: segments=" << segments << " sprays=" << sprays
      << " inhibits=" << inhibits << " battery_low=" << battery_low << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"bearguard: bear detection-and-deterrence pipeline simulator"};
  app.require_subcommand(1);

  SimulateOptions sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "run a scenario through the full pipeline");
  simulate->add_option("scenario", sim.scenario_path, "scenario JSON file")
      ->required();
  simulate->add_option("--config", sim.config_path, "main config JSON file");
  simulate->add_option("--seed", sim.seed,
                       "override the scenario's detector seed");
  simulate->add_option("--out", sim.out_dir, "output directory");
  simulate->add_flag("--force", sim.force, "overwrite existing outputs");

  EvaluateOptions ev;
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "score a predictions CSV against ground truth");
  evaluate->add_option("predictions", ev.predictions_path, "predictions CSV")
      ->required();
  evaluate->add_option("ground_truth", ev.ground_truth_path, "ground truth CSV")
      ->required();
  evaluate->add_option("--iou-threshold", ev.iou_threshold,
                       "IoU threshold for matching");
  evaluate->add_option("--config", ev.config_path, "main config JSON file");

  PowerOptions pw;
  CLI::App* power =
      app.add_subcommand("power", "energy budget summary and SoC series");
  power->add_option("--config", pw.config_path, "main config JSON file");
  power->add_option("--horizon-days", pw.horizon_days, "simulation horizon");
  power->add_option("--timestep", pw.timestep_s, "integration step, seconds");
  power->add_flag("--no-solar", pw.no_solar, "disable harvesting");
  power->add_flag("--sweep-duty-cycle", pw.sweep_duty_cycle,
                  "print runtime per duty cycle");
  power->add_option("--out", pw.out_dir, "output directory");
  power->add_flag("--force", pw.force, "overwrite existing outputs");

  ReplayOptions rp;
  CLI::App* replay =
      app.add_subcommand("replay", "print a human-readable event log timeline");
  replay->add_option("events", rp.events_path, "events JSONL file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInputError;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInputError;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }

  try {
    if (*simulate) return cmd_simulate(sim, out);
    if (*evaluate) return cmd_evaluate(ev, out);
    if (*power) return cmd_power(pw, out);
    if (*replay) return cmd_replay(rp, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
  err << "error: no subcommand\n";
  return kExitInputError;
}

}  // namespace bearguard
