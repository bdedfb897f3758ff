#include "bearguard/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

namespace bearguard {

using nlohmann::ordered_json;

namespace {

void expect_keys(const ordered_json& j,
                 std::initializer_list<const char*> allowed,
                 const std::string& context) {
  if (!j.is_object()) {
    throw ParseError(context + ": expected a JSON object");
  }
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) {
      throw ParseError(context + ": unknown key \"" + key + "\"");
    }
  }
}

template <typename T>
void read_field(const ordered_json& j, const char* key, T& out,
                const std::string& context) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(context + "." + key + ": " + e.what());
  }
}

void read_string_enum(const ordered_json& j, const char* key,
                      const std::string& context, auto parse, auto& out) {
  if (!j.contains(key)) return;
  std::string raw;
  read_field(j, key, raw, context);
  try {
    out = parse(raw);
  } catch (const ParseError& e) {
    throw ParseError(context + "." + key + ": " + e.what());
  }
}

}  // namespace

void AppConfig::validate() const {
  filter.validate();
  controller.validate();
  power.validate();
  camera.validate();
}

AppConfig parse_app_config(const ordered_json& j, const std::string& context) {
  expect_keys(j, {"device_id", "filter", "controller", "power", "camera"},
              context);
  AppConfig cfg;
  read_field(j, "device_id", cfg.device_id, context);

  if (j.contains("filter")) {
    const auto& f = j.at("filter");
    const std::string ctx = context + ".filter";
    expect_keys(f, {"segment_length", "bear_threshold", "windowing"}, ctx);
    read_field(f, "segment_length", cfg.filter.segment_length, ctx);
    read_field(f, "bear_threshold", cfg.filter.bear_threshold, ctx);
    read_string_enum(f, "windowing", ctx, windowing_from_string,
                     cfg.filter.windowing);
  }

  if (j.contains("controller")) {
    const auto& c = j.at("controller");
    const std::string ctx = context + ".controller";
    expect_keys(c,
                {"trigger_latency_budget", "actuation_delay", "spray_duration",
                 "cooldown", "human_inhibit", "canister_total_sprays",
                 "human_confidence_threshold", "canister"},
                ctx);
    read_field(c, "trigger_latency_budget", cfg.controller.trigger_latency_budget, ctx);
    read_field(c, "actuation_delay", cfg.controller.actuation_delay, ctx);
    read_field(c, "spray_duration", cfg.controller.spray_duration, ctx);
    read_field(c, "cooldown", cfg.controller.cooldown, ctx);
    read_field(c, "human_inhibit", cfg.controller.human_inhibit, ctx);
    read_field(c, "canister_total_sprays", cfg.controller.canister_total_sprays, ctx);
    read_field(c, "human_confidence_threshold",
               cfg.controller.human_confidence_threshold, ctx);
    if (c.contains("canister")) {
      const auto& k = c.at("canister");
      const std::string kctx = ctx + ".canister";
      expect_keys(k, {"capsaicin_fraction", "menthol_fraction", "pressure_mpa",
                      "range_m"},
                  kctx);
      read_field(k, "capsaicin_fraction",
                 cfg.controller.canister.capsaicin_fraction, kctx);
      read_field(k, "menthol_fraction",
                 cfg.controller.canister.menthol_fraction, kctx);
      read_field(k, "pressure_mpa", cfg.controller.canister.pressure_mpa, kctx);
      read_field(k, "range_m", cfg.controller.canister.range_m, kctx);
    }
  }

  if (j.contains("power")) {
    const auto& p = j.at("power");
    const std::string ctx = context + ".power";
    expect_keys(p,
                {"battery_capacity_mah", "nominal_voltage_v", "panel_rating_w",
                 "harvest_derating", "draw_active_mw", "draw_idle_mw",
                 "duty_cycle_active"},
                ctx);
    read_field(p, "battery_capacity_mah", cfg.power.battery_capacity_mah, ctx);
    read_field(p, "nominal_voltage_v", cfg.power.nominal_voltage_v, ctx);
    read_field(p, "panel_rating_w", cfg.power.panel_rating_w, ctx);
    read_field(p, "harvest_derating", cfg.power.harvest_derating, ctx);
    read_field(p, "draw_active_mw", cfg.power.draw_active_mw, ctx);
    read_field(p, "draw_idle_mw", cfg.power.draw_idle_mw, ctx);
    read_field(p, "duty_cycle_active", cfg.power.duty_cycle_active, ctx);
  }

  if (j.contains("camera")) {
    const auto& cam = j.at("camera");
    const std::string ctx = context + ".camera";
    expect_keys(cam, {"horizontal_fov_deg", "vertical_fov_deg",
                      "max_detection_range_m", "frame_rate_fps"},
                ctx);
    read_field(cam, "horizontal_fov_deg", cfg.camera.horizontal_fov_deg, ctx);
    read_field(cam, "vertical_fov_deg", cfg.camera.vertical_fov_deg, ctx);
    read_field(cam, "max_detection_range_m", cfg.camera.max_detection_range_m, ctx);
    read_field(cam, "frame_rate_fps", cfg.camera.frame_rate_fps, ctx);
  }

  cfg.controller.device_id = cfg.device_id;
  cfg.validate();
  return cfg;
}

AppConfig load_app_config(const std::filesystem::path& path) {
  return parse_app_config(load_json_file(path), path.string());
}

ordered_json app_config_to_json(const AppConfig& cfg) {
  ordered_json j;
  j["device_id"] = cfg.device_id;
  j["filter"] = {{"segment_length", cfg.filter.segment_length},
                 {"bear_threshold", cfg.filter.bear_threshold},
                 {"windowing", to_string(cfg.filter.windowing)}};
  j["controller"] = {
      {"trigger_latency_budget", cfg.controller.trigger_latency_budget},
      {"actuation_delay", cfg.controller.actuation_delay},
      {"spray_duration", cfg.controller.spray_duration},
      {"cooldown", cfg.controller.cooldown},
      {"human_inhibit", cfg.controller.human_inhibit},
      {"canister_total_sprays", cfg.controller.canister_total_sprays},
      {"human_confidence_threshold", cfg.controller.human_confidence_threshold},
      {"canister",
       {{"capsaicin_fraction", cfg.controller.canister.capsaicin_fraction},
        {"menthol_fraction", cfg.controller.canister.menthol_fraction},
        {"pressure_mpa", cfg.controller.canister.pressure_mpa},
        {"range_m", cfg.controller.canister.range_m}}}};
  j["power"] = {{"battery_capacity_mah", cfg.power.battery_capacity_mah},
                {"nominal_voltage_v", cfg.power.nominal_voltage_v},
                {"panel_rating_w", cfg.power.panel_rating_w},
                {"harvest_derating", cfg.power.harvest_derating},
                {"draw_active_mw", cfg.power.draw_active_mw},
                {"draw_idle_mw", cfg.power.draw_idle_mw},
                {"duty_cycle_active", cfg.power.duty_cycle_active}};
  j["camera"] = {{"horizontal_fov_deg", cfg.camera.horizontal_fov_deg},
                 {"vertical_fov_deg", cfg.camera.vertical_fov_deg},
                 {"max_detection_range_m", cfg.camera.max_detection_range_m},
                 {"frame_rate_fps", cfg.camera.frame_rate_fps}};
  return j;
}

Scenario parse_scenario(const ordered_json& j, const CameraSpec& default_camera,
                        const std::string& context) {
  expect_keys(j, {"camera", "duration_s", "lighting", "detector", "tracks"},
              context);
  Scenario s;
  s.camera = default_camera;

  if (j.contains("camera")) {
    const auto& cam = j.at("camera");
    const std::string ctx = context + ".camera";
    expect_keys(cam, {"horizontal_fov_deg", "vertical_fov_deg",
                      "max_detection_range_m", "frame_rate_fps"},
                ctx);
    read_field(cam, "horizontal_fov_deg", s.camera.horizontal_fov_deg, ctx);
    read_field(cam, "vertical_fov_deg", s.camera.vertical_fov_deg, ctx);
    read_field(cam, "max_detection_range_m", s.camera.max_detection_range_m, ctx);
    read_field(cam, "frame_rate_fps", s.camera.frame_rate_fps, ctx);
  }

  if (!j.contains("duration_s")) {
    throw ParseError(context + ": missing required key \"duration_s\"");
  }
  read_field(j, "duration_s", s.duration_s, context);
  read_string_enum(j, "lighting", context, lighting_from_string, s.lighting);

  if (j.contains("detector")) {
    const auto& d = j.at("detector");
    const std::string ctx = context + ".detector";
    expect_keys(d,
                {"true_positive_rate", "confusion", "confidence",
                 "confusion_conf_min", "night_degradation", "seed"},
                ctx);
    read_field(d, "true_positive_rate", s.detector.true_positive_rate, ctx);
    read_field(d, "confusion_conf_min", s.detector.confusion_conf_min, ctx);
    read_field(d, "night_degradation", s.detector.night_degradation, ctx);
    read_field(d, "seed", s.detector.seed, ctx);
    if (d.contains("confusion")) {
      if (!d.at("confusion").is_object()) {
        throw ParseError(ctx + ".confusion: expected an object");
      }
      for (const auto& [name, value] : d.at("confusion").items()) {
        ObjectClass cls;
        try {
          cls = object_class_from_string(name);
        } catch (const ParseError& e) {
          throw ParseError(ctx + ".confusion: " + e.what());
        }
        double p = 0.0;
        try {
          p = value.get<double>();
        } catch (const nlohmann::json::exception& e) {
          throw ParseError(ctx + ".confusion." + name + ": " + e.what());
        }
        s.detector.confusion[cls] = p;
      }
    }
    if (d.contains("confidence")) {
      if (!d.at("confidence").is_object()) {
        throw ParseError(ctx + ".confidence: expected an object");
      }
      for (const auto& [name, value] : d.at("confidence").items()) {
        ObjectClass cls;
        try {
          cls = object_class_from_string(name);
        } catch (const ParseError& e) {
          throw ParseError(ctx + ".confidence: " + e.what());
        }
        const std::string cctx = ctx + ".confidence." + name;
        expect_keys(value, {"mean", "spread"}, cctx);
        ConfidenceParams params;
        read_field(value, "mean", params.mean, cctx);
        read_field(value, "spread", params.spread, cctx);
        s.detector.confidence[cls] = params;
      }
    }
  }

  if (j.contains("tracks")) {
    if (!j.at("tracks").is_array()) {
      throw ParseError(context + ".tracks: expected an array");
    }
    std::size_t track_no = 0;
    for (const auto& t : j.at("tracks")) {
      std::ostringstream ctxs;
      ctxs << context << ".tracks[" << track_no << "]";
      const std::string ctx = ctxs.str();
      expect_keys(t, {"class", "size_m", "waypoints"}, ctx);
      EntityTrack track;
      if (!t.contains("class")) {
        throw ParseError(ctx + ": missing required key \"class\"");
      }
      read_string_enum(t, "class", ctx, object_class_from_string,
                       track.entity_class);
      read_field(t, "size_m", track.size_m, ctx);
      if (!t.contains("waypoints") || !t.at("waypoints").is_array()) {
        throw ParseError(ctx + ": missing \"waypoints\" array");
      }
      for (const auto& w : t.at("waypoints")) {
        expect_keys(w, {"t", "x", "y"}, ctx + ".waypoints");
        for (const char* key : {"t", "x", "y"}) {
          if (!w.contains(key)) {
            throw ParseError(ctx + ".waypoints: missing required key \"" +
                             key + "\"");
          }
        }
        Waypoint wp;
        read_field(w, "t", wp.time, ctx);
        read_field(w, "x", wp.x, ctx);
        read_field(w, "y", wp.y, ctx);
        track.waypoints.push_back(wp);
      }
      s.tracks.push_back(std::move(track));
      ++track_no;
    }
  }

  try {
    s.validate();
  } catch (const DomainError& e) {
    throw ParseError(context + ": " + e.what());
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path,
                       const CameraSpec& default_camera) {
  return parse_scenario(load_json_file(path), default_camera, path.string());
}

ordered_json scenario_to_json(const Scenario& scenario) {
  ordered_json j;
  j["camera"] = {{"horizontal_fov_deg", scenario.camera.horizontal_fov_deg},
                 {"vertical_fov_deg", scenario.camera.vertical_fov_deg},
                 {"max_detection_range_m", scenario.camera.max_detection_range_m},
                 {"frame_rate_fps", scenario.camera.frame_rate_fps}};
  j["duration_s"] = scenario.duration_s;
  j["lighting"] = to_string(scenario.lighting);
  ordered_json det;
  det["true_positive_rate"] = scenario.detector.true_positive_rate;
  ordered_json confusion = ordered_json::object();
  for (const auto& [cls, p] : scenario.detector.confusion) {
    confusion[to_string(cls)] = p;
  }
  det["confusion"] = std::move(confusion);
  ordered_json confidence = ordered_json::object();
  for (const auto& [cls, params] : scenario.detector.confidence) {
    confidence[to_string(cls)] = {{"mean", params.mean},
                                  {"spread", params.spread}};
  }
  det["confidence"] = std::move(confidence);
  det["confusion_conf_min"] = scenario.detector.confusion_conf_min;
  det["night_degradation"] = scenario.detector.night_degradation;
  det["seed"] = scenario.detector.seed;
  j["detector"] = std::move(det);
  ordered_json tracks = ordered_json::array();
  for (const auto& t : scenario.tracks) {
    ordered_json track;
    track["class"] = to_string(t.entity_class);
    track["size_m"] = t.size_m;
    ordered_json wps = ordered_json::array();
    for (const auto& w : t.waypoints) {
      wps.push_back({{"t", w.time}, {"x", w.x}, {"y", w.y}});
    }
    track["waypoints"] = std::move(wps);
    tracks.push_back(std::move(track));
  }
  j["tracks"] = std::move(tracks);
  return j;
}

ordered_json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError(path.string() + ": cannot open file");
  }
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace bearguard
