#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "bearguard/controller.hpp"
#include "bearguard/power_model.hpp"
#include "bearguard/segment_filter.hpp"
#include "bearguard/simulator.hpp"

namespace bearguard {

// The main configuration file: one JSON object with optional sections
// filter / controller / power / camera plus a device_id. Missing sections
// fall back to defaults; unknown keys are rejected so typos surface.
struct AppConfig {
  std::string device_id = "unit-1";
  FilterConfig filter;
  ControllerConfig controller;
  PowerConfig power;
  CameraSpec camera;

  void validate() const;
};

AppConfig parse_app_config(const nlohmann::ordered_json& j,
                           const std::string& context);
AppConfig load_app_config(const std::filesystem::path& path);

nlohmann::ordered_json app_config_to_json(const AppConfig& cfg);

// Scenario files carry duration, lighting, detector, tracks, and optionally
// a camera block; when absent the camera defaults from the app config apply.
Scenario parse_scenario(const nlohmann::ordered_json& j,
                        const CameraSpec& default_camera,
                        const std::string& context);
Scenario load_scenario(const std::filesystem::path& path,
                       const CameraSpec& default_camera);

nlohmann::ordered_json scenario_to_json(const Scenario& scenario);

// Parses a JSON document from a file, turning parse failures into ParseError
// with the file name and position.
nlohmann::ordered_json load_json_file(const std::filesystem::path& path);

}  // namespace bearguard
