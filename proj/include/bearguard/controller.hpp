#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bearguard/event_log.hpp"
#include "bearguard/types.hpp"

namespace bearguard {

// Deterrent canister parameters. Pure configuration metadata; construction
// rejects values outside the supported envelope.
struct CanisterSpec {
  double capsaicin_fraction = 0.03;  // 0.02 .. 0.05
  double menthol_fraction = 0.015;   // 0.01 .. 0.02
  double pressure_mpa = 2.8;         // <= 2.8
  double range_m = 13.0;             // <= 13

  void validate() const;
};

struct ControllerConfig {
  double trigger_latency_budget = 0.2;  // seconds, decision to trigger
  double actuation_delay = 0.05;        // seconds, modeled hardware delay
  double spray_duration = 1.0;          // seconds
  double cooldown = 30.0;               // seconds after a spray ends
  bool human_inhibit = true;
  int canister_total_sprays = 20;
  double human_confidence_threshold = 0.5;
  std::string device_id = "unit-1";  // log attribution
  CanisterSpec canister;

  void validate() const;
};

enum class ControllerMode { Idle, Spraying, Cooldown };

std::string to_string(ControllerMode m);

struct ControllerState {
  ControllerMode mode = ControllerMode::Idle;
  int sprays_remaining = 0;
  std::optional<double> last_trigger_time;
  std::optional<double> last_step_time;  // monotonicity guard

  static ControllerState initial(const ControllerConfig& cfg);
};

// Actuation record mirrored into SprayTriggered payloads.
struct SprayEvent {
  double trigger_time = 0.0;
  double decision_time = 0.0;
  double duration = 0.0;
  int sprays_remaining_after = 0;
};

// Advances the state machine by one segment decision.
//
// BearDetected with no human present, mode Idle, and sprays left triggers a
// spray: the trigger fires actuation_delay after `now` (checked against the
// latency budget), one spray is consumed, and the controller stays busy
// until trigger + spray_duration + cooldown. BearDetected with a human
// present emits SprayInhibited instead (when human_inhibit is on). Everything
// else advances silently.
//
// `now` must be strictly greater than any previously stepped time; the
// controller refuses to rewind.
std::pair<ControllerState, std::optional<EventRecord>> step(
    const ControllerState& state, const Segment& segment, bool human_present,
    double now, const ControllerConfig& cfg);

// True when any frame carries a human detection at or above the threshold.
bool segment_has_human(const Segment& segment, double confidence_threshold);

struct TimelineEntry {
  double time = 0.0;
  Segment segment;
  bool human_present = false;
};

struct TimelineResult {
  std::vector<EventRecord> events;
  ControllerState final_state;
};

// Folds step over a strictly increasing timeline.
TimelineResult run_timeline(const std::vector<TimelineEntry>& entries,
                            const ControllerConfig& cfg);

}  // namespace bearguard
