#include "bearguard/controller.hpp"

#include <cmath>
#include <sstream>

namespace bearguard {

using nlohmann::ordered_json;

void CanisterSpec::validate() const {
  if (capsaicin_fraction < 0.02 || capsaicin_fraction > 0.05) {
    std::ostringstream os;
    os << "canister: capsaicin fraction " << capsaicin_fraction
       << " outside [0.02, 0.05]";
    throw DomainError(os.str());
  }
  if (menthol_fraction < 0.01 || menthol_fraction > 0.02) {
    std::ostringstream os;
    os << "canister: menthol fraction " << menthol_fraction
       << " outside [0.01, 0.02]";
    throw DomainError(os.str());
  }
  if (pressure_mpa <= 0.0 || pressure_mpa > 2.8) {
    std::ostringstream os;
    os << "canister: pressure " << pressure_mpa << " MPa outside (0, 2.8]";
    throw DomainError(os.str());
  }
  if (range_m <= 0.0 || range_m > 13.0) {
    std::ostringstream os;
    os << "canister: range " << range_m << " m outside (0, 13]";
    throw DomainError(os.str());
  }
}

void ControllerConfig::validate() const {
  if (trigger_latency_budget <= 0.0 || spray_duration <= 0.0 ||
      cooldown <= 0.0 || actuation_delay <= 0.0) {
    throw DomainError("controller config: all durations must be positive");
  }
  if (actuation_delay > trigger_latency_budget) {
    std::ostringstream os;
    os << "controller config: actuation delay " << actuation_delay
       << " s exceeds the trigger latency budget " << trigger_latency_budget
       << " s";
    throw DomainError(os.str());
  }
  if (canister_total_sprays < 1) {
    throw DomainError("controller config: canister_total_sprays must be >= 1");
  }
  if (human_confidence_threshold < 0.0 || human_confidence_threshold > 1.0) {
    throw DomainError(
        "controller config: human_confidence_threshold outside [0, 1]");
  }
  canister.validate();
}

std::string to_string(ControllerMode m) {
  switch (m) {
    case ControllerMode::Idle:
      return "Idle";
    case ControllerMode::Spraying:
      return "Spraying";
    case ControllerMode::Cooldown:
      return "Cooldown";
  }
  throw DomainError("unknown ControllerMode enum value");
}

ControllerState ControllerState::initial(const ControllerConfig& cfg) {
  cfg.validate();
  ControllerState s;
  s.sprays_remaining = cfg.canister_total_sprays;
  return s;
}

bool segment_has_human(const Segment& segment, double confidence_threshold) {
  for (const Frame& f : segment.frames) {
    for (const Detection& d : f.detections) {
      if (d.object_class == ObjectClass::Human &&
          d.confidence >= confidence_threshold) {
        return true;
      }
    }
  }
  return false;
}

namespace {

ControllerMode mode_at(const std::optional<double>& last_trigger, double now,
                       const ControllerConfig& cfg) {
  if (!last_trigger) return ControllerMode::Idle;
  double t = *last_trigger;
  if (now < t + cfg.spray_duration) return ControllerMode::Spraying;
  if (now < t + cfg.spray_duration + cfg.cooldown) return ControllerMode::Cooldown;
  return ControllerMode::Idle;
}

}  // namespace

std::pair<ControllerState, std::optional<EventRecord>> step(
    const ControllerState& state, const Segment& segment, bool human_present,
    double now, const ControllerConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(now)) throw DomainError("controller: non-finite time");
  if (state.last_step_time && now <= *state.last_step_time) {
    std::ostringstream os;
    os << "controller: time " << now << " does not advance past "
       << *state.last_step_time;
    throw DomainError(os.str());
  }

  ControllerState next = state;
  next.last_step_time = now;
  next.mode = mode_at(state.last_trigger_time, now, cfg);

  if (segment.decision != SegmentDecision::BearDetected) {
    return {next, std::nullopt};
  }

  if (human_present && cfg.human_inhibit) {
    ordered_json payload;
    payload["decision_time"] = now;
    payload["reason"] = "human_present";
    EventRecord rec(cfg.device_id, now, EventKind::SprayInhibited,
                    std::move(payload));
    return {next, std::move(rec)};
  }

  if (next.mode != ControllerMode::Idle || next.sprays_remaining <= 0) {
    return {next, std::nullopt};
  }

  SprayEvent spray;
  spray.decision_time = now;
  spray.trigger_time = now + cfg.actuation_delay;
  spray.duration = cfg.spray_duration;
  spray.sprays_remaining_after = next.sprays_remaining - 1;

  next.sprays_remaining = spray.sprays_remaining_after;
  next.last_trigger_time = spray.trigger_time;
  next.mode = ControllerMode::Spraying;

  ordered_json payload;
  payload["trigger_time"] = spray.trigger_time;
  payload["decision_time"] = spray.decision_time;
  payload["duration"] = spray.duration;
  payload["sprays_remaining_after"] = spray.sprays_remaining_after;
  EventRecord rec(cfg.device_id, now, EventKind::SprayTriggered,
                  std::move(payload));
  return {next, std::move(rec)};
}

TimelineResult run_timeline(const std::vector<TimelineEntry>& entries,
                            const ControllerConfig& cfg) {
  TimelineResult result;
  result.final_state = ControllerState::initial(cfg);
  for (const TimelineEntry& e : entries) {
    auto [next, event] = step(result.final_state, e.segment, e.human_present,
                              e.time, cfg);
    result.final_state = std::move(next);
    if (event) result.events.push_back(std::move(*event));
  }
  return result;
}

}  // namespace bearguard
