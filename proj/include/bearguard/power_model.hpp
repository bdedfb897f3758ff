#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bearguard/errors.hpp"

namespace bearguard {

struct PowerConfig {
  double battery_capacity_mah = 11000.0;
  double nominal_voltage_v = 3.7;
  double panel_rating_w = 1.0;
  // Average fraction of the panel's rated output over 24 h.
  double harvest_derating = 0.15;
  double draw_active_mw = 500.0;
  double draw_idle_mw = 200.0;
  double duty_cycle_active = 1.0;  // fraction of time in active draw

  void validate() const;
};

struct BatteryState {
  double energy_wh = 0.0;
  double time_s = 0.0;
};

// battery_capacity_mah * nominal_voltage_v / 1000.
double capacity_wh(const PowerConfig& cfg);

// Duty-cycle-weighted average draw in mW.
double average_draw_mw(const PowerConfig& cfg);

// Average harvest in mW (0 when solar is disabled).
double average_harvest_mw(const PowerConfig& cfg, bool solar_enabled);

// Days until a full battery is drained at the average net draw.
// nullopt means harvest covers the draw: runtime is unbounded.
std::optional<double> runtime_days(const PowerConfig& cfg, bool solar_enabled);

struct SocSeries {
  std::vector<BatteryState> samples;
  // First simulated time at which the battery hit empty, if it did.
  std::optional<double> depletion_time_s;
};

// Forward-Euler state-of-charge integration starting from a full battery.
// harvest_fraction(t) gives the instantaneous fraction of the panel's rated
// output at time t (seconds); pass a constant cfg.harvest_derating to mirror
// the average-budget arithmetic of runtime_days. Energy is clamped to
// [0, capacity].
SocSeries simulate_soc(const PowerConfig& cfg, double horizon_days,
                       double timestep_s,
                       const std::function<double(double)>& harvest_fraction);

}  // namespace bearguard
