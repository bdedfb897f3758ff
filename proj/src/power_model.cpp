#include "bearguard/power_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bearguard {

void PowerConfig::validate() const {
  if (battery_capacity_mah <= 0.0 || nominal_voltage_v <= 0.0 ||
      panel_rating_w <= 0.0 || harvest_derating <= 0.0 ||
      draw_active_mw <= 0.0 || draw_idle_mw <= 0.0) {
    throw DomainError("power config: all ratings must be positive");
  }
  if (draw_idle_mw > draw_active_mw) {
    std::ostringstream os;
    os << "power config: idle draw " << draw_idle_mw
       << " mW exceeds active draw " << draw_active_mw << " mW";
    throw DomainError(os.str());
  }
  if (duty_cycle_active < 0.0 || duty_cycle_active > 1.0) {
    std::ostringstream os;
    os << "power config: duty cycle " << duty_cycle_active << " outside [0, 1]";
    throw DomainError(os.str());
  }
}

double capacity_wh(const PowerConfig& cfg) {
  cfg.validate();
  return cfg.battery_capacity_mah * cfg.nominal_voltage_v / 1000.0;
}

double average_draw_mw(const PowerConfig& cfg) {
  return cfg.duty_cycle_active * cfg.draw_active_mw +
         (1.0 - cfg.duty_cycle_active) * cfg.draw_idle_mw;
}

double average_harvest_mw(const PowerConfig& cfg, bool solar_enabled) {
  if (!solar_enabled) return 0.0;
  return cfg.panel_rating_w * cfg.harvest_derating * 1000.0;
}

std::optional<double> runtime_days(const PowerConfig& cfg,
                                   bool solar_enabled) {
  cfg.validate();
  double draw_mw = average_draw_mw(cfg);
  double harvest_mw = average_harvest_mw(cfg, solar_enabled);
  if (harvest_mw >= draw_mw) return std::nullopt;
  double net_w = (draw_mw - harvest_mw) / 1000.0;
  return capacity_wh(cfg) / net_w / 24.0;
}

SocSeries simulate_soc(const PowerConfig& cfg, double horizon_days,
                       double timestep_s,
                       const std::function<double(double)>& harvest_fraction) {
  cfg.validate();
  if (timestep_s <= 0.0) {
    throw DomainError("simulate_soc: timestep must be positive");
  }
  if (horizon_days <= 0.0) {
    throw DomainError("simulate_soc: horizon must be positive");
  }

  const double cap = capacity_wh(cfg);
  const double draw_w = average_draw_mw(cfg) / 1000.0;
  const double horizon_s = horizon_days * 86400.0;

  SocSeries series;
  series.samples.reserve(
      static_cast<std::size_t>(horizon_s / timestep_s) + 2);

  double energy = cap;
  double t = 0.0;
  series.samples.push_back({energy, t});
  while (t < horizon_s) {
    double dt = std::min(timestep_s, horizon_s - t);
    double harvest_w = cfg.panel_rating_w * harvest_fraction(t);
    energy += (harvest_w - draw_w) * dt / 3600.0;
    energy = std::clamp(energy, 0.0, cap);
    t += dt;
    series.samples.push_back({energy, t});
    if (energy <= 0.0 && !series.depletion_time_s) {
      series.depletion_time_s = t;
    }
  }
  return series;
}

}  // namespace bearguard
