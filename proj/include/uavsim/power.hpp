#pragma once

#include <vector>

#include "uavsim/scenario.hpp"

namespace uavsim {

struct VelocityProfile {
  std::vector<double> times_s;   // strictly increasing samples tau_0..tau_M
  std::vector<double> v_h;       // horizontal speed per sample, m/s
  std::vector<double> v_v;       // signed vertical speed per sample, m/s

  std::size_t size() const { return times_s.size(); }
  double duration() const { return times_s.empty() ? 0.0 : times_s.back() - times_s.front(); }
};

struct PowerOptions {
  // Literal accumulation keeps the zero-speed blade/induced baseline in both
  // the horizontal and vertical components, so hover costs 2*(C0+C2).
  // Deduplicated mode removes that baseline from the vertical component.
  bool dedupe_hover_baseline = false;
};

struct PowerReport {
  double horizontal_energy_j = 0.0;
  double vertical_energy_j = 0.0;
  double duration_s = 0.0;
  double avg_power_w = 0.0;  // (E_h + E_v) / duration
};

struct HorizontalVertical {
  double v_h = 0.0;
  double v_v = 0.0;
};

// Split a 3D velocity vector into horizontal magnitude and signed vertical
// component.
HorizontalVertical decompose_velocity(const Vec3& v);

// Thrust-to-weight ratio for a generic speed and acceleration; >= 1.
double kappa(double v, double a, const UavSpec& uav, const Environment& env);

// Finite-difference accelerations on a sampled speed series (central in the
// interior, one-sided at endpoints).
std::vector<double> finite_diff_accel(const std::vector<double>& times_s,
                                      const std::vector<double>& speeds);

// Blade-profile + induced + parasitic energy of arbitrary accelerating
// horizontal motion, plus the kinetic boundary term.
double horizontal_energy(const VelocityProfile& profile, const UavSpec& uav,
                         const Environment& env);

// Blade-profile + induced energy of arbitrary accelerating vertical motion;
// the vertical speed enters as a magnitude.
double vertical_energy(const VelocityProfile& profile, const UavSpec& uav,
                       const Environment& env,
                       const PowerOptions& opts = PowerOptions{});

PowerReport trajectory_power(const VelocityProfile& profile, const UavSpec& uav,
                             const Environment& env,
                             const PowerOptions& opts = PowerOptions{});

// Mobility power while holding position.
double hover_power(const UavSpec& uav,
                   const PowerOptions& opts = PowerOptions{});

// Minimum trajectory-average power over constant-speed level flight; used as
// the feasibility floor for the average-power constraint.
double min_level_flight_power(const UavSpec& uav, const Environment& env,
                              const PowerOptions& opts = PowerOptions{});

}  // namespace uavsim
