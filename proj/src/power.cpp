#include "uavsim/power.hpp"

#include <cmath>
#include <stdexcept>

namespace uavsim {

HorizontalVertical decompose_velocity(const Vec3& v) {
  return {std::hypot(v.x(), v.y()), v.z()};
}

double kappa(double v, double a, const UavSpec& uav, const Environment& env) {
  const double lift = env.air_density * uav.fuselage_drag * uav.rotor_solidity *
                          uav.rotor_disc_area * v * v +
                      2.0 * uav.weight_n * a / env.gravity;
  return std::sqrt(1.0 + lift * lift / (4.0 * uav.weight_n * uav.weight_n));
}

std::vector<double> finite_diff_accel(const std::vector<double>& times_s,
                                      const std::vector<double>& speeds) {
  const std::size_t n = times_s.size();
  std::vector<double> a(n, 0.0);
  if (n < 2) return a;
  a[0] = (speeds[1] - speeds[0]) / (times_s[1] - times_s[0]);
  a[n - 1] = (speeds[n - 1] - speeds[n - 2]) / (times_s[n - 1] - times_s[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    a[i] = (speeds[i + 1] - speeds[i - 1]) / (times_s[i + 1] - times_s[i - 1]);
  }
  return a;
}

namespace {

void validate(const VelocityProfile& p) {
  if (p.times_s.size() < 2 || p.times_s.size() != p.v_h.size() ||
      p.times_s.size() != p.v_v.size()) {
    throw std::invalid_argument("velocity profile: mismatched sample arrays");
  }
  for (std::size_t i = 1; i < p.times_s.size(); ++i) {
    if (!(p.times_s[i] > p.times_s[i - 1])) {
      throw std::invalid_argument("velocity profile: times must increase");
    }
  }
}

// Blade-profile + induced instantaneous power at one sample.
double blade_induced(double v, double a, const UavSpec& uav,
                     const Environment& env) {
  const double k = kappa(v, a, uav, env);
  const double v2 = v * v;
  const double induced_arg =
      std::sqrt(k * k + v2 * v2 / (uav.c3 * uav.c3)) - v2 / uav.c3;
  return uav.c0 * (1.0 + uav.c1 * v2) +
         k * uav.c2 * std::sqrt(std::max(0.0, induced_arg));
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  double e = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    e += 0.5 * (f[i] + f[i - 1]) * (t[i] - t[i - 1]);
  }
  return e;
}

}  // namespace

double horizontal_energy(const VelocityProfile& profile, const UavSpec& uav,
                         const Environment& env) {
  validate(profile);
  const std::vector<double> acc = finite_diff_accel(profile.times_s, profile.v_h);
  std::vector<double> p(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double v = profile.v_h[i];
    p[i] = blade_induced(v, acc[i], uav, env) + uav.c4 * v * v * v;
  }
  const double kinetic =
      uav.weight_n / (2.0 * env.gravity) *
      (profile.v_h.back() * profile.v_h.back() -
       profile.v_h.front() * profile.v_h.front());
  return trapezoid(profile.times_s, p) + kinetic;
}

double vertical_energy(const VelocityProfile& profile, const UavSpec& uav,
                       const Environment& env, const PowerOptions& opts) {
  validate(profile);
  std::vector<double> speed(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    speed[i] = std::abs(profile.v_v[i]);
  }
  const std::vector<double> acc = finite_diff_accel(profile.times_s, speed);
  std::vector<double> p(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    p[i] = blade_induced(speed[i], acc[i], uav, env);
  }
  double e = trapezoid(profile.times_s, p);
  if (opts.dedupe_hover_baseline) {
    e = std::max(0.0, e - (uav.c0 + uav.c2) * profile.duration());
  }
  return e;
}

PowerReport trajectory_power(const VelocityProfile& profile, const UavSpec& uav,
                             const Environment& env, const PowerOptions& opts) {
  validate(profile);
  PowerReport r;
  r.duration_s = profile.duration();
  if (!(r.duration_s > 0.0)) {
    throw std::invalid_argument("trajectory_power: zero-duration trajectory");
  }
  r.horizontal_energy_j = horizontal_energy(profile, uav, env);
  r.vertical_energy_j = vertical_energy(profile, uav, env, opts);
  r.avg_power_w = (r.horizontal_energy_j + r.vertical_energy_j) / r.duration_s;
  return r;
}

double hover_power(const UavSpec& uav, const PowerOptions& opts) {
  const double base = uav.c0 + uav.c2;
  return opts.dedupe_hover_baseline ? base : 2.0 * base;
}

double min_level_flight_power(const UavSpec& uav, const Environment& env,
                              const PowerOptions& opts) {
  double best = hover_power(uav, opts);
  for (int i = 1; i <= 500; ++i) {
    const double v = uav.v_max * i / 500.0;
    double p = blade_induced(v, 0.0, uav, env) + uav.c4 * v * v * v;
    p += opts.dedupe_hover_baseline ? 0.0 : uav.c0 + uav.c2;
    best = std::min(best, p);
  }
  return best;
}

}  // namespace uavsim
