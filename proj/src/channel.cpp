#include "uavsim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace uavsim {

double pathloss(double distance_m, LinkState state, const Environment& env) {
  if (distance_m < 1.0) {
    throw std::domain_error("pathloss: distance below 1 m reference");
  }
  if (state == LinkState::LoS) {
    return env.beta0 * std::pow(distance_m, -env.alpha_los);
  }
  return env.kappa_nlos * env.beta0 * std::pow(distance_m, -env.alpha_nlos);
}

double p_los(double theta_deg, double z1, double z2) {
  return 1.0 / (1.0 + z1 * std::exp(-z2 * (theta_deg - z1)));
}

double rician_k(double theta_deg, double k1, double k2) {
  return k1 * std::exp(k2 * theta_deg);
}

Eigen::VectorXcd upa_steering(int n_antennas, double ux, double uy) {
  // Near-square factorization of the array.
  int rows = static_cast<int>(std::sqrt(static_cast<double>(n_antennas)));
  while (rows > 1 && n_antennas % rows != 0) --rows;
  const int cols = n_antennas / rows;
  Eigen::VectorXcd a(n_antennas);
  const std::complex<double> j(0.0, 1.0);
  int k = 0;
  for (int m = 0; m < rows; ++m) {
    for (int n = 0; n < cols; ++n) {
      a(k++) = std::exp(j * M_PI * (m * ux + n * uy));
    }
  }
  return a;
}

CMatrix los_component(const Vec3& p_uav, const Vec3& p_gn, int a_u, int a_g) {
  Vec3 dir = (p_uav - p_gn).normalized();
  Eigen::VectorXcd au = upa_steering(a_u, dir.x(), dir.y());
  Eigen::VectorXcd ag = upa_steering(a_g, dir.x(), dir.y());
  return au * ag.transpose();  // unit-modulus rank-1 outer product
}

namespace {

CMatrix rayleigh(int a_u, int a_g, Rng& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  CMatrix m(a_u, a_g);
  for (int r = 0; r < a_u; ++r) {
    for (int c = 0; c < a_g; ++c) {
      const double re = n(rng);
      const double im = n(rng);
      m(r, c) = std::complex<double>(re, im);
    }
  }
  return m;
}

}  // namespace

CMatrix sample_fading(LinkState state, double theta_deg, const Vec3& p_uav,
                      const Vec3& p_gn, int a_u, int a_g,
                      const Environment& env, Rng& rng) {
  if (a_u < a_g || a_g < 1) {
    throw std::invalid_argument("sample_fading: need A_u >= A_g >= 1");
  }
  CMatrix ray = rayleigh(a_u, a_g, rng);
  if (state == LinkState::NLoS) return ray;
  const double k = rician_k(theta_deg, env.k1, env.k2);
  CMatrix det = los_component(p_uav, p_gn, a_u, a_g);
  return std::sqrt(k / (k + 1.0)) * det + std::sqrt(1.0 / (k + 1.0)) * ray;
}

ChannelRealization sample_channel(const Vec3& p_uav, const Vec3& p_gn, int a_u,
                                  int a_g, const Environment& env, Rng& rng) {
  const LinkGeometry geo = link_geometry(p_uav, p_gn);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const bool los = u(rng) < p_los(geo.elevation_deg, env.z1, env.z2);
  ChannelRealization cr;
  cr.state = los ? LinkState::LoS : LinkState::NLoS;
  cr.beta = pathloss(geo.distance_m, cr.state, env);
  cr.fading = sample_fading(cr.state, geo.elevation_deg, p_uav, p_gn, a_u, a_g,
                            env, rng);
  return cr;
}

}  // namespace uavsim
