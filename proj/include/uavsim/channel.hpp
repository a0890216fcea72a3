#pragma once

#include <Eigen/Dense>
#include <complex>

#include "uavsim/rng.hpp"
#include "uavsim/scenario.hpp"

namespace uavsim {

using CMatrix = Eigen::MatrixXcd;

enum class LinkState { LoS, NLoS };

struct ChannelRealization {
  double beta = 0.0;  // linear large-scale gain
  LinkState state = LinkState::LoS;
  CMatrix fading;  // Lambda, A_u x A_g
};

// Large-scale gain: beta0 * d^-alpha (LoS) or kappa * beta0 * d^-alpha_nlos.
double pathloss(double distance_m, LinkState state, const Environment& env);

// Logistic LoS probability in the elevation angle (degrees).
double p_los(double theta_deg, double z1, double z2);

// Angle-dependent Rician K-factor, k1 * exp(k2 * theta).
double rician_k(double theta_deg, double k1, double k2);

// Uniform-planar-array steering vector for a unit direction expressed in the
// array plane (half-wavelength spacing); entries unit modulus.
Eigen::VectorXcd upa_steering(int n_antennas, double ux, double uy);

// Rank-1 deterministic LoS fading component for the given link geometry.
CMatrix los_component(const Vec3& p_uav, const Vec3& p_gn, int a_u, int a_g);

// Small-scale fading draw conditioned on a link state.
CMatrix sample_fading(LinkState state, double theta_deg, const Vec3& p_uav,
                      const Vec3& p_gn, int a_u, int a_g,
                      const Environment& env, Rng& rng);

// Full channel draw: state ~ Bernoulli(p_los), then state-conditional beta
// and Rician/Rayleigh fading.
ChannelRealization sample_channel(const Vec3& p_uav, const Vec3& p_gn, int a_u,
                                  int a_g, const Environment& env, Rng& rng);

}  // namespace uavsim
