#pragma once

// Closed-form device relations. Every function is a pure expression in its
// arguments; frequencies are angular throughout.

#include <cmath>
#include <numbers>

namespace cqed {

/// Fundamental out-of-plane flexural mode of a tip-loaded cantilever (rad/s).
template <typename Scalar>
Scalar beam_frequency(Scalar length, Scalar width, Scalar thickness, Scalar youngs_modulus,
                      Scalar density, Scalar tip_mass) {
  using std::sqrt;
  const Scalar beam = Scalar(0.24) * density * length * width * thickness;
  const Scalar c = tip_mass / beam;
  return Scalar(2) * std::numbers::pi_v<Scalar> * Scalar(0.16) *
         sqrt(youngs_modulus / (density * (Scalar(1) + c))) * thickness / (length * length);
}

/// Mode-integrated effective mass 0.24 ρ l w t + m.
template <typename Scalar>
Scalar beam_effective_mass(Scalar length, Scalar width, Scalar thickness, Scalar density,
                           Scalar tip_mass) {
  return Scalar(0.24) * density * length * width * thickness + tip_mass;
}

/// On-axis gradient of a point dipole at distance y: 3 μ_0 |μ| / (4π y⁴).
template <typename Scalar>
Scalar point_dipole_gradient(Scalar moment, Scalar y, Scalar mu_0) {
  const Scalar y2 = y * y;
  return Scalar(3) * mu_0 * moment / (Scalar(4) * std::numbers::pi_v<Scalar> * y2 * y2);
}

/// Thomas-Fermi chemical potential of N atoms in a harmonic trap.
template <typename Scalar>
Scalar thomas_fermi_mu(Scalar atom_number, Scalar omega_bar, Scalar scattering_length,
                       Scalar atom_mass, Scalar hbar) {
  using std::pow;
  using std::sqrt;
  const Scalar osc_length = sqrt(hbar / (atom_mass * omega_bar));
  return Scalar(0.5) * hbar * omega_bar *
         pow(Scalar(15) * atom_number * scattering_length / osc_length, Scalar(0.4));
}

/// Thomas-Fermi radius along an axis with trap frequency ω.
template <typename Scalar>
Scalar thomas_fermi_radius(Scalar mu, Scalar omega, Scalar atom_mass) {
  using std::sqrt;
  return sqrt(Scalar(2) * mu / (atom_mass * omega * omega));
}

/// Three-body loss rate of |1,−1⟩ for ω̄_t in rad/s: 2.2e-12 s^{7/5} ω̄^{12/5} N^{4/5}.
template <typename Scalar>
Scalar three_body_loss(Scalar omega_bar, Scalar atom_number) {
  using std::pow;
  return Scalar(2.2e-12) * pow(omega_bar, Scalar(2.4)) * pow(atom_number, Scalar(0.8));
}

template <typename Scalar>
Scalar larmor(Scalar field, Scalar mu_B, Scalar g_F, Scalar hbar) {
  using std::abs;
  return mu_B * abs(g_F) * field / hbar;
}

/// Bose-Einstein occupancy; exactly zero at T = 0.
template <typename Scalar>
Scalar bose_occupancy(Scalar omega, Scalar temperature, Scalar hbar, Scalar k_B) {
  using std::expm1;
  if (temperature <= Scalar(0)) return Scalar(0);
  return Scalar(1) / expm1(hbar * omega / (k_B * temperature));
}

/// R.m.s. zero-point amplitude √(ħ / 2 m ω).
template <typename Scalar>
Scalar zero_point(Scalar mass, Scalar omega, Scalar hbar) {
  using std::sqrt;
  return sqrt(hbar / (Scalar(2) * mass * omega));
}

/// μ_B G / (√8 ħ): Rabi frequency per metre of tip displacement.
template <typename Scalar>
Scalar rabi_per_amplitude(Scalar gradient, Scalar mu_B, Scalar hbar) {
  using std::sqrt;
  return mu_B * gradient / (sqrt(Scalar(8)) * hbar);
}

/// Amplitude damping rate ω_r / 2Q.
template <typename Scalar>
Scalar amplitude_damping(Scalar omega, Scalar quality_factor) {
  return omega / (Scalar(2) * quality_factor);
}

/// Classical thermal ⟨a²⟩ = 2 k_B T / (m ω²) of the tip amplitude.
template <typename Scalar>
Scalar thermal_mean_sq_amplitude(Scalar mass, Scalar omega, Scalar temperature, Scalar k_B) {
  return Scalar(2) * k_B * temperature / (mass * omega * omega);
}

}  // namespace cqed
