#pragma once

#include <array>
#include <cstdint>
#include <optional>

namespace cqed {

/// Singly clamped beam carrying the coupling magnet on its tip. SI units.
struct CantileverSpec {
  double length = 0.0;
  double width = 0.0;
  double thickness = 0.0;
  double youngs_modulus = 0.0;
  double density = 0.0;
  double quality_factor = 1.0;
  /// Magnet plus paddle mass carried by the tip (kg).
  double tip_mass = 0.0;
  /// Measured/simulated ω_r (rad/s) replacing the beam formula, e.g. to
  /// include the magnetic spring shift.
  std::optional<double> frequency_override;

  void validate() const;
};

/// Single-domain bar magnet on the cantilever tip.
struct MagnetSpec {
  double length = 0.0;
  double width = 0.0;
  double thickness = 0.0;
  double saturation_magnetization = 0.0;  // A/m
  double gap = 0.0;                       // to the compensation magnets, informational
  /// Upper bound on the usable gradient (T/m), set by trap distortion.
  std::optional<double> gradient_cap;
  /// Gradient supplied directly (T/m); bypasses the dipole estimate.
  std::optional<double> gradient_override;

  /// |μ_m| = M_s l_m w_m t_m in A m².
  [[nodiscard]] double dipole_moment() const {
    return saturation_magnetization * length * width * thickness;
  }
  void validate() const;
};

struct TrapSpec {
  double omega_x = 0.0;  // rad/s
  double omega_y = 0.0;
  double omega_z = 0.0;
  double distance = 0.0;          // y_0, m
  double field = 0.0;             // B_0, T
  double background_loss = 0.0;   // γ_0, 1/s

  /// Geometric mean trap frequency (ω_x ω_y ω_z)^{1/3}.
  [[nodiscard]] double omega_bar() const;
  [[nodiscard]] std::array<double, 3> omegas() const { return {omega_x, omega_y, omega_z}; }
  void validate() const;
};

struct CondensateSpec {
  std::int64_t atom_number = 1;
  double detuning = 0.0;  // δ = ω_r − ω_L, rad/s, signed

  void validate() const;
};

}  // namespace cqed
