#pragma once

#include <numbers>

namespace cqed {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Angular frequency (rad/s) from an ordinary frequency in Hz.
constexpr double hz_to_angular(double hz) { return kTwoPi * hz; }
/// Ordinary frequency in Hz from an angular frequency (rad/s).
constexpr double angular_to_hz(double omega) { return omega / kTwoPi; }

/// Physical constants threaded through every derivation. Defaults are
/// CODATA 2018 values and ⁸⁷Rb in F=1.
struct PhysicalConstants {
  double hbar = 1.054571817e-34;     // J s
  double mu_B = 9.2740100783e-24;    // J/T
  double k_B = 1.380649e-23;         // J/K
  double mu_0 = 1.25663706212e-6;    // T m/A
  double atom_mass = 1.443e-25;      // kg
  double scattering_length = 5.3e-9; // m
  double g_F = -0.5;

  /// Throws SpecError unless every constant but g_F is positive and finite.
  void validate() const;
};

/// Default material data used when a configuration does not override it.
namespace materials {
inline constexpr double kSiliconYoungsModulus = 169e9;  // Pa
inline constexpr double kSiliconDensity = 2330.0;       // kg/m^3
inline constexpr double kCobaltSaturation = 1.4e6;      // A/m
inline constexpr double kCobaltDensity = 8900.0;        // kg/m^3
}  // namespace materials

}  // namespace cqed
