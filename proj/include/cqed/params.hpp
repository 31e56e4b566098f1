#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "cqed/constants.hpp"
#include "cqed/specs.hpp"

namespace cqed {

/// ω_r in rad/s; the override, when present, is returned verbatim.
double cantilever_frequency(const CantileverSpec& spec);
double effective_mass(const CantileverSpec& spec);

/// Dipole-approximation gradient at distance y_0, limited by the magnet's
/// gradient_cap. Throws DomainError for y_0 <= 0.
double dipole_gradient(const MagnetSpec& magnet, double y0,
                       const PhysicalConstants& consts = {});

struct ChemicalPotential {
  double mu = 0.0;                       // J
  std::array<double, 3> tf_radii{};      // m, along x, y, z
};

ChemicalPotential chemical_potential(const CondensateSpec& cond, const TrapSpec& trap,
                                     const PhysicalConstants& consts = {});

/// γ_tbl(N) + γ_0, evaluating the three-body law literally for any N.
double three_body_rate(const TrapSpec& trap, std::int64_t atom_number);

struct LossRates {
  double three_body = 0.0;
  double background = 0.0;
  [[nodiscard]] double total() const { return three_body + background; }
};

/// Trap loss used by the derivation chain: a single atom has no collisional
/// partner, so N == 1 keeps only the background rate.
LossRates loss_rates(const TrapSpec& trap, std::int64_t atom_number);

double larmor_frequency(double field, const PhysicalConstants& consts = {});
double thermal_occupancy(double omega_r, double temperature,
                         const PhysicalConstants& consts = {});
double zero_point_amplitude(double m_eff, double omega_r,
                            const PhysicalConstants& consts = {});
double coupling_g(double gradient, double a_qm, const PhysicalConstants& consts = {});
double damping_rate(double omega_r, double quality_factor);

/// C = g²/2κγ. A vanishing dissipation rate with g > 0 yields an unbounded
/// result rather than inf/NaN.
struct Cooperativity {
  std::optional<double> value;

  [[nodiscard]] bool unbounded() const { return !value.has_value(); }
  /// N-atom value C·N (unbounded stays unbounded).
  [[nodiscard]] Cooperativity collective(std::int64_t atom_number) const {
    if (!value) return *this;
    return {*value * static_cast<double>(atom_number)};
  }
};

Cooperativity cooperativity(double g, double kappa, double gamma);

/// Full device description consumed by derive_all.
struct DeviceSpecs {
  CantileverSpec cantilever;
  MagnetSpec magnet;
  TrapSpec trap;
  CondensateSpec condensate;
  double temperature = 0.0;  // K

  void validate() const;
};

enum class FrequencyRoute { BeamFormula, Override };
enum class GradientRoute { Dipole, Capped, Override };
enum class LossRoute { ThreeBodyPlusBackground, BackgroundOnly };

std::string_view to_string(FrequencyRoute route);
std::string_view to_string(GradientRoute route);
std::string_view to_string(LossRoute route);

/// Every coupled-system quantity derived from a DeviceSpecs. All
/// frequencies and rates are angular / per second.
struct DerivedParams {
  double omega_r = 0.0;
  double m_eff = 0.0;
  double a_qm = 0.0;
  double kappa = 0.0;
  double gradient = 0.0;          // G_m actually used
  double dipole_gradient = 0.0;   // uncapped point-dipole estimate, always recorded
  double mu_c = 0.0;
  std::array<double, 3> tf_radii{};
  double gamma_three_body = 0.0;
  double gamma_background = 0.0;
  double gamma = 0.0;
  double omega_L = 0.0;
  double n_th = 0.0;
  double g = 0.0;
  double rabi_per_amplitude = 0.0;
  double mean_sq_amplitude = 0.0;  // thermal ⟨a²⟩ at the device temperature
  Cooperativity cooperativity;
  Cooperativity collective_cooperativity;
  double omega_bar_t = 0.0;
  std::int64_t atom_number = 1;
  double detuning = 0.0;
  double temperature = 0.0;

  FrequencyRoute frequency_route = FrequencyRoute::BeamFormula;
  GradientRoute gradient_route = GradientRoute::Dipole;
  LossRoute loss_route = LossRoute::ThreeBodyPlusBackground;
};

/// Pure composition of the relations above. Component failures are
/// rethrown with the offending field in the message.
DerivedParams derive_all(const DeviceSpecs& specs, const PhysicalConstants& consts = {});

}  // namespace cqed
