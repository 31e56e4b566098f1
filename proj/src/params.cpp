#include "cqed/params.hpp"

#include <cmath>
#include <string>

#include "cqed/errors.hpp"
#include "cqed/formulas.hpp"

namespace cqed {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw SpecError(what);
}

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void PhysicalConstants::validate() const {
  require(positive(hbar) && positive(mu_B) && positive(k_B) && positive(mu_0) &&
              positive(atom_mass) && positive(scattering_length),
          "constants: hbar, mu_B, k_B, mu_0, atom_mass and scattering_length must be positive");
  require(std::isfinite(g_F), "constants: g_F must be finite");
}

void CantileverSpec::validate() const {
  require(positive(length) && positive(width) && positive(thickness),
          "cantilever: dimensions must be positive");
  require(thickness <= width && width <= length,
          "cantilever: dimensions must satisfy thickness <= width <= length");
  require(positive(youngs_modulus), "cantilever: youngs_modulus must be positive");
  require(positive(density), "cantilever: density must be positive");
  require(std::isfinite(quality_factor) && quality_factor >= 1.0,
          "cantilever: quality_factor must be >= 1");
  require(std::isfinite(tip_mass) && tip_mass >= 0.0, "cantilever: tip_mass must be >= 0");
  if (frequency_override)
    require(positive(*frequency_override), "cantilever: frequency_override must be positive");
}

void MagnetSpec::validate() const {
  require(positive(length) && positive(width) && positive(thickness),
          "magnet: dimensions must be positive");
  require(positive(saturation_magnetization),
          "magnet: saturation_magnetization must be positive");
  require(std::isfinite(gap) && gap >= 0.0, "magnet: gap must be >= 0");
  if (gradient_cap) require(positive(*gradient_cap), "magnet: gradient_cap must be positive");
  if (gradient_override)
    require(std::isfinite(*gradient_override) && *gradient_override >= 0.0,
            "magnet: gradient_override must be >= 0");
}

double TrapSpec::omega_bar() const { return std::cbrt(omega_x * omega_y * omega_z); }

void TrapSpec::validate() const {
  require(positive(omega_x) && positive(omega_y) && positive(omega_z),
          "trap: frequencies must be positive");
  require(positive(distance), "trap: distance must be positive");
  require(positive(field), "trap: field must be positive");
  require(std::isfinite(background_loss) && background_loss >= 0.0,
          "trap: background_loss must be >= 0");
}

void CondensateSpec::validate() const {
  require(atom_number >= 1, "condensate: atom_number must be >= 1");
  require(std::isfinite(detuning), "condensate: detuning must be finite");
}

void DeviceSpecs::validate() const {
  cantilever.validate();
  magnet.validate();
  trap.validate();
  condensate.validate();
  require(std::isfinite(temperature) && temperature >= 0.0, "temperature must be >= 0");
}

double cantilever_frequency(const CantileverSpec& spec) {
  spec.validate();
  if (spec.frequency_override) return *spec.frequency_override;
  const double omega = beam_frequency(spec.length, spec.width, spec.thickness,
                                      spec.youngs_modulus, spec.density, spec.tip_mass);
  if (!positive(omega)) throw SpecError("cantilever: degenerate dimensions give non-finite frequency");
  return omega;
}

double effective_mass(const CantileverSpec& spec) {
  spec.validate();
  return beam_effective_mass(spec.length, spec.width, spec.thickness, spec.density,
                             spec.tip_mass);
}

double dipole_gradient(const MagnetSpec& magnet, double y0, const PhysicalConstants& consts) {
  if (!(y0 > 0.0) || !std::isfinite(y0)) throw DomainError("dipole_gradient: y_0 must be > 0");
  const double raw = point_dipole_gradient(magnet.dipole_moment(), y0, consts.mu_0);
  if (magnet.gradient_cap && *magnet.gradient_cap < raw) return *magnet.gradient_cap;
  return raw;
}

ChemicalPotential chemical_potential(const CondensateSpec& cond, const TrapSpec& trap,
                                     const PhysicalConstants& consts) {
  cond.validate();
  ChemicalPotential out;
  out.mu = thomas_fermi_mu(static_cast<double>(cond.atom_number), trap.omega_bar(),
                           consts.scattering_length, consts.atom_mass, consts.hbar);
  const auto omegas = trap.omegas();
  for (std::size_t i = 0; i < 3; ++i)
    out.tf_radii[i] = thomas_fermi_radius(out.mu, omegas[i], consts.atom_mass);
  return out;
}

double three_body_rate(const TrapSpec& trap, std::int64_t atom_number) {
  return three_body_loss(trap.omega_bar(), static_cast<double>(atom_number)) +
         trap.background_loss;
}

LossRates loss_rates(const TrapSpec& trap, std::int64_t atom_number) {
  LossRates rates;
  rates.background = trap.background_loss;
  if (atom_number > 1)
    rates.three_body = three_body_loss(trap.omega_bar(), static_cast<double>(atom_number));
  return rates;
}

double larmor_frequency(double field, const PhysicalConstants& consts) {
  if (!(field > 0.0)) throw DomainError("larmor_frequency: B_0 must be > 0");
  return larmor(field, consts.mu_B, consts.g_F, consts.hbar);
}

double thermal_occupancy(double omega_r, double temperature, const PhysicalConstants& consts) {
  if (!(omega_r > 0.0)) throw DomainError("thermal_occupancy: omega_r must be > 0");
  if (!(temperature >= 0.0)) throw DomainError("thermal_occupancy: T must be >= 0");
  return bose_occupancy(omega_r, temperature, consts.hbar, consts.k_B);
}

double zero_point_amplitude(double m_eff, double omega_r, const PhysicalConstants& consts) {
  if (!(m_eff > 0.0) || !(omega_r > 0.0))
    throw DomainError("zero_point_amplitude: mass and frequency must be > 0");
  return zero_point(m_eff, omega_r, consts.hbar);
}

double coupling_g(double gradient, double a_qm, const PhysicalConstants& consts) {
  if (!(gradient >= 0.0) || !(a_qm >= 0.0))
    throw DomainError("coupling_g: gradient and amplitude must be >= 0");
  return rabi_per_amplitude(gradient, consts.mu_B, consts.hbar) * a_qm;
}

double damping_rate(double omega_r, double quality_factor) {
  if (!(quality_factor >= 1.0)) throw DomainError("damping_rate: Q must be >= 1");
  return amplitude_damping(omega_r, quality_factor);
}

Cooperativity cooperativity(double g, double kappa, double gamma) {
  if (g == 0.0) return {0.0};
  if (kappa <= 0.0 || gamma <= 0.0) return {std::nullopt};
  return {g * g / (2.0 * kappa * gamma)};
}

std::string_view to_string(FrequencyRoute route) {
  return route == FrequencyRoute::Override ? "override" : "beam_formula";
}

std::string_view to_string(GradientRoute route) {
  switch (route) {
    case GradientRoute::Dipole: return "dipole";
    case GradientRoute::Capped: return "capped";
    case GradientRoute::Override: return "override";
  }
  return "dipole";
}

std::string_view to_string(LossRoute route) {
  return route == LossRoute::BackgroundOnly ? "background_only" : "three_body_plus_background";
}

DerivedParams derive_all(const DeviceSpecs& specs, const PhysicalConstants& consts) {
  consts.validate();
  specs.validate();

  DerivedParams d;
  try {
    d.omega_r = cantilever_frequency(specs.cantilever);
    d.frequency_route = specs.cantilever.frequency_override ? FrequencyRoute::Override
                                                            : FrequencyRoute::BeamFormula;
    d.m_eff = effective_mass(specs.cantilever);
  } catch (const Error& e) {
    throw SpecError(std::string("derive_all: omega_r/m_eff: ") + e.what());
  }
  d.a_qm = zero_point_amplitude(d.m_eff, d.omega_r, consts);
  d.kappa = damping_rate(d.omega_r, specs.cantilever.quality_factor);

  try {
    d.dipole_gradient =
        point_dipole_gradient(specs.magnet.dipole_moment(), specs.trap.distance, consts.mu_0);
    if (specs.magnet.gradient_override) {
      d.gradient = *specs.magnet.gradient_override;
      d.gradient_route = GradientRoute::Override;
    } else {
      d.gradient = dipole_gradient(specs.magnet, specs.trap.distance, consts);
      d.gradient_route =
          d.gradient < d.dipole_gradient ? GradientRoute::Capped : GradientRoute::Dipole;
    }
  } catch (const Error& e) {
    throw DomainError(std::string("derive_all: G_m: ") + e.what());
  }

  const auto mu = chemical_potential(specs.condensate, specs.trap, consts);
  d.mu_c = mu.mu;
  d.tf_radii = mu.tf_radii;

  const auto loss = loss_rates(specs.trap, specs.condensate.atom_number);
  d.gamma_three_body = loss.three_body;
  d.gamma_background = loss.background;
  d.gamma = loss.total();
  d.loss_route = specs.condensate.atom_number == 1 ? LossRoute::BackgroundOnly
                                                   : LossRoute::ThreeBodyPlusBackground;

  d.omega_L = larmor_frequency(specs.trap.field, consts);
  d.n_th = thermal_occupancy(d.omega_r, specs.temperature, consts);
  d.rabi_per_amplitude = rabi_per_amplitude(d.gradient, consts.mu_B, consts.hbar);
  d.g = coupling_g(d.gradient, d.a_qm, consts);
  d.mean_sq_amplitude =
      thermal_mean_sq_amplitude(d.m_eff, d.omega_r, specs.temperature, consts.k_B);
  d.cooperativity = cooperativity(d.g, d.kappa, d.gamma);
  d.collective_cooperativity = d.cooperativity.collective(specs.condensate.atom_number);
  d.omega_bar_t = specs.trap.omega_bar();
  d.atom_number = specs.condensate.atom_number;
  d.detuning = specs.condensate.detuning;
  d.temperature = specs.temperature;
  return d;
}

}  // namespace cqed
