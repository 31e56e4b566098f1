#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cqed/constants.hpp"
#include "cqed/params.hpp"
#include "cqed/rng.hpp"

namespace cqed {

/// Output-coupling rate of a Thomas-Fermi condensate driven at Rabi
/// frequency Ω_R, detuned by δ from the trap-centre resonance.
struct OutcouplingRate {
  double rate = 0.0;      // 1/s
  double shell = 0.0;     // r_c, NaN-free; 0 when δ <= 0
  /// False when ħΩ_R >= μ_c, i.e. outside the weak-coupling regime the
  /// rate law is derived for. The rate is still returned.
  bool weak_coupling = true;
};

/// r_c = √(ħδ/μ_c); zero for δ <= 0. May exceed 1 (off the condensate).
double shell_radius(double mu_c, double delta, const PhysicalConstants& consts = {});

/// Detuning that places the resonance shell at normalised radius r_c.
double detuning_for_shell(double mu_c, double r_c, const PhysicalConstants& consts = {});

OutcouplingRate gamma_r(double omega_R, double mu_c, double delta,
                        const PhysicalConstants& consts = {});

/// Ellipsoid semi-axes r_c R_i of the resonance shell.
std::array<double, 3> resonance_shell(double r_c, const std::array<double, 3>& tf_radii);

struct ThermalSample {
  double amplitude = 0.0;  // m
  double phase = 0.0;      // rad, uniform; Γ_r does not depend on it
};

/// Classical thermal state of the tip mode: a² ~ Exp with mean 2k_BT/(mω²).
ThermalSample sample_thermal_amplitude(Rng& rng, double m_eff, double omega_r,
                                       double temperature,
                                       const PhysicalConstants& consts = {});

/// exp[−(Γ_r + γ_bg) τ].
double survival_fraction(double gamma_r, double gamma_bg, double tau);

struct Binning {
  std::size_t bins = 50;
  double lo = 0.0;
  double hi = 1.1;
};

struct Histogram {
  Binning binning;
  std::vector<std::int64_t> counts;

  explicit Histogram(Binning b = {});
  /// Values outside [lo, hi) land in the first/last bin.
  void add(double value);
  [[nodiscard]] double bin_lo(std::size_t i) const;
  [[nodiscard]] double bin_hi(std::size_t i) const;
  [[nodiscard]] std::int64_t total() const;
};

struct OutcouplerConfig {
  double rabi_per_amplitude = 0.0;  // rad/s per m
  double mu_c = 0.0;                // J
  double delta = 0.0;               // rad/s
  double tau = 0.0;                 // s
  double gamma_background = 0.0;    // 1/s
  std::int64_t shots = 1;
  double technical_noise_rel = 0.05;
  std::uint64_t seed = 0;
  Binning binning;

  void validate() const;
};

/// Configuration bound to a derived device: Ω_R/a, μ_c, δ and γ taken from
/// the derivation chain.
OutcouplerConfig outcoupler_from_device(const DerivedParams& device, double tau,
                                        std::int64_t shots, std::uint64_t seed);

/// ⟨Γ_r⟩: the rate evaluated with the thermal mean Ω_R² = (Ω_R/a)² ⟨a²⟩.
OutcouplingRate mean_gamma_r(const OutcouplerConfig& cfg, double mean_sq_amplitude,
                             const PhysicalConstants& consts = {});

struct ShotRecord {
  std::int64_t shot = 0;
  double amplitude = 0.0;
  double gamma_r = 0.0;
  double fraction = 0.0;
};

struct ThermalEnsembleResult {
  std::vector<ShotRecord> shots;
  /// No-coupling control: background loss and technical noise only.
  std::vector<double> control_fractions;
  Histogram histogram;
  Histogram control_histogram;
  double mean_gamma_r = 0.0;
  double mean_lambda = 0.0;  // ⟨Γ_r⟩ τ
  double kappa_tau = 0.0;
  double background_survival = 1.0;  // e^{−γτ}
  std::int64_t strong_drive_shots = 0;  // shots with ħΩ_R >= μ_c
  std::vector<std::string> warnings;

  [[nodiscard]] std::vector<double> fractions() const;
};

/// κτ above this triggers a static-amplitude warning.
inline constexpr double kKappaTauWarning = 0.2;

ThermalEnsembleResult simulate_histogram(const OutcouplerConfig& cfg, const DerivedParams& device,
                                         double temperature, unsigned threads = 1,
                                         const PhysicalConstants& consts = {});

/// Density of f = b·exp(−λ̄ x), x ~ Exp(1), on (0, b]; b is the background
/// survival factor (1 when there is no background loss).
class SurvivalDensity {
 public:
  explicit SurvivalDensity(double lambda_bar, double background = 1.0);

  [[nodiscard]] double pdf(double f) const;
  [[nodiscard]] double cdf(double f) const;
  [[nodiscard]] double mean() const;
  [[nodiscard]] double lambda_bar() const { return lambda_; }

 private:
  double lambda_;
  double background_;
};

SurvivalDensity analytic_survival_pdf(double lambda_bar, double background = 1.0);

/// Two-sided Kolmogorov-Smirnov distance between samples and a CDF.
template <typename Cdf>
double ks_distance(std::vector<double> samples, Cdf&& cdf);

}  // namespace cqed

#include "cqed/detail/ks_distance.hpp"
