#include "cqed/outcoupling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "cqed/errors.hpp"
#include "cqed/formulas.hpp"
#include "cqed/parallel.hpp"

namespace cqed {
namespace {

constexpr std::uint64_t kShotStream = 1;
constexpr std::uint64_t kControlStream = 2;

double apply_noise(double fraction, double rel, Rng& rng) {
  if (rel <= 0.0) return fraction;
  return std::max(0.0, fraction * (1.0 + rel * standard_normal(rng)));
}

}  // namespace

double shell_radius(double mu_c, double delta, const PhysicalConstants& consts) {
  if (!(mu_c > 0.0)) throw DomainError("shell_radius: mu_c must be > 0");
  if (delta <= 0.0) return 0.0;
  return std::sqrt(consts.hbar * delta / mu_c);
}

double detuning_for_shell(double mu_c, double r_c, const PhysicalConstants& consts) {
  if (!(mu_c > 0.0)) throw DomainError("detuning_for_shell: mu_c must be > 0");
  if (!(r_c >= 0.0 && r_c <= 1.0)) throw DomainError("detuning_for_shell: r_c must lie in [0, 1]");
  return r_c * r_c * mu_c / consts.hbar;
}

OutcouplingRate gamma_r(double omega_R, double mu_c, double delta,
                        const PhysicalConstants& consts) {
  OutcouplingRate out;
  out.shell = shell_radius(mu_c, delta, consts);
  out.weak_coupling = consts.hbar * std::abs(omega_R) < mu_c;
  const double r = out.shell;
  if (delta <= 0.0 || r >= 1.0) return out;
  out.rate = 15.0 * std::numbers::pi / 8.0 * consts.hbar * omega_R * omega_R / mu_c * (r - r * r * r);
  return out;
}

std::array<double, 3> resonance_shell(double r_c, const std::array<double, 3>& tf_radii) {
  if (!(r_c >= 0.0 && r_c <= 1.0)) throw DomainError("resonance_shell: r_c must lie in [0, 1]");
  return {r_c * tf_radii[0], r_c * tf_radii[1], r_c * tf_radii[2]};
}

ThermalSample sample_thermal_amplitude(Rng& rng, double m_eff, double omega_r,
                                       double temperature, const PhysicalConstants& consts) {
  if (!(temperature > 0.0)) throw DomainError("sample_thermal_amplitude: T must be > 0");
  const double mean_sq = thermal_mean_sq_amplitude(m_eff, omega_r, temperature, consts.k_B);
  ThermalSample s;
  s.amplitude = std::sqrt(mean_sq * exponential1(rng));
  s.phase = 2.0 * std::numbers::pi * uniform01(rng);
  return s;
}

double survival_fraction(double gamma_r, double gamma_bg, double tau) {
  if (!(tau >= 0.0)) throw DomainError("survival_fraction: tau must be >= 0");
  return std::exp(-(gamma_r + gamma_bg) * tau);
}

Histogram::Histogram(Binning b) : binning(b), counts(b.bins, 0) {
  if (b.bins == 0 || !(b.hi > b.lo)) throw DomainError("histogram: need >= 1 bin and hi > lo");
}

void Histogram::add(double value) {
  const double width = (binning.hi - binning.lo) / static_cast<double>(binning.bins);
  const double pos = std::floor((value - binning.lo) / width);
  const auto last = static_cast<double>(binning.bins - 1);
  counts[static_cast<std::size_t>(std::clamp(pos, 0.0, last))] += 1;
}

double Histogram::bin_lo(std::size_t i) const {
  return binning.lo + (binning.hi - binning.lo) * static_cast<double>(i) /
                          static_cast<double>(binning.bins);
}

double Histogram::bin_hi(std::size_t i) const { return bin_lo(i + 1); }

std::int64_t Histogram::total() const {
  std::int64_t n = 0;
  for (auto c : counts) n += c;
  return n;
}

void OutcouplerConfig::validate() const {
  if (shots < 1) throw ConfigError("histogram: shots must be >= 1");
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("histogram: tau must be > 0");
  if (!(technical_noise_rel >= 0.0)) throw ConfigError("histogram: technical_noise_rel must be >= 0");
  if (!(mu_c > 0.0)) throw ConfigError("histogram: mu_c must be > 0");
  if (!(rabi_per_amplitude >= 0.0)) throw ConfigError("histogram: rabi_per_amplitude must be >= 0");
  if (!(gamma_background >= 0.0)) throw ConfigError("histogram: gamma_background must be >= 0");
  if (binning.bins == 0 || !(binning.hi > binning.lo))
    throw ConfigError("histogram: binning needs >= 1 bin and hi > lo");
}

OutcouplerConfig outcoupler_from_device(const DerivedParams& device, double tau,
                                        std::int64_t shots, std::uint64_t seed) {
  OutcouplerConfig cfg;
  cfg.rabi_per_amplitude = device.rabi_per_amplitude;
  cfg.mu_c = device.mu_c;
  cfg.delta = device.detuning;
  cfg.tau = tau;
  cfg.gamma_background = device.gamma;
  cfg.shots = shots;
  cfg.seed = seed;
  return cfg;
}

OutcouplingRate mean_gamma_r(const OutcouplerConfig& cfg, double mean_sq_amplitude,
                             const PhysicalConstants& consts) {
  const double omega_rms = cfg.rabi_per_amplitude * std::sqrt(mean_sq_amplitude);
  return gamma_r(omega_rms, cfg.mu_c, cfg.delta, consts);
}

std::vector<double> ThermalEnsembleResult::fractions() const {
  std::vector<double> out;
  out.reserve(shots.size());
  for (const auto& s : shots) out.push_back(s.fraction);
  return out;
}

ThermalEnsembleResult simulate_histogram(const OutcouplerConfig& cfg, const DerivedParams& device,
                                         double temperature, unsigned threads,
                                         const PhysicalConstants& consts) {
  cfg.validate();
  if (!(temperature > 0.0)) throw ConfigError("histogram: temperature must be > 0");

  ThermalEnsembleResult result;
  result.histogram = Histogram(cfg.binning);
  result.control_histogram = Histogram(cfg.binning);
  const auto n = static_cast<std::size_t>(cfg.shots);
  result.shots.resize(n);
  result.control_fractions.resize(n);

  const double mean_sq =
      thermal_mean_sq_amplitude(device.m_eff, device.omega_r, temperature, consts.k_B);
  const auto mean_rate = mean_gamma_r(cfg, mean_sq, consts);
  result.mean_gamma_r = mean_rate.rate;
  result.mean_lambda = mean_rate.rate * cfg.tau;
  result.kappa_tau = device.kappa * cfg.tau;
  result.background_survival = std::exp(-cfg.gamma_background * cfg.tau);

  std::vector<char> strong(n, 0);
  parallel_for(n, threads, [&](std::size_t i) {
    Rng rng = substream(cfg.seed, kShotStream, i);
    const auto sample = sample_thermal_amplitude(rng, device.m_eff, device.omega_r, temperature, consts);
    const auto rate = gamma_r(cfg.rabi_per_amplitude * sample.amplitude, cfg.mu_c, cfg.delta, consts);
    strong[i] = rate.weak_coupling ? 0 : 1;
    double f = survival_fraction(rate.rate, cfg.gamma_background, cfg.tau);
    f = apply_noise(f, cfg.technical_noise_rel, rng);
    result.shots[i] = {static_cast<std::int64_t>(i), sample.amplitude, rate.rate, f};

    Rng control = substream(cfg.seed, kControlStream, i);
    result.control_fractions[i] =
        apply_noise(result.background_survival, cfg.technical_noise_rel, control);
  });

  for (std::size_t i = 0; i < n; ++i) {
    result.histogram.add(result.shots[i].fraction);
    result.control_histogram.add(result.control_fractions[i]);
    result.strong_drive_shots += strong[i];
  }

  if (result.kappa_tau > kKappaTauWarning) {
    std::ostringstream os;
    os << "kappa*tau = " << result.kappa_tau << " exceeds " << kKappaTauWarning
       << "; the amplitude is not static within a shot";
    result.warnings.push_back(os.str());
  }
  if (!mean_rate.weak_coupling)
    result.warnings.push_back("hbar*Omega_R(rms) >= mu_c: outside the weak output-coupling regime");
  if (result.strong_drive_shots > 0) {
    std::ostringstream os;
    os << result.strong_drive_shots << " of " << cfg.shots
       << " shots have hbar*Omega_R >= mu_c (weak-coupling rate law extrapolated)";
    result.warnings.push_back(os.str());
  }
  if (mean_rate.shell >= 1.0 || cfg.delta <= 0.0)
    result.warnings.push_back("resonance shell outside the condensate: Gamma_r = 0");
  return result;
}

SurvivalDensity::SurvivalDensity(double lambda_bar, double background)
    : lambda_(lambda_bar), background_(background) {
  if (!(lambda_bar > 0.0)) throw DomainError("analytic_survival_pdf: lambda_bar must be > 0");
  if (!(background > 0.0 && background <= 1.0))
    throw DomainError("analytic_survival_pdf: background factor must lie in (0, 1]");
}

double SurvivalDensity::pdf(double f) const {
  if (f <= 0.0 || f > background_) return 0.0;
  const double u = f / background_;
  return std::pow(u, 1.0 / lambda_ - 1.0) / (lambda_ * background_);
}

double SurvivalDensity::cdf(double f) const {
  if (f <= 0.0) return 0.0;
  if (f >= background_) return 1.0;
  return std::pow(f / background_, 1.0 / lambda_);
}

double SurvivalDensity::mean() const { return background_ / (1.0 + lambda_); }

SurvivalDensity analytic_survival_pdf(double lambda_bar, double background) {
  return SurvivalDensity(lambda_bar, background);
}

}  // namespace cqed
