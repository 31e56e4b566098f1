#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cqed/constants.hpp"
#include "cqed/evolution.hpp"
#include "cqed/optimize.hpp"
#include "cqed/outcoupling.hpp"
#include "cqed/params.hpp"

namespace cqed {

inline constexpr std::string_view kConfigSchema = "cqed-config/1";

enum class ScenarioKind { Derive, Histogram, Evolve, Optimize };

std::string_view to_string(ScenarioKind kind);

/// Device section. The detuning is either given directly or through the
/// normalised resonance-shell radius r_c, resolved once μ_c is known.
struct DeviceConfig {
  DeviceSpecs specs;
  std::optional<double> shell_radius;
};

struct HistogramSettings {
  std::optional<double> tau;          // s
  std::optional<double> mean_lambda;  // ⟨Γ_r⟩ τ; sets τ = λ̄ / ⟨Γ_r⟩
  std::int64_t shots = 10000;
  double technical_noise_rel = 0.05;
  Binning binning{};
  bool coupling = true;  // false reproduces the no-coupling control (G_m = 0)
};

struct ModelOverride {
  double g = 0.0;
  double detuning = 0.0;
  double kappa = 0.0;
  double gamma = 0.0;
  double n_th = 0.0;
};

struct EvolveSettings {
  SpinPreparation initial = SpinPreparation::AllUp;
  Engine engine = Engine::Auto;
  std::optional<std::int64_t> atom_count;
  std::optional<std::int64_t> fock_cutoff;
  double truncation_tolerance = 1e-6;
  std::optional<double> duration;  // s
  double duration_in_timescales = 3.0;
  std::int64_t samples = 301;
  std::int64_t trajectories = 500;
  double rtol = 1e-8;
  double atol = 1e-10;
  bool dissipation = true;
  std::optional<ModelOverride> model;
  std::vector<DetuningStep> detuning_schedule;
};

struct OptimizeSettings {
  FigureOfMerit figure_of_merit = FigureOfMerit::SingleAtomStrongCoupling;
  std::int64_t budget = 400;
  std::int64_t grid_points = 0;
  SearchSpace space;
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  ScenarioKind kind = ScenarioKind::Derive;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  unsigned threads = 1;
  PhysicalConstants constants;
  std::optional<DeviceConfig> device;
  std::optional<HistogramSettings> histogram;
  std::optional<EvolveSettings> evolve;
  std::optional<OptimizeSettings> optimize;
};

/// Strict parse: unknown keys, missing units and misspelled units are
/// ConfigErrors. Quantities are converted to SI with angular frequencies.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Resolved configuration with every default filled in and every quantity
/// written in canonical SI units; parse_config(echo) reproduces the config.
nlohmann::ordered_json echo_config(const ScenarioConfig& config);

/// Device specs with the shell radius (if any) turned into a detuning.
DeviceSpecs resolve_device(const DeviceConfig& device, const PhysicalConstants& consts);

}  // namespace cqed
