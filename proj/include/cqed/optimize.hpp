#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cqed/params.hpp"

namespace cqed {

enum class FigureOfMerit {
  ProbeSnr,                  // ⟨Γ_r⟩ / γ
  SingleAtomStrongCoupling,  // g / (κ + γ)
  CollectiveStrongCoupling,  // g√N / (κ + γ)
};

std::string_view to_string(FigureOfMerit fom);
std::optional<FigureOfMerit> parse_figure_of_merit(std::string_view name);

/// Rates entering the figures of merit; lets quoted operating points be
/// scored without a device description.
struct CouplingRates {
  double g = 0.0;
  double kappa = 0.0;
  double gamma = 0.0;
  std::int64_t atom_number = 1;
  double mean_gamma_r = 0.0;  // only used by ProbeSnr
};

/// Score of a rate set; non-finite when the denominator vanishes.
double figure_of_merit(FigureOfMerit fom, const CouplingRates& rates);

/// Distortion limit on the magnet gradient as a function of trap stiffness:
/// G_max(ω̄) = reference_gradient · (ω̄ / reference_omega_bar)^exponent.
struct GradientLimit {
  double reference_gradient = 0.0;   // T/m
  double reference_omega_bar = 1.0;  // rad/s
  double exponent = 0.0;

  [[nodiscard]] double at(double omega_bar) const;
};

struct Constraints {
  std::optional<double> min_distance;           // y_0 lower bound, m
  std::optional<GradientLimit> gradient_limit;  // caps G_m at G_max(ω̄) for each candidate
  bool require_weak_outcoupling = true;         // ProbeSnr: ħΩ_R,rms < μ_c
  double probe_shell_radius = 0.57735026918962576;  // r_c = 1/√3
};

struct Evaluation {
  bool feasible = false;
  double score = 0.0;
  std::string infeasible_reason;
  DerivedParams derived;
  double mean_gamma_r = 0.0;
};

/// Pure evaluation through the derivation chain. Constraint violations and
/// invalid specs come back as infeasible results, never as exceptions.
Evaluation evaluate(FigureOfMerit fom, const DeviceSpecs& specs, const Constraints& constraints = {},
                    const PhysicalConstants& consts = {});

// ---------------------------------------------------------------------------
// Generic bounded search

struct SearchDimension {
  std::string name;
  double lo = 0.0;
  double hi = 0.0;
  bool log_scale = false;
};

struct ObjectiveValue {
  bool feasible = false;
  double score = 0.0;
  std::string reason;
};

using Objective = std::function<ObjectiveValue(std::span<const double>)>;

struct SearchOptions {
  /// Grid points per free dimension; 0 picks ⌊(budget/2)^{1/d}⌋ (at least 2).
  std::size_t grid_points = 0;
  /// Coordinate descent stops once every step is below this fraction of its range.
  double min_step_fraction = 1e-6;
};

struct TraceEntry {
  std::size_t index = 0;
  std::string stage;  // "grid" or "descent"
  std::vector<double> x;
  bool feasible = false;
  double score = 0.0;
  bool accepted = false;  // strictly improved the incumbent
  std::string reason;
};

struct SearchResult {
  bool found = false;
  std::vector<double> best_x;
  double best_score = 0.0;
  std::vector<TraceEntry> trace;
};

/// Coarse grid scan followed by coordinate descent with step halving.
/// Deterministic in (objective, dimensions, budget, seed); the seed only
/// permutes the coordinate order of each descent sweep.
SearchResult search(const Objective& objective, std::span<const SearchDimension> dims,
                    std::size_t budget, std::uint64_t seed, const SearchOptions& options = {});

// ---------------------------------------------------------------------------
// Device-level search

enum class Knob {
  TrapFrequency,  // ω̄_t (rad/s), aspect ratio of the base trap kept
  TrapDistance,
  MagnetLength,
  MagnetWidth,
  MagnetThickness,
  CantileverLength,
  CantileverWidth,
  CantileverThickness,
  QualityFactor,
};

std::string_view to_string(Knob knob);
std::optional<Knob> parse_knob(std::string_view name);

struct KnobRange {
  Knob knob = Knob::TrapFrequency;
  double lo = 0.0;
  double hi = 0.0;
  bool log_scale = false;
};

struct SearchSpace {
  std::vector<KnobRange> ranges;
  Constraints constraints;

  void validate() const;
};

/// Base specs with the knob values x substituted.
DeviceSpecs apply_knobs(const DeviceSpecs& base, std::span<const KnobRange> ranges,
                        std::span<const double> x);

struct DesignSearchResult {
  SearchResult search;
  std::optional<DeviceSpecs> best_specs;
  std::optional<Evaluation> best;
};

DesignSearchResult search_design(FigureOfMerit fom, const DeviceSpecs& base,
                                 const SearchSpace& space, std::size_t budget,
                                 std::uint64_t seed, const SearchOptions& options = {},
                                 const PhysicalConstants& consts = {});

}  // namespace cqed
