#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cqed/ode.hpp"
#include "cqed/tcdyn.hpp"

namespace cqed {

struct MasterOptions {
  OdeOptions ode{};
  /// Largest Hilbert dimension the density-matrix engine accepts.
  std::int64_t max_dimension = 400;
  /// |tr ρ − 1| beyond this at any sample is a NumericalError.
  double trace_tolerance = 1e-6;
  /// ρ + tol·1 must admit a Cholesky factorisation at every sample.
  double positivity_tolerance = 1e-6;
  bool check_positivity = true;
};

struct MasterResult {
  TrajectoryRecord record;
  DensityMatrix final_state;
};

/// Integrates the Lindblad equation from ρ(t_grid[0]) = rho0 and samples the
/// observables at every grid time. The grid must be strictly increasing.
MasterResult evolve_master(const DensityMatrix& rho0, const ModelParams& params,
                           const Operators& ops, std::span<const double> t_grid,
                           const MasterOptions& options = {});

/// Statistical mixture of pure states used to seed trajectories.
struct PureEnsemble {
  std::vector<double> weights;
  std::vector<StateVector> states;

  static PureEnsemble single(StateVector psi);
  void validate() const;
};

/// |spin⟩ ⊗ thermal(n_th) written as a mixture of Fock states.
PureEnsemble thermal_ensemble(const Eigen::VectorXcd& spin, double n_th, std::int64_t n_max,
                              double tolerance = 1e-6);

struct McwfOptions {
  OdeOptions ode{};
  /// Relative accuracy of the located jump time.
  double jump_time_rtol = 1e-10;
  unsigned threads = 1;
};

/// Quantum-trajectory unravelling of the same generator as evolve_master.
/// Trajectory k draws from substream(seed, ·, k); averages are summed in
/// trajectory order, so results do not depend on the thread count.
TrajectoryRecord evolve_mcwf(const PureEnsemble& initial, const ModelParams& params,
                             const Operators& ops, std::span<const double> t_grid,
                             std::int64_t trajectories, std::uint64_t seed,
                             const McwfOptions& options = {});

TrajectoryRecord evolve_mcwf(const StateVector& psi0, const ModelParams& params,
                             const Operators& ops, std::span<const double> t_grid,
                             std::int64_t trajectories, std::uint64_t seed,
                             const McwfOptions& options = {});

/// n equally spaced times on [t0, t1].
std::vector<double> linear_grid(double t0, double t1, std::size_t n);

enum class SpinPreparation { AllUp, AllDown };
enum class Engine { Auto, Master, Mcwf };

std::string_view to_string(SpinPreparation prep);
std::string_view to_string(Engine engine);

struct DriveCoolConfig {
  std::int64_t atom_count = 1;
  std::optional<std::int64_t> fock_cutoff;
  double truncation_tolerance = 1e-6;
  /// Simulated window, in units of the exchange time π/(2g√N), unless an
  /// absolute duration is given.
  double duration_in_timescales = 3.0;
  std::optional<double> duration;
  std::size_t samples = 301;
  Engine engine = Engine::Auto;
  std::int64_t trajectories = 500;
  std::uint64_t seed = 0;
  MasterOptions master{};
  McwfOptions mcwf{};
};

struct DriveCoolResult {
  TrajectoryRecord record;
  SpinPreparation initial = SpinPreparation::AllUp;
  Engine engine_used = Engine::Master;
  std::int64_t fock_cutoff = 0;
  double timescale = 0.0;        // π / (2 g √N)
  bool seeks_minimum = false;    // all-down cools, all-up drives
  double extremum_n = 0.0;
  double extremum_time = 0.0;
  double n_th = 0.0;
  std::vector<std::string> warnings;
};

/// Prepares |S, ±S⟩ ⊗ thermal(n_th), evolves, and reports the first
/// extremum of ⟨n⟩ (minimum when cooling, maximum when driving).
DriveCoolResult drive_cool_scenario(SpinPreparation initial, const ModelParams& params,
                                    const DriveCoolConfig& config);

/// Index of the first interior local extremum of `values` (minimum if
/// `minimum`), falling back to the global extremum.
std::size_t first_extremum(std::span<const double> values, bool minimum);

}  // namespace cqed
