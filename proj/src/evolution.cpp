#include "cqed/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Cholesky>

#include "cqed/errors.hpp"
#include "cqed/parallel.hpp"
#include "cqed/rng.hpp"

namespace cqed {
namespace {

constexpr std::uint64_t kTrajectoryStream = 3;

void check_grid(std::span<const double> t_grid) {
  if (t_grid.empty()) throw ConfigError("evolve: time grid is empty");
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw ConfigError("evolve: time grid must be strictly increasing");
}

/// Grid times plus detuning switch times inside the window, sorted; the
/// integrator never steps across any of them.
std::vector<double> stop_points(std::span<const double> t_grid, const ModelParams& params) {
  std::vector<double> stops(t_grid.begin(), t_grid.end());
  for (const auto& s : params.delta_schedule)
    if (s.start > t_grid.front() && s.start < t_grid.back()) stops.push_back(s.start);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  return stops;
}

void finish_record(TrajectoryRecord& record, const ModelParams& params, const HilbertConfig& cfg) {
  auto warnings = model_warnings(params, cfg);
  record.warnings.insert(record.warnings.end(), warnings.begin(), warnings.end());
  if (!record.truncation_ok) {
    std::ostringstream os;
    os << "truncation: population on n = n_max reached " << record.max_leak
       << " (tolerance " << record.truncation_tolerance << "); run is invalid, increase the Fock cutoff";
    record.warnings.push_back(os.str());
  }
}

}  // namespace

std::vector<double> linear_grid(double t0, double t1, std::size_t n) {
  if (n < 2 || !(t1 > t0)) throw ConfigError("linear_grid: need n >= 2 and t1 > t0");
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i)
    grid[i] = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
  grid.back() = t1;
  return grid;
}

MasterResult evolve_master(const DensityMatrix& rho0, const ModelParams& params,
                           const Operators& ops, std::span<const double> t_grid,
                           const MasterOptions& options) {
  check_grid(t_grid);
  const auto dim = ops.config.dimension();
  if (dim > options.max_dimension) {
    std::ostringstream os;
    os << "evolve_master: dimension " << dim << " exceeds the master-equation cap "
       << options.max_dimension << "; use the trajectory engine";
    throw ResourceError(os.str());
  }
  if (rho0.rows() != dim || rho0.cols() != dim)
    throw ConfigError("evolve_master: initial state has the wrong dimension");

  const LindbladGenerator gen(params, ops);
  DormandPrince<DensityMatrix> stepper(
      [&gen](double t, const DensityMatrix& rho, DensityMatrix& drho) { gen.apply(t, rho, drho); },
      options.ode);

  MasterResult out;
  auto& record = out.record;
  record.engine = "master";
  record.truncation_tolerance = ops.config.truncation_tolerance;
  record.trajectory_count = 1;
  record.reserve(t_grid.size());

  DensityMatrix rho = 0.5 * (rho0 + rho0.adjoint());
  const Eigen::MatrixXcd shift =
      options.positivity_tolerance * Eigen::MatrixXcd::Identity(rho.rows(), rho.cols());

  auto audit = [&](double t) {
    const double tr = rho.trace().real();
    if (!(std::abs(tr - 1.0) <= options.trace_tolerance)) {
      std::ostringstream os;
      os << "evolve_master: trace drifted to " << tr << " at t = " << t;
      throw NumericalError(os.str());
    }
    rho = 0.5 * (rho + rho.adjoint()) / tr;
    if (options.check_positivity) {
      Eigen::LLT<Eigen::MatrixXcd> llt(rho + shift);
      if (llt.info() != Eigen::Success) {
        std::ostringstream os;
        os << "evolve_master: density operator lost positivity beyond "
           << options.positivity_tolerance << " at t = " << t;
        throw NumericalError(os.str());
      }
    }
    stepper.reset();
  };

  const auto stops = stop_points(t_grid, params);
  double t = t_grid.front();
  std::size_t next_sample = 0;
  for (double stop : stops) {
    stepper.integrate(t, rho, stop);
    audit(t);
    if (next_sample < t_grid.size() && stop == t_grid[next_sample]) {
      record.push(stop, observe(rho, ops));
      ++next_sample;
    }
  }
  finish_record(record, params, ops.config);
  out.final_state = std::move(rho);
  return out;
}

PureEnsemble PureEnsemble::single(StateVector psi) {
  PureEnsemble e;
  e.weights = {1.0};
  e.states.push_back(std::move(psi));
  return e;
}

void PureEnsemble::validate() const {
  if (weights.empty() || weights.size() != states.size())
    throw ConfigError("mcwf: ensemble needs one weight per state");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw ConfigError("mcwf: ensemble weights must be >= 0");
    total += w;
  }
  if (!(std::abs(total - 1.0) < 1e-9)) throw ConfigError("mcwf: ensemble weights must sum to 1");
}

PureEnsemble thermal_ensemble(const Eigen::VectorXcd& spin, double n_th, std::int64_t n_max,
                              double tolerance) {
  const Eigen::VectorXd p = thermal_populations(n_th, n_max, tolerance);
  PureEnsemble e;
  for (Eigen::Index n = 0; n < p.size(); ++n) {
    if (p[n] == 0.0) continue;
    Eigen::VectorXcd fock = Eigen::VectorXcd::Zero(p.size());
    fock[n] = 1.0;
    e.weights.push_back(p[n]);
    e.states.push_back(product_state(spin, fock));
  }
  return e;
}

TrajectoryRecord evolve_mcwf(const PureEnsemble& initial, const ModelParams& params,
                             const Operators& ops, std::span<const double> t_grid,
                             std::int64_t trajectories, std::uint64_t seed,
                             const McwfOptions& options) {
  check_grid(t_grid);
  initial.validate();
  if (trajectories < 1) throw ConfigError("mcwf: trajectory count must be >= 1");
  const auto dim = ops.config.dimension();
  for (const auto& s : initial.states)
    if (s.size() != dim) throw ConfigError("mcwf: initial state has the wrong dimension");

  const LindbladGenerator gen(params, ops);
  const auto& channels = gen.collapse();
  const auto stops = stop_points(t_grid, params);
  const std::size_t n_grid = t_grid.size();
  const auto n_traj = static_cast<std::size_t>(trajectories);

  // Per-trajectory samples laid out [trajectory][grid][observable].
  constexpr std::size_t kObs = 4;
  std::vector<double> samples(n_traj * n_grid * kObs);
  std::vector<std::int64_t> jump_counts(n_traj, 0);

  parallel_for(n_traj, options.threads, [&](std::size_t k) {
    Rng rng = substream(seed, kTrajectoryStream, k);
    const double pick = uniform01(rng);
    std::size_t which = 0;
    for (double acc = initial.weights[0]; which + 1 < initial.weights.size() && pick >= acc;)
      acc += initial.weights[++which];
    StateVector psi = initial.states[which].normalized();

    DormandPrince<StateVector> stepper(
        [&gen](double t, const StateVector& y, StateVector& dy) { gen.drift(t, y, dy); },
        options.ode);
    double threshold = uniform_open0(rng);
    double t = t_grid.front();
    std::size_t next_sample = 0;
    double* out = samples.data() + k * n_grid * kObs;

    for (double stop : stops) {
      while (t < stop) {
        const double t_prev = t;
        const StateVector psi_prev = psi;
        const double h = stepper.step(t, psi, stop);
        if (channels.empty() || psi.squaredNorm() > threshold) continue;

        // Locate the time at which ‖ψ‖² crosses the threshold by bisection.
        double lo = 0.0, hi = h;
        while (hi - lo > options.jump_time_rtol * std::max(std::abs(t_prev + hi), hi)) {
          const double mid = 0.5 * (lo + hi);
          if (stepper.propagate(t_prev, psi_prev, mid).squaredNorm() > threshold) lo = mid;
          else hi = mid;
        }
        t = (hi == h) ? t : t_prev + hi;
        if (hi != h) psi = stepper.propagate(t_prev, psi_prev, hi);

        double total = 0.0;
        std::vector<double> weights(channels.size());
        for (std::size_t c = 0; c < channels.size(); ++c) {
          weights[c] = (channels[c].op * psi).squaredNorm();
          total += weights[c];
        }
        if (!(total > 0.0))
          throw NumericalError("mcwf: jump requested but every channel rate vanishes");
        double u = uniform01(rng) * total;
        std::size_t chosen = 0;
        while (chosen + 1 < channels.size() && u >= weights[chosen]) u -= weights[chosen++];
        psi = (channels[chosen].op * psi).eval();
        psi.normalize();
        ++jump_counts[k];
        threshold = uniform_open0(rng);
        stepper.reset();
      }
      if (next_sample < n_grid && stop == t_grid[next_sample]) {
        const auto o = observe(psi, ops);
        double* slot = out + next_sample * kObs;
        slot[0] = o.mean_n;
        slot[1] = o.mean_sz;
        slot[2] = o.total_excitation;
        slot[3] = o.leak;
        ++next_sample;
      }
    }
  });

  TrajectoryRecord record;
  record.engine = "mcwf";
  record.seed = seed;
  record.trajectory_count = trajectories;
  record.truncation_tolerance = ops.config.truncation_tolerance;
  record.reserve(n_grid);
  const double n = static_cast<double>(n_traj);
  for (std::size_t i = 0; i < n_grid; ++i) {
    std::array<double, kObs> mean{}, sq{};
    for (std::size_t k = 0; k < n_traj; ++k) {
      const double* slot = samples.data() + (k * n_grid + i) * kObs;
      for (std::size_t q = 0; q < kObs; ++q) mean[q] += slot[q];
    }
    for (auto& m : mean) m /= n;
    for (std::size_t k = 0; k < n_traj; ++k) {
      const double* slot = samples.data() + (k * n_grid + i) * kObs;
      for (std::size_t q = 0; q < kObs; ++q) sq[q] += (slot[q] - mean[q]) * (slot[q] - mean[q]);
    }
    record.push(t_grid[i], Observables{mean[0], mean[1], mean[2], mean[3]});
    auto stderr_of = [&](std::size_t q) { return n_traj > 1 ? std::sqrt(sq[q] / (n - 1.0) / n) : 0.0; };
    record.stderr_n.back() = stderr_of(0);
    record.stderr_sz.back() = stderr_of(1);
    record.stderr_total.back() = stderr_of(2);
  }
  for (auto j : jump_counts) record.jumps += j;
  finish_record(record, params, ops.config);
  return record;
}

TrajectoryRecord evolve_mcwf(const StateVector& psi0, const ModelParams& params,
                             const Operators& ops, std::span<const double> t_grid,
                             std::int64_t trajectories, std::uint64_t seed,
                             const McwfOptions& options) {
  return evolve_mcwf(PureEnsemble::single(psi0), params, ops, t_grid, trajectories, seed, options);
}

std::string_view to_string(SpinPreparation prep) {
  return prep == SpinPreparation::AllUp ? "all_up" : "all_down";
}

std::string_view to_string(Engine engine) {
  switch (engine) {
    case Engine::Auto: return "auto";
    case Engine::Master: return "master";
    case Engine::Mcwf: return "mcwf";
  }
  return "auto";
}

std::size_t first_extremum(std::span<const double> values, bool minimum) {
  if (values.empty()) throw DomainError("first_extremum: empty series");
  auto better = [minimum](double a, double b) { return minimum ? a < b : a > b; };
  for (std::size_t i = 1; i + 1 < values.size(); ++i)
    if (better(values[i], values[i - 1]) && !better(values[i + 1], values[i])) return i;
  const auto it = minimum ? std::min_element(values.begin(), values.end())
                          : std::max_element(values.begin(), values.end());
  return static_cast<std::size_t>(it - values.begin());
}

DriveCoolResult drive_cool_scenario(SpinPreparation initial, const ModelParams& params,
                                    const DriveCoolConfig& config) {
  params.validate();
  DriveCoolResult result;
  result.initial = initial;
  result.n_th = params.n_th;
  result.seeks_minimum = initial == SpinPreparation::AllDown;

  const double collective = std::abs(params.g) * std::sqrt(static_cast<double>(config.atom_count));
  result.timescale = collective > 0.0 ? std::numbers::pi / (2.0 * collective)
                                      : std::numeric_limits<double>::infinity();
  double duration = 0.0;
  if (config.duration) {
    duration = *config.duration;
  } else {
    if (!std::isfinite(result.timescale))
      throw ConfigError("drive_cool: g = 0 needs an explicit duration");
    duration = config.duration_in_timescales * result.timescale;
  }
  if (!(duration > 0.0)) throw ConfigError("drive_cool: duration must be > 0");

  if (params.n_th > 0.1 * static_cast<double>(config.atom_count)) {
    std::ostringstream os;
    os << "n_th = " << params.n_th << " is not small compared with N = " << config.atom_count
       << "; drive/cool contrast is reduced";
    result.warnings.push_back(os.str());
  }

  HilbertConfig hc;
  hc.atom_count = config.atom_count;
  hc.truncation_tolerance = config.truncation_tolerance;
  hc.fock_cutoff = config.fock_cutoff.value_or(
      default_fock_cutoff(params.n_th, config.atom_count, config.truncation_tolerance));
  result.fock_cutoff = hc.fock_cutoff;
  const Operators ops = build_operators(hc);

  Engine engine = config.engine;
  if (engine == Engine::Auto)
    engine = hc.dimension() <= config.master.max_dimension ? Engine::Master : Engine::Mcwf;
  result.engine_used = engine;

  const auto spin = dicke_state(config.atom_count,
                                initial == SpinPreparation::AllUp ? config.atom_count : 0);
  const auto grid = linear_grid(0.0, duration, config.samples);
  if (engine == Engine::Master) {
    const DensityMatrix rho0 =
        product_state(spin, thermal_state(params.n_th, hc.fock_cutoff, hc.truncation_tolerance));
    result.record = evolve_master(rho0, params, ops, grid, config.master).record;
  } else {
    const auto ensemble =
        thermal_ensemble(spin, params.n_th, hc.fock_cutoff, hc.truncation_tolerance);
    result.record =
        evolve_mcwf(ensemble, params, ops, grid, config.trajectories, config.seed, config.mcwf);
  }

  const auto idx = first_extremum(result.record.mean_n, result.seeks_minimum);
  result.extremum_n = result.record.mean_n[idx];
  result.extremum_time = result.record.times[idx];
  return result;
}

}  // namespace cqed
