#include "cqed/optimize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cqed/errors.hpp"
#include "cqed/formulas.hpp"
#include "cqed/outcoupling.hpp"
#include "cqed/rng.hpp"

namespace cqed {
namespace {

constexpr std::array<std::pair<FigureOfMerit, std::string_view>, 3> kFomNames{{
    {FigureOfMerit::ProbeSnr, "probe_snr"},
    {FigureOfMerit::SingleAtomStrongCoupling, "single_atom_strong_coupling"},
    {FigureOfMerit::CollectiveStrongCoupling, "collective_strong_coupling"},
}};

constexpr std::array<std::pair<Knob, std::string_view>, 9> kKnobNames{{
    {Knob::TrapFrequency, "trap.omega_bar"},
    {Knob::TrapDistance, "trap.distance"},
    {Knob::MagnetLength, "magnet.length"},
    {Knob::MagnetWidth, "magnet.width"},
    {Knob::MagnetThickness, "magnet.thickness"},
    {Knob::CantileverLength, "cantilever.length"},
    {Knob::CantileverWidth, "cantilever.width"},
    {Knob::CantileverThickness, "cantilever.thickness"},
    {Knob::QualityFactor, "cantilever.quality_factor"},
}};

ObjectiveValue infeasible(std::string reason) { return {false, 0.0, std::move(reason)}; }

double to_value(const SearchDimension& d, double u) {
  if (d.lo == d.hi) return d.lo;
  if (d.log_scale) return std::exp(std::log(d.lo) + u * (std::log(d.hi) - std::log(d.lo)));
  return d.lo + u * (d.hi - d.lo);
}

}  // namespace

std::string_view to_string(FigureOfMerit fom) {
  for (const auto& [k, name] : kFomNames)
    if (k == fom) return name;
  return "unknown";
}

std::optional<FigureOfMerit> parse_figure_of_merit(std::string_view name) {
  for (const auto& [k, n] : kFomNames)
    if (n == name) return k;
  return std::nullopt;
}

std::string_view to_string(Knob knob) {
  for (const auto& [k, name] : kKnobNames)
    if (k == knob) return name;
  return "unknown";
}

std::optional<Knob> parse_knob(std::string_view name) {
  for (const auto& [k, n] : kKnobNames)
    if (n == name) return k;
  return std::nullopt;
}

double figure_of_merit(FigureOfMerit fom, const CouplingRates& r) {
  switch (fom) {
    case FigureOfMerit::ProbeSnr:
      return r.mean_gamma_r / r.gamma;
    case FigureOfMerit::SingleAtomStrongCoupling:
      return r.g / (r.kappa + r.gamma);
    case FigureOfMerit::CollectiveStrongCoupling:
      return r.g * std::sqrt(static_cast<double>(r.atom_number)) / (r.kappa + r.gamma);
  }
  return 0.0;
}

double GradientLimit::at(double omega_bar) const {
  return reference_gradient * std::pow(omega_bar / reference_omega_bar, exponent);
}

Evaluation evaluate(FigureOfMerit fom, const DeviceSpecs& specs, const Constraints& constraints,
                    const PhysicalConstants& consts) {
  Evaluation ev;
  DeviceSpecs capped = specs;
  if (constraints.gradient_limit) {
    double limit = 0.0;
    try {
      limit = constraints.gradient_limit->at(specs.trap.omega_bar());
    } catch (const Error& e) {
      ev.infeasible_reason = e.what();
      return ev;
    }
    auto& cap = capped.magnet.gradient_cap;
    cap = cap ? std::min(*cap, limit) : limit;
  }
  try {
    ev.derived = derive_all(capped, consts);
  } catch (const Error& e) {
    ev.infeasible_reason = e.what();
    return ev;
  }
  const auto& d = ev.derived;
  if (constraints.min_distance && specs.trap.distance < *constraints.min_distance) {
    ev.infeasible_reason = "trap distance below the minimum";
    return ev;
  }

  CouplingRates rates{d.g, d.kappa, d.gamma, d.atom_number, 0.0};
  if (fom == FigureOfMerit::ProbeSnr) {
    if (!(specs.temperature > 0.0)) {
      ev.infeasible_reason = "probe figure of merit needs T > 0";
      return ev;
    }
    const double delta = detuning_for_shell(d.mu_c, constraints.probe_shell_radius, consts);
    const auto rate = gamma_r(d.rabi_per_amplitude * std::sqrt(d.mean_sq_amplitude), d.mu_c, delta, consts);
    if (constraints.require_weak_outcoupling && !rate.weak_coupling) {
      ev.infeasible_reason = "hbar*Omega_R(rms) >= mu_c";
      return ev;
    }
    ev.mean_gamma_r = rate.rate;
    rates.mean_gamma_r = rate.rate;
  }
  const double score = figure_of_merit(fom, rates);
  if (!std::isfinite(score)) {
    ev.infeasible_reason = "figure of merit is unbounded (vanishing dissipation)";
    return ev;
  }
  ev.feasible = true;
  ev.score = score;
  return ev;
}

SearchResult search(const Objective& objective, std::span<const SearchDimension> dims,
                    std::size_t budget, std::uint64_t seed, const SearchOptions& options) {
  if (budget < 1) throw ConfigError("search: budget must be >= 1");
  if (dims.empty()) throw ConfigError("search: at least one dimension is required");
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const auto& d = dims[i];
    if (!std::isfinite(d.lo) || !std::isfinite(d.hi) || d.lo > d.hi)
      throw ConfigError("search: bounds of '" + d.name + "' must be finite with lo <= hi");
    if (d.log_scale && !(d.lo > 0.0))
      throw ConfigError("search: log-scaled '" + d.name + "' needs lo > 0");
    if (d.lo < d.hi) free.push_back(i);
  }

  SearchResult result;
  std::vector<double> u(dims.size(), 0.0);
  std::vector<double> best_u;

  auto run = [&](const std::vector<double>& uu, const char* stage) {
    std::vector<double> x(dims.size());
    for (std::size_t i = 0; i < dims.size(); ++i) x[i] = to_value(dims[i], uu[i]);
    ObjectiveValue v = objective(x);
    if (v.feasible && !std::isfinite(v.score)) v = infeasible("non-finite score");
    TraceEntry e;
    e.index = result.trace.size();
    e.stage = stage;
    e.feasible = v.feasible;
    e.score = v.score;
    e.reason = v.reason;
    e.accepted = v.feasible && (!result.found || v.score > result.best_score);
    if (e.accepted) {
      result.found = true;
      result.best_score = v.score;
      result.best_x = x;
      best_u = uu;
    }
    e.x = std::move(x);
    result.trace.push_back(std::move(e));
    return result.trace.back().accepted;
  };

  if (free.empty()) {
    run(u, "grid");
    return result;
  }

  const auto d = static_cast<double>(free.size());
  std::size_t k = options.grid_points;
  if (k == 0)
    k = std::max<std::size_t>(2, static_cast<std::size_t>(std::floor(
                                     std::pow(static_cast<double>(budget) / 2.0, 1.0 / d) + 1e-9)));
  if (k < 2) k = 2;

  // Mixed-radix enumeration of the grid, truncated at the budget.
  std::vector<std::size_t> digit(free.size(), 0);
  for (bool more = true; more && result.trace.size() < budget;) {
    for (std::size_t j = 0; j < free.size(); ++j)
      u[free[j]] = static_cast<double>(digit[j]) / static_cast<double>(k - 1);
    run(u, "grid");
    more = false;
    for (std::size_t j = 0; j < free.size(); ++j) {
      if (++digit[j] < k) { more = true; break; }
      digit[j] = 0;
    }
  }
  if (!result.found) return result;

  Rng rng = substream(seed, 4, 0);
  std::vector<double> step(dims.size(), 0.5 / static_cast<double>(k - 1));
  std::vector<std::size_t> order = free;
  std::vector<double> current = best_u;
  while (result.trace.size() < budget) {
    for (std::size_t i = order.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
      std::swap(order[i - 1], order[j]);
    }
    bool improved = false;
    for (std::size_t dim : order) {
      for (double sign : {1.0, -1.0}) {
        if (result.trace.size() >= budget) break;
        std::vector<double> trial = current;
        trial[dim] = std::clamp(current[dim] + sign * step[dim], 0.0, 1.0);
        if (trial[dim] == current[dim]) continue;
        if (run(trial, "descent")) {
          current = trial;
          improved = true;
          break;
        }
      }
    }
    if (!improved) {
      double largest = 0.0;
      for (std::size_t dim : free) largest = std::max(largest, step[dim] *= 0.5);
      if (largest < options.min_step_fraction) break;
    }
  }
  return result;
}

void SearchSpace::validate() const {
  if (ranges.empty()) throw ConfigError("optimize: search space has no knobs");
  for (const auto& r : ranges) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi || !(r.lo > 0.0))
      throw ConfigError("optimize: range of '" + std::string(to_string(r.knob)) +
                        "' must be positive and finite with lo <= hi");
  }
}

DeviceSpecs apply_knobs(const DeviceSpecs& base, std::span<const KnobRange> ranges,
                        std::span<const double> x) {
  DeviceSpecs s = base;
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const double v = x[i];
    switch (ranges[i].knob) {
      case Knob::TrapFrequency: {
        const double scale = v / base.trap.omega_bar();
        s.trap.omega_x = base.trap.omega_x * scale;
        s.trap.omega_y = base.trap.omega_y * scale;
        s.trap.omega_z = base.trap.omega_z * scale;
        break;
      }
      case Knob::TrapDistance: s.trap.distance = v; break;
      case Knob::MagnetLength: s.magnet.length = v; break;
      case Knob::MagnetWidth: s.magnet.width = v; break;
      case Knob::MagnetThickness: s.magnet.thickness = v; break;
      case Knob::CantileverLength: s.cantilever.length = v; break;
      case Knob::CantileverWidth: s.cantilever.width = v; break;
      case Knob::CantileverThickness: s.cantilever.thickness = v; break;
      case Knob::QualityFactor: s.cantilever.quality_factor = v; break;
    }
  }
  return s;
}

DesignSearchResult search_design(FigureOfMerit fom, const DeviceSpecs& base,
                                 const SearchSpace& space, std::size_t budget,
                                 std::uint64_t seed, const SearchOptions& options,
                                 const PhysicalConstants& consts) {
  space.validate();
  std::vector<SearchDimension> dims;
  for (const auto& r : space.ranges)
    dims.push_back({std::string(to_string(r.knob)), r.lo, r.hi, r.log_scale});

  const Objective objective = [&](std::span<const double> x) -> ObjectiveValue {
    const auto ev = evaluate(fom, apply_knobs(base, space.ranges, x), space.constraints, consts);
    return {ev.feasible, ev.score, ev.infeasible_reason};
  };

  DesignSearchResult out;
  out.search = search(objective, dims, budget, seed, options);
  if (out.search.found) {
    out.best_specs = apply_knobs(base, space.ranges, out.search.best_x);
    out.best = evaluate(fom, *out.best_specs, space.constraints, consts);
  }
  return out;
}

}  // namespace cqed
