#include "cqed/pipeline.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include "cqed/errors.hpp"
#include "cqed/evolution.hpp"
#include "cqed/optimize.hpp"
#include "cqed/outcoupling.hpp"
#include "cqed/report.hpp"
#include "cqed/units.hpp"

namespace cqed {
namespace {

using ojson = nlohmann::ordered_json;

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

ojson base_report(const ScenarioConfig& cfg) {
  ojson r;
  r["schema"] = kReportSchema;
  r["scenario"] = to_string(cfg.kind);
  r["name"] = cfg.name;
  r["input"] = echo_config(cfg);
  return r;
}

void append_warnings(ojson& list, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) list.push_back(w);
}

struct Device {
  DeviceSpecs specs;
  DerivedParams derived;
};

Device derive_device(const ScenarioConfig& cfg) {
  Device d;
  d.specs = resolve_device(*cfg.device, cfg.constants);
  d.derived = derive_all(d.specs, cfg.constants);
  return d;
}

void run_derive(const ScenarioConfig& cfg, RunArtifacts& out) {
  const Device dev = derive_device(cfg);
  out.report["derived"] = derived_report(dev.derived, dev.specs, cfg.constants);
  out.report["outputs"] = ojson::object();
  append_warnings(out.report["warnings"], device_warnings(dev.derived, dev.specs));
}

void run_histogram(const ScenarioConfig& cfg, RunArtifacts& out) {
  const auto& h = *cfg.histogram;
  const Device dev = derive_device(cfg);

  OutcouplerConfig oc = outcoupler_from_device(dev.derived, 1.0, h.shots, cfg.seed);
  if (!h.coupling) oc.rabi_per_amplitude = 0.0;
  oc.technical_noise_rel = h.technical_noise_rel;
  oc.binning = h.binning;
  const OutcouplingRate mean_rate = mean_gamma_r(oc, dev.derived.mean_sq_amplitude, cfg.constants);
  if (h.tau) {
    oc.tau = *h.tau;
  } else {
    if (!(mean_rate.rate > 0.0))
      throw ConfigError("histogram.mean_lambda: the mean output-coupling rate is zero, set tau instead");
    oc.tau = *h.mean_lambda / mean_rate.rate;
  }

  const ThermalEnsembleResult res =
      simulate_histogram(oc, dev.derived, dev.derived.temperature, cfg.threads, cfg.constants);

  CsvWriter shots({"shot", "amplitude_m", "gamma_r_per_s", "fraction"});
  for (const auto& s : res.shots)
    shots.cell(s.shot).cell(s.amplitude).cell(s.gamma_r).cell(s.fraction).end_row();
  CsvWriter control({"shot", "fraction"});
  for (std::size_t i = 0; i < res.control_fractions.size(); ++i)
    control.cell(static_cast<std::int64_t>(i)).cell(res.control_fractions[i]).end_row();

  const SurvivalDensity analytic(res.mean_lambda, res.background_survival);
  CsvWriter hist({"bin_lo", "bin_hi", "count", "control_count", "density", "analytic_density"});
  const double total = static_cast<double>(res.histogram.total());
  for (std::size_t i = 0; i < res.histogram.counts.size(); ++i) {
    const double lo = res.histogram.bin_lo(i);
    const double hi = res.histogram.bin_hi(i);
    const double width = hi - lo;
    const double density = total > 0 ? static_cast<double>(res.histogram.counts[i]) / (total * width) : 0.0;
    double expected = 0.0;
    if (res.mean_lambda > 0.0)
      expected = (analytic.cdf(std::max(hi, 0.0)) - analytic.cdf(std::max(lo, 0.0))) / width;
    hist.cell(lo).cell(hi).cell(res.histogram.counts[i]).cell(res.control_histogram.counts[i])
        .cell(density).cell(expected).end_row();
  }

  const auto fractions = res.fractions();
  double mean_fraction = 0.0;
  for (double f : fractions) mean_fraction += f;
  mean_fraction /= static_cast<double>(fractions.size());

  ojson o;
  o["tau_s"] = oc.tau;
  o["mean_gamma_r_per_s"] = res.mean_gamma_r;
  o["mean_lambda"] = res.mean_lambda;
  o["kappa_tau"] = res.kappa_tau;
  o["background_survival"] = res.background_survival;
  o["shell_radius"] = mean_rate.shell;
  o["hbar_omega_rms_over_mu_c"] =
      cfg.constants.hbar * oc.rabi_per_amplitude * std::sqrt(dev.derived.mean_sq_amplitude) /
      dev.derived.mu_c;
  o["shots"] = h.shots;
  o["strong_drive_shots"] = res.strong_drive_shots;
  o["mean_fraction"] = mean_fraction;
  o["analytic_mean_fraction"] = analytic.mean();
  if (res.mean_lambda > 0.0)
    o["ks_distance_to_analytic"] = ks_distance(fractions, [&](double f) { return analytic.cdf(f); });
  o["technical_noise_rel"] = oc.technical_noise_rel;
  o["coupling"] = h.coupling;

  out.report["derived"] = derived_report(dev.derived, dev.specs, cfg.constants);
  out.report["outputs"] = o;
  append_warnings(out.report["warnings"], device_warnings(dev.derived, dev.specs));
  append_warnings(out.report["warnings"], res.warnings);
  out.files.push_back({"shots.csv", shots.str()});
  out.files.push_back({"control.csv", control.str()});
  out.files.push_back({"histogram.csv", hist.str()});
}

void run_evolve(const ScenarioConfig& cfg, RunArtifacts& out) {
  const auto& e = *cfg.evolve;
  ModelParams mp;
  std::int64_t atoms = 1;
  if (e.model) {
    mp.g = e.model->g;
    mp.delta = e.model->detuning;
    mp.kappa = e.model->kappa;
    mp.gamma_atom = e.model->gamma;
    mp.n_th = e.model->n_th;
  }
  if (cfg.device) {
    const Device dev = derive_device(cfg);
    atoms = dev.derived.atom_number;
    if (!e.model) {
      mp.g = dev.derived.g;
      mp.delta = dev.derived.detuning;
      mp.kappa = dev.derived.kappa;
      mp.gamma_atom = dev.derived.gamma;
      mp.n_th = dev.derived.n_th;
      mp.omega_r = dev.derived.omega_r;
    }
    out.report["derived"] = derived_report(dev.derived, dev.specs, cfg.constants);
    append_warnings(out.report["warnings"], device_warnings(dev.derived, dev.specs));
  }
  if (e.atom_count) atoms = *e.atom_count;
  if (!e.dissipation) {
    mp.kappa = 0.0;
    mp.gamma_atom = 0.0;
  }
  mp.delta_schedule = e.detuning_schedule;

  DriveCoolConfig dc;
  dc.atom_count = atoms;
  dc.fock_cutoff = e.fock_cutoff;
  dc.truncation_tolerance = e.truncation_tolerance;
  dc.duration_in_timescales = e.duration_in_timescales;
  dc.duration = e.duration;
  dc.samples = static_cast<std::size_t>(e.samples);
  dc.engine = e.engine;
  dc.trajectories = e.trajectories;
  dc.seed = cfg.seed;
  dc.master.ode.rtol = dc.mcwf.ode.rtol = e.rtol;
  dc.master.ode.atol = dc.mcwf.ode.atol = e.atol;
  dc.mcwf.threads = cfg.threads;

  const DriveCoolResult res = drive_cool_scenario(e.initial, mp, dc);
  const auto& rec = res.record;

  CsvWriter traj({"time_s", "mean_n", "mean_Sz", "total_excitation", "leak", "stderr_n", "stderr_Sz",
                  "stderr_total_excitation"});
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    traj.cell(rec.times[i]).cell(rec.mean_n[i]).cell(rec.mean_sz[i]).cell(rec.total_excitation[i])
        .cell(rec.leak[i]).cell(rec.stderr_n[i]).cell(rec.stderr_sz[i]).cell(rec.stderr_total[i])
        .end_row();
  }

  const std::int64_t dimension = (atoms + 1) * (res.fock_cutoff + 1);
  ojson meta;
  meta["engine"] = to_string(res.engine_used);
  meta["initial"] = to_string(res.initial);
  meta["seed"] = cfg.seed;
  meta["trajectories"] = rec.trajectory_count;
  meta["jumps"] = rec.jumps;
  meta["atom_count"] = atoms;
  meta["fock_cutoff"] = res.fock_cutoff;
  meta["hilbert_dimension"] = dimension;
  meta["truncation_tolerance"] = rec.truncation_tolerance;
  meta["max_leak"] = rec.max_leak;
  meta["truncation_ok"] = rec.truncation_ok;
  meta["rtol"] = e.rtol;
  meta["atol"] = e.atol;
  meta["samples"] = rec.times.size();
  meta["g_rad_s"] = mp.g;
  meta["detuning_rad_s"] = mp.delta;
  meta["kappa_rad_s"] = mp.kappa;
  meta["gamma_per_s"] = mp.gamma_atom;
  meta["n_th"] = mp.n_th;
  meta["timescale_s"] = res.timescale;

  ojson o;
  o["engine"] = to_string(res.engine_used);
  o["initial"] = to_string(res.initial);
  o["seeks_minimum"] = res.seeks_minimum;
  o["timescale_s"] = res.timescale;
  o["extremum_n"] = res.extremum_n;
  o["extremum_time_s"] = res.extremum_time;
  o["extremum_time_over_timescale"] = res.extremum_time / res.timescale;
  o["initial_n"] = rec.mean_n.front();
  o["final_n"] = rec.mean_n.back();
  o["max_leak"] = rec.max_leak;
  o["truncation_ok"] = rec.truncation_ok;
  o["fock_cutoff"] = res.fock_cutoff;
  o["trajectories"] = rec.trajectory_count;
  out.report["outputs"] = o;
  append_warnings(out.report["warnings"], rec.warnings);
  append_warnings(out.report["warnings"], res.warnings);
  if (!rec.truncation_ok) {
    out.report["warnings"].push_back("Fock truncation leak " + shortest_repr(rec.max_leak) +
                                     " exceeded tolerance " + shortest_repr(rec.truncation_tolerance));
  }
  out.files.push_back({"trajectory.csv", traj.str()});
  out.files.push_back({"run_meta.json", dump(meta)});
}

void run_optimize(const ScenarioConfig& cfg, RunArtifacts& out) {
  const auto& o = *cfg.optimize;
  const DeviceSpecs base = resolve_device(*cfg.device, cfg.constants);
  SearchOptions so;
  so.grid_points = static_cast<std::size_t>(o.grid_points);
  const DesignSearchResult res = search_design(o.figure_of_merit, base, o.space,
                                               static_cast<std::size_t>(o.budget), cfg.seed, so,
                                               cfg.constants);

  std::vector<std::string> header{"index", "stage"};
  for (const auto& r : o.space.ranges) header.emplace_back(to_string(r.knob));
  header.insert(header.end(), {"feasible", "score", "accepted", "reason"});
  CsvWriter trace(header);
  for (const auto& t : res.search.trace) {
    trace.cell(static_cast<std::int64_t>(t.index)).cell(std::string_view(t.stage));
    for (double x : t.x) trace.cell(x);
    trace.cell(t.feasible).cell(t.score).cell(t.accepted).cell(std::string_view(t.reason)).end_row();
  }

  ojson outputs;
  outputs["figure_of_merit"] = to_string(o.figure_of_merit);
  outputs["evaluations"] = res.search.trace.size();
  outputs["found"] = res.search.found;
  if (res.search.found && res.best && res.best_specs) {
    outputs["best_score"] = res.search.best_score;
    ojson knobs;
    for (std::size_t i = 0; i < o.space.ranges.size(); ++i)
      knobs[std::string(to_string(o.space.ranges[i].knob))] = res.search.best_x[i];
    outputs["best_knobs"] = knobs;
    if (o.figure_of_merit == FigureOfMerit::ProbeSnr)
      outputs["best_mean_gamma_r_per_s"] = res.best->mean_gamma_r;
    if (o.space.constraints.gradient_limit)
      outputs["gradient_limit_t_per_m"] =
          o.space.constraints.gradient_limit->at(res.best->derived.omega_bar_t);
    out.report["derived"] = derived_report(res.best->derived, *res.best_specs, cfg.constants);
    append_warnings(out.report["warnings"], device_warnings(res.best->derived, *res.best_specs));
  } else {
    out.status = kExitInfeasible;
    out.report["warnings"].push_back("no feasible design within the search space");
  }
  out.report["outputs"] = outputs;
  out.files.push_back({"trace.csv", trace.str()});
}

}  // namespace

RunArtifacts execute(const ScenarioConfig& cfg) {
  RunArtifacts out;
  out.report = base_report(cfg);
  out.report["warnings"] = ojson::array();
  switch (cfg.kind) {
    case ScenarioKind::Derive: run_derive(cfg, out); break;
    case ScenarioKind::Histogram: run_histogram(cfg, out); break;
    case ScenarioKind::Evolve: run_evolve(cfg, out); break;
    case ScenarioKind::Optimize: run_optimize(cfg, out); break;
  }
  ojson files = ojson::array();
  for (const auto& f : out.files) files.push_back(f.name);
  files.push_back("report.json");
  out.report["files"] = files;
  out.report["status"] = exit_kind(out.status);
  out.files.push_back({"report.json", dump(out.report)});
  return out;
}

std::filesystem::path resolve_output_dir(const ScenarioConfig& cfg,
                                         const std::optional<std::filesystem::path>& override_dir) {
  if (override_dir) return *override_dir;
  const std::filesystem::path dir(cfg.output_dir);
  if (dir.is_absolute()) return dir;
  const char* root = std::getenv("CQED_OUTPUT_ROOT");
  if (root != nullptr && *root != '\0') return std::filesystem::path(root) / dir;
  return dir;
}

void write_artifacts(const RunArtifacts& artifacts, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  for (const auto& f : artifacts.files) {
    const auto target = dir / f.name;
    const auto tmp = dir / (f.name + ".tmp");
    {
      std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
      if (!os) throw IoError("cannot open '" + tmp.string() + "' for writing");
      os.write(f.content.data(), static_cast<std::streamsize>(f.content.size()));
      if (!os) throw IoError("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw IoError("cannot move '" + tmp.string() + "' into place: " + ec.message());
  }
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const SpecError*>(&e) ||
      dynamic_cast<const DomainError*>(&e))
    return kExitConfig;
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  return kExitNumerical;
}

std::string_view exit_kind(int code) {
  switch (code) {
    case kExitOk: return "ok";
    case kExitUsage: return "usage";
    case kExitConfig: return "config";
    case kExitInfeasible: return "infeasible";
    case kExitNumerical: return "numerical";
    case kExitIo: return "io";
  }
  return "unknown";
}

std::string error_message(int code, std::string_view message) {
  ojson j;
  j["error"] = exit_kind(code);
  j["exit_code"] = code;
  j["message"] = message;
  return j.dump();
}

}  // namespace cqed
