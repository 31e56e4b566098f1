#include "cqed/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "cqed/errors.hpp"
#include "cqed/units.hpp"

namespace cqed {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

/// View of one JSON object that remembers which keys were read, so that
/// finish() can reject anything unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(&j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(where() + "must be an object");
  }

  [[nodiscard]] bool has(const std::string& key) const { return j_->contains(key); }

  const json& raw(const std::string& key) {
    if (!has(key)) throw ConfigError(where() + "missing required key '" + key + "'");
    used_.insert(key);
    return j_->at(key);
  }

  double quantity(const std::string& key, Dimension dim) {
    const json& v = raw(key);
    if (dim == Dimension::Dimensionless && v.is_number()) return v.get<double>();
    if (!v.is_string()) {
      throw ConfigError(where(key) + "expects a string with an explicit " +
                        std::string(to_string(dim)) + " unit, e.g. \"1.0 " +
                        std::string(si_unit(dim)) + "\"");
    }
    try {
      return parse_quantity(v.get<std::string>(), dim);
    } catch (const ConfigError& e) {
      throw ConfigError(where(key) + e.what());
    }
  }

  std::optional<double> optional_quantity(const std::string& key, Dimension dim) {
    if (!has(key)) return std::nullopt;
    return quantity(key, dim);
  }

  double quantity_or(const std::string& key, Dimension dim, double fallback) {
    return optional_quantity(key, dim).value_or(fallback);
  }

  double number(const std::string& key) { return quantity(key, Dimension::Dimensionless); }
  double number_or(const std::string& key, double fallback) {
    return quantity_or(key, Dimension::Dimensionless, fallback);
  }

  std::int64_t integer(const std::string& key) {
    const json& v = raw(key);
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15)
        return static_cast<std::int64_t>(d);
    }
    throw ConfigError(where(key) + "expects an integer");
  }

  std::optional<std::int64_t> optional_integer(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return integer(key);
  }

  std::int64_t integer_or(const std::string& key, std::int64_t fallback) {
    return optional_integer(key).value_or(fallback);
  }

  std::uint64_t unsigned_integer_or(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError(where(key) + "expects a non-negative integer");
  }

  bool boolean_or(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(where(key) + "expects true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(where(key) + "expects a string");
    return v.get<std::string>();
  }

  std::string string_or(const std::string& key, std::string fallback) {
    if (!has(key)) return fallback;
    return string(key);
  }

  Section section(const std::string& key) { return Section(raw(key), path_ + key + "."); }

  std::optional<Section> optional_section(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return section(key);
  }

  [[nodiscard]] std::string where(const std::string& key = {}) const {
    return path_.empty() && key.empty() ? std::string("config: ") : path_ + key + ": ";
  }

  void finish() const {
    for (const auto& [key, value] : j_->items()) {
      if (!used_.contains(key)) throw ConfigError(where() + "unknown key '" + key + "'");
    }
  }

 private:
  const json* j_;
  std::string path_;
  std::set<std::string> used_;
};

template <typename Enum, typename Parse>
Enum parse_enum(Section& s, const std::string& key, Enum fallback, Parse&& parse) {
  if (!s.has(key)) return fallback;
  const std::string value = s.string(key);
  const auto parsed = parse(value);
  if (!parsed) throw ConfigError(s.where(key) + "unknown value '" + value + "'");
  return *parsed;
}

std::optional<ScenarioKind> parse_kind(std::string_view v) {
  if (v == "derive") return ScenarioKind::Derive;
  if (v == "histogram") return ScenarioKind::Histogram;
  if (v == "evolve") return ScenarioKind::Evolve;
  if (v == "optimize") return ScenarioKind::Optimize;
  return std::nullopt;
}

std::optional<SpinPreparation> parse_preparation(std::string_view v) {
  if (v == "all_up") return SpinPreparation::AllUp;
  if (v == "all_down") return SpinPreparation::AllDown;
  return std::nullopt;
}

std::optional<Engine> parse_engine(std::string_view v) {
  if (v == "auto") return Engine::Auto;
  if (v == "master") return Engine::Master;
  if (v == "mcwf") return Engine::Mcwf;
  return std::nullopt;
}

Dimension knob_dimension(Knob knob) {
  switch (knob) {
    case Knob::TrapFrequency: return Dimension::Frequency;
    case Knob::QualityFactor: return Dimension::Dimensionless;
    default: return Dimension::Length;
  }
}

PhysicalConstants parse_constants(Section s) {
  PhysicalConstants c;
  c.hbar = s.quantity_or("hbar", Dimension::Action, c.hbar);
  c.mu_B = s.quantity_or("mu_B", Dimension::MagneticMoment, c.mu_B);
  c.k_B = s.quantity_or("k_B", Dimension::HeatCapacity, c.k_B);
  c.mu_0 = s.quantity_or("mu_0", Dimension::Permeability, c.mu_0);
  c.atom_mass = s.quantity_or("atom_mass", Dimension::Mass, c.atom_mass);
  c.scattering_length = s.quantity_or("scattering_length", Dimension::Length, c.scattering_length);
  c.g_F = s.number_or("g_F", c.g_F);
  s.finish();
  try {
    c.validate();
  } catch (const SpecError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

DeviceConfig parse_device(Section s) {
  DeviceConfig out;
  auto& d = out.specs;
  {
    Section c = s.section("cantilever");
    d.cantilever.length = c.quantity("length", Dimension::Length);
    d.cantilever.width = c.quantity("width", Dimension::Length);
    d.cantilever.thickness = c.quantity("thickness", Dimension::Length);
    d.cantilever.youngs_modulus =
        c.quantity_or("youngs_modulus", Dimension::Pressure, materials::kSiliconYoungsModulus);
    d.cantilever.density = c.quantity_or("density", Dimension::Density, materials::kSiliconDensity);
    d.cantilever.quality_factor = c.number("quality_factor");
    d.cantilever.tip_mass = c.quantity_or("tip_mass", Dimension::Mass, 0.0);
    d.cantilever.frequency_override = c.optional_quantity("frequency_override", Dimension::Frequency);
    c.finish();
  }
  {
    Section m = s.section("magnet");
    d.magnet.length = m.quantity("length", Dimension::Length);
    d.magnet.width = m.quantity("width", Dimension::Length);
    d.magnet.thickness = m.quantity("thickness", Dimension::Length);
    d.magnet.saturation_magnetization = m.quantity_or(
        "saturation_magnetization", Dimension::Magnetization, materials::kCobaltSaturation);
    d.magnet.gap = m.quantity_or("gap", Dimension::Length, 0.0);
    d.magnet.gradient_cap = m.optional_quantity("gradient_cap", Dimension::Gradient);
    d.magnet.gradient_override = m.optional_quantity("gradient_override", Dimension::Gradient);
    m.finish();
  }
  {
    Section t = s.section("trap");
    d.trap.omega_x = t.quantity("omega_x", Dimension::Frequency);
    d.trap.omega_y = t.quantity("omega_y", Dimension::Frequency);
    d.trap.omega_z = t.quantity("omega_z", Dimension::Frequency);
    d.trap.distance = t.quantity("distance", Dimension::Length);
    d.trap.field = t.quantity("field", Dimension::MagneticField);
    d.trap.background_loss = t.quantity_or("background_loss", Dimension::Rate, 0.0);
    t.finish();
  }
  {
    Section c = s.section("condensate");
    d.condensate.atom_number = c.integer("atom_number");
    if (c.has("detuning") && c.has("shell_radius"))
      throw ConfigError(c.where() + "give either 'detuning' or 'shell_radius', not both");
    d.condensate.detuning = c.quantity_or("detuning", Dimension::Frequency, 0.0);
    out.shell_radius = c.optional_quantity("shell_radius", Dimension::Dimensionless);
    if (out.shell_radius && !(*out.shell_radius >= 0.0 && *out.shell_radius <= 1.0))
      throw ConfigError(c.where("shell_radius") + "must lie in [0, 1]");
    c.finish();
  }
  d.temperature = s.quantity("temperature", Dimension::Temperature);
  s.finish();
  try {
    d.validate();
  } catch (const SpecError& e) {
    throw ConfigError(std::string("device: ") + e.what());
  }
  return out;
}

HistogramSettings parse_histogram(Section s) {
  HistogramSettings h;
  h.tau = s.optional_quantity("tau", Dimension::Time);
  h.mean_lambda = s.optional_quantity("mean_lambda", Dimension::Dimensionless);
  if (h.tau.has_value() == h.mean_lambda.has_value())
    throw ConfigError(s.where() + "give exactly one of 'tau' and 'mean_lambda'");
  if (h.tau && !(*h.tau > 0.0)) throw ConfigError(s.where("tau") + "must be > 0");
  if (h.mean_lambda && !(*h.mean_lambda > 0.0)) throw ConfigError(s.where("mean_lambda") + "must be > 0");
  h.shots = s.integer_or("shots", h.shots);
  if (h.shots < 1) throw ConfigError(s.where("shots") + "must be >= 1");
  h.technical_noise_rel = s.number_or("technical_noise_rel", h.technical_noise_rel);
  if (!(h.technical_noise_rel >= 0.0)) throw ConfigError(s.where("technical_noise_rel") + "must be >= 0");
  const auto bins = s.integer_or("bins", static_cast<std::int64_t>(h.binning.bins));
  if (bins < 1) throw ConfigError(s.where("bins") + "must be >= 1");
  h.binning.bins = static_cast<std::size_t>(bins);
  h.binning.lo = s.number_or("range_lo", h.binning.lo);
  h.binning.hi = s.number_or("range_hi", h.binning.hi);
  if (!(h.binning.hi > h.binning.lo)) throw ConfigError(s.where() + "range_hi must exceed range_lo");
  h.coupling = s.boolean_or("coupling", h.coupling);
  s.finish();
  return h;
}

EvolveSettings parse_evolve(Section s) {
  EvolveSettings e;
  e.initial = parse_enum(s, "initial", e.initial, parse_preparation);
  e.engine = parse_enum(s, "engine", e.engine, parse_engine);
  e.atom_count = s.optional_integer("atom_count");
  if (e.atom_count && *e.atom_count < 1) throw ConfigError(s.where("atom_count") + "must be >= 1");
  e.fock_cutoff = s.optional_integer("fock_cutoff");
  if (e.fock_cutoff && *e.fock_cutoff < 1) throw ConfigError(s.where("fock_cutoff") + "must be >= 1");
  e.truncation_tolerance = s.number_or("truncation_tolerance", e.truncation_tolerance);
  if (!(e.truncation_tolerance > 0.0 && e.truncation_tolerance < 1.0))
    throw ConfigError(s.where("truncation_tolerance") + "must lie in (0, 1)");
  e.duration = s.optional_quantity("duration", Dimension::Time);
  if (e.duration && !(*e.duration > 0.0)) throw ConfigError(s.where("duration") + "must be > 0");
  e.duration_in_timescales = s.number_or("duration_in_timescales", e.duration_in_timescales);
  if (!(e.duration_in_timescales > 0.0))
    throw ConfigError(s.where("duration_in_timescales") + "must be > 0");
  e.samples = s.integer_or("samples", e.samples);
  if (e.samples < 2) throw ConfigError(s.where("samples") + "must be >= 2");
  e.trajectories = s.integer_or("trajectories", e.trajectories);
  if (e.trajectories < 1) throw ConfigError(s.where("trajectories") + "must be >= 1");
  e.rtol = s.number_or("rtol", e.rtol);
  e.atol = s.number_or("atol", e.atol);
  if (!(e.rtol > 0.0) || !(e.atol > 0.0)) throw ConfigError(s.where() + "rtol and atol must be > 0");
  e.dissipation = s.boolean_or("dissipation", e.dissipation);
  if (auto m = s.optional_section("model")) {
    ModelOverride o;
    o.g = m->quantity("g", Dimension::Frequency);
    o.detuning = m->quantity_or("detuning", Dimension::Frequency, 0.0);
    o.kappa = m->quantity_or("kappa", Dimension::Frequency, 0.0);
    o.gamma = m->quantity_or("gamma", Dimension::Rate, 0.0);
    o.n_th = m->number_or("n_th", 0.0);
    if (!(o.kappa >= 0.0) || !(o.gamma >= 0.0) || !(o.n_th >= 0.0))
      throw ConfigError(m->where() + "kappa, gamma and n_th must be >= 0");
    m->finish();
    e.model = o;
  }
  if (s.has("detuning_schedule")) {
    const json& list = s.raw("detuning_schedule");
    if (!list.is_array()) throw ConfigError(s.where("detuning_schedule") + "expects a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      Section step(list[i], "evolve.detuning_schedule[" + std::to_string(i) + "].");
      e.detuning_schedule.push_back(
          {step.quantity("start", Dimension::Time), step.quantity("detuning", Dimension::Frequency)});
      step.finish();
    }
    for (std::size_t i = 1; i < e.detuning_schedule.size(); ++i)
      if (!(e.detuning_schedule[i].start > e.detuning_schedule[i - 1].start))
        throw ConfigError(s.where("detuning_schedule") + "start times must be strictly increasing");
  }
  s.finish();
  return e;
}

OptimizeSettings parse_optimize(Section s) {
  OptimizeSettings o;
  o.figure_of_merit = parse_enum(s, "figure_of_merit", o.figure_of_merit, parse_figure_of_merit);
  o.budget = s.integer_or("budget", o.budget);
  if (o.budget < 1) throw ConfigError(s.where("budget") + "must be >= 1");
  o.grid_points = s.integer_or("grid_points", o.grid_points);
  if (o.grid_points < 0 || o.grid_points == 1)
    throw ConfigError(s.where("grid_points") + "must be 0 (automatic) or >= 2");
  const json& knobs = s.raw("knobs");
  if (!knobs.is_array() || knobs.empty()) throw ConfigError(s.where("knobs") + "expects a non-empty list");
  for (std::size_t i = 0; i < knobs.size(); ++i) {
    Section k(knobs[i], "optimize.knobs[" + std::to_string(i) + "].");
    KnobRange r;
    const std::string name = k.string("name");
    const auto knob = parse_knob(name);
    if (!knob) throw ConfigError(k.where("name") + "unknown knob '" + name + "'");
    r.knob = *knob;
    r.lo = k.quantity("lo", knob_dimension(*knob));
    r.hi = k.quantity("hi", knob_dimension(*knob));
    r.log_scale = k.boolean_or("log", false);
    k.finish();
    o.space.ranges.push_back(r);
  }
  if (auto c = s.optional_section("constraints")) {
    auto& cons = o.space.constraints;
    cons.min_distance = c->optional_quantity("min_distance", Dimension::Length);
    if (auto g = c->optional_section("gradient_limit")) {
      GradientLimit lim;
      lim.reference_gradient = g->quantity("reference_gradient", Dimension::Gradient);
      lim.reference_omega_bar = g->quantity("reference_omega_bar", Dimension::Frequency);
      lim.exponent = g->number_or("exponent", 0.0);
      if (!(lim.reference_gradient > 0.0) || !(lim.reference_omega_bar > 0.0))
        throw ConfigError(g->where() + "reference values must be > 0");
      g->finish();
      cons.gradient_limit = lim;
    }
    cons.require_weak_outcoupling = c->boolean_or("require_weak_outcoupling", cons.require_weak_outcoupling);
    cons.probe_shell_radius = c->number_or("probe_shell_radius", cons.probe_shell_radius);
    if (!(cons.probe_shell_radius > 0.0 && cons.probe_shell_radius < 1.0))
      throw ConfigError(c->where("probe_shell_radius") + "must lie in (0, 1)");
    c->finish();
  }
  s.finish();
  try {
    o.space.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return o;
}

}  // namespace

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Derive: return "derive";
    case ScenarioKind::Histogram: return "histogram";
    case ScenarioKind::Evolve: return "evolve";
    case ScenarioKind::Optimize: return "optimize";
  }
  return "derive";
}

ScenarioConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  Section s(root, "");
  ScenarioConfig cfg;
  if (s.has("schema")) {
    const auto schema = s.string("schema");
    if (schema != kConfigSchema)
      throw ConfigError("config: unsupported schema '" + schema + "' (expected " + std::string(kConfigSchema) + ")");
  }
  cfg.name = s.string_or("name", "");
  cfg.description = s.string_or("description", "");
  cfg.kind = parse_enum(s, "scenario", cfg.kind, parse_kind);
  if (!s.has("scenario")) throw ConfigError("config: missing required key 'scenario'");
  cfg.seed = s.unsigned_integer_or("seed", cfg.seed);
  cfg.output_dir = s.string_or("output_dir", cfg.output_dir);
  if (cfg.output_dir.empty()) throw ConfigError("config: output_dir must not be empty");
  for (const auto& part : std::filesystem::path(cfg.output_dir))
    if (part == "..") throw ConfigError("config: output_dir must not contain '..'");
  const auto threads = s.integer_or("threads", cfg.threads);
  if (threads < 0 || threads > 1024) throw ConfigError("config: threads must lie in [0, 1024]");
  cfg.threads = static_cast<unsigned>(threads);
  if (auto c = s.optional_section("constants")) cfg.constants = parse_constants(*c);
  if (auto d = s.optional_section("device")) cfg.device = parse_device(*d);
  if (auto h = s.optional_section("histogram")) cfg.histogram = parse_histogram(*h);
  if (auto e = s.optional_section("evolve")) cfg.evolve = parse_evolve(*e);
  if (auto o = s.optional_section("optimize")) cfg.optimize = parse_optimize(*o);
  s.finish();

  auto need = [&](bool present, const char* what) {
    if (!present)
      throw ConfigError("config: scenario '" + std::string(to_string(cfg.kind)) + "' requires a '" +
                        what + "' section");
  };
  switch (cfg.kind) {
    case ScenarioKind::Derive: need(cfg.device.has_value(), "device"); break;
    case ScenarioKind::Histogram:
      need(cfg.device.has_value(), "device");
      need(cfg.histogram.has_value(), "histogram");
      if (!(cfg.device->specs.temperature > 0.0))
        throw ConfigError("config: histogram scenario needs device.temperature > 0");
      break;
    case ScenarioKind::Evolve:
      need(cfg.evolve.has_value(), "evolve");
      if (!cfg.evolve->model) need(cfg.device.has_value(), "device");
      if (!cfg.evolve->atom_count && !cfg.device)
        throw ConfigError("config: evolve needs 'atom_count' when no device section is given");
      break;
    case ScenarioKind::Optimize:
      need(cfg.device.has_value(), "device");
      need(cfg.optimize.has_value(), "optimize");
      break;
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

nlohmann::ordered_json echo_config(const ScenarioConfig& cfg) {
  auto q = [](double v, Dimension d) { return format_quantity(v, d); };
  ojson out;
  out["schema"] = kConfigSchema;
  out["name"] = cfg.name;
  out["description"] = cfg.description;
  out["scenario"] = to_string(cfg.kind);
  out["seed"] = cfg.seed;
  out["output_dir"] = cfg.output_dir;
  out["threads"] = cfg.threads;

  const auto& c = cfg.constants;
  out["constants"] = {
      {"hbar", q(c.hbar, Dimension::Action)},
      {"mu_B", q(c.mu_B, Dimension::MagneticMoment)},
      {"k_B", q(c.k_B, Dimension::HeatCapacity)},
      {"mu_0", q(c.mu_0, Dimension::Permeability)},
      {"atom_mass", q(c.atom_mass, Dimension::Mass)},
      {"scattering_length", q(c.scattering_length, Dimension::Length)},
      {"g_F", c.g_F},
  };

  if (cfg.device) {
    const auto& d = cfg.device->specs;
    ojson cant = {
        {"length", q(d.cantilever.length, Dimension::Length)},
        {"width", q(d.cantilever.width, Dimension::Length)},
        {"thickness", q(d.cantilever.thickness, Dimension::Length)},
        {"youngs_modulus", q(d.cantilever.youngs_modulus, Dimension::Pressure)},
        {"density", q(d.cantilever.density, Dimension::Density)},
        {"quality_factor", d.cantilever.quality_factor},
        {"tip_mass", q(d.cantilever.tip_mass, Dimension::Mass)},
    };
    if (d.cantilever.frequency_override)
      cant["frequency_override"] = q(*d.cantilever.frequency_override, Dimension::Frequency);
    ojson mag = {
        {"length", q(d.magnet.length, Dimension::Length)},
        {"width", q(d.magnet.width, Dimension::Length)},
        {"thickness", q(d.magnet.thickness, Dimension::Length)},
        {"saturation_magnetization", q(d.magnet.saturation_magnetization, Dimension::Magnetization)},
        {"gap", q(d.magnet.gap, Dimension::Length)},
    };
    if (d.magnet.gradient_cap) mag["gradient_cap"] = q(*d.magnet.gradient_cap, Dimension::Gradient);
    if (d.magnet.gradient_override)
      mag["gradient_override"] = q(*d.magnet.gradient_override, Dimension::Gradient);
    ojson trap = {
        {"omega_x", q(d.trap.omega_x, Dimension::Frequency)},
        {"omega_y", q(d.trap.omega_y, Dimension::Frequency)},
        {"omega_z", q(d.trap.omega_z, Dimension::Frequency)},
        {"distance", q(d.trap.distance, Dimension::Length)},
        {"field", q(d.trap.field, Dimension::MagneticField)},
        {"background_loss", q(d.trap.background_loss, Dimension::Rate)},
    };
    ojson cond = {{"atom_number", d.condensate.atom_number}};
    if (cfg.device->shell_radius) cond["shell_radius"] = *cfg.device->shell_radius;
    else cond["detuning"] = q(d.condensate.detuning, Dimension::Frequency);
    out["device"] = {{"cantilever", cant}, {"magnet", mag}, {"trap", trap}, {"condensate", cond},
                     {"temperature", q(d.temperature, Dimension::Temperature)}};
  }

  if (cfg.histogram) {
    const auto& h = *cfg.histogram;
    ojson j;
    if (h.tau) j["tau"] = q(*h.tau, Dimension::Time);
    if (h.mean_lambda) j["mean_lambda"] = *h.mean_lambda;
    j["shots"] = h.shots;
    j["technical_noise_rel"] = h.technical_noise_rel;
    j["bins"] = h.binning.bins;
    j["range_lo"] = h.binning.lo;
    j["range_hi"] = h.binning.hi;
    j["coupling"] = h.coupling;
    out["histogram"] = j;
  }

  if (cfg.evolve) {
    const auto& e = *cfg.evolve;
    ojson j;
    j["initial"] = to_string(e.initial);
    j["engine"] = to_string(e.engine);
    if (e.atom_count) j["atom_count"] = *e.atom_count;
    if (e.fock_cutoff) j["fock_cutoff"] = *e.fock_cutoff;
    j["truncation_tolerance"] = e.truncation_tolerance;
    if (e.duration) j["duration"] = q(*e.duration, Dimension::Time);
    j["duration_in_timescales"] = e.duration_in_timescales;
    j["samples"] = e.samples;
    j["trajectories"] = e.trajectories;
    j["rtol"] = e.rtol;
    j["atol"] = e.atol;
    j["dissipation"] = e.dissipation;
    if (e.model) {
      j["model"] = {{"g", q(e.model->g, Dimension::Frequency)},
                    {"detuning", q(e.model->detuning, Dimension::Frequency)},
                    {"kappa", q(e.model->kappa, Dimension::Frequency)},
                    {"gamma", q(e.model->gamma, Dimension::Rate)},
                    {"n_th", e.model->n_th}};
    }
    if (!e.detuning_schedule.empty()) {
      ojson list = ojson::array();
      for (const auto& step : e.detuning_schedule)
        list.push_back({{"start", q(step.start, Dimension::Time)},
                        {"detuning", q(step.detuning, Dimension::Frequency)}});
      j["detuning_schedule"] = list;
    }
    out["evolve"] = j;
  }

  if (cfg.optimize) {
    const auto& o = *cfg.optimize;
    ojson j;
    j["figure_of_merit"] = to_string(o.figure_of_merit);
    j["budget"] = o.budget;
    j["grid_points"] = o.grid_points;
    ojson knobs = ojson::array();
    for (const auto& r : o.space.ranges) {
      const Dimension dim = knob_dimension(r.knob);
      ojson k = {{"name", to_string(r.knob)}, {"log", r.log_scale}};
      if (dim == Dimension::Dimensionless) {
        k["lo"] = r.lo;
        k["hi"] = r.hi;
      } else {
        k["lo"] = q(r.lo, dim);
        k["hi"] = q(r.hi, dim);
      }
      knobs.push_back(k);
    }
    j["knobs"] = knobs;
    const auto& c2 = o.space.constraints;
    ojson cons;
    if (c2.min_distance) cons["min_distance"] = q(*c2.min_distance, Dimension::Length);
    if (c2.gradient_limit) {
      cons["gradient_limit"] = {
          {"reference_gradient", q(c2.gradient_limit->reference_gradient, Dimension::Gradient)},
          {"reference_omega_bar", q(c2.gradient_limit->reference_omega_bar, Dimension::Frequency)},
          {"exponent", c2.gradient_limit->exponent}};
    }
    cons["require_weak_outcoupling"] = c2.require_weak_outcoupling;
    cons["probe_shell_radius"] = c2.probe_shell_radius;
    j["constraints"] = cons;
    out["optimize"] = j;
  }
  return out;
}

DeviceSpecs resolve_device(const DeviceConfig& device, const PhysicalConstants& consts) {
  DeviceSpecs specs = device.specs;
  if (device.shell_radius) {
    const auto mu = chemical_potential(specs.condensate, specs.trap, consts);
    specs.condensate.detuning = detuning_for_shell(mu.mu, *device.shell_radius, consts);
  }
  return specs;
}

}  // namespace cqed
