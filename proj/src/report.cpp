#include "cqed/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "cqed/constants.hpp"
#include "cqed/errors.hpp"
#include "cqed/outcoupling.hpp"
#include "cqed/tcdyn.hpp"
#include "cqed/units.hpp"

namespace cqed {
namespace {

nlohmann::ordered_json cooperativity_value(const Cooperativity& c) {
  if (c.value) return *c.value;
  return "unbounded";
}

double ratio(double num, double den) {
  return den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
}

nlohmann::ordered_json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

}  // namespace

nlohmann::ordered_json derived_report(const DerivedParams& d, const DeviceSpecs& specs,
                                      const PhysicalConstants& consts) {
  const double planck = kTwoPi * consts.hbar;
  const double sqrt_n = std::sqrt(static_cast<double>(d.atom_number));
  nlohmann::ordered_json j;
  j["omega_r_rad_s"] = d.omega_r;
  j["f_r_hz"] = angular_to_hz(d.omega_r);
  j["m_eff_kg"] = d.m_eff;
  j["a_qm_m"] = d.a_qm;
  j["kappa_rad_s"] = d.kappa;
  j["kappa_hz"] = angular_to_hz(d.kappa);
  j["gradient_t_per_m"] = d.gradient;
  j["dipole_gradient_t_per_m"] = d.dipole_gradient;
  j["mu_c_j"] = d.mu_c;
  j["mu_c_hz"] = d.mu_c / planck;
  j["tf_radius_x_m"] = d.tf_radii[0];
  j["tf_radius_y_m"] = d.tf_radii[1];
  j["tf_radius_z_m"] = d.tf_radii[2];
  j["omega_bar_t_rad_s"] = d.omega_bar_t;
  j["omega_bar_t_hz"] = angular_to_hz(d.omega_bar_t);
  j["gamma_three_body_per_s"] = d.gamma_three_body;
  j["gamma_background_per_s"] = d.gamma_background;
  j["gamma_per_s"] = d.gamma;
  j["omega_L_rad_s"] = d.omega_L;
  j["f_L_hz"] = angular_to_hz(d.omega_L);
  j["field_t"] = specs.trap.field;
  j["detuning_rad_s"] = d.detuning;
  j["detuning_hz"] = angular_to_hz(d.detuning);
  j["shell_radius"] = d.mu_c > 0.0 ? shell_radius(d.mu_c, d.detuning, consts) : 0.0;
  j["temperature_k"] = d.temperature;
  j["n_th"] = d.n_th;
  j["g_rad_s"] = d.g;
  j["g_hz"] = angular_to_hz(d.g);
  j["g_sqrt_n_rad_s"] = d.g * sqrt_n;
  j["g_sqrt_n_hz"] = angular_to_hz(d.g * sqrt_n);
  j["rabi_per_amplitude_rad_s_per_m"] = d.rabi_per_amplitude;
  j["mean_sq_amplitude_m2"] = d.mean_sq_amplitude;
  j["atom_number"] = d.atom_number;
  j["cooperativity"] = cooperativity_value(d.cooperativity);
  j["collective_cooperativity"] = cooperativity_value(d.collective_cooperativity);
  j["g_over_kappa_plus_gamma"] = finite_or_string(ratio(d.g, d.kappa + d.gamma));
  j["g_sqrt_n_over_kappa_plus_gamma"] = finite_or_string(ratio(d.g * sqrt_n, d.kappa + d.gamma));
  j["strong_coupling_single"] = d.g > d.kappa && d.g > d.gamma;
  j["strong_coupling_collective"] = d.g * sqrt_n > d.kappa && d.g * sqrt_n > d.gamma;
  j["rwa_ratio"] = ratio(d.g * sqrt_n, d.omega_r);
  j["frequency_route"] = to_string(d.frequency_route);
  j["gradient_route"] = to_string(d.gradient_route);
  j["loss_route"] = to_string(d.loss_route);
  return j;
}

std::vector<std::string> device_warnings(const DerivedParams& d, const DeviceSpecs& specs) {
  std::vector<std::string> out;
  const auto& m = specs.magnet;
  const double size = std::max({m.length, m.width, m.thickness});
  if (d.gradient_route != GradientRoute::Override && specs.trap.distance < 3.0 * size) {
    std::ostringstream os;
    os << "point-dipole gradient used at y0 = " << specs.trap.distance
       << " m, less than 3x the magnet size (" << size << " m); treat G_m as an estimate";
    out.push_back(os.str());
  }
  if (d.gradient_route == GradientRoute::Capped && d.dipole_gradient > d.gradient) {
    std::ostringstream os;
    os << "gradient capped at " << d.gradient << " T/m (dipole estimate " << d.dipole_gradient
       << " T/m)";
    out.push_back(os.str());
  }
  const double rwa = ratio(d.g * std::sqrt(static_cast<double>(d.atom_number)), d.omega_r);
  if (rwa > kRwaWarning) {
    std::ostringstream os;
    os << "g*sqrt(N)/omega_r = " << rwa << " exceeds " << kRwaWarning
       << "; rotating-wave approximation questionable";
    out.push_back(os.str());
  }
  if (!d.cooperativity.value) out.push_back("a loss rate is zero: cooperativity unbounded");
  if (d.loss_route == LossRoute::BackgroundOnly)
    out.push_back("N = 1: three-body loss excluded, gamma is the background rate only");
  return out;
}

std::optional<nlohmann::ordered_json> lookup(const nlohmann::ordered_json& root,
                                             std::string_view dotted) {
  const nlohmann::ordered_json* node = &root;
  std::size_t pos = 0;
  while (pos <= dotted.size()) {
    const auto dot = dotted.find('.', pos);
    const auto key = std::string(dotted.substr(pos, dot == std::string_view::npos ? dotted.npos : dot - pos));
    if (node->is_object()) {
      const auto it = node->find(key);
      if (it == node->end()) return std::nullopt;
      node = &*it;
    } else if (node->is_array()) {
      std::size_t idx = 0;
      const auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), idx);
      if (ec != std::errc{} || p != key.data() + key.size() || idx >= node->size()) return std::nullopt;
      node = &(*node)[idx];
    } else {
      return std::nullopt;
    }
    if (dot == std::string_view::npos) break;
    pos = dot + 1;
  }
  return *node;
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) : columns_(header.size()) {
  if (header.empty()) throw DomainError("CsvWriter: empty header");
  for (const auto& h : header) cell(std::string_view(h));
  end_row();
}

void CsvWriter::separator() {
  if (pending_ > 0) out_ += ',';
  ++pending_;
}

CsvWriter& CsvWriter::cell(double value) {
  separator();
  out_ += shortest_repr(value);
  return *this;
}

CsvWriter& CsvWriter::cell(std::int64_t value) {
  separator();
  out_ += std::to_string(value);
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  separator();
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) {
    out_ += text;
    return *this;
  }
  out_ += '"';
  for (char c : text) {
    if (c == '"') out_ += '"';
    out_ += c;
  }
  out_ += '"';
  return *this;
}

void CsvWriter::end_row() {
  if (pending_ != columns_)
    throw DomainError("CsvWriter: row has " + std::to_string(pending_) + " cells, expected " +
                      std::to_string(columns_));
  out_ += '\n';
  pending_ = 0;
}

}  // namespace cqed
