#include "cqed/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <span>

#include "cqed/constants.hpp"
#include "cqed/errors.hpp"

namespace cqed {
namespace {

struct UnitEntry {
  std::string_view suffix;
  double factor;
};

constexpr double kTp = kTwoPi;
constexpr UnitEntry kDimensionless[] = {{"", 1.0}};
constexpr UnitEntry kLength[] = {{"m", 1.0},   {"mm", 1e-3},          {"um", 1e-6},
                                 {"\xC2\xB5m", 1e-6}, {"nm", 1e-9}, {"pm", 1e-12}};
constexpr UnitEntry kMass[] = {{"kg", 1.0}, {"g", 1e-3}, {"mg", 1e-6}, {"ug", 1e-9}};
constexpr UnitEntry kTime[] = {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"\xC2\xB5s", 1e-6}, {"ns", 1e-9}};
constexpr UnitEntry kFrequency[] = {{"rad/s", 1.0},        {"Hz", kTp},         {"kHz", kTp * 1e3},
                                    {"MHz", kTp * 1e6},    {"GHz", kTp * 1e9}};
constexpr UnitEntry kRate[] = {{"1/s", 1.0}, {"s^-1", 1.0}, {"Hz", kTp}, {"kHz", kTp * 1e3}};
constexpr UnitEntry kTemperature[] = {{"K", 1.0}, {"mK", 1e-3}, {"uK", 1e-6}, {"\xC2\xB5K", 1e-6}, {"nK", 1e-9}};
constexpr UnitEntry kField[] = {{"T", 1.0}, {"mT", 1e-3}, {"uT", 1e-6}, {"G", 1e-4}, {"mG", 1e-7}};
constexpr UnitEntry kGradient[] = {{"T/m", 1.0}, {"G/cm", 1e-2}};
constexpr UnitEntry kPressure[] = {{"Pa", 1.0}, {"kPa", 1e3}, {"MPa", 1e6}, {"GPa", 1e9}};
constexpr UnitEntry kDensity[] = {{"kg/m^3", 1.0}, {"g/cm^3", 1e3}};
constexpr UnitEntry kMagnetization[] = {{"A/m", 1.0}, {"kA/m", 1e3}, {"MA/m", 1e6}};
constexpr UnitEntry kAction[] = {{"J s", 1.0}, {"J*s", 1.0}};
constexpr UnitEntry kMoment[] = {{"J/T", 1.0}};
constexpr UnitEntry kHeatCapacity[] = {{"J/K", 1.0}};
constexpr UnitEntry kPermeability[] = {{"T m/A", 1.0}, {"T*m/A", 1.0}, {"H/m", 1.0}};

std::span<const UnitEntry> units_for(Dimension dim) {
  switch (dim) {
    case Dimension::Dimensionless: return kDimensionless;
    case Dimension::Length: return kLength;
    case Dimension::Mass: return kMass;
    case Dimension::Time: return kTime;
    case Dimension::Frequency: return kFrequency;
    case Dimension::Rate: return kRate;
    case Dimension::Temperature: return kTemperature;
    case Dimension::MagneticField: return kField;
    case Dimension::Gradient: return kGradient;
    case Dimension::Pressure: return kPressure;
    case Dimension::Density: return kDensity;
    case Dimension::Magnetization: return kMagnetization;
    case Dimension::Action: return kAction;
    case Dimension::MagneticMoment: return kMoment;
    case Dimension::HeatCapacity: return kHeatCapacity;
    case Dimension::Permeability: return kPermeability;
  }
  return kDimensionless;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view si_unit(Dimension dim) { return units_for(dim).front().suffix; }

std::string_view to_string(Dimension dim) {
  switch (dim) {
    case Dimension::Dimensionless: return "dimensionless";
    case Dimension::Length: return "length";
    case Dimension::Mass: return "mass";
    case Dimension::Time: return "time";
    case Dimension::Frequency: return "frequency";
    case Dimension::Rate: return "rate";
    case Dimension::Temperature: return "temperature";
    case Dimension::MagneticField: return "magnetic field";
    case Dimension::Gradient: return "field gradient";
    case Dimension::Pressure: return "pressure";
    case Dimension::Density: return "density";
    case Dimension::Magnetization: return "magnetization";
    case Dimension::Action: return "action";
    case Dimension::MagneticMoment: return "magnetic moment";
    case Dimension::HeatCapacity: return "heat capacity";
    case Dimension::Permeability: return "permeability";
  }
  return "unknown";
}

double parse_quantity(std::string_view text, Dimension dim) {
  const std::string_view s = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || !std::isfinite(value))
    throw ConfigError("malformed number in '" + std::string(text) + "'");
  const std::string_view unit = trim(std::string_view(ptr, static_cast<std::size_t>(s.data() + s.size() - ptr)));
  for (const auto& entry : units_for(dim))
    if (entry.suffix == unit) return value * entry.factor;
  std::string allowed;
  for (const auto& entry : units_for(dim)) {
    if (!allowed.empty()) allowed += ", ";
    allowed += entry.suffix.empty() ? std::string("<none>") : std::string(entry.suffix);
  }
  throw ConfigError("unit '" + std::string(unit) + "' in '" + std::string(text) + "' is not a " +
                    std::string(to_string(dim)) + " unit (allowed: " + allowed + ")");
}

std::string shortest_repr(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error("shortest_repr: formatting failed");
  return {buf.data(), ptr};
}

std::string format_quantity(double si_value, Dimension dim) {
  const auto unit = si_unit(dim);
  if (unit.empty()) return shortest_repr(si_value);
  return shortest_repr(si_value) + " " + std::string(unit);
}

}  // namespace cqed
