#pragma once

#include <string>
#include <string_view>

namespace cqed {

/// Physical dimension a configuration value is parsed against. Frequencies
/// are stored as angular values (Hz inputs are multiplied by 2π); rates in
/// 1/s accept Hz with the same 2π convention.
enum class Dimension {
  Dimensionless,
  Length,
  Mass,
  Time,
  Frequency,
  Rate,
  Temperature,
  MagneticField,
  Gradient,
  Pressure,
  Density,
  Magnetization,
  Action,
  MagneticMoment,
  HeatCapacity,
  Permeability,
};

/// Canonical SI unit string used when echoing values.
std::string_view si_unit(Dimension dim);
std::string_view to_string(Dimension dim);

/// Parses "<number> <unit>" against the unit whitelist of `dim` and
/// returns the SI (angular) value. Throws ConfigError on malformed numbers,
/// unknown units, or a unit of the wrong dimension.
double parse_quantity(std::string_view text, Dimension dim);

/// Shortest decimal that round-trips to the same double.
std::string shortest_repr(double value);

/// "<shortest SI value> <SI unit>"; parse_quantity inverts it exactly.
std::string format_quantity(double si_value, Dimension dim);

}  // namespace cqed
