#pragma once

#include "cqed/constants.hpp"
#include "cqed/params.hpp"

namespace fixtures {

constexpr double um = 1e-6;
constexpr double nm = 1e-9;

inline double khz(double f) { return cqed::hz_to_angular(f * 1e3); }
inline double mhz(double f) { return cqed::hz_to_angular(f * 1e6); }

inline cqed::CantileverSpec silicon_beam(double l, double w, double t, double q = 1e5,
                                         double tip = 0.0) {
  cqed::CantileverSpec c;
  c.length = l;
  c.width = w;
  c.thickness = t;
  c.youngs_modulus = cqed::materials::kSiliconYoungsModulus;
  c.density = cqed::materials::kSiliconDensity;
  c.quality_factor = q;
  c.tip_mass = tip;
  return c;
}

inline cqed::MagnetSpec cobalt_bar(double l, double w, double t) {
  cqed::MagnetSpec m;
  m.length = l;
  m.width = w;
  m.thickness = t;
  m.saturation_magnetization = cqed::materials::kCobaltSaturation;
  return m;
}

inline cqed::TrapSpec trap(double fx_khz, double fy_khz, double fz_khz, double y0,
                           double field = 1.6e-4) {
  cqed::TrapSpec t;
  t.omega_x = khz(fx_khz);
  t.omega_y = khz(fy_khz);
  t.omega_z = khz(fz_khz);
  t.distance = y0;
  t.field = field;
  return t;
}

/// Thermal-probe device at room temperature.
inline cqed::DeviceSpecs probe_device() {
  cqed::DeviceSpecs d;
  d.cantilever = silicon_beam(7.0 * um, 0.2 * um, 0.1 * um, 5e3, 2.2e-16);
  d.cantilever.frequency_override = mhz(1.12);
  d.magnet = cobalt_bar(1.3 * um, 0.2 * um, 0.08 * um);
  d.magnet.gradient_cap = 551.4;
  d.trap = trap(8.9, 9.7, 1.2, 1.5 * um);
  d.condensate.atom_number = 1000;
  d.temperature = 300.0;
  return d;
}

/// Single-atom strong-coupling device.
inline cqed::DeviceSpecs single_atom_device() {
  cqed::DeviceSpecs d;
  d.cantilever = silicon_beam(8.0 * um, 0.3 * um, 0.05 * um, 1e5, 8.9e-18);
  d.cantilever.frequency_override = mhz(2.8);
  d.magnet = cobalt_bar(250 * nm, 50 * nm, 80 * nm);
  d.trap = trap(250, 250, 250, 250 * nm, 4.0011e-4);
  d.trap.background_loss = cqed::hz_to_angular(0.3);
  d.condensate.atom_number = 1;
  d.temperature = 5e-5;
  return d;
}

/// Collective strong-coupling device.
inline cqed::DeviceSpecs collective_device() {
  cqed::DeviceSpecs d;
  d.cantilever = silicon_beam(8.0 * um, 0.3 * um, 0.05 * um, 1e5, 1.2816e-16);
  d.cantilever.frequency_override = mhz(1.1);
  d.magnet = cobalt_bar(2.0 * um, 0.06 * um, 0.12 * um);
  d.trap = trap(2.9, 2.9, 2.9, 2.0 * um, 1.5719e-4);
  d.condensate.atom_number = 10000;
  d.temperature = 0.05;
  return d;
}

}  // namespace fixtures
