#include <doctest.h>

#include <cmath>

#include "cqed/errors.hpp"
#include "cqed/formulas.hpp"
#include "cqed/params.hpp"
#include "fixtures.hpp"

using namespace cqed;
using namespace fixtures;
using doctest::Approx;

TEST_SUITE("params") {

TEST_CASE("beam formula against the independent oracle") {
  const auto beam = silicon_beam(7.0 * um, 0.2 * um, 0.1 * um);
  CHECK(angular_to_hz(cantilever_frequency(beam)) == Approx(2780925.1157699).epsilon(1e-12));
  CHECK(effective_mass(silicon_beam(8.0 * um, 0.3 * um, 0.05 * um)) ==
        Approx(6.7104e-17).epsilon(1e-12));
  CHECK(effective_mass(beam) == Approx(7.8288e-17).epsilon(1e-12));
}

TEST_CASE("frequency override is returned verbatim") {
  auto beam = silicon_beam(7.0 * um, 0.2 * um, 0.1 * um);
  beam.frequency_override = mhz(1.12);
  CHECK(cantilever_frequency(beam) == mhz(1.12));
}

TEST_CASE("tip mass loads the beam as 1/sqrt(1+c)") {
  const auto bare = silicon_beam(7.0 * um, 0.2 * um, 0.1 * um);
  auto loaded = bare;
  loaded.tip_mass = 3.0 * effective_mass(bare);  // c = 3
  CHECK(cantilever_frequency(bare) / cantilever_frequency(loaded) == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("paddle mass reproduces m_eff = 3e-16 kg") {
  const auto beam = silicon_beam(7.0 * um, 0.2 * um, 0.1 * um, 5e3, 2.2e-16);
  CHECK(effective_mass(beam) == Approx(2.98288e-16).epsilon(1e-12));
  CHECK(std::abs(effective_mass(beam) / 3e-16 - 1.0) < 0.03);
}

TEST_CASE("dipole gradient") {
  const auto bar = cobalt_bar(250 * nm, 50 * nm, 80 * nm);
  CHECK(dipole_gradient(bar, 250 * nm) == Approx(107520.00005853).epsilon(1e-11));
  CHECK(dipole_gradient(bar, 500 * nm) * 16.0 == Approx(dipole_gradient(bar, 250 * nm)).epsilon(1e-14));
  auto capped = bar;
  capped.gradient_cap = 1e3;
  CHECK(dipole_gradient(capped, 250 * nm) == 1e3);
  CHECK_THROWS_AS(dipole_gradient(bar, 0.0), DomainError);
  CHECK_THROWS_AS(dipole_gradient(bar, -1e-6), DomainError);
}

TEST_CASE("Thomas-Fermi chemical potential") {
  CondensateSpec cond;
  cond.atom_number = 1000;
  const auto t = trap(8.9, 9.7, 1.2, 1.5 * um);
  const auto mu = chemical_potential(cond, t);
  CHECK(mu.mu == Approx(1.8766534756293e-29).epsilon(1e-11));
  CHECK(mu.mu / (kTwoPi * PhysicalConstants{}.hbar) == Approx(28322.27).epsilon(1e-6));

  // R_i = sqrt(2 mu / m w_i^2), so the axial radius is the longest.
  CHECK(mu.tf_radii[2] > mu.tf_radii[0]);
  CHECK(mu.tf_radii[0] * t.omega_x == Approx(mu.tf_radii[2] * t.omega_z).epsilon(1e-12));

  CondensateSpec big = cond;
  big.atom_number = 32000;
  CHECK(chemical_potential(big, t).mu / mu.mu == Approx(4.0).epsilon(1e-12));

  PhysicalConstants weak;
  double last = mu.mu;
  for (double a : {1e-9, 1e-10, 1e-12}) {
    weak.scattering_length = a;
    const double m = chemical_potential(cond, t, weak).mu;
    CHECK(m < last);
    last = m;
  }
}

TEST_CASE("three-body loss") {
  const auto t = trap(2.9, 2.9, 2.9, 2.0 * um);
  CHECK(three_body_rate(t, 10000) == Approx(58.58811965334).epsilon(1e-10));
  CHECK(three_body_rate(t, 80000) / three_body_rate(t, 10000) ==
        Approx(std::pow(8.0, 0.8)).epsilon(1e-12));

  auto with_bg = t;
  with_bg.background_loss = 2.0;
  CHECK(three_body_rate(with_bg, 1) == Approx(2.0 + three_body_loss(t.omega_bar(), 1.0)));
  CHECK(loss_rates(with_bg, 1).three_body == 0.0);
  CHECK(loss_rates(with_bg, 1).total() == 2.0);
  CHECK(loss_rates(with_bg, 2).three_body > 0.0);
}

TEST_CASE("Larmor frequency") {
  CHECK(angular_to_hz(larmor_frequency(1e-4)) == Approx(699812.2472).epsilon(1e-9));
  CHECK(larmor_frequency(2e-4) == Approx(2.0 * larmor_frequency(1e-4)).epsilon(1e-15));
  CHECK(angular_to_hz(larmor_frequency(1.600429264e-4)) == Approx(1.12e6).epsilon(1e-9));
}

TEST_CASE("thermal occupancy") {
  CHECK(thermal_occupancy(mhz(1.1), 0.05) == Approx(946.619139626784).epsilon(1e-10));
  CHECK(std::abs(thermal_occupancy(mhz(1.1), 0.05) / 980.0 - 1.0) < 0.05);
  CHECK(thermal_occupancy(mhz(1.1), 0.0) == 0.0);
  const PhysicalConstants c;
  const double w = mhz(1.0);
  const double T = 100.0 * c.hbar * w / c.k_B;
  CHECK(thermal_occupancy(w, T) == Approx(c.k_B * T / (c.hbar * w)).epsilon(0.01));
}

TEST_CASE("zero-point amplitude") {
  CHECK(zero_point_amplitude(3e-16, mhz(1.12)) == Approx(1.580387222371e-13).epsilon(1e-11));
  CHECK(zero_point_amplitude(7.6e-17, mhz(2.8)) == Approx(1.985854094113e-13).epsilon(1e-11));
  CHECK(zero_point_amplitude(4.0 * 3e-16, mhz(1.12)) ==
        Approx(0.5 * zero_point_amplitude(3e-16, mhz(1.12))).epsilon(1e-14));
}

TEST_CASE("coupling constant") {
  const PhysicalConstants c;
  CHECK(coupling_g(0.0, 1e-13) == 0.0);
  const double a = 1e-13;
  const double G = std::sqrt(8.0) * c.hbar / (c.mu_B * a);
  CHECK(coupling_g(G, a) == Approx(1.0).epsilon(1e-14));
  CHECK(coupling_g(2.0 * G, a) == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("damping rate") {
  CHECK(damping_rate(mhz(2.8), 1e5) == Approx(hz_to_angular(14.0)).epsilon(1e-15));
  CHECK(angular_to_hz(damping_rate(mhz(1.1), 1e5)) == Approx(5.5).epsilon(1e-14));
  CHECK(damping_rate(mhz(1.1), 1e12) < 1e-3);
}

TEST_CASE("cooperativity") {
  const double g = hz_to_angular(62), k = hz_to_angular(14), y = hz_to_angular(0.3);
  const auto c = cooperativity(g, k, y);
  REQUIRE(c.value);
  CHECK(*c.value == Approx(457.619047619).epsilon(1e-10));
  CHECK(cooperativity(0.0, k, y).value == 0.0);
  CHECK(cooperativity(g, 0.0, y).unbounded());
  CHECK(cooperativity(g, k, 0.0).unbounded());
  CHECK(cooperativity(g, k, 0.0).collective(100).unbounded());
  CHECK(*c.collective(10).value == Approx(10.0 * *c.value));
}

TEST_CASE("derive_all: single-atom operating point") {
  const auto d = derive_all(single_atom_device());
  CHECK(d.m_eff == Approx(7.6004e-17).epsilon(1e-12));
  CHECK(d.a_qm == Approx(1.98580183685744e-13).epsilon(1e-11));
  CHECK(angular_to_hz(d.g) == Approx(105.655401540308).epsilon(1e-10));
  CHECK(d.g / hz_to_angular(62.0) < 2.0);
  CHECK(d.g / hz_to_angular(62.0) > 0.5);
  CHECK(d.kappa == Approx(hz_to_angular(14.0)).epsilon(1e-14));
  CHECK(d.gamma == Approx(hz_to_angular(0.3)).epsilon(1e-14));
  CHECK(d.gamma_three_body == 0.0);
  CHECK(d.loss_route == LossRoute::BackgroundOnly);
  CHECK(d.frequency_route == FrequencyRoute::Override);
  CHECK(d.gradient_route == GradientRoute::Dipole);
}

TEST_CASE("derive_all: gradient override passes through exactly") {
  auto specs = single_atom_device();
  const PhysicalConstants c;
  const auto base = derive_all(specs);
  // Gradient that reproduces g = 2π·62 Hz with this m_eff and ω_r.
  const double G = hz_to_angular(62.0) * std::sqrt(8.0) * c.hbar / (c.mu_B * base.a_qm);
  specs.magnet.gradient_override = G;
  const auto d = derive_all(specs);
  CHECK(d.gradient == G);
  CHECK(d.gradient_route == GradientRoute::Override);
  CHECK(angular_to_hz(d.g) == Approx(62.0).epsilon(1e-13));
}

TEST_CASE("derive_all: thermal probe regression") {
  const auto d = derive_all(probe_device());
  CHECK(d.m_eff == Approx(2.98288e-16).epsilon(1e-12));
  CHECK(d.gradient == 551.4);
  CHECK(d.dipole_gradient == Approx(1725.629630569).epsilon(1e-10));
  CHECK(d.gradient_route == GradientRoute::Capped);
  CHECK(d.mu_c == Approx(1.8766534756293e-29).epsilon(1e-11));
  CHECK(d.mean_sq_amplitude == Approx(5.607934968656e-19).epsilon(1e-10));
  CHECK(angular_to_hz(d.kappa) == Approx(112.0).epsilon(1e-13));
}

TEST_CASE("derive_all: collective operating point") {
  const auto d = derive_all(collective_device());
  CHECK(d.gamma == Approx(58.58811965334).epsilon(1e-10));
  CHECK(d.n_th == Approx(946.619139626784).epsilon(1e-10));
  CHECK(angular_to_hz(d.kappa) == Approx(5.5).epsilon(1e-13));
  CHECK(d.gradient == Approx(378.000000205774).epsilon(1e-11));
  REQUIRE(d.collective_cooperativity.value);
}

TEST_CASE("derive_all is a pure function") {
  const auto a = derive_all(collective_device());
  const auto b = derive_all(collective_device());
  CHECK(a.g == b.g);
  CHECK(a.gamma == b.gamma);
  CHECK(a.mu_c == b.mu_c);
  CHECK(a.n_th == b.n_th);
}

TEST_CASE("derive_all reports the failing field") {
  auto specs = collective_device();
  specs.cantilever.quality_factor = 0.5;
  CHECK_THROWS_WITH_AS(derive_all(specs), doctest::Contains("quality_factor"), SpecError);
  specs = collective_device();
  specs.trap.distance = -1.0;
  CHECK_THROWS_AS(derive_all(specs), SpecError);
  specs = collective_device();
  specs.condensate.atom_number = 0;
  CHECK_THROWS_AS(derive_all(specs), SpecError);
}

TEST_CASE("unit audit: scaling laws forced by dimensions") {
  const auto base = collective_device();
  const auto d0 = derive_all(base);

  auto far = base;
  far.trap.distance *= 2.0;
  const auto d1 = derive_all(far);
  CHECK(d0.gradient / d1.gradient == Approx(16.0).epsilon(1e-12));
  CHECK(d0.g / d1.g == Approx(16.0).epsilon(1e-12));

  // γ_tbl ∝ ω̄^{12/5} and μ_c ∝ ω̄^{6/5} under a uniform trap scaling.
  auto stiff = base;
  stiff.trap.omega_x *= 2.0;
  stiff.trap.omega_y *= 2.0;
  stiff.trap.omega_z *= 2.0;
  const auto d2 = derive_all(stiff);
  CHECK(d2.gamma_three_body / d0.gamma_three_body == Approx(std::pow(2.0, 2.4)).epsilon(1e-12));
  CHECK(d2.mu_c / d0.mu_c == Approx(std::pow(2.0, 1.2)).epsilon(1e-12));

  // κ ∝ ω_r, a_qm ∝ ω_r^{-1/2}, Larmor ∝ B.
  auto fast = base;
  *fast.cantilever.frequency_override *= 4.0;
  const auto d3 = derive_all(fast);
  CHECK(d3.kappa / d0.kappa == Approx(4.0).epsilon(1e-14));
  CHECK(d3.a_qm / d0.a_qm == Approx(0.5).epsilon(1e-14));
  auto strong = base;
  strong.trap.field *= 3.0;
  CHECK(derive_all(strong).omega_L / d0.omega_L == Approx(3.0).epsilon(1e-14));
}

TEST_CASE("angular-frequency convention round trip") {
  for (double f : {0.3, 14.0, 2.8e6, 1.12e6, 250e3}) {
    CHECK(hz_to_angular(f) == Approx(kTwoPi * f).epsilon(1e-16));
    CHECK(angular_to_hz(hz_to_angular(f)) == Approx(f).epsilon(1e-15));
  }
}

TEST_CASE("formulas are templated on the scalar") {
  const float f = beam_frequency<float>(7e-6f, 0.2e-6f, 0.1e-6f, 169e9f, 2330.0f, 0.0f);
  const double d = beam_frequency<double>(7e-6, 0.2e-6, 0.1e-6, 169e9, 2330.0, 0.0);
  CHECK(static_cast<double>(f) == Approx(d).epsilon(1e-5));
  const long double q = amplitude_damping<long double>(1e6L, 1e5L);
  CHECK(static_cast<double>(q) == Approx(5.0));
}

}
