#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "cqed/errors.hpp"
#include "cqed/outcoupling.hpp"
#include "fixtures.hpp"

using namespace cqed;
using doctest::Approx;

namespace {

const PhysicalConstants kC{};
constexpr double kMu = 1.8766534756293e-29;

OutcouplerConfig probe_config(std::int64_t shots, double noise, std::uint64_t seed = 5) {
  const auto specs = fixtures::probe_device();
  auto d = derive_all(specs);
  const double delta = detuning_for_shell(d.mu_c, 1.0 / std::sqrt(3.0));
  d.detuning = delta;
  auto cfg = outcoupler_from_device(d, 1.0, shots, seed);
  cfg.tau = 0.2 / mean_gamma_r(cfg, d.mean_sq_amplitude).rate;
  cfg.technical_noise_rel = noise;
  return cfg;
}

}  // namespace

TEST_SUITE("outcoupling") {

TEST_CASE("rate vanishes at the condensate centre and edge") {
  const double w = 1e3;
  CHECK(gamma_r(w, kMu, 0.0).rate == 0.0);
  CHECK(gamma_r(w, kMu, -1e3).rate == 0.0);
  CHECK(gamma_r(w, kMu, kMu / kC.hbar).rate == 0.0);
  CHECK(gamma_r(w, kMu, 2.0 * kMu / kC.hbar).rate == 0.0);
  CHECK(gamma_r(w, kMu, 0.25 * kMu / kC.hbar).rate > 0.0);
}

TEST_CASE("rate is maximal at hbar*delta = mu_c/3") {
  const double w = 1e3;
  const int n = 10000;
  const double step = kMu / kC.hbar / n;
  int best = 0;
  double best_rate = -1.0;
  for (int i = 0; i <= n; ++i) {
    const double r = gamma_r(w, kMu, i * step).rate;
    if (r > best_rate) {
      best_rate = r;
      best = i;
    }
  }
  CHECK(std::abs(best * step - kMu / (3.0 * kC.hbar)) <= step);
  const double r = 1.0 / std::sqrt(3.0);
  CHECK(best_rate == Approx(15.0 * std::numbers::pi / 8.0 * kC.hbar * w * w / kMu * (r - r * r * r)).epsilon(1e-7));
}

TEST_CASE("rate is quadratic in the Rabi frequency") {
  const double delta = 0.2 * kMu / kC.hbar;
  const double base = gamma_r(1e3, kMu, delta).rate;
  for (double s : {0.5, 2.0, 7.0}) CHECK(gamma_r(s * 1e3, kMu, delta).rate / base == Approx(s * s).epsilon(1e-13));
}

TEST_CASE("weak-coupling flag") {
  CHECK(gamma_r(0.5 * kMu / kC.hbar, kMu, 1.0).weak_coupling);
  CHECK_FALSE(gamma_r(2.0 * kMu / kC.hbar, kMu, 1.0).weak_coupling);
}

TEST_CASE("shell geometry") {
  CHECK(shell_radius(kMu, detuning_for_shell(kMu, 0.3)) == Approx(0.3).epsilon(1e-14));
  const auto shell = resonance_shell(0.5, {1.0, 2.0, 4.0});
  CHECK(shell[2] == 2.0);
  CHECK_THROWS_AS(detuning_for_shell(kMu, 1.5), DomainError);
  CHECK_THROWS_AS(shell_radius(0.0, 1.0), DomainError);
}

TEST_CASE("thermal amplitudes follow the equipartition mean") {
  Rng rng = substream(42, 0, 0);
  const double m = 3e-16, w = fixtures::mhz(1.12), T = 300.0;
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = sample_thermal_amplitude(rng, m, w, T).amplitude;
    sum += a * a;
  }
  const double expected = 2.0 * kC.k_B * T / (m * w * w);
  CHECK(expected == Approx(5.57593235310148e-19).epsilon(1e-11));
  // a² is exponential: relative standard error 1/√n.
  CHECK(std::abs(sum / n / expected - 1.0) < 4.0 / std::sqrt(n));
  CHECK_THROWS_AS(sample_thermal_amplitude(rng, m, w, 0.0), DomainError);
}

TEST_CASE("analytic survival density") {
  for (double lam : {0.2, 1.0, 3.0}) {
    const SurvivalDensity p(lam);
    CHECK(p.mean() == Approx(1.0 / (1.0 + lam)).epsilon(1e-14));
    CHECK(p.cdf(1.0) == Approx(1.0));
    CHECK(p.cdf(0.0) == 0.0);
    // Integral of the density reproduces the CDF (f = s^3/2 removes the edge singularity).
    const int n = 20000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double s = (i + 0.5) / n;
      acc += p.pdf(0.5 * s * s * s) * 1.5 * s * s / n;
    }
    CHECK(acc == Approx(p.cdf(0.5)).epsilon(1e-6));
  }
  const SurvivalDensity shifted(0.2, 0.9);
  CHECK(shifted.mean() == Approx(0.9 / 1.2).epsilon(1e-14));
  CHECK(shifted.cdf(0.9) == Approx(1.0));
  CHECK(shifted.pdf(0.95) == 0.0);
}

TEST_CASE("noise-free histogram matches the analytic law") {
  const auto cfg = probe_config(10000, 0.0);
  const auto d = derive_all(fixtures::probe_device());
  const auto res = simulate_histogram(cfg, d, 300.0);
  CHECK(res.mean_lambda == Approx(0.2).epsilon(1e-12));
  CHECK(res.mean_gamma_r == Approx(2100.0065166352).epsilon(1e-9));
  const SurvivalDensity p(res.mean_lambda, res.background_survival);
  CHECK(ks_distance(res.fractions(), [&](double f) { return p.cdf(f); }) < 0.02);
  CHECK(res.histogram.total() == 10000);
  CHECK(res.strong_drive_shots == 0);
  for (double f : res.control_fractions) CHECK(f == res.background_survival);
}

TEST_CASE("technical noise broadens the control distribution") {
  const auto cfg = probe_config(4000, 0.05);
  const auto d = derive_all(fixtures::probe_device());
  const auto res = simulate_histogram(cfg, d, 300.0);
  double mean = 0.0, var = 0.0;
  for (double f : res.control_fractions) mean += f;
  mean /= res.control_fractions.size();
  for (double f : res.control_fractions) var += (f - mean) * (f - mean);
  var /= res.control_fractions.size() - 1;
  CHECK(std::sqrt(var) / mean == Approx(0.05).epsilon(0.1));
  for (double f : res.fractions()) CHECK(f >= 0.0);
}

TEST_CASE("histogram is deterministic and independent of the thread count") {
  const auto cfg = probe_config(3000, 0.05, 99);
  const auto d = derive_all(fixtures::probe_device());
  const auto a = simulate_histogram(cfg, d, 300.0, 1);
  const auto b = simulate_histogram(cfg, d, 300.0, 3);
  REQUIRE(a.shots.size() == b.shots.size());
  for (std::size_t i = 0; i < a.shots.size(); ++i) {
    CHECK(a.shots[i].amplitude == b.shots[i].amplitude);
    CHECK(a.shots[i].fraction == b.shots[i].fraction);
  }
  CHECK(a.histogram.counts == b.histogram.counts);
  auto other = cfg;
  other.seed = 100;
  CHECK(simulate_histogram(other, d, 300.0).shots[0].amplitude != a.shots[0].amplitude);
}

TEST_CASE("regime diagnostics") {
  const auto cfg = probe_config(100, 0.0);
  const auto d = derive_all(fixtures::probe_device());
  const auto res = simulate_histogram(cfg, d, 300.0);
  CHECK(res.kappa_tau == Approx(0.06702043530147).epsilon(1e-9));
  CHECK(std::round(res.kappa_tau * 100.0) / 100.0 == 0.07);
  CHECK(res.warnings.empty());

  auto slow = cfg;
  slow.tau = 10.0 * cfg.tau;
  const auto warned = simulate_histogram(slow, d, 300.0);
  CHECK(warned.kappa_tau > kKappaTauWarning);
  CHECK_FALSE(warned.warnings.empty());
}

TEST_CASE("histogram binning clamps out-of-range values") {
  Histogram h(Binning{10, 0.0, 1.0});
  h.add(-0.5);
  h.add(0.05);
  h.add(0.999);
  h.add(3.0);
  CHECK(h.counts.front() == 2);
  CHECK(h.counts.back() == 2);
  CHECK(h.total() == 4);
  CHECK(h.bin_hi(9) == 1.0);
  CHECK_THROWS_AS(Histogram(Binning{0, 0.0, 1.0}), DomainError);
}

TEST_CASE("invalid outcoupler configs are rejected") {
  auto cfg = probe_config(10, 0.0);
  cfg.shots = 0;
  CHECK_THROWS(cfg.validate());
  cfg = probe_config(10, 0.0);
  cfg.tau = -1.0;
  CHECK_THROWS(cfg.validate());
}

}
