#include <doctest.h>

#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "cqed/errors.hpp"
#include "cqed/evolution.hpp"
#include "cqed/tcdyn.hpp"

using namespace cqed;
using doctest::Approx;

namespace {

Operators ops_for(std::int64_t atoms, std::int64_t n_max) {
  HilbertConfig hc;
  hc.atom_count = atoms;
  hc.fock_cutoff = n_max;
  return build_operators(hc);
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::MatrixXcd dense(const SparseOp& op) { return Eigen::MatrixXcd(op); }

// Column-stacked Liouvillian built by applying the generator to basis matrices.
Eigen::MatrixXcd liouvillian(const ModelParams& p, const Operators& ops) {
  const auto d = ops.config.dimension();
  Eigen::MatrixXcd L(d * d, d * d);
  for (Eigen::Index k = 0; k < d * d; ++k) {
    DensityMatrix e = DensityMatrix::Zero(d, d);
    e(k % d, k / d) = 1.0;
    // The generator assumes Hermitian input; split e into Hermitian parts.
    const DensityMatrix h1 = 0.5 * (e + e.adjoint());
    const DensityMatrix h2 = Complex(0.0, -0.5) * (e - e.adjoint());
    const DensityMatrix out = lindblad_rhs(h1, p, ops) + Complex(0.0, 1.0) * lindblad_rhs(h2, p, ops);
    L.col(k) = Eigen::Map<const Eigen::VectorXcd>(out.data(), d * d);
  }
  return L;
}

}  // namespace

TEST_SUITE("tcdyn") {

TEST_CASE("ladder algebra") {
  const auto ops = ops_for(4, 6);
  const auto a = dense(ops.a), ad = dense(ops.a_dag);
  const auto sp = dense(ops.s_plus), sm = dense(ops.s_minus), sz = dense(ops.s_z);
  CHECK(max_abs(ad - a.adjoint()) == 0.0);
  CHECK(max_abs(sm - sp.adjoint()) == 0.0);
  CHECK(max_abs(sp * sm - sm * sp - 2.0 * sz) < 1e-12);
  CHECK(max_abs(sz * sp - sp * sz - sp) < 1e-12);

  // [a, a†] = 1 except on the truncation edge.
  const Eigen::MatrixXcd comm = a * ad - ad * a;
  const auto& hc = ops.config;
  for (std::int64_t j = 0; j < hc.spin_levels(); ++j) {
    for (std::int64_t n = 0; n < hc.fock_cutoff; ++n) {
      const auto i = hc.index(j, n);
      CHECK(comm(i, i).real() == Approx(1.0));
    }
  }
  // S+ |j⟩ = √((j+1)(N−j)) |j+1⟩.
  CHECK(sp(hc.index(1, 0), hc.index(0, 0)).real() == Approx(std::sqrt(1.0 * 4.0)));
  CHECK(sp(hc.index(3, 2), hc.index(2, 2)).real() == Approx(std::sqrt(3.0 * 2.0)));
}

TEST_CASE("Hamiltonian is Hermitian and conserves total excitation") {
  const auto ops = ops_for(3, 8);
  ModelParams p;
  p.g = 0.7;
  p.delta = 0.3;
  const auto H = dense(hamiltonian(p, ops));
  CHECK(max_abs(H - H.adjoint()) < 1e-14);
  const Eigen::MatrixXcd n_exc = dense(ops.a_dag) * dense(ops.a) + dense(ops.s_z);
  CHECK(max_abs(H * n_exc - n_exc * H) < 1e-12);
}

TEST_CASE("single-excitation splitting is 2 g sqrt(N)") {
  for (std::int64_t atoms : {1, 2, 4, 9}) {
    CAPTURE(atoms);
    const auto ops = ops_for(atoms, 2);
    ModelParams p;
    p.g = 1.3;
    const auto H = dense(hamiltonian(p, ops));
    const auto& hc = ops.config;
    // Sector spanned by |S,−S⟩|1⟩ and |S,−S+1⟩|0⟩.
    const Eigen::Index i0 = hc.index(0, 1), i1 = hc.index(1, 0);
    Eigen::Matrix2cd block;
    block << H(i0, i0), H(i0, i1), H(i1, i0), H(i1, i1);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(block);
    const double split = es.eigenvalues()(1) - es.eigenvalues()(0);
    CHECK(split == Approx(2.0 * p.g * std::sqrt(static_cast<double>(atoms))).epsilon(1e-12));
  }
}

TEST_CASE("generator preserves trace and Hermiticity") {
  const auto ops = ops_for(2, 5);
  ModelParams p;
  p.g = 1.0;
  p.delta = 0.2;
  p.kappa = 0.3;
  p.n_th = 0.8;
  p.gamma_atom = 0.4;
  const auto d = ops.config.dimension();
  DensityMatrix rho = DensityMatrix::Random(d, d);
  rho = rho * rho.adjoint();
  rho /= rho.trace();
  const auto drho = lindblad_rhs(rho, p, ops);
  CHECK(std::abs(drho.trace()) < 1e-13);
  CHECK(max_abs(drho - drho.adjoint()) < 1e-13);
}

TEST_CASE("collapse channels and rates") {
  const auto ops = ops_for(2, 4);
  ModelParams p;
  p.kappa = 0.5;
  p.n_th = 0.0;
  CHECK(collapse_operators(p, ops).size() == 1);
  p.n_th = 1.5;
  p.gamma_atom = 2.0;
  const auto cs = collapse_operators(p, ops);
  REQUIRE(cs.size() == 3);
  // Resonator damping carries √(2κ(n_th+1)).
  const auto& hc = ops.config;
  CHECK(std::abs(Eigen::MatrixXcd(cs[0].op)(hc.index(0, 0), hc.index(0, 1))) ==
        Approx(std::sqrt(2.0 * p.kappa * (p.n_th + 1.0))));
  // One excited atom (N = 1) decays at rate γ.
  const auto single = ops_for(1, 1);
  ModelParams q;
  q.gamma_atom = 2.0;
  const auto c1 = collapse_operators(q, single);
  REQUIRE(c1.size() == 1);
  const Eigen::MatrixXcd LdL = Eigen::MatrixXcd(c1[0].op).adjoint() * Eigen::MatrixXcd(c1[0].op);
  CHECK(LdL(single.config.index(1, 0), single.config.index(1, 0)).real() == Approx(2.0));
}

TEST_CASE("master equation matches the Liouvillian exponential") {
  const auto ops = ops_for(1, 4);
  ModelParams p;
  p.g = 1.0;
  p.delta = 0.4;
  p.kappa = 0.15;
  p.n_th = 0.3;
  p.gamma_atom = 0.2;
  const auto d = ops.config.dimension();
  const DensityMatrix rho0 = product_state(dicke_state(1, 1), thermal_state(0.3, 4, 0.01));
  const std::vector<double> grid{0.0, 0.7, 2.5};
  MasterOptions opt;
  opt.ode.rtol = 1e-11;
  opt.ode.atol = 1e-13;
  const auto res = evolve_master(rho0, p, ops, grid, opt);
  const Eigen::MatrixXcd L = liouvillian(p, ops);
  const Eigen::VectorXcd v0 = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), d * d);
  const Eigen::VectorXcd v = (L * 2.5).exp() * v0;
  const DensityMatrix exact = Eigen::Map<const DensityMatrix>(v.data(), d, d);
  CHECK(max_abs(res.final_state - exact) < 1e-8);
  CHECK(res.record.mean_n.back() == Approx(observe(exact, ops).mean_n).epsilon(1e-8));
}

TEST_CASE("thermal state") {
  const auto p = thermal_populations(2.0, 60);
  CHECK(p.sum() == Approx(1.0));
  for (int n = 0; n < 30; ++n) CHECK(p[n + 1] / p[n] == Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(thermal_state(2.0, 5), CutoffError);
  CHECK(thermal_populations(0.0, 3)[0] == 1.0);
}

TEST_CASE("default Fock cutoff") {
  CHECK(default_fock_cutoff(0.0, 1) >= 1);
  const auto n = default_fock_cutoff(2.0, 8);
  CHECK(n == 42);
  CHECK(std::pow(2.0 / 3.0, static_cast<double>(n - 8 + 1)) < 1e-6);
  CHECK(default_fock_cutoff(5.0, 0) > default_fock_cutoff(2.0, 0));
}

TEST_CASE("resource limit") {
  HilbertConfig hc;
  hc.atom_count = 10000;
  hc.fock_cutoff = 1000;
  CHECK_THROWS_AS(build_operators(hc), ResourceError);
}

TEST_CASE("observables") {
  const auto ops = ops_for(2, 3);
  const auto psi = product_state(dicke_state(2, 2), Eigen::VectorXcd(Eigen::VectorXcd::Unit(4, 1)));
  const auto o = observe(psi, ops);
  CHECK(o.mean_n == Approx(1.0));
  CHECK(o.mean_sz == Approx(1.0));
  CHECK(o.total_excitation == Approx(3.0));
  CHECK(o.leak == 0.0);
  const auto rho = product_state(dicke_state(2, 0), thermal_state(0.0, 3));
  CHECK(observe(rho, ops).mean_sz == Approx(-1.0));
  CHECK(observe(Eigen::VectorXcd(2.0 * psi), ops).mean_n == Approx(1.0));
}

TEST_CASE("model warnings") {
  ModelParams p;
  p.g = 1.0;
  p.omega_r = 10.0;
  HilbertConfig hc;
  hc.atom_count = 4;
  const auto w = model_warnings(p, hc);
  CHECK(w.size() == 1);  // g√N/ω_r = 0.2 > threshold
  p.omega_r = 1e6;
  p.gamma_atom = 1.0;
  CHECK(model_warnings(p, hc).size() == 1);  // loss proxy
}

}
