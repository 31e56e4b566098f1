#include "cqed/tcdyn.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cqed/errors.hpp"

namespace cqed {
namespace {

using Triplet = Eigen::Triplet<Complex>;

SparseOp from_triplets(Eigen::Index dim, const std::vector<Triplet>& entries) {
  SparseOp m(dim, dim);
  m.setFromTriplets(entries.begin(), entries.end());
  m.makeCompressed();
  return m;
}

SparseOp number_operator(const Operators& ops) {
  const auto dim = ops.phonon_number.size();
  std::vector<Triplet> diag;
  diag.reserve(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i)
    if (ops.phonon_number[i] != 0.0) diag.emplace_back(i, i, ops.phonon_number[i]);
  return from_triplets(dim, diag);
}

}  // namespace

void HilbertConfig::validate() const {
  if (atom_count < 1) throw ConfigError("hilbert: atom_count must be >= 1");
  if (fock_cutoff < 1) throw ConfigError("hilbert: fock_cutoff must be >= 1");
  if (!(truncation_tolerance > 0.0 && truncation_tolerance < 1.0))
    throw ConfigError("hilbert: truncation_tolerance must lie in (0, 1)");
  if (max_dimension < 1) throw ConfigError("hilbert: max_dimension must be >= 1");
  if (spin_levels() > max_dimension / fock_levels()) {
    std::ostringstream os;
    os << "hilbert: dimension (" << spin_levels() << " x " << fock_levels()
       << ") exceeds max_dimension " << max_dimension;
    throw ResourceError(os.str());
  }
}

std::int64_t default_fock_cutoff(double n_th, std::int64_t atom_count, double tolerance) {
  if (!(n_th >= 0.0)) throw DomainError("default_fock_cutoff: n_th must be >= 0");
  auto cutoff = static_cast<std::int64_t>(std::ceil(n_th + 8.0 * std::sqrt(n_th + 1.0) + 8.0));
  if (n_th > 0.0) {
    // Smallest n_max with (n_th / (1 + n_th))^(n_max + 1) < tolerance.
    const double q = n_th / (1.0 + n_th);
    const auto tail = static_cast<std::int64_t>(std::floor(std::log(tolerance) / std::log(q)));
    cutoff = std::max(cutoff, tail);
  }
  return cutoff + atom_count;
}

Operators build_operators(const HilbertConfig& config) {
  config.validate();
  Operators ops;
  ops.config = config;
  const auto dim = static_cast<Eigen::Index>(config.dimension());
  const std::int64_t n_atoms = config.atom_count;
  const std::int64_t n_max = config.fock_cutoff;

  std::vector<Triplet> a, sp, sz;
  a.reserve(static_cast<std::size_t>(dim));
  sp.reserve(static_cast<std::size_t>(dim));
  sz.reserve(static_cast<std::size_t>(dim));
  ops.phonon_number.resize(dim);
  ops.sz.resize(dim);
  ops.top_fock.resize(dim);

  for (std::int64_t j = 0; j <= n_atoms; ++j) {
    const double m = static_cast<double>(j) - config.spin();
    // ⟨S, m+1| S⁺ |S, m⟩ = √(S(S+1) − m(m+1)) = √((j+1)(N−j)).
    const double sp_elem = std::sqrt(static_cast<double>((j + 1) * (n_atoms - j)));
    for (std::int64_t n = 0; n <= n_max; ++n) {
      const auto i = config.index(j, n);
      if (n > 0) a.emplace_back(config.index(j, n - 1), i, std::sqrt(static_cast<double>(n)));
      if (j < n_atoms) sp.emplace_back(config.index(j + 1, n), i, sp_elem);
      if (m != 0.0) sz.emplace_back(i, i, m);
      ops.phonon_number[i] = static_cast<double>(n);
      ops.sz[i] = m;
      ops.top_fock[i] = n == n_max ? 1.0 : 0.0;
    }
  }
  ops.a = from_triplets(dim, a);
  ops.a_dag = ops.a.adjoint();
  ops.s_plus = from_triplets(dim, sp);
  ops.s_minus = ops.s_plus.adjoint();
  ops.s_z = from_triplets(dim, sz);
  return ops;
}

double ModelParams::detuning_at(double t) const {
  double d = delta;
  for (const auto& step : delta_schedule) {
    if (t >= step.start) d = step.detuning;
    else break;
  }
  return d;
}

void ModelParams::validate() const {
  if (!std::isfinite(g) || !std::isfinite(delta)) throw ConfigError("model: g and delta must be finite");
  if (!(kappa >= 0.0)) throw ConfigError("model: kappa must be >= 0");
  if (!(n_th >= 0.0)) throw ConfigError("model: n_th must be >= 0");
  if (!(gamma_atom >= 0.0)) throw ConfigError("model: gamma_atom must be >= 0");
  for (std::size_t i = 1; i < delta_schedule.size(); ++i)
    if (!(delta_schedule[i].start > delta_schedule[i - 1].start))
      throw ConfigError("model: detuning schedule times must be strictly increasing");
}

SparseOp hamiltonian(const ModelParams& params, const Operators& ops, double delta) {
  params.validate();
  SparseOp number = number_operator(ops);
  SparseOp h = Complex(delta) * number +
               Complex(params.g) * SparseOp(ops.s_plus * ops.a + ops.s_minus * ops.a_dag);
  h.prune(Complex(0.0));
  const SparseOp adj = h.adjoint();
  if ((h - adj).norm() > 1e-12 * std::max(1.0, h.norm()))
    throw NumericalError("hamiltonian: assembled operator is not Hermitian");
  return h;
}

SparseOp hamiltonian(const ModelParams& params, const Operators& ops) {
  return hamiltonian(params, ops, params.delta);
}

std::vector<CollapseOperator> collapse_operators(const ModelParams& params, const Operators& ops) {
  params.validate();
  std::vector<CollapseOperator> out;
  const double down = 2.0 * params.kappa * (params.n_th + 1.0);
  const double up = 2.0 * params.kappa * params.n_th;
  if (down > 0.0) out.push_back({"resonator_damping", Complex(std::sqrt(down)) * ops.a});
  if (up > 0.0) out.push_back({"resonator_heating", Complex(std::sqrt(up)) * ops.a_dag});
  if (params.gamma_atom > 0.0) {
    const double norm = std::sqrt(static_cast<double>(ops.config.atom_count));  // √(2S)
    out.push_back({"atom_loss", Complex(std::sqrt(params.gamma_atom) / norm) * ops.s_minus});
  }
  return out;
}

LindbladGenerator::LindbladGenerator(const ModelParams& params, const Operators& ops)
    : params_(params) {
  params.validate();
  const auto dim = static_cast<Eigen::Index>(ops.config.dimension());
  number_ = number_operator(ops);
  coupling_ = SparseOp(ops.s_plus * ops.a + ops.s_minus * ops.a_dag);
  collapse_ = collapse_operators(params, ops);
  decay_ = SparseOp(dim, dim);
  for (const auto& c : collapse_) {
    SparseOp adj = c.op.adjoint();
    decay_ += SparseOp(adj * c.op);
    collapse_adj_.push_back(std::move(adj));
  }
  // Time-independent part of −i H_eff: −i g V − ½ Σ L†L.
  coupling_ = Complex(0.0, -params.g) * coupling_ - Complex(0.5) * decay_;
  coupling_.makeCompressed();
}

void LindbladGenerator::apply(double t, const DensityMatrix& rho, DensityMatrix& drho) const {
  const double delta = params_.detuning_at(t);
  DensityMatrix x = coupling_ * rho;
  if (delta != 0.0) x.noalias() += Complex(0.0, -delta) * (number_ * rho);
  drho = x + x.adjoint();
  // L ρ L† = L (L ρ)† for Hermitian ρ.
  DensityMatrix lr(rho.rows(), rho.cols());
  DensityMatrix lr_adj(rho.rows(), rho.cols());
  for (const auto& c : collapse_) {
    lr.noalias() = c.op * rho;
    lr_adj = lr.adjoint();
    drho.noalias() += c.op * lr_adj;
  }
}

void LindbladGenerator::drift(double t, const StateVector& psi, StateVector& dpsi) const {
  const double delta = params_.detuning_at(t);
  dpsi.noalias() = coupling_ * psi;
  if (delta != 0.0) dpsi.noalias() += Complex(0.0, -delta) * (number_ * psi);
}

DensityMatrix lindblad_rhs(const DensityMatrix& rho, const ModelParams& params,
                           const Operators& ops, double t) {
  const LindbladGenerator gen(params, ops);
  DensityMatrix out(rho.rows(), rho.cols());
  gen.apply(t, rho, out);
  return out;
}

Eigen::VectorXd thermal_populations(double n_th, std::int64_t n_max, double tolerance) {
  if (!(n_th >= 0.0)) throw DomainError("thermal_state: n_th must be >= 0");
  if (n_max < 0) throw DomainError("thermal_state: n_max must be >= 0");
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n_max + 1);
  if (n_th == 0.0) {
    p[0] = 1.0;
    return p;
  }
  const double q = n_th / (1.0 + n_th);
  const double tail = std::pow(q, static_cast<double>(n_max + 1));
  if (!(tail < tolerance)) {
    std::ostringstream os;
    os << "thermal_state: population beyond n_max = " << n_max << " is " << tail
       << " (tolerance " << tolerance << "); increase the Fock cutoff to at least "
       << default_fock_cutoff(n_th, 0, tolerance);
    throw CutoffError(os.str());
  }
  double w = 1.0;
  for (std::int64_t n = 0; n <= n_max; ++n, w *= q) p[n] = w;
  return p / p.sum();
}

DensityMatrix thermal_state(double n_th, std::int64_t n_max, double tolerance) {
  return thermal_populations(n_th, n_max, tolerance).cast<Complex>().asDiagonal();
}

Eigen::VectorXcd dicke_state(std::int64_t atom_count, std::int64_t spin_index) {
  if (spin_index < 0 || spin_index > atom_count) throw DomainError("dicke_state: index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(atom_count + 1);
  v[spin_index] = 1.0;
  return v;
}

DensityMatrix product_state(const Eigen::VectorXcd& spin, const DensityMatrix& resonator) {
  const DensityMatrix spin_rho = spin * spin.adjoint();
  const Eigen::Index r = resonator.rows();
  DensityMatrix out(spin.size() * r, spin.size() * r);
  for (Eigen::Index i = 0; i < spin.size(); ++i)
    for (Eigen::Index j = 0; j < spin.size(); ++j)
      out.block(i * r, j * r, r, r) = spin_rho(i, j) * resonator;
  return out;
}

StateVector product_state(const Eigen::VectorXcd& spin, const Eigen::VectorXcd& resonator) {
  StateVector out(spin.size() * resonator.size());
  for (Eigen::Index j = 0; j < spin.size(); ++j)
    out.segment(j * resonator.size(), resonator.size()) = spin[j] * resonator;
  return out;
}

Observables observe(const DensityMatrix& rho, const Operators& ops) {
  const Eigen::VectorXd p = rho.diagonal().real();
  const double tr = p.sum();
  Observables o;
  o.mean_n = p.dot(ops.phonon_number) / tr;
  o.mean_sz = p.dot(ops.sz) / tr;
  o.total_excitation = o.mean_n + o.mean_sz + ops.config.spin();
  o.leak = p.dot(ops.top_fock) / tr;
  return o;
}

Observables observe(const StateVector& psi, const Operators& ops) {
  const Eigen::VectorXd p = psi.cwiseAbs2();
  const double norm = p.sum();
  Observables o;
  o.mean_n = p.dot(ops.phonon_number) / norm;
  o.mean_sz = p.dot(ops.sz) / norm;
  o.total_excitation = o.mean_n + o.mean_sz + ops.config.spin();
  o.leak = p.dot(ops.top_fock) / norm;
  return o;
}

void TrajectoryRecord::reserve(std::size_t n) {
  for (auto* v : {&times, &mean_n, &mean_sz, &total_excitation, &leak, &stderr_n, &stderr_sz,
                  &stderr_total})
    v->reserve(n);
}

void TrajectoryRecord::push(double t, const Observables& o) {
  times.push_back(t);
  mean_n.push_back(o.mean_n);
  mean_sz.push_back(o.mean_sz);
  total_excitation.push_back(o.total_excitation);
  leak.push_back(o.leak);
  stderr_n.push_back(0.0);
  stderr_sz.push_back(0.0);
  stderr_total.push_back(0.0);
  max_leak = std::max(max_leak, o.leak);
  truncation_ok = max_leak < truncation_tolerance;
}

std::vector<std::string> model_warnings(const ModelParams& params, const HilbertConfig& config) {
  std::vector<std::string> out;
  const double collective = std::abs(params.g) * std::sqrt(static_cast<double>(config.atom_count));
  if (params.omega_r > 0.0 && collective / params.omega_r > kRwaWarning) {
    std::ostringstream os;
    os << "g*sqrt(N)/omega_r = " << collective / params.omega_r << " exceeds " << kRwaWarning
       << ": counter-rotating terms are not negligible";
    out.push_back(os.str());
  }
  if (params.gamma_atom > 0.0 && config.atom_count > 1)
    out.push_back(
        "atom loss is modelled as collective de-excitation S-/sqrt(2S) at fixed S; "
        "atom-number-changing loss is not represented");
  return out;
}

}  // namespace cqed
