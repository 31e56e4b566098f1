#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace cqed {

using Complex = std::complex<double>;
using SparseOp = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;
using StateVector = Eigen::VectorXcd;
using DensityMatrix = Eigen::MatrixXcd;

/// Symmetric Dicke subspace (S = N/2) ⊗ Fock space truncated at n_max.
/// Basis index = spin_index * (n_max + 1) + n with m_S = spin_index − S.
struct HilbertConfig {
  std::int64_t atom_count = 1;
  std::int64_t fock_cutoff = 1;
  double truncation_tolerance = 1e-6;
  std::int64_t max_dimension = 4'000'000;

  [[nodiscard]] std::int64_t spin_levels() const { return atom_count + 1; }
  [[nodiscard]] std::int64_t fock_levels() const { return fock_cutoff + 1; }
  [[nodiscard]] std::int64_t dimension() const { return spin_levels() * fock_levels(); }
  [[nodiscard]] double spin() const { return 0.5 * static_cast<double>(atom_count); }
  [[nodiscard]] Eigen::Index index(std::int64_t spin_index, std::int64_t n) const {
    return static_cast<Eigen::Index>(spin_index * fock_levels() + n);
  }
  void validate() const;
};

/// Fock cutoff large enough that a thermal state at n_th leaves less than
/// `tolerance` beyond it, with headroom for the N excitations the atoms can
/// deposit: max(⌈n_th + 8√(n_th+1) + 8⌉, geometric-tail bound) + N.
std::int64_t default_fock_cutoff(double n_th, std::int64_t atom_count, double tolerance = 1e-6);

struct Operators {
  HilbertConfig config;
  SparseOp a;
  SparseOp a_dag;
  SparseOp s_z;
  SparseOp s_plus;
  SparseOp s_minus;
  Eigen::VectorXd phonon_number;  // diagonal of a†a
  Eigen::VectorXd sz;             // diagonal of S_z
  Eigen::VectorXd top_fock;       // 1 on n = n_max, else 0
};

/// Throws ResourceError when the dimension exceeds config.max_dimension.
Operators build_operators(const HilbertConfig& config);

/// δ switches to `detuning` at time `start` (piecewise constant).
struct DetuningStep {
  double start = 0.0;
  double detuning = 0.0;
};

struct ModelParams {
  double g = 0.0;          // rad/s
  double delta = 0.0;      // ω_r − ω_L, rad/s
  double kappa = 0.0;      // amplitude damping, rad/s
  double n_th = 0.0;
  double gamma_atom = 0.0; // 1/s
  std::vector<DetuningStep> delta_schedule;
  double omega_r = 0.0;    // optional, only used for the RWA check

  [[nodiscard]] double detuning_at(double t) const;
  void validate() const;
};

/// H/ħ = δ a†a + g (S⁺a + S⁻a†) in the frame rotating at ω_L.
SparseOp hamiltonian(const ModelParams& params, const Operators& ops, double delta);
SparseOp hamiltonian(const ModelParams& params, const Operators& ops);

struct CollapseOperator {
  std::string name;
  SparseOp op;  // includes √rate
};

/// Thermal resonator bath √(2κ(n_th+1)) a, √(2κ n_th) a† and collective
/// atom loss √γ S⁻/√(2S). Zero-rate channels are omitted.
std::vector<CollapseOperator> collapse_operators(const ModelParams& params, const Operators& ops);

/// Precomputed Lindblad generator; apply() evaluates dρ/dt or the
/// non-Hermitian drift −i H_eff ψ for the trajectory engine.
class LindbladGenerator {
 public:
  LindbladGenerator(const ModelParams& params, const Operators& ops);

  void apply(double t, const DensityMatrix& rho, DensityMatrix& drho) const;
  void drift(double t, const StateVector& psi, StateVector& dpsi) const;

  [[nodiscard]] const std::vector<CollapseOperator>& collapse() const { return collapse_; }
  [[nodiscard]] const ModelParams& params() const { return params_; }

 private:
  ModelParams params_;
  SparseOp number_;
  SparseOp coupling_;  // S⁺a + S⁻a†
  SparseOp decay_;     // Σ L†L
  std::vector<CollapseOperator> collapse_;
  std::vector<SparseOp> collapse_adj_;
};

DensityMatrix lindblad_rhs(const DensityMatrix& rho, const ModelParams& params,
                           const Operators& ops, double t = 0.0);

/// Diagonal thermal resonator state on n = 0..n_max. Throws CutoffError if
/// the untruncated tail beyond n_max is not below `tolerance`.
DensityMatrix thermal_state(double n_th, std::int64_t n_max, double tolerance = 1e-6);
Eigen::VectorXd thermal_populations(double n_th, std::int64_t n_max, double tolerance = 1e-6);

/// |S, m_S⟩ for m_S = spin_index − S.
Eigen::VectorXcd dicke_state(std::int64_t atom_count, std::int64_t spin_index);

DensityMatrix product_state(const Eigen::VectorXcd& spin, const DensityMatrix& resonator);
StateVector product_state(const Eigen::VectorXcd& spin, const Eigen::VectorXcd& resonator);

struct Observables {
  double mean_n = 0.0;
  double mean_sz = 0.0;
  double total_excitation = 0.0;  // ⟨a†a + S_z⟩ + S
  double leak = 0.0;              // population on n = n_max
};

Observables observe(const DensityMatrix& rho, const Operators& ops);
/// Expectation values in the normalised state ψ/‖ψ‖.
Observables observe(const StateVector& psi, const Operators& ops);

/// Time series of observables; standard errors are zero for deterministic
/// (master-equation) runs.
struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<double> mean_n;
  std::vector<double> mean_sz;
  std::vector<double> total_excitation;
  std::vector<double> leak;
  std::vector<double> stderr_n;
  std::vector<double> stderr_sz;
  std::vector<double> stderr_total;
  std::int64_t trajectory_count = 0;
  std::uint64_t seed = 0;
  std::string engine;
  double truncation_tolerance = 1e-6;
  double max_leak = 0.0;
  bool truncation_ok = true;
  std::int64_t jumps = 0;
  std::vector<std::string> warnings;

  void reserve(std::size_t n);
  void push(double t, const Observables& o);
};

/// RWA validity threshold on g√N/ω_r.
inline constexpr double kRwaWarning = 1e-2;

/// Warnings about the model itself (RWA validity, atom-loss proxy).
std::vector<std::string> model_warnings(const ModelParams& params, const HilbertConfig& config);

}  // namespace cqed
