#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "eitlab/fields.hpp"
#include "eitlab/schedule.hpp"

namespace eitlab::singlemode {

/// Collective basis label: ka atoms in |a>, kc atoms in |c>, m photons.
struct Label {
  int ka = 0;
  int kc = 0;
  int m = 0;
  int excitations() const { return ka + kc + m; }
  friend bool operator==(const Label&, const Label&) = default;
};

/// Totally symmetric states of N Lambda atoms plus one field mode, truncated at
/// n_max total excitations. Ordered lexicographically by (n, ka, kc).
class SymmetricBasis {
 public:
  SymmetricBasis(int atom_number, int n_max);

  int atom_number() const { return atom_number_; }
  int n_max() const { return n_max_; }
  std::size_t size() const { return labels_.size(); }
  const std::vector<Label>& labels() const { return labels_; }
  const Label& label(std::size_t i) const { return labels_[i]; }
  std::optional<std::size_t> index_of(const Label& l) const;
  /// Indices of the labels with exactly n excitations.
  std::vector<std::size_t> block(int n) const;

  friend bool operator==(const SymmetricBasis& a, const SymmetricBasis& b) {
    return a.atom_number_ == b.atom_number_ && a.n_max_ == b.n_max_;
  }

 private:
  int atom_number_;
  int n_max_;
  std::vector<Label> labels_;
};

struct SymmetricState {
  SymmetricBasis basis;
  ComplexVector amp;

  double norm() const { return amp.norm(); }
};

/// H = g * coupling + omega * control; both parts real symmetric.
struct HamiltonianParts {
  Eigen::MatrixXd coupling;
  Eigen::MatrixXd control;
};

HamiltonianParts hamiltonian_parts(const SymmetricBasis& basis);

/// H / hbar in the symmetric basis (resonant, rotating frame):
///   <ka+1,kc,m-1|H|ka,kc,m> = g sqrt(m (ka+1) (N-ka-kc))
///   <ka-1,kc+1,m|H|ka,kc,m> = omega sqrt(ka (kc+1))
Eigen::MatrixXd build_hamiltonian(const SymmetricBasis& basis, double g, double omega);

/// Zero-eigenvalue dark state with n excitations at mixing angle theta
/// (tan theta = g sqrt(N) / omega), supported on the labels (0, k, n-k).
///
/// Amplitudes are sqrt(C(n,k)) (-sin theta)^k cos^(n-k) theta times the
/// finite-N factor sqrt(N! / ((N-k)! N^k)), renormalized, which makes the
/// state an exact null vector of H for every N.
SymmetricState dark_state(int n, double theta, const SymmetricBasis& basis);

/// Same family without the finite-N factor (the large-N limit); exact only
/// for n <= 1.
SymmetricState dark_state_collective_limit(int n, double theta, const SymmetricBasis& basis);

/// Embeds a density matrix over photon numbers 0..n_max as labels (0,0,m).
Eigen::MatrixXcd embed_photon_state(const Eigen::MatrixXcd& photon_rho,
                                    const SymmetricBasis& basis);
/// Embeds rho_nm as (-1)^(n+m) rho_nm |c^n,0><c^m,0|, i.e. the image of the
/// photon state under adiabatic storage (the theta = pi/2 dark states).
Eigen::MatrixXcd embed_spin_state(const Eigen::MatrixXcd& photon_rho, const SymmetricBasis& basis);

/// Uhlmann fidelity (tr sqrt(sqrt(sigma) rho sqrt(sigma)))^2.
double state_fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);

struct TransferResult {
  Eigen::MatrixXcd rho_final;
  Eigen::MatrixXcd target;
  double fidelity = 0.0;
  /// Largest total population in labels with ka > 0 during the evolution.
  double max_excited_population = 0.0;
  /// Largest |tr rho(t) - tr rho(0)|.
  double norm_drift = 0.0;
  /// Largest |<n_total>(t) - <n_total>(0)|.
  double excitation_drift = 0.0;
  std::size_t steps = 0;
  bool storage = true;  // false for a retrieval (pi/2 -> 0) ramp
};

/// Integrates i d|psi>/dt = H(t)|psi> with omega(t) = g sqrt(N) cot theta(t)
/// over [0, t_final] by RK4 with step phase_step / ||H(t)|| (local norm bound, no
/// renormalization) for every pure component of the input.
///
/// A storage ramp (theta: 0 -> pi/2) takes photon_rho as the photon state and
/// targets the mapped spin state; a retrieval ramp starts from the mapped
/// spin state and targets the photon state.
TransferResult adiabatic_transfer(const Eigen::MatrixXcd& photon_rho, const ControlSchedule& ramp,
                                  const SymmetricBasis& basis, double g, double t_final,
                                  double phase_step = 0.05);

/// Density matrix of the photon Fock state |n> truncated to n_max.
Eigen::MatrixXcd fock_state(int n, int n_max);

struct TransferSweepRow {
  double duration;
  double fidelity;
  double max_excited_population;
};

/// adiabatic_transfer with storage_ramp(T) for every duration T.
std::vector<TransferSweepRow> transfer_sweep(const Eigen::MatrixXcd& photon_rho,
                                             const SymmetricBasis& basis, double g,
                                             const std::vector<double>& durations,
                                             double cot_start = 100.0);

/// Full tensor-product model of N <= 4 atoms (|b>=0, |a>=1, |c>=2 per atom)
/// and photon numbers 0..n_max.
struct OracleResult {
  Eigen::MatrixXd hamiltonian;  // full space
  Eigen::MatrixXd isometry;     // columns: symmetric states in basis order
  Eigen::MatrixXd projected() const { return isometry.transpose() * hamiltonian * isometry; }
};

OracleResult brute_force_oracle(int atom_number, int n_max, double g, double omega);

}  // namespace eitlab::singlemode
