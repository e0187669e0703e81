#include "eitlab/singlemode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "eitlab/errors.hpp"

namespace eitlab::singlemode {
namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

SymmetricState dark_family(int n, double theta, const SymmetricBasis& basis, bool finite_n) {
  if (n < 0) throw ValidationError("dark_state: n must be >= 0");
  if (n > basis.atom_number()) {
    std::ostringstream msg;
    msg << "dark_state: n=" << n << " exceeds N=" << basis.atom_number()
        << "; the excitation cannot be stored";
    throw ValidationError(msg.str());
  }
  if (n > basis.n_max()) throw ValidationError("dark_state: n exceeds the basis truncation");
  const double s = std::sin(theta), c = std::cos(theta);
  const double N = basis.atom_number();
  ComplexVector amp = ComplexVector::Zero(static_cast<Eigen::Index>(basis.size()));
  for (int k = 0; k <= n; ++k) {
    double a = std::sqrt(binomial(n, k)) * std::pow(-s, k) * std::pow(c, n - k);
    if (finite_n) {
      double f = 1.0;
      for (int j = 0; j < k; ++j) f *= (N - j) / N;
      a *= std::sqrt(f);
    }
    const auto idx = basis.index_of({0, k, n - k});
    amp[static_cast<Eigen::Index>(*idx)] = a;
  }
  amp /= amp.norm();
  return {basis, amp};
}

Eigen::MatrixXcd sqrt_psd(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double spectral_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

void check_density(const Eigen::MatrixXcd& rho, int n_max) {
  if (rho.rows() != n_max + 1 || rho.cols() != n_max + 1)
    throw ValidationError("photon density matrix must be (n_max+1) x (n_max+1)");
  if (!rho.isApprox(rho.adjoint(), 1e-12)) throw ValidationError("photon density matrix not Hermitian");
}

}  // namespace

SymmetricBasis::SymmetricBasis(int atom_number, int n_max)
    : atom_number_(atom_number), n_max_(n_max) {
  if (atom_number < 1) throw ValidationError("symmetric basis: N must be >= 1");
  if (n_max < 0) throw ValidationError("symmetric basis: n_max must be >= 0");
  for (int n = 0; n <= n_max; ++n)
    for (int ka = 0; ka <= n; ++ka)
      for (int kc = 0; ka + kc <= n; ++kc)
        if (ka + kc <= atom_number) labels_.push_back({ka, kc, n - ka - kc});
}

std::optional<std::size_t> SymmetricBasis::index_of(const Label& l) const {
  auto it = std::find(labels_.begin(), labels_.end(), l);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

std::vector<std::size_t> SymmetricBasis::block(int n) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i].excitations() == n) out.push_back(i);
  return out;
}

HamiltonianParts hamiltonian_parts(const SymmetricBasis& basis) {
  const auto d = static_cast<Eigen::Index>(basis.size());
  HamiltonianParts h{Eigen::MatrixXd::Zero(d, d), Eigen::MatrixXd::Zero(d, d)};
  const double N = basis.atom_number();
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const Label& l = basis.label(j);
    if (l.m > 0 && l.ka + l.kc < N) {
      if (auto i = basis.index_of({l.ka + 1, l.kc, l.m - 1})) {
        const double v = std::sqrt(double(l.m) * (l.ka + 1) * (N - l.ka - l.kc));
        h.coupling(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(j)) = v;
        h.coupling(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(*i)) = v;
      }
    }
    if (l.ka > 0) {
      if (auto i = basis.index_of({l.ka - 1, l.kc + 1, l.m})) {
        const double v = std::sqrt(double(l.ka) * (l.kc + 1));
        h.control(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(j)) = v;
        h.control(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(*i)) = v;
      }
    }
  }
  return h;
}

Eigen::MatrixXd build_hamiltonian(const SymmetricBasis& basis, double g, double omega) {
  if (!(g >= 0.0) || !std::isfinite(g)) throw ValidationError("build_hamiltonian: g must be >= 0");
  if (!(omega >= 0.0) || !std::isfinite(omega))
    throw ValidationError("build_hamiltonian: omega must be >= 0");
  const HamiltonianParts h = hamiltonian_parts(basis);
  return g * h.coupling + omega * h.control;
}

SymmetricState dark_state(int n, double theta, const SymmetricBasis& basis) {
  return dark_family(n, theta, basis, true);
}

SymmetricState dark_state_collective_limit(int n, double theta, const SymmetricBasis& basis) {
  return dark_family(n, theta, basis, false);
}

Eigen::MatrixXcd embed_photon_state(const Eigen::MatrixXcd& photon_rho,
                                    const SymmetricBasis& basis) {
  check_density(photon_rho, basis.n_max());
  const auto d = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 0; n <= basis.n_max(); ++n)
    for (int m = 0; m <= basis.n_max(); ++m) {
      const auto i = basis.index_of({0, 0, n});
      const auto j = basis.index_of({0, 0, m});
      out(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(*j)) = photon_rho(n, m);
    }
  return out;
}

Eigen::MatrixXcd embed_spin_state(const Eigen::MatrixXcd& photon_rho, const SymmetricBasis& basis) {
  check_density(photon_rho, basis.n_max());
  const auto d = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 0; n <= basis.n_max(); ++n)
    for (int m = 0; m <= basis.n_max(); ++m) {
      if (photon_rho(n, m) == std::complex<double>(0.0)) continue;
      if (n > basis.atom_number() || m > basis.atom_number())
        throw ValidationError("photon state has more excitations than atoms (n_max > N)");
      const auto i = basis.index_of({0, n, 0});
      const auto j = basis.index_of({0, m, 0});
      const double sign = ((n + m) % 2 == 0) ? 1.0 : -1.0;
      out(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(*j)) = sign * photon_rho(n, m);
    }
  return out;
}

double state_fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw ValidationError("state_fidelity: dimension mismatch");
  const Eigen::MatrixXcd s = sqrt_psd(sigma);
  const Eigen::MatrixXcd inner = s * rho * s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (inner + inner.adjoint()),
                                                     Eigen::EigenvaluesOnly);
  const double tr = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return tr * tr;
}

Eigen::MatrixXcd fock_state(int n, int n_max) {
  if (n < 0 || n > n_max) throw ValidationError("fock_state: need 0 <= n <= n_max");
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
  rho(n, n) = 1.0;
  return rho;
}

TransferResult adiabatic_transfer(const Eigen::MatrixXcd& photon_rho, const ControlSchedule& ramp,
                                  const SymmetricBasis& basis, double g, double t_final,
                                  double phase_step) {
  if (basis.n_max() > basis.atom_number())
    throw ValidationError("adiabatic_transfer: n_max exceeds N, transfer impossible");
  if (!(g > 0.0)) throw ValidationError("adiabatic_transfer: g must be > 0");
  if (!(t_final >= 0.0)) throw ValidationError("adiabatic_transfer: t_final must be >= 0");
  if (!(phase_step > 0.0 && phase_step <= 0.5))
    throw ValidationError("adiabatic_transfer: phase_step must be in (0, 0.5]");
  const auto [lo, hi] = ramp.domain();
  if (lo > 0.0 || hi < t_final)
    throw ValidationError("adiabatic_transfer: ramp domain shorter than t_final");

  const double th0 = ramp.theta(0.0), th1 = ramp.theta(t_final);
  const double tol = 0.05;
  TransferResult res;
  if (th0 < tol && th1 > 0.5 * kPi - tol) {
    res.storage = true;
  } else if (th0 > 0.5 * kPi - tol && th1 < tol) {
    res.storage = false;
  } else if (t_final == 0.0 && th0 < tol) {
    res.storage = true;
  } else {
    std::ostringstream msg;
    msg << "adiabatic_transfer: ramp must rotate theta between 0 and pi/2 (theta(0)=" << th0
        << ", theta(t_final)=" << th1 << ")";
    throw ValidationError(msg.str());
  }

  const Eigen::MatrixXcd photon = embed_photon_state(photon_rho, basis);
  const Eigen::MatrixXcd spin = embed_spin_state(photon_rho, basis);
  const Eigen::MatrixXcd rho0 = res.storage ? photon : spin;
  res.target = res.storage ? spin : photon;

  // Pure components of the input.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho0);
  std::vector<double> weights;
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    if (es.eigenvalues()[i] > 1e-15) {
      weights.push_back(es.eigenvalues()[i]);
      cols.push_back(i);
    }
  }
  const auto d = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd psi(d, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c)
    psi.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(cols[c]) * std::sqrt(weights[c]);

  const HamiltonianParts h = hamiltonian_parts(basis);
  const double G = g * std::sqrt(static_cast<double>(basis.atom_number()));
  const double norm_g = spectral_norm(h.coupling);
  const double norm_o = spectral_norm(h.control);

  auto local_norm = [&](double t) { return g * norm_g + G * ramp.cot_theta(t) * norm_o; };

  Eigen::VectorXd excitations(d);
  Eigen::VectorXd excited(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Label& l = basis.label(static_cast<std::size_t>(i));
    excitations[i] = l.excitations();
    excited[i] = l.ka > 0 ? 1.0 : 0.0;
  }
  auto observe = [&](const Eigen::MatrixXcd& p, double& trace, double& nbar, double& pa) {
    const Eigen::VectorXd pop = p.cwiseAbs2().rowwise().sum();
    trace = pop.sum();
    nbar = pop.dot(excitations);
    pa = pop.dot(excited);
  };
  double tr0, n0, pa;
  observe(psi, tr0, n0, pa);
  res.max_excited_population = pa;

  const std::complex<double> mi(0.0, -1.0);
  auto rhs = [&](double t, const Eigen::MatrixXcd& p) -> Eigen::MatrixXcd {
    const double omega = G * ramp.cot_theta(t);
    return mi * (g * (h.coupling * p) + omega * (h.control * p));
  };
  std::size_t steps = 0;
  double t = 0.0;
  while (t < t_final) {
    const double rate = local_norm(t);
    double dt = rate > 0.0 ? phase_step / rate : t_final - t;
    if (t + dt >= t_final * (1.0 - 1e-15)) dt = t_final - t;
    const Eigen::MatrixXcd k1 = rhs(t, psi);
    const Eigen::MatrixXcd k2 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k1);
    const Eigen::MatrixXcd k3 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k2);
    const Eigen::MatrixXcd k4 = rhs(t + dt, psi + dt * k3);
    psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = (t + dt >= t_final) ? t_final : t + dt;
    ++steps;
    double tr, nb;
    observe(psi, tr, nb, pa);
    if (!std::isfinite(tr)) throw NumericalError("adiabatic_transfer: non-finite state");
    res.max_excited_population = std::max(res.max_excited_population, pa);
    res.norm_drift = std::max(res.norm_drift, std::abs(tr - tr0));
    res.excitation_drift = std::max(res.excitation_drift, std::abs(nb - n0));
  }
  res.steps = steps;
  res.rho_final = psi * psi.adjoint();
  res.fidelity = state_fidelity(res.rho_final, res.target);
  return res;
}

std::vector<TransferSweepRow> transfer_sweep(const Eigen::MatrixXcd& photon_rho,
                                             const SymmetricBasis& basis, double g,
                                             const std::vector<double>& durations,
                                             double cot_start) {
  std::vector<TransferSweepRow> rows;
  rows.reserve(durations.size());
  for (double T : durations) {
    const TransferResult r = adiabatic_transfer(
        photon_rho, ControlSchedule::storage_ramp(T, cot_start), basis, g, T);
    rows.push_back({T, r.fidelity, r.max_excited_population});
  }
  return rows;
}

OracleResult brute_force_oracle(int atom_number, int n_max, double g, double omega) {
  if (atom_number < 1 || atom_number > 4)
    throw ValidationError("brute_force_oracle: N must be in [1, 4]");
  if (n_max < 0) throw ValidationError("brute_force_oracle: n_max must be >= 0");
  const int N = atom_number;
  int atom_dim = 1;
  for (int i = 0; i < N; ++i) atom_dim *= 3;
  const int dim = atom_dim * (n_max + 1);
  auto index = [&](int config, int m) { return m * atom_dim + config; };
  auto level = [](int config, int atom) {
    for (int i = 0; i < atom; ++i) config /= 3;
    return config % 3;
  };
  int pow3[5] = {1, 3, 9, 27, 81};

  OracleResult out;
  out.hamiltonian = Eigen::MatrixXd::Zero(dim, dim);
  for (int m = 0; m <= n_max; ++m) {
    for (int config = 0; config < atom_dim; ++config) {
      const int from = index(config, m);
      for (int i = 0; i < N; ++i) {
        const int lv = level(config, i);
        // g a sigma_ab: photon absorbed, atom b -> a.
        if (lv == 0 && m > 0) {
          const int to = index(config + pow3[i], m - 1);
          const double v = g * std::sqrt(static_cast<double>(m));
          out.hamiltonian(to, from) += v;
          out.hamiltonian(from, to) += v;
        }
        // omega sigma_ca: atom a -> c.
        if (lv == 1) {
          const int to = index(config + pow3[i], m);
          out.hamiltonian(to, from) += omega;
          out.hamiltonian(from, to) += omega;
        }
      }
    }
  }

  const SymmetricBasis basis(N, n_max);
  out.isometry = Eigen::MatrixXd::Zero(dim, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t col = 0; col < basis.size(); ++col) {
    const Label& l = basis.label(col);
    double count = 0.0;
    for (int config = 0; config < atom_dim; ++config) {
      int na = 0, nc = 0;
      for (int i = 0; i < N; ++i) {
        const int lv = level(config, i);
        na += lv == 1;
        nc += lv == 2;
      }
      if (na == l.ka && nc == l.kc) {
        out.isometry(index(config, l.m), static_cast<Eigen::Index>(col)) = 1.0;
        count += 1.0;
      }
    }
    out.isometry.col(static_cast<Eigen::Index>(col)) /= std::sqrt(count);
  }
  return out;
}

}  // namespace eitlab::singlemode
