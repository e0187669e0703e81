#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Core>

// Reference computations used by the unit and acceptance tests. None of
// them calls into the library under test: derivatives are finite
// differences, integrals are composite Simpson, transforms are naive DFTs.
namespace eitlab::oracle {

using RealFn = std::function<double(double)>;
using cd = std::complex<double>;

double simpson(const RealFn& f, double a, double b, int intervals);

// Root of f on [a, b] by bisection; f(a) and f(b) must differ in sign.
double bisect(const RealFn& f, double a, double b, double tol = 1e-12);

// theta = arccot(cot) in [0, pi/2].
double theta_from_cot(double cot);

struct ReferenceIntegrals {
  double displacement = 0.0;
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
  double decay = 0.0;  // gamma0 int sin^2
};

// Time integrals of the non-adiabatic coefficients for a schedule given as a
// plain cot(t) function. h is the finite-difference step.
ReferenceIntegrals reference_integrals(const RealFn& cot, double g2N, double gamma_ba,
                                       double gamma0, double t0, double t1, int intervals = 20000,
                                       double h = 1e-2);

// Psi(z) for the initial pulse exp(-(z - z0)^2 / w^2), propagated with the
// given integrals, by direct trapezoid quadrature over k.
cd gaussian_by_k_quadrature(double z, double z0, double w, const ReferenceIntegrals& in,
                            int nodes = 4001);

std::vector<cd> naive_dft(const std::vector<cd>& x, int sign);

struct ModalFields {
  std::vector<cd> E;
  std::vector<cd> P;
  std::vector<cd> S;
};

// Exact solution of the linear Maxwell-Bloch system with constant control
// on a periodic domain of length L: each Fourier mode evolves with the
// matrix exponential of its 3x3 generator. The Nyquist mode carries no
// advection, matching a spectral derivative with that mode zeroed.
ModalFields maxwell_bloch_modal(const ModalFields& initial, double L, double g2N, double gamma_ba,
                                double gamma0, double omega, double t);

struct TransportResult {
  double fidelity = 0.0;
  double excited_population = 0.0;
  int dark_dimension = 0;
};

// Adiabatic-limit transfer in the n-excitation block: the state is
// parallel-transported through the null space of H(theta) as theta goes
// from ~0 to ~pi/2, starting from n photons.
TransportResult dark_space_transport(int N, int n, int theta_steps = 20000);

// Symmetric-subspace n-excitation block of H/hbar built directly from the
// collective matrix elements; labels are (ka, kc, m).
Eigen::MatrixXd symmetric_block(int N, int n, double g, double omega,
                                std::vector<std::array<int, 3>>* labels = nullptr);

}  // namespace eitlab::oracle
