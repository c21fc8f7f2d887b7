#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "jbl/lattice.hpp"

namespace jbl {

// Midpoint phase grid theta_m = 2*pi*(m + 1/2)/M. Never contains 0 or pi
// when M is a power of two, which keeps every fiber formula defined.
std::vector<double> midpoint_grid(int M);

// One fiber of the direct-integral decomposition of a q-periodic operator:
// the q x q matrices J_theta and A_theta, the sorted eigensystem, and the
// eigenvalue derivatives d lambda_j / d theta.
//
// For q >= 3, J_theta is the periodic tridiagonal with corner entries
// exp(-i theta) a_q (top right) and its conjugate; the q = 2 and q = 1 forms
// collapse the corner onto the remaining entries:
//   q = 2: off-diagonal a_1 + exp(-i theta) a_2,
//   q = 1: scalar b_1 + 2 a_1 cos(theta).
// A_theta carries the same structure for i[J, X]:
//   q >= 3: super-diagonal +i a_j, corners -i exp(-i theta) a_q / conj,
//   q = 2: off-diagonal i (a_1 - exp(-i theta) a_2),
//   q = 1: scalar -2 a_1 sin(theta).
struct FloquetFiber {
  int q = 1;
  double theta = 0.0;
  Eigen::MatrixXcd j_theta;
  Eigen::MatrixXcd a_theta;
  Eigen::VectorXd lambdas;     // ascending
  Eigen::MatrixXcd vectors;    // orthonormal columns, phase-fixed
  Eigen::VectorXd lambda_dots; // Hellmann-Feynman derivatives

  double min_gap() const;
};

Eigen::MatrixXcd fiber_j_matrix(const PeriodicJacobi& J, double theta);
Eigen::MatrixXcd fiber_a_matrix(const PeriodicJacobi& J, double theta);
// d/d theta of J_theta (only the phase-carrying entries survive).
Eigen::MatrixXcd fiber_j_derivative(const PeriodicJacobi& J, double theta);

// Eigensystem + derivatives. Away from theta in {0, pi} the spectrum must be
// simple; a collision beyond tolerance raises FiberDegeneracyError.
FloquetFiber build_fiber(const PeriodicJacobi& J, double theta);

// Fiber velocity matrix Q_theta = q * sum_j lambda_dot_j P_j. Undefined at
// theta in {0, pi} (ValidationError).
Eigen::MatrixXcd fiber_q(const FloquetFiber& f);

// Semi-discrete Fourier transform: [F_q phi](theta) has j-th component
// sum_l exp(-i l theta) phi_{j + l q}, j = 1..q, evaluated on the midpoint
// grid of size M.
std::vector<Eigen::VectorXcd> fourier_forward(const WavePacket& phi, int q,
                                              int M);

// Left inverse on the site window [site_lo, site_hi]. The window's extent in
// periods must fit the grid (< M distinct Fourier modes), otherwise
// ResolutionError.
WavePacket fourier_inverse(const std::vector<Eigen::VectorXcd>& values, int q,
                           std::int64_t site_lo, std::int64_t site_hi);

// Union of the q closed spectral bands plus the critical points x_j of the
// discriminant between consecutive bands (x_j = shared edge for a closed gap).
struct BandSet {
  std::vector<std::pair<double, double>> bands; // disjoint, ordered
  std::vector<double> crit;                     // size bands-1

  double total_measure() const;
  double lo() const { return bands.front().first; }
  double hi() const { return bands.back().second; }
  bool contains(double E) const;
  // Index of the open band interior containing E, or -1.
  int interior_band(double E) const;
};

// Band edges are the eigenvalues of J_0 and J_pi: the sorted union pairs up
// into the bands. Critical points located on each gap by bracketed search on
// the discriminant. M is the resolution of the validation sweep (>= 2q).
BandSet band_structure(const PeriodicJacobi& J, int M = 64);

// Density of states dk/dE at E from the closed-form product over band edges
// and critical points. Returns 0 outside the open band interiors.
double dos_density(const PeriodicJacobi& J, const BandSet& bands, double E);

// k(I) by per-band quadrature with the square-root edge substitution,
// cross-checked against the rotation-number route (mismatch beyond 1e-4
// raises NumericError).
double dos_interval(const PeriodicJacobi& J, const BandSet& bands, double lo,
                    double hi);

// Same k(I) through the phase variable: for each band, the theta-measure of
// {theta in [0, pi] : lambda_j(theta) in I} / (pi q), located by bisection on
// the monotone branch.
double dos_interval_rotation(const PeriodicJacobi& J, const BandSet& bands,
                             double lo, double hi);

// k((-inf, E]).
double dos_cdf(const PeriodicJacobi& J, const BandSet& bands, double E);

// Empirical witness for the eigenvalue-derivative lower bound
// |lambda_dot_j(theta)| >= C3^{-q} |sin theta|: the smallest C3 >= 1 + 1e-9
// certifying the sampled fibers. Also certifies band lengths >= 2 C3^{-q}.
double c3_witness(const PeriodicJacobi& J, int sample_size = 257);

// Empirical witness for k(I) <= C2^q sqrt(|I|) over an edge-centered stress
// sample of intervals.
double c2_witness(const PeriodicJacobi& J, const BandSet& bands);

} // namespace jbl
