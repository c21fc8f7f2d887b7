#pragma once

#include <Eigen/Dense>
#include <vector>

#include "jbl/lattice.hpp"

namespace jbl {

enum class Pauli { I, X, Y, Z };

// Isotropic XY chain on the sites m..n: couplings mu_j on bonds (j, j+1),
// fields nu_j on sites, inf mu > 0.
struct SpinChainSpec {
  std::int64_t m = 1, n = 1;
  Eigen::VectorXd mu; // length n - m
  Eigen::VectorXd nu; // length n - m + 1

  SpinChainSpec(std::int64_t lo, std::int64_t hi, Eigen::VectorXd couplings,
                Eigen::VectorXd fields);
  int length() const { return static_cast<int>(n - m + 1); }
};

// H = -sum mu_j (sx_j sx_{j+1} + sy_j sy_{j+1}) - sum nu_j sz_j as a dense
// 2^L matrix (real in the computational basis). Basis state s has spin down
// at local site k iff bit k of s is set; sz eigenvalue is 1 - 2 bit.
Eigen::MatrixXd build_many_body(const SpinChainSpec& spec);

// The free-fermion reduction of the chain. Stored with positive hopping
// 2 mu_j (the diag((-1)^k) gauge of the single-excitation generator, which
// carries hopping -2 mu_j); onsite 2 nu_j; scalar offset -sum nu.
struct OneParticleChain {
  Eigen::VectorXd hop;    // 2 mu_j > 0
  Eigen::VectorXd onsite; // 2 nu_j
  double offset = 0.0;    // -sum nu

  int size() const { return static_cast<int>(onsite.size()); }
  // Literal single-excitation generator: tridiagonal with -hop off-diagonal.
  // build_many_body restricted to one flipped spin equals this plus
  // offset * I, entrywise.
  Eigen::MatrixXd sector_generator() const;
  // Gauge-equivalent Jacobi form with positive off-diagonals; propagator
  // magnitudes agree with the sector generator's.
  Eigen::MatrixXd jacobi_form() const;
};

OneParticleChain jordan_wigner_one_particle(const SpinChainSpec& spec);

// Periodic one-particle operator of a periodic coupling pair (mu, nu):
// a = 2 mu, b = 2 nu.
PeriodicJacobi one_particle_operator(const PeriodicJacobi& couplings);

// Cached many-body eigensystem for repeated Heisenberg evolutions.
struct ManyBodyDynamics {
  Eigen::VectorXd eigval;
  Eigen::MatrixXd eigvec;
  int length = 0;

  explicit ManyBodyDynamics(const SpinChainSpec& spec);
  Eigen::MatrixXcd propagator(double t) const; // exp(-itH)
};

// Exact operator norm of [exp(itH) A_j exp(-itH), B_k] on the 2^L space.
double commutator_norm(const ManyBodyDynamics& dyn, std::int64_t site_a,
                       Pauli pa, std::int64_t site_b, Pauli pb, double t,
                       std::int64_t site_lo);
double commutator_norm(const SpinChainSpec& spec, std::int64_t site_a, Pauli pa,
                       std::int64_t site_b, Pauli pb, double t);

// Light-cone front of the one-particle propagator on a window sized for the
// time grid: d_eps(t) = max separation at which |exp(-itH1)_{jk}| still
// reaches eps. v_hat is the least-squares slope over the last half of the
// grid.
struct LightCone {
  std::vector<double> times;
  std::vector<int> distance;
  double epsilon = 1e-3;
  double v_hat = 0.0;
};

LightCone light_cone_scan(const PeriodicJacobi& one_particle, double epsilon,
                          const std::vector<double>& times);

// Velocity floor for a limit-periodic coupling family (stages hold mu as a,
// nu as b): light-cone slope of the deepest stage's one-particle operator,
// reported against the group-velocity ceiling sup_theta rho(Q_theta).
struct LrReport {
  double v_hat = 0.0;
  double q_ceiling = 0.0;
  double margin = 0.0; // q_ceiling - v_hat
};

LrReport lr_velocity_lower_bound(const LimitPeriodicFamily& couplings,
                                 double epsilon,
                                 const std::vector<double>& times,
                                 int theta_samples = 1024);

// sup over the midpoint grid of the spectral radius of Q_theta.
double group_velocity_ceiling(const PeriodicJacobi& J, int theta_samples = 1024);

} // namespace jbl
