#pragma once

#include <Eigen/Dense>
#include <vector>

#include "jbl/floquet.hpp"
#include "jbl/lattice.hpp"

namespace jbl {

// One transfer-matrix factor at site n: (1/a_n) [[z - b_n, -1], [a_n^2, 0]].
Eigen::Matrix2cd transfer_step(const PeriodicJacobi& J, cplx z, std::int64_t n);

// Ordered product A_z(n) = T_n ... T_1. Unimodular; propagates formal
// eigenfunction data (u_{n+1}, a_n u_n) = A_z(n) (u_1, a_0 u_0).
Eigen::Matrix2cd transfer(const PeriodicJacobi& J, cplx z, std::int64_t n);

// Discriminant tr A_E(q) and its exact E-derivative (product rule).
double discriminant(const PeriodicJacobi& J, double E);
double discriminant_derivative(const PeriodicJacobi& J, double E);

// Lyapunov exponent of a periodic operator: (1/q) log spectral-radius of the
// one-period transfer matrix, clipped at 0 (det = 1 forces |mu+ mu-| = 1).
double lyapunov(const PeriodicJacobi& J, cplx z);

// Fraction of energies, sampled inside the band interiors of the deepest
// stage, where the deepest-stage Lyapunov exponent is below tol.
double lyapunov_vanishing_fraction(const LimitPeriodicFamily& F,
                                   int points_per_band = 64,
                                   double tol = 1e-6);

// Eigenvalues (ascending) of the n x n restriction to sites 1..n with
// Dirichlet ends. Always simple.
Eigen::VectorXd dirichlet_eigenvalues(const PeriodicJacobi& J, int n);

// Kolmogorov distance between the Dirichlet eigenvalue counting measure at
// size n and the Floquet density-of-states CDF.
double dirichlet_dos_distance(const PeriodicJacobi& J, const BandSet& bands,
                              int n);

// Exact Hausdorff metric between two finite unions of closed intervals.
double hausdorff_distance(const BandSet& x, const BandSet& y);

// Lebesgue measure of (x - delta, x + delta) intersected with the band set;
// exact endpoint arithmetic.
double ball_measure(const BandSet& S, double x, double delta);

// min over x in S of |B_delta(x) cap S| / delta, exact: the minimum over x is
// attained on the finite breakpoint set {band endpoints} and {endpoint -/+
// delta} intersected with S.
double homogeneity_min_ratio(const BandSet& S, double delta);

std::vector<std::pair<double, double>>
homogeneity_scan(const BandSet& S, const std::vector<double>& deltas);

// Band-length witness over the stages: smallest C >= 1 + 1e-9 with every band
// of every stage at least C^{-q_n} long. The scan range delta0 = C^{-q_1}
// comes from this constant.
double homogeneity_witness(const std::vector<BandSet>& stage_bands,
                           const std::vector<int>& periods);

} // namespace jbl
