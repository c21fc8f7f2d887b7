#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

#include "jbl/errors.hpp"

namespace jbl {

using cplx = std::complex<double>;

// A q-periodic Jacobi operator, stored as one period of coefficients.
// Convention: coefficients are indexed by lattice site with site 1 carrying
// a(0) and b(0); site n carries a[(n-1) mod q], b[(n-1) mod q]. The bond
// coefficient a_n couples sites n and n+1.
struct PeriodicJacobi {
  int q = 1;
  Eigen::VectorXd a; // off-diagonal, length q, strictly positive
  Eigen::VectorXd b; // diagonal, length q

  PeriodicJacobi(int period, Eigen::VectorXd off, Eigen::VectorXd diag);

  double a_at(std::int64_t site) const;
  double b_at(std::int64_t site) const;

  // R such that ||J|| <= R and inf a >= 1/R both hold; the smallest class
  // bound certifiable from the coefficients alone.
  double class_bound() const;
  bool in_class(double R) const;

  static PeriodicJacobi free_laplacian() {
    return PeriodicJacobi(1, Eigen::VectorXd::Ones(1), Eigen::VectorXd::Zero(1));
  }
};

// Computable surrogate for the operator norm of a difference of two periodic
// Jacobi operators: 3 * sup over one common period of the coefficient
// distance. Upper bound, not an equality.
double coefficient_distance(const PeriodicJacobi& x, const PeriodicJacobi& y);

// Periodic approximants of a limit-periodic operator, ordered by depth.
// Consecutive periods divide each other and strictly increase; stage
// distances to the deepest stage decay fast enough that
// exp(eta * q_{n+1}) * d_n is nonincreasing over the stored stages.
struct LimitPeriodicFamily {
  std::vector<PeriodicJacobi> stages;
  double eta = 1.0;    // exponential-class rate, > 0
  double kappa = 10.5; // time-scale exponent, > 10
  double c0 = 6.0;     // schedule base, > 1

  LimitPeriodicFamily(std::vector<PeriodicJacobi> s, double eta_, double kappa_,
                      double c0_);

  std::size_t depth() const { return stages.size(); }
  const PeriodicJacobi& deepest() const { return stages.back(); }

  // 3 * sup coefficient distance from stage n to the deepest stage (the
  // numerical stand-in for the limit operator).
  double stage_distance(std::size_t n) const;

  // log10 of the time scale t_n = c0^(kappa * q_{n+1}). The value itself
  // overflows double for deep stages, so callers work with the exponent.
  double time_scale_log10(std::size_t n) const;

  double class_bound() const;
};

// Real symmetric tridiagonal restriction of a Jacobi operator to the window
// [-N, N], Dirichlet ends. Site n lives at array index n + N.
struct TruncatedOperator {
  int half_width = 0;     // N
  Eigen::VectorXd diag;   // 2N+1
  Eigen::VectorXd offdiag; // 2N, bond (n, n+1) at index n + N

  int size() const { return 2 * half_width + 1; }
  std::int64_t site_lo() const { return -half_width; }
  std::int64_t site_hi() const { return half_width; }
  int index_of(std::int64_t site) const {
    return static_cast<int>(site + half_width);
  }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
  Eigen::MatrixXd dense() const;
  double norm_bound() const; // max|b| + 2 max a on the window
};

TruncatedOperator build_truncation(const PeriodicJacobi& J, int N);
TruncatedOperator build_truncation(const LimitPeriodicFamily& F, int N);

// A = i[J, X] restricted to the same window: (A v)_n = i(a_n v_{n+1} -
// a_{n-1} v_{n-1}). Hermitian with zero diagonal; ||A|| <= 2 max a.
struct CommutatorOperator {
  int half_width = 0;
  Eigen::VectorXd offdiag; // a_n on bond (n, n+1), index n + N

  int size() const { return 2 * half_width + 1; }
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
  Eigen::MatrixXcd dense() const;
  double norm_bound() const { return 2.0 * offdiag.maxCoeff(); }
};

CommutatorOperator commutator_operator(const TruncatedOperator& T);

// Finitely supported state: value at site offset + k is amp(k).
struct WavePacket {
  std::int64_t offset = 0;
  Eigen::VectorXcd amp;

  std::int64_t site_lo() const { return offset; }
  std::int64_t site_hi() const { return offset + amp.size() - 1; }
  cplx at(std::int64_t site) const {
    const std::int64_t k = site - offset;
    return (k >= 0 && k < amp.size()) ? amp(k) : cplx{0.0, 0.0};
  }
  double norm2() const { return amp.norm(); }
  double norm1() const { return amp.cwiseAbs().sum(); }

  static WavePacket delta(std::int64_t site);
  // Drop leading/trailing entries below tol in modulus.
  WavePacket trimmed(double tol = 0.0) const;
};

WavePacket packet_add(const WavePacket& x, const WavePacket& y, cplx cy = 1.0);
double packet_distance(const WavePacket& x, const WavePacket& y);
cplx packet_inner(const WavePacket& x, const WavePacket& y); // conj-linear in x

// Sum over sites of (|n|^p + 1) |phi_n|^2.
double packet_moment(const WavePacket& phi, double p);

// (X phi)_n = n phi_n.
WavePacket apply_position(const WavePacket& phi);

Eigen::VectorXcd embed(const WavePacket& phi, const TruncatedOperator& T);
WavePacket extract(const Eigen::VectorXcd& v, const TruncatedOperator& T);

} // namespace jbl
