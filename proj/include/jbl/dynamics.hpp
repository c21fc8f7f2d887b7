#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "jbl/floquet.hpp"
#include "jbl/lattice.hpp"

namespace jbl {

// Finite-window realization of the time evolution exp(-itJ): one dense
// eigendecomposition of the tridiagonal truncation, reused for every t.
// The window covers the ballistic cone with margin: N >= 1.2 * 2 max(a) * T
// + 64, so evolved packets never reach the Dirichlet ends.
struct EvolutionPlan {
  TruncatedOperator op;
  double horizon = 0.0;
  double boundary_tol = 1e-10;
  Eigen::VectorXd eigval;
  Eigen::MatrixXd eigvec;

  EvolutionPlan(const PeriodicJacobi& J, double T, int N = -1,
                double boundary_tolerance = 1e-10);
  EvolutionPlan(const LimitPeriodicFamily& F, double T, int N = -1,
                double boundary_tolerance = 1e-10);

  static int window_for(double max_a, double T);
};

// psi(t) = exp(-itJ) phi. Unitary to eigensolver precision; raises
// WindowOverflowError if boundary mass exceeds the tolerance.
WavePacket evolve(const EvolutionPlan& plan, const WavePacket& phi, double t);

// X_J(t) phi = exp(itJ) X exp(-itJ) phi.
WavePacket heisenberg_position(const EvolutionPlan& plan, const WavePacket& phi,
                               double t);

// X phi + integral_0^t exp(isJ) A exp(-isJ) phi ds by composite
// Gauss-Legendre with panel width <= 1/(2 ||J||); independent route to
// X_J(t) phi used for cross-validation.
WavePacket position_integral_representation(const EvolutionPlan& plan,
                                            const WavePacket& phi, double t);

struct MomentSeries {
  std::vector<double> times; // increasing
  double p = 2.0;
  std::vector<double> values;
};

MomentSeries moment_series(const EvolutionPlan& plan, const WavePacket& phi,
                           double p, const std::vector<double>& times);

// Windowed log-log slope estimates of the transport exponents over the last
// decade of the series: window = half decade, stride = quarter decade.
struct TransportReport {
  double p = 2.0;
  double beta_plus = 0.0;
  double beta_minus = 0.0;
  double fit_lo = 0.0, fit_hi = 0.0; // time window used
  std::vector<double> window_slopes;
  double max_residual = 0.0;
};

TransportReport transport_exponents(const MomentSeries& series);

// (1/t) integral_0^t exp(isJ_theta) A_theta exp(-isJ_theta) ds, exact in the
// fiber eigenbasis: entry (j,k) there is <v_j, A v_k> * phi1(t(lambda_j -
// lambda_k)) with phi1(x) = (e^{ix}-1)/(ix). Returned in the original basis.
Eigen::MatrixXcd time_averaged_fiber(const FloquetFiber& f, double t);

// L2(theta) distance between Q_theta and its finite-time average on a dyadic
// time grid, with the fitted log-log decay exponent and the smallest constant
// c_hat with curve(t) <= c_hat * t^{-1/5}.
struct ConvergenceCurve {
  std::vector<double> times;
  std::vector<double> values;
  double exponent = 0.0; // NaN when the curve is identically zero
  double c_hat = 0.0;
};

ConvergenceCurve convergence_experiment(const PeriodicJacobi& J,
                                        const std::vector<double>& times,
                                        int M);

// Matrix-free action of the asymptotic velocity operator through the fiber
// decomposition: Q phi = F_q^{-1} [ Q_theta (F_q phi)(theta) ] on the given
// site window.
WavePacket q_apply(const PeriodicJacobi& J, const WavePacket& phi, int M,
                   std::int64_t site_lo, std::int64_t site_hi);
// Window chosen automatically: packet support padded by pad_sites.
WavePacket q_apply(const PeriodicJacobi& J, const WavePacket& phi, int M,
                   int pad_sites = 384);

// Per-stage velocity action for a limit-periodic family, with the Cauchy
// increments between consecutive stages recorded on a common window.
struct QStageDiagnostics {
  int stage = 0;
  int q = 0;
  std::string time_scale;   // t_n = c0^(kappa q_{n+1}), exact, rendered
  double time_scale_log10 = 0.0;
  double q_norm = 0.0;      // ||Q_n phi||
  double increment = 0.0;   // ||Q_n phi - Q_{n+1} phi||, 0 for the last stage
};

std::vector<QStageDiagnostics>
limit_q_diagnostics(const LimitPeriodicFamily& F, const WavePacket& phi,
                    int M = 4096);

// q_n = q_base 2^n; stage n+1 adds the diagonal perturbation
// eps_n cos(2 pi site / q_{n+1}) with eps_n = min(0.1, exp(-eta q_{n+1})).
LimitPeriodicFamily build_ec_family(double eta, double kappa, int depth,
                                    const PeriodicJacobi& base,
                                    double c0 = 6.0);

// Checks the quadratic divergence bound ||X_J(t) phi - X_J'(t) phi|| <=
// 2 (R t^2 + |t|) ||J - J'|| ||phi|| and the propagator bound
// ||exp(-itJ) phi - exp(-itJ') phi|| <= |t| ||J - J'|| ||phi|| on a shared
// window (coefficient-distance surrogate for the operator norm).
struct DivergenceReport {
  std::vector<double> times;
  std::vector<double> position_gap, position_bound;
  std::vector<double> propagator_gap, propagator_bound;
  bool position_ok = true;
  bool propagator_ok = true;
};

DivergenceReport propagation_divergence_check(const PeriodicJacobi& J,
                                              const PeriodicJacobi& Jp,
                                              const WavePacket& phi,
                                              const std::vector<double>& times);

} // namespace jbl
