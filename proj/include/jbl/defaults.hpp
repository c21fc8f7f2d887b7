#pragma once

#include <string>

namespace jbl {

// Every numeric default in one place. Values marked "override" can be
// replaced per run through the config file ("overrides" object) or the CLI
// --tolerance flag; the rest are structural constants of the algorithms.
struct Defaults {
  // phase grids
  int theta_grid_m = 4096;        // override: fourier / velocity-action grid
  int converge_theta_m = 1024;    // override: convergence-experiment grid
  int witness_theta_samples = 257; // derivative-witness sample on (0, pi)

  // windows & evolution
  double window_growth = 1.2;  // cone multiplier in N >= 1.2 * 2 max(a) T + 64
  int window_buffer = 64;
  double boundary_tol = 1e-10; // override: trailing mass allowed at the ends

  // fibers & bands
  double degeneracy_tol = 1e-11;  // eigenvalue-collision guard off {0, pi}
  double closed_gap_tol = 1e-9;   // gap treated as closed below this
  double dos_cross_check_tol = 1e-4; // quadrature vs rotation-number routes

  // transport fits
  double transport_horizon = 100.0; // override
  int transport_points = 40;        // log-spaced, plus t = 0
  double transport_span_decades = 2.4; // t_min = horizon / 10^span
  double beta_fit_tolerance = 0.1;  // allowed overshoot above the ballistic 1

  // convergence experiment
  int converge_t_max_pow = 10; // dyadic times 2^0 .. 2^pow

  // velocity action
  int qop_pad_sites = 384; // window padding around the packet support

  // exponential-class families
  double ec_c0 = 6.0;        // schedule base, also the witness floor
  double ec_kappa = 10.5;    // time-scale exponent (> 10)
  double ec_eps_cap = 0.1;   // stage perturbation cap

  // spectral scans
  int lyapunov_points = 600;      // override
  int dirichlet_n = 2000;         // override
  int homogeneity_deltas = 16;    // log grid in [1e-4, delta0]
  double homogeneity_delta_min = 1e-4;
  double lyapunov_vanish_tol = 1e-6;

  // XY chain
  double xy_epsilon = 1e-3;       // override: light-cone amplitude threshold
  double xy_comm_epsilon = 1e-2;  // many-body commutator arrival threshold
  double xy_proxy_epsilon = 2.5e-5; // |propagator|^2 proxy arrival threshold
  double xy_t_lo = 3.0, xy_t_hi = 60.0; // override: scan range
  int xy_t_points = 20;
  int xy_many_body_sites = 8;     // override: 0 disables the exact sampler
};

const Defaults& defaults();

// The whole table rendered as JSON (the CLI exposes it for auditability).
std::string defaults_json();

} // namespace jbl
