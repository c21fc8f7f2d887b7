#include "jbl/xy_chain.hpp"

#include <algorithm>
#include <cmath>

#include "jbl/dynamics.hpp"
#include "jbl/floquet.hpp"

namespace jbl {

namespace {

const cplx kI{0.0, 1.0};
constexpr int kMaxSites = 12;

} // namespace

SpinChainSpec::SpinChainSpec(std::int64_t lo, std::int64_t hi,
                             Eigen::VectorXd couplings, Eigen::VectorXd fields)
    : m(lo), n(hi), mu(std::move(couplings)), nu(std::move(fields)) {
  if (n < m) throw ValidationError("SpinChainSpec: empty site interval");
  const auto L = n - m + 1;
  if (mu.size() != L - 1 || nu.size() != L)
    throw ValidationError("SpinChainSpec: coupling/field lengths mismatch the interval");
  if (L > 1 && !(mu.minCoeff() > 0.0))
    throw ValidationError("SpinChainSpec: couplings must satisfy inf mu > 0");
}

Eigen::MatrixXd build_many_body(const SpinChainSpec& spec) {
  const int L = spec.length();
  if (L > kMaxSites) throw ValidationError("build_many_body: chain too long");
  const std::size_t dim = std::size_t{1} << L;
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t s = 0; s < dim; ++s) {
    double field = 0.0;
    for (int k = 0; k < L; ++k)
      field += spec.nu(k) * (1.0 - 2.0 * ((s >> k) & 1u));
    H(s, s) -= field;
    // -mu_k (sx sx + sy sy) flips an antialigned pair, amplitude -2 mu_k.
    for (int k = 0; k + 1 < L; ++k) {
      const unsigned b0 = (s >> k) & 1u, b1 = (s >> (k + 1)) & 1u;
      if (b0 != b1) {
        const std::size_t sp = s ^ ((std::size_t{1} << k) | (std::size_t{1} << (k + 1)));
        H(sp, s) -= 2.0 * spec.mu(k);
      }
    }
  }
  return H;
}

Eigen::MatrixXd OneParticleChain::sector_generator() const {
  const int L = size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(L, L);
  M.diagonal() = onsite;
  for (int k = 0; k + 1 < L; ++k) M(k, k + 1) = M(k + 1, k) = -hop(k);
  return M;
}

Eigen::MatrixXd OneParticleChain::jacobi_form() const {
  const int L = size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(L, L);
  M.diagonal() = onsite;
  for (int k = 0; k + 1 < L; ++k) M(k, k + 1) = M(k + 1, k) = hop(k);
  return M;
}

OneParticleChain jordan_wigner_one_particle(const SpinChainSpec& spec) {
  OneParticleChain c;
  c.hop = 2.0 * spec.mu;
  c.onsite = 2.0 * spec.nu;
  c.offset = -spec.nu.sum();
  return c;
}

PeriodicJacobi one_particle_operator(const PeriodicJacobi& couplings) {
  return PeriodicJacobi(couplings.q, 2.0 * couplings.a, 2.0 * couplings.b);
}

ManyBodyDynamics::ManyBodyDynamics(const SpinChainSpec& spec)
    : length(spec.length()) {
  const Eigen::MatrixXd H = build_many_body(spec);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.info() != Eigen::Success)
    throw NumericError("ManyBodyDynamics: eigensolver failed");
  eigval = es.eigenvalues();
  eigvec = es.eigenvectors();
}

Eigen::MatrixXcd ManyBodyDynamics::propagator(double t) const {
  const Eigen::Index dim = eigval.size();
  Eigen::MatrixXcd phased(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k)
    phased.col(k) = eigvec.col(k) * std::exp(-kI * (t * eigval(k)));
  return phased * eigvec.transpose();
}

namespace {

// Apply the single-site Pauli to each column index: out = P_j * M.
Eigen::MatrixXcd pauli_left(Pauli p, int local, const Eigen::MatrixXcd& M) {
  const std::size_t dim = M.rows();
  const std::size_t bit = std::size_t{1} << local;
  Eigen::MatrixXcd out(dim, M.cols());
  switch (p) {
    case Pauli::I:
      return M;
    case Pauli::X:
      for (std::size_t s = 0; s < dim; ++s) out.row(s) = M.row(s ^ bit);
      return out;
    case Pauli::Y:
      // <s| sy |s^bit> = +i when s has the bit set, -i otherwise
      for (std::size_t s = 0; s < dim; ++s)
        out.row(s) = ((s & bit) ? kI : -kI) * M.row(s ^ bit);
      return out;
    case Pauli::Z:
      for (std::size_t s = 0; s < dim; ++s)
        out.row(s) = (1.0 - 2.0 * ((s & bit) != 0)) * M.row(s);
      return out;
  }
  throw ValidationError("pauli_left: bad label");
}

Eigen::MatrixXcd pauli_right(Pauli p, int local, const Eigen::MatrixXcd& M) {
  // M * P_j = (P_j^T M^T)^T; all Paulis are Hermitian so work columnwise.
  const std::size_t dim = M.rows();
  const std::size_t bit = std::size_t{1} << local;
  Eigen::MatrixXcd out(dim, M.cols());
  switch (p) {
    case Pauli::I:
      return M;
    case Pauli::X:
      for (std::size_t s = 0; s < dim; ++s) out.col(s) = M.col(s ^ bit);
      return out;
    case Pauli::Y:
      // (sy)_{s^bit, s} viewed as right factor: column s of M*sy picks
      // column s^bit of M with phase (sy)_{s^bit, s}.
      for (std::size_t s = 0; s < dim; ++s)
        out.col(s) = (((s ^ bit) & bit) ? kI : -kI) * M.col(s ^ bit);
      return out;
    case Pauli::Z:
      for (std::size_t s = 0; s < dim; ++s)
        out.col(s) = (1.0 - 2.0 * ((s & bit) != 0)) * M.col(s);
      return out;
  }
  throw ValidationError("pauli_right: bad label");
}

// Operator norm of a Hermitian matrix by a short power iteration with a
// deterministic start; exact enough for threshold comparisons.
double hermitian_norm(const Eigen::MatrixXcd& M) {
  const Eigen::Index dim = M.rows();
  if (dim <= 256) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
  }
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    v(i) = cplx{std::cos(0.7 * static_cast<double>(i) + 0.3),
                std::sin(1.3 * static_cast<double>(i) + 0.1)};
  v.normalize();
  double norm = 0.0;
  for (int iter = 0; iter < 60; ++iter) {
    Eigen::VectorXcd w = M * v; // squared iteration keeps the sign out
    w = M * w;
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    v = w / nw;
    const double est = std::sqrt(nw);
    if (iter > 8 && std::abs(est - norm) < 1e-9 * std::max(1.0, est)) {
      norm = est;
      break;
    }
    norm = est;
  }
  return norm;
}

} // namespace

double commutator_norm(const ManyBodyDynamics& dyn, std::int64_t site_a,
                       Pauli pa, std::int64_t site_b, Pauli pb, double t,
                       std::int64_t site_lo) {
  const int ja = static_cast<int>(site_a - site_lo);
  const int jb = static_cast<int>(site_b - site_lo);
  if (ja < 0 || jb < 0 || ja >= dyn.length || jb >= dyn.length)
    throw ValidationError("commutator_norm: site outside the chain");
  if (ja == jb)
    throw ValidationError("commutator_norm: observables must sit on distinct sites");
  if (pa == Pauli::I || pb == Pauli::I) return 0.0;
  const Eigen::MatrixXcd U = dyn.propagator(t);
  // tau_t(A) = U^dag A U for the Heisenberg sign e^{itH} A e^{-itH}.
  const Eigen::MatrixXcd tauA =
      pauli_right(pa, ja, U.adjoint()).eval().operator*(U);
  const Eigen::MatrixXcd C =
      pauli_right(pb, jb, tauA) - pauli_left(pb, jb, tauA);
  return hermitian_norm(kI * C);
}

double commutator_norm(const SpinChainSpec& spec, std::int64_t site_a, Pauli pa,
                       std::int64_t site_b, Pauli pb, double t) {
  const ManyBodyDynamics dyn(spec);
  return commutator_norm(dyn, site_a, pa, site_b, pb, t, spec.m);
}

LightCone light_cone_scan(const PeriodicJacobi& one_particle, double epsilon,
                          const std::vector<double>& times) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw ValidationError("light_cone_scan: epsilon must lie in (0, 1)");
  if (times.size() < 2)
    throw ValidationError("light_cone_scan: need at least two times");
  const double T = *std::max_element(times.begin(), times.end());
  const EvolutionPlan plan(one_particle, T);
  const int n = plan.op.size();

  LightCone out;
  out.times = times;
  out.epsilon = epsilon;
  out.distance.reserve(times.size());
  for (const double t : times) {
    // Propagator column from the center site; translation covers |j-k|.
    Eigen::VectorXcd col = Eigen::VectorXcd::Zero(n);
    col(plan.op.index_of(0)) = 1.0;
    const Eigen::VectorXcd coeff = plan.eigvec.transpose() * col;
    Eigen::VectorXcd rotated(n);
    for (int k = 0; k < n; ++k)
      rotated(k) = std::exp(-kI * (t * plan.eigval(k))) * coeff(k);
    const Eigen::VectorXcd prop = plan.eigvec * rotated;
    int d = 0;
    for (int i = 0; i < n; ++i) {
      const int sep = std::abs(static_cast<int>(i) - plan.op.index_of(0));
      if (std::abs(prop(i)) >= epsilon) d = std::max(d, sep);
    }
    if (d >= plan.op.half_width - 4)
      throw WindowOverflowError("light_cone_scan: front reached the window edge");
    out.distance.push_back(d);
  }
  // Least-squares slope over the last half of the grid.
  const std::size_t from = times.size() / 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = from; i < times.size(); ++i) {
    sx += times[i];
    sy += out.distance[i];
    sxx += times[i] * times[i];
    sxy += times[i] * out.distance[i];
    ++cnt;
  }
  if (cnt < 2 || std::abs(cnt * sxx - sx * sx) < 1e-14)
    throw ValidationError("light_cone_scan: degenerate fit window");
  out.v_hat = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return out;
}

double group_velocity_ceiling(const PeriodicJacobi& J, int theta_samples) {
  const auto grid = midpoint_grid(theta_samples);
  double ceiling = 0.0;
  for (const double theta : grid) {
    const FloquetFiber f = build_fiber(J, theta);
    // rho(Q_theta) = q * max_j |lambda_dot_j|
    ceiling = std::max(ceiling, J.q * f.lambda_dots.cwiseAbs().maxCoeff());
  }
  return ceiling;
}

LrReport lr_velocity_lower_bound(const LimitPeriodicFamily& couplings,
                                 double epsilon,
                                 const std::vector<double>& times,
                                 int theta_samples) {
  const PeriodicJacobi h1 = one_particle_operator(couplings.deepest());
  const LightCone cone = light_cone_scan(h1, epsilon, times);
  LrReport rep;
  rep.v_hat = cone.v_hat;
  rep.q_ceiling = group_velocity_ceiling(h1, theta_samples);
  rep.margin = rep.q_ceiling - rep.v_hat;
  return rep;
}

} // namespace jbl
