#include "jbl/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "jbl/parallel.hpp"

namespace jbl {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

void decompose(EvolutionPlan& plan) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(plan.op.diag, plan.op.offdiag,
                            Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw NumericError("EvolutionPlan: tridiagonal eigensolver failed");
  plan.eigval = es.eigenvalues();
  plan.eigvec = es.eigenvectors();
}

int resolve_window(double max_a, double T, int N) {
  const int needed = EvolutionPlan::window_for(max_a, T);
  if (N < 0) return needed;
  if (N < needed)
    throw ValidationError("EvolutionPlan: window too small for the horizon");
  return N;
}

} // namespace

int EvolutionPlan::window_for(double max_a, double T) {
  return static_cast<int>(std::ceil(1.2 * 2.0 * max_a * std::abs(T))) + 64;
}

EvolutionPlan::EvolutionPlan(const PeriodicJacobi& J, double T, int N,
                             double boundary_tolerance)
    : horizon(std::abs(T)), boundary_tol(boundary_tolerance) {
  op = build_truncation(J, resolve_window(J.a.maxCoeff(), T, N));
  decompose(*this);
}

EvolutionPlan::EvolutionPlan(const LimitPeriodicFamily& F, double T, int N,
                             double boundary_tolerance)
    : horizon(std::abs(T)), boundary_tol(boundary_tolerance) {
  op = build_truncation(F, resolve_window(F.deepest().a.maxCoeff(), T, N));
  decompose(*this);
}

namespace {

Eigen::VectorXcd evolve_vec(const EvolutionPlan& plan, const Eigen::VectorXcd& v,
                            double t) {
  const Eigen::VectorXcd coeff = plan.eigvec.transpose() * v;
  Eigen::VectorXcd rotated(coeff.size());
  for (Eigen::Index k = 0; k < coeff.size(); ++k)
    rotated(k) = std::exp(-kI * (t * plan.eigval(k))) * coeff(k);
  return plan.eigvec * rotated;
}

void check_bounds(const EvolutionPlan& plan, const Eigen::VectorXcd& v) {
  const int n = static_cast<int>(v.size());
  const int margin = std::min(4, n);
  double mass = 0.0;
  for (int i = 0; i < margin; ++i)
    mass += std::norm(v(i)) + std::norm(v(n - 1 - i));
  if (mass > plan.boundary_tol)
    throw WindowOverflowError(
        "evolve: boundary mass exceeds tolerance; enlarge the window N");
}

void check_preconditions(const EvolutionPlan& plan, const WavePacket& phi,
                         double t) {
  if (std::abs(t) > plan.horizon * (1.0 + 1e-12))
    throw ValidationError("evolve: |t| exceeds the plan horizon");
  const std::int64_t half = plan.op.half_width / 2;
  if (phi.site_lo() < -half || phi.site_hi() > half)
    throw ValidationError("evolve: packet support outside the inner half window");
}

} // namespace

WavePacket evolve(const EvolutionPlan& plan, const WavePacket& phi, double t) {
  check_preconditions(plan, phi, t);
  const Eigen::VectorXcd v = evolve_vec(plan, embed(phi, plan.op), t);
  check_bounds(plan, v);
  return extract(v, plan.op);
}

WavePacket heisenberg_position(const EvolutionPlan& plan, const WavePacket& phi,
                               double t) {
  check_preconditions(plan, phi, t);
  Eigen::VectorXcd v = evolve_vec(plan, embed(phi, plan.op), t);
  check_bounds(plan, v);
  for (int i = 0; i < plan.op.size(); ++i)
    v(i) *= static_cast<double>(plan.op.site_lo() + i);
  return extract(evolve_vec(plan, v, -t), plan.op);
}

WavePacket position_integral_representation(const EvolutionPlan& plan,
                                            const WavePacket& phi, double t) {
  check_preconditions(plan, phi, t);
  const CommutatorOperator A = commutator_operator(plan.op);
  const Eigen::VectorXcd v0 = embed(phi, plan.op);

  // Composite Gauss-Legendre; the integrand oscillates at frequency <= 2||J||.
  const double norm_bound = plan.op.norm_bound();
  const double panel_width = 1.0 / (2.0 * std::max(norm_bound, 1e-9));
  const int panels = std::max(1, static_cast<int>(std::ceil(std::abs(t) / panel_width)));
  static const std::array<double, 4> gx = {
      -0.861136311594052575, -0.339981043584856265, 0.339981043584856265,
      0.861136311594052575};
  static const std::array<double, 4> gw = {
      0.347854845137453857, 0.652145154862546143, 0.652145154862546143,
      0.347854845137453857};

  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(plan.op.size());
  const double w = t / panels;
  for (int p = 0; p < panels; ++p) {
    const double c = (p + 0.5) * w;
    for (int i = 0; i < 4; ++i) {
      const double s = c + 0.5 * w * gx[i];
      const Eigen::VectorXcd inner = evolve_vec(plan, v0, s);
      acc += (0.5 * w * gw[i]) * evolve_vec(plan, A.apply(inner), -s);
    }
  }
  Eigen::VectorXcd out = acc;
  for (int i = 0; i < plan.op.size(); ++i)
    out(i) += static_cast<double>(plan.op.site_lo() + i) * v0(i);
  return extract(out, plan.op);
}

MomentSeries moment_series(const EvolutionPlan& plan, const WavePacket& phi,
                           double p, const std::vector<double>& times) {
  if (!(p > 0.0)) throw ValidationError("moment_series: p must be > 0");
  if (times.empty()) throw ValidationError("moment_series: empty time grid");
  for (std::size_t i = 0; i + 1 < times.size(); ++i)
    if (times[i + 1] <= times[i])
      throw ValidationError("moment_series: times must increase");
  MomentSeries out;
  out.times = times;
  out.p = p;
  out.values.resize(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    out.values[i] = packet_moment(evolve(plan, phi, times[i]), p);
  return out;
}

TransportReport transport_exponents(const MomentSeries& series) {
  std::vector<double> ts, vs;
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    if (series.times[i] > 0.0) {
      ts.push_back(series.times[i]);
      vs.push_back(series.values[i]);
    }
  }
  if (ts.size() < 4 || std::log10(ts.back() / ts.front()) < 2.0 - 1e-9)
    throw ValidationError("transport_exponents: need at least two decades of time");
  for (const double v : vs)
    if (!(v > 0.0))
      throw ValidationError("transport_exponents: degenerate series");

  const double hi = std::log10(ts.back());
  const double lo = hi - 1.0; // last decade
  TransportReport rep;
  rep.p = series.p;
  rep.fit_lo = std::pow(10.0, lo);
  rep.fit_hi = ts.back();

  // Half-decade windows, quarter-decade stride.
  for (double wlo = lo; wlo <= hi - 0.5 + 1e-12; wlo += 0.25) {
    const double whi = wlo + 0.5;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double x = std::log10(ts[i]);
      if (x < wlo - 1e-12 || x > whi + 1e-12) continue;
      const double y = std::log10(vs[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
    if (n < 2) continue;
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-14) continue;
    const double slope = (n * sxy - sx * sy) / denom;
    const double icept = (sy - slope * sx) / n;
    double res = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double x = std::log10(ts[i]);
      if (x < wlo - 1e-12 || x > whi + 1e-12) continue;
      res = std::max(res, std::abs(std::log10(vs[i]) - slope * x - icept));
    }
    rep.window_slopes.push_back(slope / series.p);
    rep.max_residual = std::max(rep.max_residual, res);
  }
  if (rep.window_slopes.empty())
    throw ValidationError("transport_exponents: time grid too sparse in the last decade");
  rep.beta_plus = *std::max_element(rep.window_slopes.begin(), rep.window_slopes.end());
  rep.beta_minus = *std::min_element(rep.window_slopes.begin(), rep.window_slopes.end());
  return rep;
}

namespace {

// (e^{ix} - 1) / (ix), the averaged phase kernel.
cplx phase_kernel(double x) {
  if (std::abs(x) < 1e-8) return cplx{1.0, 0.5 * x};
  return (std::exp(kI * x) - 1.0) / (kI * x);
}

} // namespace

Eigen::MatrixXcd time_averaged_fiber(const FloquetFiber& f, double t) {
  if (!(t > 0.0)) throw ValidationError("time_averaged_fiber: t must be > 0");
  const int q = f.q;
  const Eigen::MatrixXcd a_eig =
      f.vectors.adjoint() * f.a_theta * f.vectors;
  Eigen::MatrixXcd avg(q, q);
  for (int j = 0; j < q; ++j)
    for (int k = 0; k < q; ++k)
      avg(j, k) = a_eig(j, k) * phase_kernel(t * (f.lambdas(j) - f.lambdas(k)));
  return f.vectors * avg * f.vectors.adjoint();
}

ConvergenceCurve convergence_experiment(const PeriodicJacobi& J,
                                        const std::vector<double>& times,
                                        int M) {
  if (times.empty()) throw ValidationError("convergence_experiment: empty grid");
  const auto grid = midpoint_grid(M);
  ConvergenceCurve out;
  out.times = times;
  out.values.assign(times.size(), 0.0);

  std::vector<std::vector<double>> per_theta(M);
  parallel_for(M, [&](std::size_t m) {
    const FloquetFiber f = build_fiber(J, grid[m]);
    const Eigen::MatrixXcd Q = fiber_q(f);
    std::vector<double>& vals = per_theta[m];
    vals.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      const Eigen::MatrixXcd D = Q - time_averaged_fiber(f, times[i]);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(D,
                                                         Eigen::EigenvaluesOnly);
      const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
      vals[i] = norm * norm;
    }
  });
  for (int m = 0; m < M; ++m)
    for (std::size_t i = 0; i < times.size(); ++i)
      out.values[i] += per_theta[m][i];
  for (double& v : out.values) v = std::sqrt(v / M);

  // Fit log-log slope over points above the noise floor.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  out.c_hat = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    out.c_hat = std::max(out.c_hat, out.values[i] * std::pow(times[i], 0.2));
    if (out.values[i] > 1e-13 && times[i] > 0.0) {
      const double x = std::log(times[i]), y = std::log(out.values[i]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++n;
    }
  }
  if (n >= 2 && std::abs(n * sxx - sx * sx) > 1e-14)
    out.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  else
    out.exponent = std::numeric_limits<double>::quiet_NaN();
  return out;
}

WavePacket q_apply(const PeriodicJacobi& J, const WavePacket& phi, int M,
                   std::int64_t site_lo, std::int64_t site_hi) {
  const auto grid = midpoint_grid(M);
  auto values = fourier_forward(phi, J.q, M);
  parallel_for(values.size(), [&](std::size_t m) {
    const FloquetFiber f = build_fiber(J, grid[m]);
    values[m] = fiber_q(f) * values[m];
  });
  return fourier_inverse(values, J.q, site_lo, site_hi);
}

WavePacket q_apply(const PeriodicJacobi& J, const WavePacket& phi, int M,
                   int pad_sites) {
  return q_apply(J, phi, M, phi.site_lo() - pad_sites,
                 phi.site_hi() + pad_sites);
}

std::vector<QStageDiagnostics>
limit_q_diagnostics(const LimitPeriodicFamily& F, const WavePacket& phi,
                    int M) {
  if (F.depth() < 2)
    throw ValidationError("limit_q_diagnostics: need at least two stages");
  const int pad = 384;
  const std::int64_t lo = phi.site_lo() - pad, hi = phi.site_hi() + pad;
  std::vector<WavePacket> actions;
  actions.reserve(F.depth());
  for (const auto& stage : F.stages)
    actions.push_back(q_apply(stage, phi, M, lo, hi));

  std::vector<QStageDiagnostics> table(F.depth());
  for (std::size_t n = 0; n < F.depth(); ++n) {
    QStageDiagnostics& row = table[n];
    row.stage = static_cast<int>(n);
    row.q = F.stages[n].q;
    row.time_scale_log10 = F.time_scale_log10(n);
    const double frac = row.time_scale_log10 - std::floor(row.time_scale_log10);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6fe+%.0f", std::pow(10.0, frac),
                  std::floor(row.time_scale_log10));
    row.time_scale = buf;
    row.q_norm = actions[n].norm2();
    row.increment =
        (n + 1 < F.depth()) ? packet_distance(actions[n], actions[n + 1]) : 0.0;
  }
  return table;
}

LimitPeriodicFamily build_ec_family(double eta, double kappa, int depth,
                                    const PeriodicJacobi& base, double c0) {
  if (!(eta > 0.0)) throw ValidationError("build_ec_family: eta must be > 0");
  if (depth < 0 || depth > 6)
    throw ValidationError("build_ec_family: depth must be in [0, 6]");
  std::vector<PeriodicJacobi> stages{base};
  for (int n = 0; n < depth; ++n) {
    const PeriodicJacobi& prev = stages.back();
    const int q_next = prev.q * 2;
    const double eps = std::min(0.1, std::exp(-eta * q_next));
    Eigen::VectorXd a(q_next), b(q_next);
    for (int j = 1; j <= q_next; ++j) {
      a(j - 1) = prev.a_at(j);
      b(j - 1) = prev.b_at(j) + eps * std::cos(2.0 * kPi * j / q_next);
    }
    stages.emplace_back(q_next, std::move(a), std::move(b));
  }
  return LimitPeriodicFamily(std::move(stages), eta, kappa, c0);
}

DivergenceReport propagation_divergence_check(const PeriodicJacobi& J,
                                              const PeriodicJacobi& Jp,
                                              const WavePacket& phi,
                                              const std::vector<double>& times) {
  if (times.empty())
    throw ValidationError("propagation_divergence_check: empty time grid");
  const double T = *std::max_element(times.begin(), times.end());
  const double max_a = std::max(J.a.maxCoeff(), Jp.a.maxCoeff());
  const int N = EvolutionPlan::window_for(max_a, T);
  const EvolutionPlan plan1(J, T, N), plan2(Jp, T, N);
  const double R = std::max(J.class_bound(), Jp.class_bound());
  const double dist = coefficient_distance(J, Jp);
  const double pn = phi.norm2();

  DivergenceReport rep;
  rep.times = times;
  for (const double t : times) {
    const double pos_gap = packet_distance(heisenberg_position(plan1, phi, t),
                                           heisenberg_position(plan2, phi, t));
    const double pos_bound = 2.0 * (R * t * t + std::abs(t)) * dist * pn;
    const double prop_gap =
        packet_distance(evolve(plan1, phi, t), evolve(plan2, phi, t));
    const double prop_bound = std::abs(t) * dist * pn;
    rep.position_gap.push_back(pos_gap);
    rep.position_bound.push_back(pos_bound);
    rep.propagator_gap.push_back(prop_gap);
    rep.propagator_bound.push_back(prop_bound);
    // tiny slack for truncation/eigensolver noise on an exact-arithmetic bound
    if (pos_gap > pos_bound + 1e-9) rep.position_ok = false;
    if (prop_gap > prop_bound + 1e-9) rep.propagator_ok = false;
  }
  return rep;
}

} // namespace jbl
