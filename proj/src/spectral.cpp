#include "jbl/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace jbl {

Eigen::Matrix2cd transfer_step(const PeriodicJacobi& J, cplx z,
                               std::int64_t n) {
  const double an = J.a_at(n);
  Eigen::Matrix2cd m;
  m << (z - J.b_at(n)) / an, -1.0 / an, an, 0.0;
  return m;
}

Eigen::Matrix2cd transfer(const PeriodicJacobi& J, cplx z, std::int64_t n) {
  if (n < 1) throw ValidationError("transfer: step count must be >= 1");
  Eigen::Matrix2cd m = transfer_step(J, z, 1);
  for (std::int64_t k = 2; k <= n; ++k) m = transfer_step(J, z, k) * m;
  return m;
}

double discriminant(const PeriodicJacobi& J, double E) {
  return transfer(J, cplx{E, 0.0}, J.q).trace().real();
}

double discriminant_derivative(const PeriodicJacobi& J, double E) {
  // Product rule over the q factors; d/dE of one factor is [[1/a_n, 0],[0,0]].
  const cplx z{E, 0.0};
  const int q = J.q;
  std::vector<Eigen::Matrix2cd> prefix(q + 1), suffix(q + 1);
  prefix[0] = Eigen::Matrix2cd::Identity();
  suffix[q] = Eigen::Matrix2cd::Identity();
  for (int k = 1; k <= q; ++k)
    prefix[k] = transfer_step(J, z, k) * prefix[k - 1]; // T_k ... T_1
  for (int k = q; k >= 1; --k)
    suffix[k - 1] = suffix[k] * transfer_step(J, z, k); // T_q ... T_k
  cplx d{0.0, 0.0};
  for (int k = 1; k <= q; ++k) {
    Eigen::Matrix2cd dk = Eigen::Matrix2cd::Zero();
    dk(0, 0) = 1.0 / J.a_at(k);
    d += (suffix[k] * dk * prefix[k - 1]).trace();
  }
  return d.real();
}

double lyapunov(const PeriodicJacobi& J, cplx z) {
  const Eigen::Matrix2cd m = transfer(J, z, J.q);
  const cplx tr = m.trace();
  const cplx disc = std::sqrt(tr * tr - 4.0); // det = 1
  const double rho =
      std::max(std::abs(0.5 * (tr + disc)), std::abs(0.5 * (tr - disc)));
  return std::log(std::max(rho, 1.0)) / J.q;
}

double lyapunov_vanishing_fraction(const LimitPeriodicFamily& F,
                                   int points_per_band, double tol) {
  const PeriodicJacobi& J = F.deepest();
  const BandSet bands = band_structure(J, std::max(64, 2 * J.q));
  int total = 0, vanish = 0;
  for (const auto& [alpha, beta] : bands.bands) {
    const double len = beta - alpha;
    if (len <= 0.0) continue;
    for (int i = 0; i < points_per_band; ++i) {
      // strictly interior grid
      const double E = alpha + len * (i + 0.5) / points_per_band;
      ++total;
      if (lyapunov(J, cplx{E, 0.0}) < tol) ++vanish;
    }
  }
  if (total == 0) throw NumericError("lyapunov_vanishing_fraction: empty bands");
  return static_cast<double>(vanish) / total;
}

Eigen::VectorXd dirichlet_eigenvalues(const PeriodicJacobi& J, int n) {
  if (n < 2) throw ValidationError("dirichlet_eigenvalues: n must be >= 2");
  Eigen::VectorXd diag(n), off(n - 1);
  for (int k = 1; k <= n; ++k) diag(k - 1) = J.b_at(k);
  for (int k = 1; k < n; ++k) off(k - 1) = J.a_at(k);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericError("dirichlet_eigenvalues: eigensolver failed");
  return es.eigenvalues();
}

double dirichlet_dos_distance(const PeriodicJacobi& J, const BandSet& bands,
                              int n) {
  const Eigen::VectorXd ev = dirichlet_eigenvalues(J, n);
  double sup = 0.0;
  for (int j = 0; j < n; ++j) {
    const double F = dos_cdf(J, bands, ev(j));
    sup = std::max(sup, std::abs(F - static_cast<double>(j + 1) / n));
    sup = std::max(sup, std::abs(F - static_cast<double>(j) / n));
  }
  return sup;
}

namespace {

double dist_to_set(const BandSet& S, double x) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : S.bands) {
    if (x < a)
      d = std::min(d, a - x);
    else if (x > b)
      d = std::min(d, x - b);
    else
      return 0.0;
  }
  return d;
}

// sup over x in F of dist(x, K): dist(., K) is piecewise linear with
// breakpoints at K's endpoints and gap midpoints, so the sup over each closed
// interval of F is attained on a finite candidate set.
double directed_hausdorff(const BandSet& F, const BandSet& K) {
  std::vector<double> breaks;
  for (const auto& [a, b] : K.bands) {
    breaks.push_back(a);
    breaks.push_back(b);
  }
  for (std::size_t j = 0; j + 1 < K.bands.size(); ++j)
    breaks.push_back(0.5 * (K.bands[j].second + K.bands[j + 1].first));
  double sup = 0.0;
  for (const auto& [a, b] : F.bands) {
    sup = std::max(sup, dist_to_set(K, a));
    sup = std::max(sup, dist_to_set(K, b));
    for (const double x : breaks)
      if (x > a && x < b) sup = std::max(sup, dist_to_set(K, x));
  }
  return sup;
}

} // namespace

double hausdorff_distance(const BandSet& x, const BandSet& y) {
  if (x.bands.empty() || y.bands.empty())
    throw ValidationError("hausdorff_distance: empty band set");
  return std::max(directed_hausdorff(x, y), directed_hausdorff(y, x));
}

double ball_measure(const BandSet& S, double x, double delta) {
  if (!(delta > 0.0)) throw ValidationError("ball_measure: delta must be > 0");
  const double lo = x - delta, hi = x + delta;
  double m = 0.0;
  for (const auto& [a, b] : S.bands)
    m += std::max(0.0, std::min(hi, b) - std::max(lo, a));
  return m;
}

double homogeneity_min_ratio(const BandSet& S, double delta) {
  if (S.bands.empty()) throw ValidationError("homogeneity_min_ratio: empty set");
  // x -> |B_delta(x) cap S| is piecewise linear in x; candidate minima are
  // band endpoints and endpoint +/- delta, restricted to S.
  std::vector<double> candidates;
  for (const auto& [a, b] : S.bands) {
    candidates.push_back(a);
    candidates.push_back(b);
  }
  const std::size_t base = candidates.size();
  for (std::size_t i = 0; i < base; ++i) {
    candidates.push_back(candidates[i] - delta);
    candidates.push_back(candidates[i] + delta);
  }
  double worst = std::numeric_limits<double>::infinity();
  for (const double x : candidates) {
    if (!S.contains(x)) continue;
    worst = std::min(worst, ball_measure(S, x, delta) / delta);
  }
  return worst;
}

std::vector<std::pair<double, double>>
homogeneity_scan(const BandSet& S, const std::vector<double>& deltas) {
  std::vector<std::pair<double, double>> out;
  out.reserve(deltas.size());
  for (const double d : deltas) out.emplace_back(d, homogeneity_min_ratio(S, d));
  return out;
}

double homogeneity_witness(const std::vector<BandSet>& stage_bands,
                           const std::vector<int>& periods) {
  if (stage_bands.size() != periods.size() || stage_bands.empty())
    throw ValidationError("homogeneity_witness: mismatched stage data");
  double c = 1.0 + 1e-9;
  for (std::size_t n = 0; n < stage_bands.size(); ++n) {
    double minlen = std::numeric_limits<double>::infinity();
    for (const auto& [a, b] : stage_bands[n].bands)
      minlen = std::min(minlen, b - a);
    if (!(minlen > 0.0))
      throw NumericError("homogeneity_witness: zero-length band");
    c = std::max(c, std::pow(minlen, -1.0 / periods[n]));
  }
  return c;
}

} // namespace jbl
