#include "jbl/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "jbl/spectral.hpp"

namespace jbl {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

// 64-point Gauss-Legendre nodes/weights on [-1, 1], generated by Newton on
// the Legendre recurrence. Cached.
struct GaussLegendre {
  Eigen::VectorXd x, w;
  explicit GaussLegendre(int n) : x(n), w(n) {
    for (int i = 0; i < n; ++i) {
      double t = std::cos(kPi * (i + 0.75) / (n + 0.5));
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = t;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        const double dp = n * (t * p1 - p0) / (t * t - 1.0);
        const double dt = p1 / dp;
        t -= dt;
        if (std::abs(dt) < 1e-15) break;
      }
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (t * p1 - p0) / (t * t - 1.0);
      x(i) = t;
      w(i) = 2.0 / ((1.0 - t * t) * dp * dp);
    }
  }
};

const GaussLegendre& gl64() {
  static const GaussLegendre g(64);
  return g;
}

// Largest-modulus component rotated real positive; ties broken by the lowest
// index. Keeps fibers reproducible across eigensolver runs.
void fix_phase(Eigen::MatrixXcd& V) {
  for (Eigen::Index j = 0; j < V.cols(); ++j) {
    Eigen::Index k = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < V.rows(); ++i) {
      const double m = std::abs(V(i, j));
      if (m > best + 1e-14) {
        best = m;
        k = i;
      }
    }
    if (best > 0.0) V.col(j) *= std::conj(V(k, j)) / best;
  }
}

} // namespace

std::vector<double> midpoint_grid(int M) {
  if (M < 1) throw ValidationError("midpoint_grid: M must be >= 1");
  std::vector<double> g(M);
  for (int m = 0; m < M; ++m) g[m] = 2.0 * kPi * (m + 0.5) / M;
  return g;
}

Eigen::MatrixXcd fiber_j_matrix(const PeriodicJacobi& J, double theta) {
  const int q = J.q;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(q, q);
  if (q == 1) {
    m(0, 0) = J.b(0) + 2.0 * J.a(0) * std::cos(theta);
    return m;
  }
  if (q == 2) {
    m(0, 0) = J.b(0);
    m(1, 1) = J.b(1);
    m(0, 1) = J.a(0) + std::exp(-kI * theta) * J.a(1);
    m(1, 0) = std::conj(m(0, 1));
    return m;
  }
  for (int j = 0; j < q; ++j) m(j, j) = J.b(j);
  for (int j = 0; j + 1 < q; ++j) m(j, j + 1) = m(j + 1, j) = J.a(j);
  m(0, q - 1) = std::exp(-kI * theta) * J.a(q - 1);
  m(q - 1, 0) = std::conj(m(0, q - 1));
  return m;
}

Eigen::MatrixXcd fiber_a_matrix(const PeriodicJacobi& J, double theta) {
  const int q = J.q;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(q, q);
  if (q == 1) {
    m(0, 0) = -2.0 * J.a(0) * std::sin(theta);
    return m;
  }
  if (q == 2) {
    m(0, 1) = kI * (J.a(0) - std::exp(-kI * theta) * J.a(1));
    m(1, 0) = std::conj(m(0, 1));
    return m;
  }
  for (int j = 0; j + 1 < q; ++j) {
    m(j, j + 1) = kI * J.a(j);
    m(j + 1, j) = -kI * J.a(j);
  }
  m(0, q - 1) = -kI * std::exp(-kI * theta) * J.a(q - 1);
  m(q - 1, 0) = std::conj(m(0, q - 1));
  return m;
}

Eigen::MatrixXcd fiber_j_derivative(const PeriodicJacobi& J, double theta) {
  const int q = J.q;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(q, q);
  if (q == 1) {
    m(0, 0) = -2.0 * J.a(0) * std::sin(theta);
    return m;
  }
  if (q == 2) {
    m(0, 1) = -kI * std::exp(-kI * theta) * J.a(1);
    m(1, 0) = std::conj(m(0, 1));
    return m;
  }
  m(0, q - 1) = -kI * std::exp(-kI * theta) * J.a(q - 1);
  m(q - 1, 0) = std::conj(m(0, q - 1));
  return m;
}

double FloquetFiber::min_gap() const {
  if (lambdas.size() < 2) return std::numeric_limits<double>::infinity();
  double g = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j + 1 < lambdas.size(); ++j)
    g = std::min(g, lambdas(j + 1) - lambdas(j));
  return g;
}

FloquetFiber build_fiber(const PeriodicJacobi& J, double theta) {
  FloquetFiber f;
  f.q = J.q;
  f.theta = theta;
  f.j_theta = fiber_j_matrix(J, theta);
  f.a_theta = fiber_a_matrix(J, theta);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(f.j_theta);
  if (es.info() != Eigen::Success)
    throw NumericError("build_fiber: eigensolver failed");
  f.lambdas = es.eigenvalues();
  f.vectors = es.eigenvectors();
  fix_phase(f.vectors);

  const double scale = std::max(1.0, f.lambdas.cwiseAbs().maxCoeff());
  const bool symmetry_point =
      std::abs(std::sin(theta)) < 1e-9; // theta at 0 or pi (mod 2 pi)
  if (!symmetry_point && f.min_gap() < 1e-11 * scale)
    throw FiberDegeneracyError(
        "build_fiber: degenerate fiber spectrum away from theta in {0, pi}");

  const Eigen::MatrixXcd dJ = fiber_j_derivative(J, theta);
  f.lambda_dots.resize(J.q);
  for (int j = 0; j < J.q; ++j)
    f.lambda_dots(j) = (f.vectors.col(j).adjoint() * dJ * f.vectors.col(j))(0).real();
  return f;
}

Eigen::MatrixXcd fiber_q(const FloquetFiber& f) {
  if (std::abs(std::sin(f.theta)) < 1e-12)
    throw ValidationError("fiber_q: Q_theta is undefined at theta in {0, pi}");
  Eigen::MatrixXcd Q = Eigen::MatrixXcd::Zero(f.q, f.q);
  for (int j = 0; j < f.q; ++j)
    Q += (static_cast<double>(f.q) * f.lambda_dots(j)) * f.vectors.col(j) *
         f.vectors.col(j).adjoint();
  return Q;
}

std::vector<Eigen::VectorXcd> fourier_forward(const WavePacket& phi, int q,
                                              int M) {
  if (q < 1) throw ValidationError("fourier_forward: q must be >= 1");
  const auto grid = midpoint_grid(M);
  std::vector<Eigen::VectorXcd> out(M, Eigen::VectorXcd::Zero(q));
  for (std::int64_t n = phi.site_lo(); n <= phi.site_hi(); ++n) {
    const cplx v = phi.at(n);
    if (v == cplx{0.0, 0.0}) continue;
    // n = j + l q with j in [1, q]
    std::int64_t j = (n - 1) % q;
    if (j < 0) j += q;
    const std::int64_t l = (n - (j + 1)) / q;
    for (int m = 0; m < M; ++m)
      out[m](j) += v * std::exp(-kI * (static_cast<double>(l) * grid[m]));
  }
  return out;
}

WavePacket fourier_inverse(const std::vector<Eigen::VectorXcd>& values, int q,
                           std::int64_t site_lo, std::int64_t site_hi) {
  if (values.empty()) throw ValidationError("fourier_inverse: empty grid");
  if (site_hi < site_lo)
    throw ValidationError("fourier_inverse: empty site window");
  const int M = static_cast<int>(values.size());
  const auto grid = midpoint_grid(M);

  auto period_of = [q](std::int64_t n) {
    std::int64_t j = (n - 1) % q;
    if (j < 0) j += q;
    return (n - (j + 1)) / q;
  };
  const std::int64_t l_lo = period_of(site_lo);
  const std::int64_t l_hi = period_of(site_hi);
  if (l_hi - l_lo + 1 > M)
    throw ResolutionError(
        "fourier_inverse: site window spans more periods than the grid resolves");

  WavePacket out;
  out.offset = site_lo;
  out.amp = Eigen::VectorXcd::Zero(site_hi - site_lo + 1);
  for (std::int64_t n = site_lo; n <= site_hi; ++n) {
    std::int64_t j = (n - 1) % q;
    if (j < 0) j += q;
    const std::int64_t l = (n - (j + 1)) / q;
    cplx s{0.0, 0.0};
    for (int m = 0; m < M; ++m)
      s += values[m](j) * std::exp(kI * (static_cast<double>(l) * grid[m]));
    out.amp(n - site_lo) = s / static_cast<double>(M);
  }
  return out;
}

double BandSet::total_measure() const {
  double s = 0.0;
  for (const auto& [a, b] : bands) s += b - a;
  return s;
}

bool BandSet::contains(double E) const {
  for (const auto& [a, b] : bands)
    if (E >= a && E <= b) return true;
  return false;
}

int BandSet::interior_band(double E) const {
  for (std::size_t j = 0; j < bands.size(); ++j)
    if (E > bands[j].first && E < bands[j].second) return static_cast<int>(j);
  return -1;
}

namespace {

// Locate the discriminant's critical point inside a gap [lo, hi]: bisection
// on the sign change of the derivative, golden-section fallback.
double locate_critical(const PeriodicJacobi& J, double lo, double hi) {
  double dlo = discriminant_derivative(J, lo);
  double dhi = discriminant_derivative(J, hi);
  if (dlo * dhi < 0.0) {
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const double dm = discriminant_derivative(J, mid);
      if (dm == 0.0 || hi - lo < 1e-15 * std::max(1.0, std::abs(mid)))
        return mid;
      if (dlo * dm < 0.0) {
        hi = mid;
        dhi = dm;
      } else {
        lo = mid;
        dlo = dm;
      }
    }
    return 0.5 * (lo + hi);
  }
  // Extremum of |discriminant| by golden section.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = std::abs(discriminant(J, x1)), f2 = std::abs(discriminant(J, x2));
  for (int iter = 0; iter < 200 && hi - lo > 1e-14; ++iter) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = std::abs(discriminant(J, x2));
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = std::abs(discriminant(J, x1));
    }
  }
  return 0.5 * (lo + hi);
}

} // namespace

BandSet band_structure(const PeriodicJacobi& J, int M) {
  if (M < 2 * J.q)
    throw ValidationError("band_structure: sweep size must be >= 2q");
  const int q = J.q;
  const FloquetFiber f0 = build_fiber(J, 0.0);
  const FloquetFiber fp = build_fiber(J, kPi);
  std::vector<double> edges;
  edges.reserve(2 * q);
  for (int j = 0; j < q; ++j) {
    edges.push_back(f0.lambdas(j));
    edges.push_back(fp.lambdas(j));
  }
  std::sort(edges.begin(), edges.end());

  BandSet out;
  out.bands.reserve(q);
  for (int j = 0; j < q; ++j) {
    const double alpha = edges[2 * j], beta = edges[2 * j + 1];
    if (!(beta >= alpha))
      throw NumericError("band_structure: band edges out of order");
    out.bands.emplace_back(alpha, beta);
  }
  // Sanity of the pairing: the discriminant stays within [-2, 2] inside each
  // band and leaves it inside each open gap.
  const double tol = 1e-7 * std::max(1.0, std::abs(edges.back()));
  for (int j = 0; j < q; ++j) {
    const auto& [alpha, beta] = out.bands[j];
    if (beta - alpha > 1e-12) {
      const double mid = 0.5 * (alpha + beta);
      if (std::abs(discriminant(J, mid)) > 2.0 + tol)
        throw NumericError("band_structure: discriminant exceeds 2 inside a band");
    }
    if (j + 1 < q && out.bands[j + 1].first > beta + 1e-12) {
      const double gmid = 0.5 * (beta + out.bands[j + 1].first);
      if (std::abs(discriminant(J, gmid)) < 2.0 - tol)
        throw NumericError("band_structure: discriminant dips below 2 in a gap");
    }
  }
  out.crit.reserve(std::max(0, q - 1));
  for (int j = 0; j + 1 < q; ++j) {
    const double beta = out.bands[j].second;
    const double alpha_next = out.bands[j + 1].first;
    if (alpha_next - beta <= 1e-9) {
      out.crit.push_back(beta); // closed gap: the edge itself
    } else {
      out.crit.push_back(locate_critical(J, beta, alpha_next));
    }
  }
  return out;
}

double dos_density(const PeriodicJacobi& J, const BandSet& bands, double E) {
  const int r = bands.interior_band(E);
  if (r < 0) return 0.0;
  const int q = J.q;
  double logv = -std::log(kPi);
  for (int j = 0; j < q - 1; ++j) logv += std::log(std::abs(E - bands.crit[j]));
  for (int j = 0; j < q; ++j) {
    logv -= 0.5 * std::log(std::abs(E - bands.bands[j].first));
    logv -= 0.5 * std::log(std::abs(E - bands.bands[j].second));
  }
  return std::exp(logv);
}

namespace {

// Integrand after E = mid + half*sin(s) inside band r: the band's own edge
// factors cancel against the Jacobian, leaving a smooth function of s.
double dos_band_integrand(const PeriodicJacobi& J, const BandSet& bands, int r,
                          double E) {
  const int q = J.q;
  double logv = -std::log(kPi);
  for (int j = 0; j < q - 1; ++j) logv += std::log(std::abs(E - bands.crit[j]));
  for (int j = 0; j < q; ++j) {
    if (j == r) continue;
    logv -= 0.5 * std::log(std::abs(E - bands.bands[j].first));
    logv -= 0.5 * std::log(std::abs(E - bands.bands[j].second));
  }
  return std::exp(logv);
}

double dos_band_piece(const PeriodicJacobi& J, const BandSet& bands, int r,
                      double lo, double hi) {
  const auto& [alpha, beta] = bands.bands[r];
  if (beta - alpha <= 0.0 || hi <= lo) return 0.0;
  const double mid = 0.5 * (alpha + beta), half = 0.5 * (beta - alpha);
  auto s_of = [&](double E) {
    const double u = std::clamp((E - mid) / half, -1.0, 1.0);
    return std::asin(u);
  };
  const double s_lo = s_of(lo), s_hi = s_of(hi);
  const auto& g = gl64();
  // Composite panels; refine until stable.
  double prev = 0.0;
  for (int panels = 1; panels <= 64; panels *= 2) {
    double total = 0.0;
    const double width = (s_hi - s_lo) / panels;
    for (int p = 0; p < panels; ++p) {
      const double c = s_lo + (p + 0.5) * width;
      double acc = 0.0;
      for (int i = 0; i < g.x.size(); ++i) {
        const double s = c + 0.5 * width * g.x(i);
        const double E = mid + half * std::sin(s);
        acc += g.w(i) * dos_band_integrand(J, bands, r, E);
      }
      total += 0.5 * width * acc;
    }
    if (panels > 1 && std::abs(total - prev) < 1e-11 * std::max(1.0, std::abs(total)))
      return total;
    prev = total;
  }
  return prev;
}

} // namespace

double dos_interval(const PeriodicJacobi& J, const BandSet& bands, double lo,
                    double hi) {
  if (hi < lo) throw ValidationError("dos_interval: empty interval");
  double k = 0.0;
  for (std::size_t r = 0; r < bands.bands.size(); ++r) {
    const double a = std::max(lo, bands.bands[r].first);
    const double b = std::min(hi, bands.bands[r].second);
    if (b > a) k += dos_band_piece(J, bands, static_cast<int>(r), a, b);
  }
  const double check = dos_interval_rotation(J, bands, lo, hi);
  if (std::abs(k - check) > 1e-4)
    throw NumericError("dos_interval: quadrature and rotation-number routes disagree");
  return k;
}

namespace {

// Invert the monotone branch lambda_j(theta) on [0, pi] for the target y.
double invert_branch(const PeriodicJacobi& J, int j, double y) {
  double lo = 0.0, hi = kPi;
  double vlo = build_fiber(J, lo).lambdas(j);
  double vhi = build_fiber(J, hi).lambdas(j);
  const bool increasing = vhi > vlo;
  if (y <= std::min(vlo, vhi)) return increasing ? lo : hi;
  if (y >= std::max(vlo, vhi)) return increasing ? hi : lo;
  for (int iter = 0; iter < 100; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double vm = build_fiber(J, mid).lambdas(j);
    if ((vm < y) == increasing)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-13) break;
  }
  return 0.5 * (lo + hi);
}

} // namespace

double dos_interval_rotation(const PeriodicJacobi& J, const BandSet& bands,
                             double lo, double hi) {
  if (hi < lo) throw ValidationError("dos_interval_rotation: empty interval");
  double k = 0.0;
  for (std::size_t j = 0; j < bands.bands.size(); ++j) {
    const double a = std::max(lo, bands.bands[j].first);
    const double b = std::min(hi, bands.bands[j].second);
    if (b <= a) continue;
    const double ta = invert_branch(J, static_cast<int>(j), a);
    const double tb = invert_branch(J, static_cast<int>(j), b);
    k += std::abs(tb - ta) / (kPi * J.q);
  }
  return k;
}

double dos_cdf(const PeriodicJacobi& J, const BandSet& bands, double E) {
  if (E <= bands.lo()) return 0.0;
  if (E >= bands.hi()) return 1.0;
  return dos_interval_rotation(J, bands, bands.lo(), E);
}

double c3_witness(const PeriodicJacobi& J, int sample_size) {
  double worst = std::numeric_limits<double>::infinity();
  for (int m = 0; m < sample_size; ++m) {
    const double theta = kPi * (m + 0.5) / sample_size; // (0, pi)
    const FloquetFiber f = build_fiber(J, theta);
    const double s = std::abs(std::sin(theta));
    for (int j = 0; j < J.q; ++j)
      worst = std::min(worst, std::abs(f.lambda_dots(j)) / s);
  }
  if (!(worst > 0.0))
    throw NumericError("c3_witness: vanishing eigenvalue derivative off {0, pi}");
  const double c3 = std::pow(worst, -1.0 / J.q);
  return std::max(c3, 1.0 + 1e-9);
}

double c2_witness(const PeriodicJacobi& J, const BandSet& bands) {
  double worst = 0.0;
  std::vector<double> edges;
  for (const auto& [a, b] : bands.bands) {
    edges.push_back(a);
    edges.push_back(b);
  }
  for (const double e : edges) {
    for (double w = 1e-7; w <= 0.3; w *= 4.0) {
      const double k = dos_interval_rotation(J, bands, e - w, e + w);
      worst = std::max(worst, k / std::sqrt(2.0 * w));
    }
  }
  const double c2 = std::pow(worst, 1.0 / J.q);
  return std::max(c2 * 1.02, 1.0 + 1e-9); // 2% slack over the sampled sup
}

} // namespace jbl
