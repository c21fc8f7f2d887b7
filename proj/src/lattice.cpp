#include "jbl/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace jbl {

namespace {

// Mathematical mod into [0, q).
inline std::int64_t pmod(std::int64_t n, std::int64_t q) {
  std::int64_t r = n % q;
  return r < 0 ? r + q : r;
}

} // namespace

PeriodicJacobi::PeriodicJacobi(int period, Eigen::VectorXd off,
                               Eigen::VectorXd diag)
    : q(period), a(std::move(off)), b(std::move(diag)) {
  if (q < 1) throw ValidationError("PeriodicJacobi: period must be >= 1");
  if (a.size() != q || b.size() != q)
    throw ValidationError("PeriodicJacobi: coefficient lists must have length q");
  if (!(a.minCoeff() > 0.0))
    throw ValidationError("PeriodicJacobi: off-diagonal coefficients must be positive");
  if (!a.allFinite() || !b.allFinite())
    throw ValidationError("PeriodicJacobi: coefficients must be finite");
}

double PeriodicJacobi::a_at(std::int64_t site) const {
  return a(static_cast<int>(pmod(site - 1, q)));
}

double PeriodicJacobi::b_at(std::int64_t site) const {
  return b(static_cast<int>(pmod(site - 1, q)));
}

double PeriodicJacobi::class_bound() const {
  const double norm = b.cwiseAbs().maxCoeff() + 2.0 * a.maxCoeff();
  return std::max(norm, 1.0 / a.minCoeff());
}

bool PeriodicJacobi::in_class(double R) const {
  return R > 0.0 && class_bound() <= R;
}

double coefficient_distance(const PeriodicJacobi& x, const PeriodicJacobi& y) {
  const std::int64_t period = std::lcm<std::int64_t>(x.q, y.q);
  double sup = 0.0;
  for (std::int64_t n = 1; n <= period; ++n) {
    sup = std::max(sup, std::abs(x.a_at(n) - y.a_at(n)));
    sup = std::max(sup, std::abs(x.b_at(n) - y.b_at(n)));
  }
  return 3.0 * sup;
}

LimitPeriodicFamily::LimitPeriodicFamily(std::vector<PeriodicJacobi> s,
                                         double eta_, double kappa_, double c0_)
    : stages(std::move(s)), eta(eta_), kappa(kappa_), c0(c0_) {
  if (stages.empty()) throw ValidationError("LimitPeriodicFamily: no stages");
  if (!(eta > 0.0)) throw ValidationError("LimitPeriodicFamily: eta must be > 0");
  if (!(kappa > 10.0))
    throw ValidationError("LimitPeriodicFamily: kappa must be > 10");
  if (!(c0 > 1.0)) throw ValidationError("LimitPeriodicFamily: c0 must be > 1");
  for (std::size_t n = 0; n + 1 < stages.size(); ++n) {
    const int qa = stages[n].q, qb = stages[n + 1].q;
    if (qb % qa != 0 || qa == qb)
      throw ValidationError(
          "LimitPeriodicFamily: consecutive periods must divide and differ");
  }
  // Exponential-class decay over the stored stages: the weighted distances
  // exp(eta q_{n+1}) d_n must be nonincreasing. The deepest stage has zero
  // distance, so only interior stages constrain.
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n + 1 < stages.size(); ++n) {
    const double w = std::exp(eta * stages[n + 1].q) * stage_distance(n);
    if (w > prev * (1.0 + 1e-12))
      throw ValidationError(
          "LimitPeriodicFamily: stage distances violate the exponential-class decay");
    prev = w;
  }
}

double LimitPeriodicFamily::stage_distance(std::size_t n) const {
  if (n >= stages.size())
    throw ValidationError("LimitPeriodicFamily: stage index out of range");
  return coefficient_distance(stages[n], stages.back());
}

double LimitPeriodicFamily::time_scale_log10(std::size_t n) const {
  if (n + 1 >= stages.size())
    return kappa * stages.back().q * std::log10(c0); // last stage: reuse own period
  return kappa * stages[n + 1].q * std::log10(c0);
}

double LimitPeriodicFamily::class_bound() const {
  double R = 0.0;
  for (const auto& s : stages) R = std::max(R, s.class_bound());
  return R;
}

Eigen::VectorXcd TruncatedOperator::apply(const Eigen::VectorXcd& v) const {
  const int n = size();
  Eigen::VectorXcd out(n);
  for (int i = 0; i < n; ++i) {
    cplx s = diag(i) * v(i);
    if (i > 0) s += offdiag(i - 1) * v(i - 1);
    if (i + 1 < n) s += offdiag(i) * v(i + 1);
    out(i) = s;
  }
  return out;
}

Eigen::MatrixXd TruncatedOperator::dense() const {
  const int n = size();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  M.diagonal() = diag;
  for (int i = 0; i + 1 < n; ++i) M(i, i + 1) = M(i + 1, i) = offdiag(i);
  return M;
}

double TruncatedOperator::norm_bound() const {
  return diag.cwiseAbs().maxCoeff() + 2.0 * offdiag.maxCoeff();
}

namespace {

TruncatedOperator truncate(const PeriodicJacobi& J, int N) {
  if (N < 0) throw ValidationError("build_truncation: window size must be >= 0");
  TruncatedOperator T;
  T.half_width = N;
  T.diag.resize(2 * N + 1);
  T.offdiag.resize(std::max(0, 2 * N));
  for (std::int64_t n = -N; n <= N; ++n) {
    T.diag(T.index_of(n)) = J.b_at(n);
    if (n < N) T.offdiag(T.index_of(n)) = J.a_at(n);
  }
  return T;
}

} // namespace

TruncatedOperator build_truncation(const PeriodicJacobi& J, int N) {
  return truncate(J, N);
}

TruncatedOperator build_truncation(const LimitPeriodicFamily& F, int N) {
  return truncate(F.deepest(), N);
}

Eigen::VectorXcd CommutatorOperator::apply(const Eigen::VectorXcd& v) const {
  const int n = size();
  const cplx iu{0.0, 1.0};
  Eigen::VectorXcd out(n);
  for (int i = 0; i < n; ++i) {
    cplx s{0.0, 0.0};
    if (i + 1 < n) s += offdiag(i) * v(i + 1);
    if (i > 0) s -= offdiag(i - 1) * v(i - 1);
    out(i) = iu * s;
  }
  return out;
}

Eigen::MatrixXcd CommutatorOperator::dense() const {
  const int n = size();
  const cplx iu{0.0, 1.0};
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {
    M(i, i + 1) = iu * offdiag(i);
    M(i + 1, i) = -iu * offdiag(i);
  }
  return M;
}

CommutatorOperator commutator_operator(const TruncatedOperator& T) {
  CommutatorOperator A;
  A.half_width = T.half_width;
  A.offdiag = T.offdiag;
  return A;
}

WavePacket WavePacket::delta(std::int64_t site) {
  WavePacket p;
  p.offset = site;
  p.amp = Eigen::VectorXcd::Ones(1);
  return p;
}

WavePacket WavePacket::trimmed(double tol) const {
  int lo = 0, hi = static_cast<int>(amp.size()) - 1;
  while (lo <= hi && std::abs(amp(lo)) <= tol) ++lo;
  while (hi >= lo && std::abs(amp(hi)) <= tol) --hi;
  WavePacket out;
  if (lo > hi) {
    out.offset = offset;
    out.amp = Eigen::VectorXcd::Zero(1);
    return out;
  }
  out.offset = offset + lo;
  out.amp = amp.segment(lo, hi - lo + 1);
  return out;
}

WavePacket packet_add(const WavePacket& x, const WavePacket& y, cplx cy) {
  const std::int64_t lo = std::min(x.site_lo(), y.site_lo());
  const std::int64_t hi = std::max(x.site_hi(), y.site_hi());
  WavePacket out;
  out.offset = lo;
  out.amp = Eigen::VectorXcd::Zero(hi - lo + 1);
  for (std::int64_t n = lo; n <= hi; ++n)
    out.amp(n - lo) = x.at(n) + cy * y.at(n);
  return out;
}

double packet_distance(const WavePacket& x, const WavePacket& y) {
  return packet_add(x, y, cplx{-1.0, 0.0}).norm2();
}

cplx packet_inner(const WavePacket& x, const WavePacket& y) {
  const std::int64_t lo = std::max(x.site_lo(), y.site_lo());
  const std::int64_t hi = std::min(x.site_hi(), y.site_hi());
  cplx s{0.0, 0.0};
  for (std::int64_t n = lo; n <= hi; ++n) s += std::conj(x.at(n)) * y.at(n);
  return s;
}

double packet_moment(const WavePacket& phi, double p) {
  if (!(p > 0.0)) throw ValidationError("packet_moment: p must be > 0");
  double s = 0.0;
  for (std::int64_t n = phi.site_lo(); n <= phi.site_hi(); ++n) {
    const double w = std::pow(std::abs(static_cast<double>(n)), p) + 1.0;
    s += w * std::norm(phi.at(n));
  }
  return s;
}

WavePacket apply_position(const WavePacket& phi) {
  WavePacket out = phi;
  for (Eigen::Index k = 0; k < out.amp.size(); ++k)
    out.amp(k) *= static_cast<double>(out.offset + k);
  return out;
}

Eigen::VectorXcd embed(const WavePacket& phi, const TruncatedOperator& T) {
  if (phi.site_lo() < T.site_lo() || phi.site_hi() > T.site_hi())
    throw ValidationError("embed: packet support exceeds the window");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(T.size());
  for (std::int64_t n = phi.site_lo(); n <= phi.site_hi(); ++n)
    v(T.index_of(n)) = phi.at(n);
  return v;
}

WavePacket extract(const Eigen::VectorXcd& v, const TruncatedOperator& T) {
  WavePacket p;
  p.offset = T.site_lo();
  p.amp = v;
  return p;
}

} // namespace jbl
