#include "hcspec/exact1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "hcspec/errors.hpp"
#include "hcspec/roots.hpp"

namespace hcspec {

namespace {

constexpr double kPi = std::numbers::pi;
using cd = std::complex<double>;

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

/// Homogeneous layer: length ell and r = 1/sqrt(sigma) (1 outside, sqrt(eps) inside).
struct Layer {
  double x0, x1, r;
  double length() const { return x1 - x0; }
};

std::vector<Layer> layers_of(const Geometry1D& g, double epsilon) {
  std::vector<Layer> out;
  double x = g.x_lo();
  double r_in = std::sqrt(epsilon);
  for (const auto& iv : g.inclusions()) {
    out.push_back({x, iv.lo, 1.0});
    out.push_back({iv.lo, iv.hi, r_in});
    x = iv.hi;
  }
  out.push_back({x, g.x_hi(), 1.0});
  return out;
}

Eigen::Matrix2d layer_matrix(const Layer& L, double s) {
  double ell = L.length(), kl = s * L.r * ell, sc = sinc(kl), c = std::cos(kl);
  Eigen::Matrix2d T;
  T << c, L.r * L.r * ell * sc, -s * s * ell * sc, c;
  return T;
}

double optical_length(const std::vector<Layer>& layers) {
  double phi = 0.0;
  for (const auto& L : layers) phi += L.length() * L.r;
  return phi;
}

/// Prüfer zero count of the solution started from (u0, q0) over all layers; also returns the end state.
int count_zeros(const std::vector<Layer>& layers, double s, Eigen::Vector2d& state) {
  int zeros = 0;
  for (const auto& L : layers) {
    double kappa = s * L.r;
    if (kappa > 0) {
      double A = state(0), B = state(1) * L.r / s;
      double phi = std::atan2(A, B);
      double kl = kappa * L.length();
      zeros += static_cast<int>(std::floor((kl + phi) / kPi) - std::floor(phi / kPi));
    }
    state = layer_matrix(L, s) * state;
  }
  return zeros;
}

Eigenfunction1D propagate(const std::vector<Layer>& layers, double s, cd u0, cd q0) {
  std::vector<SegmentWave> segs;
  cd u = u0, q = q0;
  for (const auto& L : layers) {
    double kappa = s * L.r;
    SegmentWave w;
    w.x0 = L.x0;
    w.x1 = L.x1;
    w.kappa = kappa;
    w.A = u;
    w.B = kappa > 0 ? q * L.r / s : cd(0.0);
    segs.push_back(w);
    Eigen::Matrix2d T = layer_matrix(L, s);
    cd un = T(0, 0) * u + T(0, 1) * q;
    cd qn = T(1, 0) * u + T(1, 1) * q;
    u = un;
    q = qn;
  }
  return Eigenfunction1D(std::move(segs));
}

/// Sup-norm 1; the value at the first inclusion midpoint made real positive when it is
/// not negligible, otherwise the value at the argmax.
void gauge(Eigenfunction1D& u, const Geometry1D& g) {
  double sup = u.sup_norm();
  if (!(sup > 0)) return;
  u.scale(1.0 / sup);
  cd ref = 0.0;
  if (g.inclusion_count() > 0) {
    const auto& iv = g.inclusions()[0];
    ref = u(0.5 * (iv.lo + iv.hi));
  }
  if (std::abs(ref) < 1e-6) ref = u(u.argmax());
  if (std::abs(ref) > 0) u.scale(std::conj(ref) / std::abs(ref));
}

double bloch_cos(const Geometry1D& g, const BoundaryCondition& bc) {
  const auto& b = std::get<Bloch>(bc);
  if (b.k.size() != 1) throw ConfigError("1D Bloch closure needs a scalar k");
  return std::cos(b.k[0] * g.length());
}

void check_bloch_k(const Geometry1D& g, const BoundaryCondition& bc) {
  if (const auto* b = std::get_if<Bloch>(&bc)) {
    if (b->k.size() != 1) throw ConfigError("1D Bloch closure needs a scalar k");
    if (distance_to_periodic_lattice(b->k, {g.length()}) < kBlochDeltaK)
      throw DomainError("Bloch k lies within delta_k of a periodic (integer) wave vector");
  }
}

double dispersion_value(const std::vector<Layer>& layers, const Geometry1D& g, const BoundaryCondition& bc, double s) {
  Eigen::Matrix2d T = Eigen::Matrix2d::Identity();
  for (const auto& L : layers) T = layer_matrix(L, s) * T;
  if (is_dirichlet(bc)) return T(0, 1);
  if (is_neumann(bc)) return T(1, 0);
  return 0.5 * T.trace() - bloch_cos(g, bc);
}

struct ScanOutcome {
  std::vector<double> roots;
  int halvings = 0;
};

ScanOutcome scan_with_count(const std::function<double(double)>& f, double s_lo, double s_hi, double step,
                            int expected, int max_halvings) {
  RootOptions opt;
  opt.scan_step = step;
  for (int h = 0; h <= max_halvings; ++h) {
    auto roots = find_roots(f, s_lo, s_hi, {}, opt);
    if (static_cast<int>(roots.size()) == expected) return {roots, h};
    if (h == max_halvings)
      throw ScanResolutionError("root scan disagrees with the exact eigenvalue count", expected,
                                static_cast<int>(roots.size()));
    opt.scan_step *= 0.5;
  }
  return {};
}

}  // namespace

std::complex<double> SegmentWave::operator()(double x) const {
  double t = x - x0;
  if (kappa == 0.0) return A + B * t;
  return A * std::cos(kappa * t) + B * std::sin(kappa * t);
}

std::pair<double, double> SegmentWave::sup() const {
  double best = std::abs((*this)(x0)), at = x0;
  double end = std::abs((*this)(x1));
  if (end > best) {
    best = end;
    at = x1;
  }
  if (kappa > 0) {
    // |u|^2 = P + Q cos 2θ + R sin 2θ with θ = kappa t.
    double Q = 0.5 * (std::norm(A) - std::norm(B));
    double R = std::real(A * std::conj(B));
    double theta_end = kappa * (x1 - x0);
    double theta0 = 0.5 * std::atan2(R, Q);
    for (int m = -1; theta0 + m * kPi <= theta_end; ++m) {
      double th = theta0 + m * kPi;
      if (th < 0) continue;
      double v = std::abs((*this)(x0 + th / kappa));
      if (v > best) {
        best = v;
        at = x0 + th / kappa;
      }
    }
  }
  return {best, at};
}

std::complex<double> Eigenfunction1D::operator()(double x) const {
  if (segments_.empty()) return 0.0;
  for (const auto& s : segments_)
    if (x <= s.x1) return s(x);
  return segments_.back()(x);
}

double Eigenfunction1D::sup_norm() const {
  double best = 0.0;
  for (const auto& s : segments_) best = std::max(best, s.sup().first);
  return best;
}

double Eigenfunction1D::argmax() const {
  double best = -1.0, at = 0.0;
  for (const auto& s : segments_) {
    auto [v, x] = s.sup();
    if (v > best) {
      best = v;
      at = x;
    }
  }
  return at;
}

void Eigenfunction1D::scale(std::complex<double> factor) {
  for (auto& s : segments_) {
    s.A *= factor;
    s.B *= factor;
  }
}

std::vector<std::pair<double, std::complex<double>>> Eigenfunction1D::sample(int n) const {
  std::vector<std::pair<double, std::complex<double>>> out;
  if (segments_.empty() || n < 1) return out;
  double lo = segments_.front().x0, hi = segments_.back().x1;
  for (int i = 0; i <= n; ++i) {
    double x = lo + (hi - lo) * i / n;
    out.push_back({x, (*this)(x)});
  }
  return out;
}

Eigen::VectorXd Eigenfunction1D::at(const std::vector<double>& xs) const {
  Eigen::VectorXd v(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) v(i) = std::real((*this)(xs[i]));
  return v;
}

std::vector<double> ExactSpectrum::eigenvalues() const {
  std::vector<double> out;
  for (const auto& m : modes) out.push_back(m.lambda);
  return out;
}

std::vector<double> BranchedSpectrum::all() const {
  std::vector<double> out;
  for (const auto& m : s1) out.push_back(m.lambda);
  for (const auto& m : s2) out.push_back(m.lambda);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

void single_inclusion(const Geometry1D& g, double& L1, double& L2, double& ell) {
  if (g.inclusion_count() != 1) throw ConfigError("single-inclusion characteristic function needs exactly one inclusion");
  const auto& iv = g.inclusions()[0];
  L1 = iv.lo - g.x_lo();
  L2 = g.x_hi() - iv.hi;
  ell = iv.length();
}

}  // namespace

CharacteristicFunction CharacteristicFunction::dirichlet_s2(const Geometry1D& g) {
  CharacteristicFunction cf;
  cf.kind = CharKind::dirichlet_s2;
  single_inclusion(g, cf.L1, cf.L2, cf.ell);
  cf.geometry = g;
  return cf;
}

CharacteristicFunction CharacteristicFunction::neumann_s2(const Geometry1D& g) {
  CharacteristicFunction cf;
  cf.kind = CharKind::neumann_s2;
  single_inclusion(g, cf.L1, cf.L2, cf.ell);
  cf.geometry = g;
  cf.bc = Neumann{};
  return cf;
}

CharacteristicFunction CharacteristicFunction::bloch_limit(double a, double k) {
  if (!(a >= 0.0 && a < 1.0)) throw ConfigError("Bloch cell inclusion half-width must lie in [0, 1)");
  CharacteristicFunction cf;
  cf.kind = CharKind::bloch;
  cf.ell = 2.0 * a;
  cf.L_ext = 2.0 * (1.0 - a);
  cf.period = 2.0;
  cf.k = k;
  cf.bc = Bloch{{k}};
  return cf;
}

CharacteristicFunction CharacteristicFunction::sphere(double a) {
  RadialGeometry check(a);
  CharacteristicFunction cf;
  cf.kind = CharKind::sphere;
  cf.a = check.a;
  return cf;
}

CharacteristicFunction CharacteristicFunction::transfer(const Geometry1D& g, double epsilon, const BoundaryCondition& bc) {
  if (epsilon < 0) throw ConfigError("transfer characteristic function needs epsilon >= 0");
  check_bloch_k(g, bc);
  CharacteristicFunction cf;
  cf.kind = CharKind::transfer;
  cf.geometry = g;
  cf.epsilon = epsilon;
  cf.bc = bc;
  return cf;
}

std::vector<double> CharacteristicFunction::poles_s(double s_max) const {
  std::vector<double> poles;
  auto add = [&](double period, double offset) {
    for (int n = 0;; ++n) {
      double p = (n + offset) * kPi / period;
      if (p > s_max) break;
      if (p > 0) poles.push_back(p);
    }
  };
  switch (kind) {
    case CharKind::dirichlet_s2:
      add(L1, 0.0);
      add(L2, 0.0);
      break;
    case CharKind::neumann_s2:
      add(L1, 0.5);
      add(L2, 0.5);
      break;
    case CharKind::sphere:
      add(1.0 - a, 0.0);
      break;
    default:
      break;
  }
  std::sort(poles.begin(), poles.end());
  return poles;
}

double CharacteristicFunction::value_s(double s) const {
  switch (kind) {
    case CharKind::dirichlet_s2:
      return 1.0 / std::tan(s * L1) + 1.0 / std::tan(s * L2) - s * ell;
    case CharKind::neumann_s2:
      return std::tan(s * L1) + std::tan(s * L2) + s * ell;
    case CharKind::bloch:
      return std::cos(s * L_ext) - 0.5 * s * ell * std::sin(s * L_ext) - std::cos(k * period);
    case CharKind::sphere: {
      double x = s * (1.0 - a);
      double xcot = std::abs(x) < 1e-8 ? 1.0 : x / std::tan(x);
      return a / (1.0 - a) * xcot - s * s * a * a / 3.0 + 1.0;
    }
    case CharKind::transfer:
      return dispersion_value(layers_of(geometry, epsilon), geometry, bc, s);
  }
  return 0.0;
}

double eval_char(const CharacteristicFunction& cf, double lambda) {
  if (!(lambda > 0)) throw DomainError("characteristic function needs lambda > 0");
  double s = std::sqrt(lambda);
  for (double p : cf.poles_s(s + 2 * kTolPole))
    if (std::abs(p - s) <= kTolPole) throw PoleError("characteristic function evaluated at a pole", p * p);
  return cf.value_s(s);
}

Eigen::Matrix2d transfer_matrix(const Geometry1D& g, double epsilon, double s) {
  Eigen::Matrix2d T = Eigen::Matrix2d::Identity();
  for (const auto& L : layers_of(g, epsilon)) T = layer_matrix(L, s) * T;
  return T;
}

int exact_count_below(const Geometry1D& g, double epsilon, const BoundaryCondition& bc, double lambda) {
  if (epsilon < 0) throw ConfigError("epsilon must be >= 0");
  if (!(lambda > 0)) return 0;
  auto layers = layers_of(g, epsilon);
  double s = std::sqrt(lambda);
  if (is_neumann(bc)) {
    Eigen::Vector2d st(1.0, 0.0);
    int z = count_zeros(layers, s, st);
    return z + (st(0) * st(1) < 0 ? 1 : 0);
  }
  Eigen::Vector2d st(0.0, 1.0);
  int z = count_zeros(layers, s, st);
  if (is_dirichlet(bc)) return z;
  check_bloch_k(g, bc);
  double d = dispersion_value(layers, g, bc, s);
  int ref = (z % 2 == 0) ? 1 : -1;
  return z + (((d > 0) ? 1 : -1) != ref ? 1 : 0);
}

ExactSpectrum transfer_spectrum_limit_capable(const Geometry1D& g, double epsilon, const BoundaryCondition& bc,
                                              double lambda_max, const TransferOptions& opt) {
  if (!(lambda_max > 0)) throw ConfigError("lambda_max must be positive");
  if (epsilon < 0) throw ConfigError("epsilon must be >= 0");
  check_bloch_k(g, bc);
  auto layers = layers_of(g, epsilon);
  double s_max = std::sqrt(lambda_max);
  double phi = optical_length(layers);
  double step = opt.scan_step > 0 ? opt.scan_step : kPi / (16.0 * phi);
  double s_lo = std::min(step, s_max) * 1e-3;

  int expected = exact_count_below(g, epsilon, bc, lambda_max * (1.0 + 1e-12));
  if (is_neumann(bc)) expected -= 1;  // the constant mode at lambda = 0
  auto f = [&](double s) { return dispersion_value(layers, g, bc, s); };
  auto scan = scan_with_count(f, s_lo, s_max, step, expected, opt.max_halvings);

  ExactSpectrum out;
  out.epsilon = epsilon;
  out.bc = bc;
  out.lambda_max = lambda_max;
  out.expected_count = expected;
  out.halvings = scan.halvings;
  for (double s : scan.roots) {
    ExactMode m;
    m.lambda = s * s;
    Eigen::Matrix2d T = transfer_matrix(g, epsilon, s);
    m.residual = std::abs(f(s)) / std::max(1.0, T.cwiseAbs().maxCoeff());
    if (is_dirichlet(bc)) {
      m.u = propagate(layers, s, 0.0, 1.0);
    } else if (is_neumann(bc)) {
      m.u = propagate(layers, s, 1.0, 0.0);
    } else {
      double kL = std::get<Bloch>(bc).k[0] * g.length();
      cd mu = std::exp(cd(0.0, -kL));
      Eigen::Vector2cd v1(T(0, 1), mu - T(0, 0)), v2(mu - T(1, 1), T(1, 0));
      Eigen::Vector2cd v = v1.norm() >= v2.norm() ? v1 : v2;
      m.u = propagate(layers, s, v(0), v(1));
    }
    gauge(m.u, g);
    out.modes.push_back(std::move(m));
  }
  out.clusters = close_pairs(out.eigenvalues(), 1e-6);
  return out;
}

ExactSpectrum transfer_spectrum_1d(const Geometry1D& g, double epsilon, const BoundaryCondition& bc, double lambda_max,
                                   const TransferOptions& opt) {
  if (!(epsilon > 0)) throw ConfigError("transfer_spectrum_1d needs epsilon > 0");
  return transfer_spectrum_limit_capable(g, epsilon, bc, lambda_max, opt);
}

RationalityCertificate rationality_certificate(double x, long long q_max, double tol) {
  if (!(x > 0) || !std::isfinite(x)) throw ConfigError("rationality test needs a positive finite number");
  RationalityCertificate cert;
  cert.residual = std::abs(x);
  // Convergents p_k/q_k of the continued fraction of x.
  long double p_prev = 1, q_prev = 0, p = std::floor(static_cast<long double>(x)), q = 1;
  long double rem = static_cast<long double>(x) - p;
  constexpr double kUlp = std::numeric_limits<double>::epsilon();
  for (int iter = 0; iter < 64 && q <= q_max; ++iter) {
    double res = std::abs(x - static_cast<double>(p / q));
    if (res < cert.residual) {
      cert.residual = res;
      cert.p = static_cast<long long>(p);
      cert.q = static_cast<long long>(q);
    }
    // The consistency bound rejects convergents that only match to the tolerance.
    double rep = std::abs(static_cast<double>(q * static_cast<long double>(x) - p));
    if (res <= tol && rep <= 8.0 * static_cast<double>(q) * std::max(1.0, std::abs(x)) * kUlp) {
      cert.rational = true;
      cert.p = static_cast<long long>(p);
      cert.q = static_cast<long long>(q);
      cert.residual = res;
      return cert;
    }
    if (rem == 0) break;
    long double inv = 1.0L / rem;
    long double a = std::floor(inv);
    rem = inv - a;
    long double pn = a * p + p_prev, qn = a * q + q_prev;
    p_prev = p;
    q_prev = q;
    p = pn;
    q = qn;
  }
  return cert;
}

BranchedSpectrum limit_spectrum_1d(const Geometry1D& g, const BoundaryCondition& bc, double lambda_max) {
  if (!(lambda_max > 0)) throw ConfigError("lambda_max must be positive");
  if (is_bloch(bc)) throw ConfigError("limit_spectrum_1d covers Dirichlet and Neumann; use bloch_limit_curve");
  bool dir = is_dirichlet(bc);
  auto cf = dir ? CharacteristicFunction::dirichlet_s2(g) : CharacteristicFunction::neumann_s2(g);
  const double L1 = cf.L1, L2 = cf.L2, ell = cf.ell;
  const double xa = g.inclusions()[0].lo, xb = g.inclusions()[0].hi;
  double s_max = std::sqrt(lambda_max);

  BranchedSpectrum out;
  out.bc = bc;
  out.certificate = rationality_certificate(L1 / L2);

  RootOptions opt;
  opt.scan_step = kPi / (16.0 * (L1 + L2 + ell));
  opt.pole_tol = kTolPole;
  auto f = [&](double s) { return cf.value_s(s); };
  for (double s : find_roots(f, 1e-9, s_max, cf.poles_s(s_max + 1.0), opt)) {
    ExactMode m;
    m.lambda = s * s;
    m.residual = std::abs(f(s));
    std::vector<SegmentWave> segs(3);
    segs[0] = {g.x_lo(), xa, s, 0.0, 0.0};
    segs[1] = {xa, xb, 0.0, 1.0, 0.0};
    segs[2] = {xb, g.x_hi(), s, 1.0, 0.0};
    if (dir) {
      segs[0].B = 1.0 / std::sin(s * L1);
      segs[2].B = -1.0 / std::tan(s * L2);
    } else {
      segs[0].A = 1.0 / std::cos(s * L1);
      segs[2].B = std::tan(s * L2);
    }
    m.u = Eigenfunction1D(std::move(segs));
    m.u.scale(1.0 / m.u.sup_norm());
    out.s2.push_back(std::move(m));
  }

  const auto& c = out.certificate;
  bool s1_exists = c.rational && (dir || (c.p % 2 == 1 && c.q % 2 == 1));
  if (s1_exists) {
    for (int n = dir ? 1 : 0;; ++n) {
      double s = dir ? kPi * c.p * n / L1 : kPi * (2 * n + 1) * c.p / (2.0 * L1);
      if (s > s_max) break;
      ExactMode m;
      m.lambda = s * s;
      std::vector<SegmentWave> segs(3);
      segs[1] = {xa, xb, 0.0, 0.0, 0.0};
      if (dir) {
        // Left alpha sin(s t), right beta sin(s (x_hi - x)); zero total flux.
        double alpha = std::cos(s * L2), beta = -std::cos(s * L1);
        double sign = alpha >= 0 ? 1.0 : -1.0;
        alpha *= sign;
        beta *= sign;
        segs[0] = {g.x_lo(), xa, s, 0.0, alpha};
        segs[2] = {xb, g.x_hi(), s, beta * std::sin(s * L2), -beta * std::cos(s * L2)};
        m.residual = std::max(std::abs(std::sin(s * L1)), std::abs(std::sin(s * L2)));
      } else {
        double alpha = std::sin(s * L2), beta = -std::sin(s * L1);
        double sign = alpha >= 0 ? 1.0 : -1.0;
        alpha *= sign;
        beta *= sign;
        segs[0] = {g.x_lo(), xa, s, alpha, 0.0};
        segs[2] = {xb, g.x_hi(), s, beta * std::cos(s * L2), beta * std::sin(s * L2)};
        m.residual = std::max(std::abs(std::cos(s * L1)), std::abs(std::cos(s * L2)));
      }
      m.u = Eigenfunction1D(std::move(segs));
      m.u.scale(1.0 / m.u.sup_norm());
      out.s1.push_back(std::move(m));
    }
  }
  auto all = out.all();
  for (auto [i, j] : close_pairs(all, 1e-6)) out.clusters.push_back({all[i], all[j]});
  return out;
}

std::vector<DispersionPoint> bloch_limit_curve(double a, const std::vector<double>& k_grid, double lambda_max) {
  if (!(a >= 0.0 && a < 1.0)) throw ConfigError("Bloch cell inclusion half-width must lie in [0, 1)");
  if (!(lambda_max > 0)) throw ConfigError("lambda_max must be positive");
  Geometry1D cell = a > 0 ? Geometry1D(-1.0, 1.0, {{-a, a}}) : Geometry1D(-1.0, 1.0);
  std::vector<DispersionPoint> out;
  for (double k : k_grid) {
    BoundaryCondition bc = Bloch{{k}};
    check_bloch_k(cell, bc);
    auto cf = CharacteristicFunction::bloch_limit(a, k);
    int expected = exact_count_below(cell, 0.0, bc, lambda_max * (1.0 + 1e-12));
    double step = kPi / (16.0 * (2.0 + 2.0 * a));
    double s_max = std::sqrt(lambda_max);
    auto scan = scan_with_count([&](double s) { return cf.value_s(s); }, std::min(step, s_max) * 1e-3, s_max, step,
                                expected, 12);
    int branch = 1;
    for (double s : scan.roots) out.push_back({{k}, branch++, s * s, s, 0.0});
  }
  return out;
}

void write_modes_csv(std::ostream& os, const std::string& branch, const std::vector<ExactMode>& modes, bool header) {
  if (header) os << "branch,index,lambda,omega,residual\n";
  os.precision(17);
  int idx = 1;
  for (const auto& m : modes)
    os << branch << ',' << idx++ << ',' << m.lambda << ',' << std::sqrt(m.lambda) << ',' << m.residual << '\n';
}

void write_trace_csv(std::ostream& os, const Eigenfunction1D& u, int samples) {
  os << "x,u\n";
  os.precision(17);
  for (const auto& [x, v] : u.sample(samples)) os << x << ',' << std::real(v) << '\n';
}

}  // namespace hcspec
