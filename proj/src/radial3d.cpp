#include "hcspec/radial3d.hpp"

#include <cmath>
#include <ostream>

#include "hcspec/errors.hpp"
#include "hcspec/exact1d.hpp"
#include "hcspec/roots.hpp"

namespace hcspec {

double SphereMode::operator()(double r) const {
  if (r < 0.0 || r > 1.0) throw DomainError("radius outside [0, 1]");
  if (r <= a) return 1.0;
  double s = std::sqrt(lambda);
  return a * std::sin(s * (1.0 - r)) / (r * std::sin(s * (1.0 - a)));
}

std::vector<std::pair<double, double>> SphereMode::sample(int n) const {
  if (n < 1) throw ConfigError("need at least one sample interval");
  std::vector<std::pair<double, double>> out;
  for (int j = 0; j <= n; ++j) {
    double r = static_cast<double>(j) / n;
    out.push_back({r, (*this)(r)});
  }
  return out;
}

std::vector<double> SphereLimitSpectrum::eigenvalues() const {
  std::vector<double> out;
  for (const auto& m : s2) out.push_back(m.lambda);
  return out;
}

SphereLimitSpectrum sphere_limit_spectrum(double a, double lambda_max) {
  if (!(lambda_max > 0)) throw ConfigError("lambda_max must be positive");
  auto cf = CharacteristicFunction::sphere(a);
  double s_max = std::sqrt(lambda_max);
  RootOptions opt;
  opt.scan_step = 1e-2;
  opt.pole_tol = kTolPole;
  auto roots = find_roots([&](double s) { return cf.value_s(s); }, 0.0, s_max, cf.poles_s(s_max), opt);
  SphereLimitSpectrum out;
  for (double s : roots) {
    SphereMode m;
    m.a = a;
    m.lambda = s * s;
    m.residual = std::abs(cf.value_s(s));
    out.s2.push_back(m);
  }
  auto ev = out.eigenvalues();
  for (auto [i, j] : close_pairs(ev, 1e-6)) out.clusters.push_back({ev[i], ev[j]});
  return out;
}

DiscreteOperator radial_operator(double a, double epsilon, int n, const BoundaryCondition& bc) {
  if (!(epsilon > 0)) throw ConfigError("radial operator needs epsilon > 0");
  return radial_operator_split(a, epsilon, n, bc);
}

Eigen::VectorXd sample_on(const DiscreteOperator& opr, const SphereMode& mode) {
  Eigen::VectorXd v(opr.size());
  for (int d = 0; d < opr.size(); ++d) v(d) = mode(opr.location[d][0]);
  return v;
}

void write_radial_csv(std::ostream& os, const SphereMode& mode, int samples) {
  os.precision(17);
  os << "r,u\n";
  for (auto [r, u] : mode.sample(samples)) os << r << ',' << u << '\n';
}

}  // namespace hcspec
