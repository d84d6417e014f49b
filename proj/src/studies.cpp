#include "hcspec/studies.hpp"

#include <algorithm>
#include <cmath>

#include "hcspec/errors.hpp"
#include "hcspec/exact1d.hpp"
#include "hcspec/parallel.hpp"
#include "hcspec/radial3d.hpp"

namespace hcspec {

DiscreteOperator discretize(const ContrastMedium& medium) {
  if (is_bloch(medium.bc)) throw ConfigError("Bloch closures need the complex operator");
  if (const auto* r = std::get_if<RadialGeometry>(&medium.geometry)) {
    int n = static_cast<int>(std::lround(1.0 / medium.grid_spacing()));
    return radial_operator_split(r->a, medium.epsilon, n, medium.bc);
  }
  return medium.epsilon > 0 ? assemble(medium) : assemble_split(medium);
}

std::vector<double> reference_limit_spectrum(const ContrastMedium& medium, double lambda_max) {
  if (const auto* g = std::get_if<Geometry1D>(&medium.geometry)) {
    if (g->inclusion_count() == 1 && !is_bloch(medium.bc)) return limit_spectrum_1d(*g, medium.bc, lambda_max).all();
    return transfer_spectrum_limit_capable(*g, 0.0, medium.bc, lambda_max).eigenvalues();
  }
  if (const auto* r = std::get_if<RadialGeometry>(&medium.geometry); r && is_dirichlet(medium.bc))
    return sphere_limit_spectrum(r->a, lambda_max).eigenvalues();
  if (is_bloch(medium.bc))
    return limit_spectrum(assemble_bloch_split(medium.with_epsilon(0.0)), lambda_max).eigenvalues();
  auto opr = discretize(medium.with_epsilon(0.0));
  return is_neumann(medium.bc) ? limit_spectrum_neumann(opr, lambda_max).eigenvalues()
                               : limit_spectrum(opr, lambda_max).eigenvalues();
}

std::array<double, 3> affine_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  if (n < 2 || y.size() != x.size()) throw ConfigError("affine fit needs two or more points");
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = x[i];
    b(i) = y[i];
  }
  Eigen::Vector2d c = A.colPivHouseholderQr().solve(b);
  double rms = std::sqrt((A * c - b).squaredNorm() / n);
  return {c(0), c(1), rms};
}

ConvergenceReport run_converge(const ContrastMedium& medium, const ConvergeOptions& opt) {
  const auto& eps = opt.epsilons;
  if (eps.size() < 4) throw ConfigError("convergence study needs at least 4 epsilon values");
  for (std::size_t i = 0; i + 1 < eps.size(); ++i)
    if (!(eps[i] > 0) || !(eps[i + 1] > 0) || eps[i + 1] / eps[i] > 0.5 + 1e-12)
      throw ConfigError("epsilon list must be decreasing and geometric with ratio <= 1/2");
  for (std::size_t i = 0; i + 2 < eps.size(); ++i)
    if (std::abs(eps[i + 1] / eps[i] - eps[i + 2] / eps[i + 1]) > 1e-6 * eps[i + 1] / eps[i])
      throw ConfigError("epsilon list is not geometric");
  if (opt.branch_count < 1) throw ConfigError("branch_count must be >= 1");
  if (is_bloch(medium.bc)) throw ConfigError("convergence studies cover Dirichlet and Neumann closures");

  const int ne = static_cast<int>(eps.size()), nb = opt.branch_count;
  std::vector<SpectrumResult> spectra(ne);
  std::vector<DiscreteOperator> ops(ne);
  parallel_for(ne, [&](int e) {
    ops[e] = discretize(medium.with_epsilon(eps[e]));
    spectra[e] = smallest_eigenpairs(ops[e], nb + 1);
  });

  double top = 0.0;
  for (const auto& s : spectra) top = std::max(top, s.eigenvalues[nb - 1]);
  std::vector<double> limits =
      opt.limit_values ? *opt.limit_values : reference_limit_spectrum(medium, 1.5 * top + 10.0);

  ConvergenceReport out;
  out.pass = true;
  for (int j = 0; j < nb; ++j) {
    BranchReport br;
    br.branch = j + 1;
    br.epsilons = eps;
    for (int e = 0; e < ne; ++e) br.lambdas.push_back(spectra[e].eigenvalues[j]);
    for (int e = 0; e + 1 < ne; ++e) {
      br.growth = std::max(br.growth, br.lambdas[e + 1] / br.lambdas[e]);
      const auto& ev = spectra[e].eigenvalues;
      double gap = ev[j + 1] - ev[j];
      if (j > 0) gap = std::min(gap, ev[j] - ev[j - 1]);
      if (std::abs(br.lambdas[e + 1] - br.lambdas[e]) > 0.5 * gap) br.ordering_swap = true;
    }
    br.divergent = br.growth > opt.growth_threshold;
    auto [c0, c1, rms] = affine_fit(eps, br.lambdas);
    br.lambda0 = c0;
    br.slope = c1;
    br.fit_residual = rms;
    double linear = std::abs(c1) * eps.front();
    br.fit_relative = linear > 0 ? rms / linear : 0.0;

    for (int e = 0; e < ne; ++e) {
      Eigen::VectorXd v = spectra[e].eigenvectors.col(j);
      v /= v.cwiseAbs().maxCoeff();
      double flat = 0.0;
      for (int i = 0; i < ops[e].inclusion_count; ++i) flat = std::max(flat, inclusion_flatness(ops[e], v, i));
      br.flatness.push_back(flat / eps[e]);
    }
    auto [fmin, fmax] = std::minmax_element(br.flatness.begin(), br.flatness.end());
    br.flatness_ratio = *fmin > 0 ? *fmax / *fmin : 0.0;

    if (!br.divergent && !limits.empty()) {
      double best = *std::min_element(limits.begin(), limits.end(), [&](double x, double y) {
        return std::abs(x - br.lambda0) < std::abs(y - br.lambda0);
      });
      br.limit_value = best;
      br.error = std::abs(br.lambda0 - best) / best;
      br.pass = std::abs(br.lambda0 - best) <= std::max(5.0 * rms, opt.grid_tolerance * best) && !br.ordering_swap;
    }
    if (!br.divergent && !br.pass) out.pass = false;
    out.branches.push_back(std::move(br));
  }
  return out;
}

}  // namespace hcspec
