#include "hcspec/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "hcspec/errors.hpp"
#include "hcspec/fdm.hpp"
#include "hcspec/limitspec.hpp"
#include "hcspec/parallel.hpp"

namespace hcspec {

namespace {

/// Half-width a when the geometry is the reference cell [-1, 1] with |x| < a (a = 0: empty).
std::optional<double> symmetric_cell(const Geometry& geom) {
  const auto* g = std::get_if<Geometry1D>(&geom);
  if (!g || g->x_lo() != -1.0 || g->x_hi() != 1.0) return std::nullopt;
  if (g->inclusion_count() == 0) return 0.0;
  if (g->inclusion_count() == 1 && g->inclusions()[0].lo == -g->inclusions()[0].hi) return g->inclusions()[0].hi;
  return std::nullopt;
}

std::vector<double> first_n(std::vector<double> v, int n, const char* what) {
  if (static_cast<int>(v.size()) < n) throw SolverError(std::string(what) + ": fewer branches than requested");
  v.resize(n);
  return v;
}

/// Grows λ_max until `count` values are found; start from a free-wave estimate.
template <class F>
std::vector<double> lowest(F&& below, int count, double period) {
  double lam = std::pow(3.14159 * (count + 1) / period, 2);
  for (int attempt = 0; attempt < 30; ++attempt, lam *= 2.0) {
    auto v = below(lam);
    if (static_cast<int>(v.size()) >= count) return v;
  }
  throw SolverError("branch search did not find enough eigenvalues");
}

std::vector<double> bands_at(const ContrastMedium& base, const std::vector<double>& k, double eps, int count,
                             BandSolver solver) {
  ContrastMedium m(base.geometry, eps, Bloch{k}, base.h);
  const bool one_d = std::holds_alternative<Geometry1D>(base.geometry);
  double period = 2.0;
  if (const auto* g1 = std::get_if<Geometry1D>(&base.geometry)) period = g1->length();
  if (const auto* g2 = std::get_if<Geometry2D>(&base.geometry)) period = std::max(g2->lx(), g2->ly());

  if (solver == BandSolver::automatic && one_d) {
    const auto& g = std::get<Geometry1D>(base.geometry);
    if (eps > 0) {
      auto v = lowest([&](double lm) { return transfer_spectrum_1d(g, eps, Bloch{k}, lm).eigenvalues(); }, count, period);
      return first_n(v, count, "transfer Bloch spectrum");
    }
    if (auto a = symmetric_cell(base.geometry)) {
      auto v = lowest(
          [&](double lm) {
            std::vector<double> out;
            for (const auto& p : bloch_limit_curve(*a, {k[0]}, lm)) out.push_back(p.lambda);
            return out;
          },
          count, period);
      return first_n(v, count, "limit Bloch curve");
    }
    auto v = lowest([&](double lm) { return transfer_spectrum_limit_capable(g, 0.0, Bloch{k}, lm).eigenvalues(); },
                    count, period);
    return first_n(v, count, "limit transfer spectrum");
  }

  if (eps > 0) return smallest_eigenpairs(assemble_bloch(m), count).eigenvalues;
  auto opr = assemble_bloch_split(m);
  if (opr.inclusion_count == 0) return smallest_eigenpairs(assemble_bloch(m.with_epsilon(1.0)), count).eigenvalues;
  auto v = lowest([&](double lm) { return limit_spectrum(opr, lm).eigenvalues(); }, count, period);
  return first_n(v, count, "limit Bloch scan");
}

std::string k_label(const std::vector<double>& k) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < k.size(); ++i) os << (i ? ";" : "") << k[i];
  return os.str();
}

}  // namespace

std::vector<DispersionPoint> BandStructure::points() const {
  std::vector<DispersionPoint> out;
  for (std::size_t e = 0; e < epsilons.size(); ++e)
    for (std::size_t j = 0; j < k_grid.size(); ++j)
      for (int n = 0; n < branch_count; ++n) {
        double lam = lambda[e][j][n];
        out.push_back({k_grid[j], n + 1, lam, std::sqrt(lam), epsilons[e]});
      }
  return out;
}

BandStructure dispersion_sweep(const ContrastMedium& medium, const std::vector<std::vector<double>>& k_grid,
                               int branch_count, const std::vector<double>& epsilons, BandSolver solver) {
  if (branch_count < 1) throw ConfigError("branch_count must be >= 1");
  if (k_grid.empty()) throw ConfigError("k grid is empty");
  if (epsilons.empty()) throw ConfigError("epsilon list is empty");
  if (std::holds_alternative<RadialGeometry>(medium.geometry)) throw ConfigError("Bloch sweeps need a 1D or 2D cell");
  std::vector<double> period;
  if (const auto* g1 = std::get_if<Geometry1D>(&medium.geometry)) period = {g1->length()};
  if (const auto* g2 = std::get_if<Geometry2D>(&medium.geometry)) period = {g2->lx(), g2->ly()};
  for (const auto& k : k_grid) {
    if (k.size() != period.size()) throw ConfigError("Bloch vector dimension does not match the cell");
    if (distance_to_periodic_lattice(k, period) < kBlochDeltaK)
      throw DomainError("Bloch vector " + k_label(k) + " lies within delta_k of an integer wave vector");
  }
  for (double e : epsilons)
    if (e < 0) throw ConfigError("epsilon must be >= 0");

  BandStructure out;
  out.k_grid = k_grid;
  out.epsilons = epsilons;
  out.branch_count = branch_count;
  const int nk = static_cast<int>(k_grid.size()), ne = static_cast<int>(epsilons.size());
  out.lambda.assign(ne, std::vector<std::vector<double>>(nk));
  parallel_for(ne * nk, [&](int t) {
    int e = t / nk, j = t % nk;
    out.lambda[e][j] = bands_at(medium, k_grid[j], epsilons[e], branch_count, solver);
  });
  for (int e = 0; e < ne; ++e)
    for (int j = 0; j < nk; ++j)
      for (int n = 0; n + 1 < branch_count; ++n)
        if (std::abs(out.lambda[e][j][n + 1] - out.lambda[e][j][n]) < 1e-4) out.crossings.push_back({e, j, n + 1});
  return out;
}

std::vector<BandGap> gap_report(const BandStructure& bands, double epsilon, double min_width) {
  std::vector<BandGap> out;
  auto it = std::find(bands.epsilons.begin(), bands.epsilons.end(), epsilon);
  if (it == bands.epsilons.end()) throw ConfigError("epsilon is not part of the band structure");
  const auto& L = bands.lambda[it - bands.epsilons.begin()];
  for (int n = 0; n + 1 < bands.branch_count; ++n) {
    double top = -std::numeric_limits<double>::infinity(), bottom = std::numeric_limits<double>::infinity();
    for (const auto& row : L) {
      top = std::max(top, row[n]);
      bottom = std::min(bottom, row[n + 1]);
    }
    if (bottom - top > min_width) out.push_back({epsilon, top, bottom});
  }
  return out;
}

void write_bands_csv(std::ostream& os, const BandStructure& bands, bool header) {
  os.precision(17);
  if (header) os << "k,epsilon,branch,lambda,omega\n";
  for (const auto& p : bands.points())
    os << k_label(p.k) << ',' << p.epsilon << ',' << p.branch << ',' << p.lambda << ',' << p.omega << '\n';
}

void write_gaps_csv(std::ostream& os, const std::vector<BandGap>& gaps, bool header) {
  os.precision(17);
  if (header) os << "epsilon,gap_lo,gap_hi\n";
  for (const auto& g : gaps) os << g.epsilon << ',' << g.lo << ',' << g.hi << '\n';
}

}  // namespace hcspec
