#include "hcspec/roots.hpp"

#include <algorithm>
#include <cmath>

#include "hcspec/errors.hpp"

namespace hcspec {

double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw SolverError("bisect: bracket has no sign change");
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

double polish(const std::function<double(double)>& f, double x, double lo, double hi, double tol) {
  double fx = f(x);
  double dx = std::max(tol, 1e-9 * std::max(1.0, std::abs(x)));
  double d = (f(x + dx) - f(x - dx)) / (2 * dx);
  if (d == 0.0 || !std::isfinite(d)) return x;
  double y = x - fx / d;
  if (!(y > lo && y < hi)) return x;
  return std::abs(f(y)) < std::abs(fx) ? y : x;
}

}  // namespace

std::vector<double> find_roots(const std::function<double(double)>& f, double lo, double hi,
                               std::vector<double> poles, const RootOptions& opt) {
  if (!(hi > lo)) return {};
  if (!(opt.scan_step > 0)) throw ConfigError("find_roots: scan step must be positive");
  std::sort(poles.begin(), poles.end());
  std::vector<std::pair<double, double>> windows;
  double start = lo;
  for (double p : poles) {
    if (p <= lo - opt.pole_tol || p >= hi + opt.pole_tol) continue;
    if (p - opt.pole_tol > start) windows.push_back({start, p - opt.pole_tol});
    start = std::max(start, p + opt.pole_tol);
  }
  if (hi > start) windows.push_back({start, hi});

  std::vector<double> roots;
  for (auto [a, b] : windows) {
    int steps = std::max(1, static_cast<int>(std::ceil((b - a) / opt.scan_step)));
    double xa = a, fa = f(a);
    if (fa == 0.0 && a > lo) roots.push_back(a);
    for (int s = 1; s <= steps; ++s) {
      double xb = s == steps ? b : a + (b - a) * s / steps;
      double fb = f(xb);
      if (fb == 0.0) {
        roots.push_back(xb);
      } else if (fa != 0.0 && (fa > 0) != (fb > 0)) {
        double r = bisect(f, xa, xb, opt.tol);
        double fr = std::abs(f(r));
        // A hidden singularity shows up as |f| growing instead of vanishing.
        if (std::isfinite(fr) && fr <= std::max(std::abs(fa), std::abs(fb))) {
          if (opt.newton_polish) r = polish(f, r, xa, xb, opt.tol);
          roots.push_back(r);
        }
      }
      xa = xb;
      fa = fb;
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

std::vector<std::pair<int, int>> close_pairs(const std::vector<double>& sorted, double gap) {
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i] - sorted[i - 1] < gap) out.push_back({static_cast<int>(i - 1), static_cast<int>(i)});
  return out;
}

}  // namespace hcspec
