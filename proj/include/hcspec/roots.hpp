#pragma once

#include <functional>
#include <vector>

namespace hcspec {

struct RootOptions {
  double scan_step = 1e-2;    ///< grid step of the sign-change scan
  double tol = 1e-12;         ///< bracket width at which bisection stops
  double pole_tol = 1e-8;     ///< exclusion radius around each pole
  bool newton_polish = true;  ///< one guarded secant/Newton step after bisection
};

/// Bisection on a sign-changing bracket; f(lo) and f(hi) must have opposite signs.
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol);

/// All sign-change roots of f in (lo, hi]. The range is split at the given poles so that
/// no bracket straddles one. Brackets where |f| blows up under bisection are discarded.
std::vector<double> find_roots(const std::function<double(double)>& f, double lo, double hi,
                               std::vector<double> poles, const RootOptions& opt = {});

/// Index pairs (i, i+1) of sorted roots closer than gap.
std::vector<std::pair<int, int>> close_pairs(const std::vector<double>& sorted, double gap);

}  // namespace hcspec
