#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace hcspec {

struct CriterionCheck {
  std::string what;
  double value = 0.0;
  double limit = 0.0;
  bool pass = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::vector<CriterionCheck> checks;
  std::string error;  ///< set when the criterion threw instead of finishing
  double seconds = 0.0;
};

constexpr int kCriterionCount = 11;

/// Runs one acceptance criterion (1-based). Exceptions are caught and reported as failures.
CriterionResult run_criterion(int id);

/// Runs the given criteria (all when empty), in parallel over criteria when jobs > 1.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids = {}, int jobs = 1);

nlohmann::json to_json(const CriterionResult& r);
nlohmann::json to_json(const std::vector<CriterionResult>& rs);
/// One line per criterion: `[PASS] 1 title` / `[FAIL] ...`.
std::string summary_line(const CriterionResult& r);

}  // namespace hcspec
