#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hcspec/bloch.hpp"
#include "hcspec/medium.hpp"

namespace hcspec {

enum class OutputFormat { csv, json };

OutputFormat parse_format(const std::string& name);

/// One study: the medium plus the parameters of a single task. Unknown keys are rejected.
struct StudyConfig {
  std::string task;  ///< spectrum | limit | dispersion | converge | validate
  std::optional<ContrastMedium> medium;  ///< optional for validate only
  double lambda_max = 100.0;
  int count = 6;
  std::vector<double> epsilons;
  std::vector<std::vector<double>> k_grid;
  int branch_count = 4;
  std::vector<int> criteria;
  BandSolver solver = BandSolver::automatic;
  std::optional<std::string> out_dir;
  std::optional<OutputFormat> format;
};

StudyConfig parse_study_config(const nlohmann::json& doc);
/// Reads and parses a JSON file; malformed JSON is a ConfigError.
StudyConfig load_study_config(const std::filesystem::path& path);

/// CSV text (header + rows) as an array of records in column order; numeric cells become numbers.
nlohmann::ordered_json csv_to_json(const std::string& csv);

/// Writes `<dir>/<stem>.csv` or `<dir>/<stem>.json` and returns the path.
std::filesystem::path write_table(const std::filesystem::path& dir, const std::string& stem, const std::string& csv,
                                  OutputFormat format);

}  // namespace hcspec
