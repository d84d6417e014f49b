#include "hcspec/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "hcspec/errors.hpp"

namespace hcspec {

using nlohmann::json;

namespace {

const std::set<std::string> kTasks{"spectrum", "limit", "dispersion", "converge", "validate"};

double number(const json& v, const std::string& what) {
  if (!v.is_number()) throw ConfigError(what + ": expected a number");
  return v.get<double>();
}

int integer(const json& v, const std::string& what) {
  if (!v.is_number_integer()) throw ConfigError(what + ": expected an integer");
  return v.get<int>();
}

std::vector<double> numbers(const json& v, const std::string& what) {
  if (!v.is_array()) throw ConfigError(what + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number(x, what));
  return out;
}

}  // namespace

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("format must be csv or json, got '" + name + "'");
}

StudyConfig parse_study_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  static const std::set<std::string> allowed{"task",     "medium",       "lambda_max", "count",  "epsilons",
                                             "k_grid",   "branch_count", "criteria",   "solver", "output"};
  for (const auto& [key, _] : doc.items())
    if (!allowed.count(key)) throw ConfigError("config: unknown field '" + key + "'");
  StudyConfig c;
  if (!doc.contains("task") || !doc.at("task").is_string()) throw ConfigError("config: missing string field 'task'");
  c.task = doc.at("task").get<std::string>();
  if (!kTasks.count(c.task)) throw ConfigError("config: unknown task '" + c.task + "'");
  if (doc.contains("medium")) c.medium = medium_from_json(doc.at("medium"));
  if (!c.medium && c.task != "validate") throw ConfigError("config: task '" + c.task + "' needs a medium");

  if (doc.contains("lambda_max")) c.lambda_max = number(doc.at("lambda_max"), "lambda_max");
  if (!(c.lambda_max > 0)) throw ConfigError("lambda_max must be positive");
  if (doc.contains("count")) c.count = integer(doc.at("count"), "count");
  if (c.count < 1) throw ConfigError("count must be >= 1");
  if (doc.contains("branch_count")) c.branch_count = integer(doc.at("branch_count"), "branch_count");
  if (c.branch_count < 1) throw ConfigError("branch_count must be >= 1");
  if (doc.contains("epsilons")) c.epsilons = numbers(doc.at("epsilons"), "epsilons");
  for (double e : c.epsilons)
    if (e < 0) throw ConfigError("epsilons must be >= 0");
  if (doc.contains("k_grid")) {
    const auto& kg = doc.at("k_grid");
    if (!kg.is_array()) throw ConfigError("k_grid: expected an array");
    for (const auto& k : kg) c.k_grid.push_back(k.is_number() ? std::vector<double>{k.get<double>()} : numbers(k, "k_grid"));
  }
  if (doc.contains("criteria")) {
    const auto& cr = doc.at("criteria");
    if (!cr.is_array()) throw ConfigError("criteria: expected an array of integers");
    for (const auto& x : cr) c.criteria.push_back(integer(x, "criteria"));
  }
  if (doc.contains("solver")) {
    const auto& s = doc.at("solver");
    if (s == "automatic")
      c.solver = BandSolver::automatic;
    else if (s == "fdm")
      c.solver = BandSolver::fdm;
    else
      throw ConfigError("solver must be \"automatic\" or \"fdm\"");
  }
  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    if (!o.is_object()) throw ConfigError("output: expected an object");
    for (const auto& [key, v] : o.items()) {
      if (key == "dir" && v.is_string())
        c.out_dir = v.get<std::string>();
      else if (key == "format" && v.is_string())
        c.format = parse_format(v.get<std::string>());
      else
        throw ConfigError("output: unknown or malformed field '" + key + "'");
    }
  }

  if (c.task == "dispersion" && c.k_grid.empty()) throw ConfigError("dispersion needs a k_grid");
  if ((c.task == "dispersion" || c.task == "converge") && c.epsilons.empty())
    throw ConfigError(c.task + " needs an epsilons list");
  return c;
}

StudyConfig load_study_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_study_config(doc);
}

nlohmann::ordered_json csv_to_json(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.emplace_back();
    return cells;
  };
  auto rows = nlohmann::ordered_json::array();
  if (!std::getline(in, line)) return rows;
  auto header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    auto rec = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < header.size(); ++i) {
      std::string v = i < cells.size() ? cells[i] : "";
      std::size_t used = 0;
      try {
        double d = std::stod(v, &used);
        if (used == v.size()) {
          rec[header[i]] = d;
          continue;
        }
      } catch (const std::exception&) {
      }
      rec[header[i]] = v;
    }
    rows.push_back(std::move(rec));
  }
  return rows;
}

std::filesystem::path write_table(const std::filesystem::path& dir, const std::string& stem, const std::string& csv,
                                  OutputFormat format) {
  std::filesystem::create_directories(dir);
  auto path = dir / (stem + (format == OutputFormat::csv ? ".csv" : ".json"));
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  if (format == OutputFormat::csv)
    out << csv;
  else
    out << csv_to_json(csv).dump(2) << '\n';
  return path;
}

}  // namespace hcspec
