// hcspec: command-line driver for spectral studies of high-contrast media.
#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hcspec/bloch.hpp"
#include "hcspec/errors.hpp"
#include "hcspec/exact1d.hpp"
#include "hcspec/io.hpp"
#include "hcspec/limitspec.hpp"
#include "hcspec/parallel.hpp"
#include "hcspec/radial3d.hpp"
#include "hcspec/studies.hpp"
#include "hcspec/validate.hpp"

namespace fs = std::filesystem;
using namespace hcspec;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitValidation = 4;

struct Sink {
  fs::path dir;
  OutputFormat format;
  void emit(const std::string& stem, const std::string& csv) const {
    auto path = write_table(dir, stem, csv, format);
    std::cout << "wrote " << path.string() << '\n';
  }
};

int run_spectrum(const StudyConfig& cfg, const Sink& out) {
  const auto& medium = *cfg.medium;
  if (!(medium.epsilon > 0)) throw ConfigError("spectrum needs epsilon > 0; use the limit task for epsilon = 0");
  std::ostringstream csv;
  if (is_bloch(medium.bc)) {
    auto r = smallest_eigenpairs(assemble_bloch(medium), cfg.count);
    write_spectrum_csv(csv, r.eigenvalues, r.residuals);
  } else {
    auto r = smallest_eigenpairs(discretize(medium), cfg.count);
    write_spectrum_csv(csv, r.eigenvalues, r.residuals);
  }
  out.emit("spectrum", csv.str());

  if (const auto* g = std::get_if<Geometry1D>(&medium.geometry)) {
    auto exact = is_bloch(medium.bc) ? transfer_spectrum_limit_capable(*g, medium.epsilon, medium.bc, cfg.lambda_max)
                                     : transfer_spectrum_1d(*g, medium.epsilon, medium.bc, cfg.lambda_max);
    std::ostringstream ex;
    write_modes_csv(ex, "exact", exact.modes, true);
    out.emit("spectrum_exact", ex.str());
  }
  return 0;
}

template <class Scalar>
void emit_limit(const LimitSpectrumT<Scalar>& ls, int m, const Sink& out) {
  std::ostringstream csv, excl;
  write_limit_csv(csv, ls.pairs, m, true);
  out.emit("limit", csv.str());
  write_limit_csv(excl, ls.excluded, m, true);
  out.emit("limit_excluded", excl.str());
}

int run_limit(const StudyConfig& cfg, const Sink& out) {
  auto medium = cfg.medium->with_epsilon(0.0);
  if (is_bloch(medium.bc)) {
    auto opr = assemble_bloch_split(medium);
    emit_limit(limit_spectrum(opr, cfg.lambda_max), opr.inclusion_count, out);
  } else {
    auto opr = discretize(medium);
    auto ls = is_neumann(medium.bc) ? limit_spectrum_neumann(opr, cfg.lambda_max) : limit_spectrum(opr, cfg.lambda_max);
    emit_limit(ls, opr.inclusion_count, out);
  }

  if (const auto* g = std::get_if<Geometry1D>(&medium.geometry)) {
    std::ostringstream ex;
    if (g->inclusion_count() == 1 && !is_bloch(medium.bc)) {
      auto b = limit_spectrum_1d(*g, medium.bc, cfg.lambda_max);
      write_modes_csv(ex, "S1", b.s1, true);
      write_modes_csv(ex, "S2", b.s2, false);
    } else {
      write_modes_csv(ex, "exact", transfer_spectrum_limit_capable(*g, 0.0, medium.bc, cfg.lambda_max).modes, true);
    }
    out.emit("limit_exact", ex.str());
  } else if (const auto* r = std::get_if<RadialGeometry>(&medium.geometry); r && is_dirichlet(medium.bc)) {
    auto sphere = sphere_limit_spectrum(r->a, cfg.lambda_max);
    std::ostringstream ex;
    ex.precision(17);
    ex << "branch,index,lambda,omega,residual\n";
    for (std::size_t j = 0; j < sphere.s2.size(); ++j) {
      const auto& mode = sphere.s2[j];
      ex << "S2," << j + 1 << ',' << mode.lambda << ',' << std::sqrt(mode.lambda) << ',' << mode.residual << '\n';
    }
    out.emit("limit_exact", ex.str());
  }
  return 0;
}

int run_dispersion(const StudyConfig& cfg, const Sink& out) {
  auto bands = dispersion_sweep(*cfg.medium, cfg.k_grid, cfg.branch_count, cfg.epsilons, cfg.solver);
  std::ostringstream b, g;
  write_bands_csv(b, bands, true);
  out.emit("bands", b.str());
  bool header = true;
  for (double e : cfg.epsilons) {
    write_gaps_csv(g, gap_report(bands, e), header);
    header = false;
  }
  out.emit("gaps", g.str());
  for (const auto& c : bands.crossings)
    std::cout << "note: branches " << c.branch << " and " << c.branch + 1 << " nearly cross at epsilon "
              << bands.epsilons[c.eps_index] << ", k index " << c.k_index << '\n';
  return 0;
}

int run_converge_task(const StudyConfig& cfg, const Sink& out) {
  ConvergeOptions opt;
  opt.epsilons = cfg.epsilons;
  opt.branch_count = cfg.branch_count;
  auto report = run_converge(*cfg.medium, opt);

  std::ostringstream table, summary;
  table.precision(17);
  summary.precision(17);
  table << "branch,epsilon,lambda,flatness\n";
  summary << "branch,divergent,growth,ordering_swap,lambda0,slope,fit_residual,fit_relative,limit,error,"
             "flatness_ratio,pass\n";
  for (const auto& br : report.branches) {
    for (std::size_t i = 0; i < br.epsilons.size(); ++i)
      table << br.branch << ',' << br.epsilons[i] << ',' << br.lambdas[i] << ','
            << (i < br.flatness.size() ? br.flatness[i] : 0.0) << '\n';
    summary << br.branch << ',' << br.divergent << ',' << br.growth << ',' << br.ordering_swap << ',' << br.lambda0
            << ',' << br.slope << ',' << br.fit_residual << ',' << br.fit_relative << ','
            << (br.limit_value ? *br.limit_value : NAN) << ',' << br.error << ',' << br.flatness_ratio << ','
            << br.pass << '\n';
    std::cout << "branch " << br.branch << ": "
              << (br.divergent ? "divergent (excluded)" : br.pass ? "PASS" : "FAIL") << '\n';
  }
  out.emit("converge", table.str());
  out.emit("converge_summary", summary.str());
  return report.pass ? 0 : kExitValidation;
}

std::vector<int> applicable_criteria(const StudyConfig& cfg) {
  if (!cfg.criteria.empty()) return cfg.criteria;
  if (!cfg.medium) return {};
  const auto& g = cfg.medium->geometry;
  if (std::holds_alternative<Geometry1D>(g)) return {1, 2, 3, 4, 6, 7, 8, 9, 10, 11};
  if (std::holds_alternative<RadialGeometry>(g)) return {5, 9};
  return {6, 7};
}

int run_validate(const StudyConfig& cfg, const Sink& out) {
  auto ids = applicable_criteria(cfg);
  for (int id : ids)
    if (id < 1 || id > kCriterionCount) throw ConfigError("criteria: unknown id " + std::to_string(id));
  auto results = run_acceptance(ids, default_jobs());
  bool pass = true;
  for (const auto& r : results) {
    std::cout << summary_line(r) << '\n';
    pass = pass && r.pass;
  }
  fs::create_directories(out.dir);
  auto path = out.dir / "validate.json";
  std::ofstream(path) << to_json(results).dump(2) << '\n';
  std::cout << "wrote " << path.string() << '\n';
  return pass ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of high-contrast media"};
  app.require_subcommand(1);
  std::string config_path, out_dir, format;
  int jobs = 0;
  app.add_option("--jobs", jobs, "worker threads (default: hardware concurrency)")->check(CLI::NonNegativeNumber);

  for (const char* name : {"spectrum", "limit", "dispersion", "converge", "validate"}) {
    auto* sub = app.add_subcommand(name);
    auto* cfg = sub->add_option("--config", config_path, "JSON study config");
    if (std::string(name) != "validate") cfg->required();
    sub->add_option("--out", out_dir, "output directory (default: config output.dir or .)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::NonNegativeNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (jobs > 0) set_default_jobs(jobs);
  const std::string task = app.get_subcommands().front()->get_name();

  try {
    StudyConfig cfg;
    if (!config_path.empty()) {
      cfg = load_study_config(config_path);
      if (cfg.task != task) throw ConfigError("config task '" + cfg.task + "' does not match subcommand '" + task + "'");
    } else {
      cfg.task = task;
    }
    Sink sink{out_dir.empty() ? fs::path(cfg.out_dir.value_or(".")) : fs::path(out_dir),
              format.empty() ? cfg.format.value_or(OutputFormat::csv) : parse_format(format)};

    if (task == "spectrum") return run_spectrum(cfg, sink);
    if (task == "limit") return run_limit(cfg, sink);
    if (task == "dispersion") return run_dispersion(cfg, sink);
    if (task == "converge") return run_converge_task(cfg, sink);
    return run_validate(cfg, sink);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSolver;
  }
}
