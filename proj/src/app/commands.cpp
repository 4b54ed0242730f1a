#include <cmath>
#include <optional>

#include "pqlab/app.hpp"
#include "pqlab/bubble.hpp"
#include "pqlab/error.hpp"
#include "pqlab/mountain_pass.hpp"
#include "pqlab/parallel.hpp"
#include "pqlab/pohozaev.hpp"
#include "pqlab/radial.hpp"

namespace pqlab::app {

namespace {

namespace fs = std::filesystem;

const char* const kScanLabel = "consistency evidence, not proof";

std::string regime_name(bubble::Regime r) {
  switch (r) {
    case bubble::Regime::Above: return "above";
    case bubble::Regime::Boundary: return "boundary";
    case bubble::Regime::Below: return "below";
  }
  return "above";
}

CsvCell optional_cell(std::optional<double> v) {
  if (v) return *v;
  return std::string();
}

class Outputs {
 public:
  explicit Outputs(const ExperimentConfig& config) : dir_(config.output_dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    require(!ec, ErrorKind::ConfigError, "cannot create output directory '" + dir_.string() + "'");
  }

  fs::path add(const std::string& name) {
    files_.push_back(name);
    return dir_ / name;
  }

  std::vector<std::string> files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

core::ProblemSpec with_qs(core::ProblemSpec spec, double q, double s) {
  spec.q = q;
  spec.s = s;
  return spec;
}

void run_classify(const ExperimentConfig& c, Outputs& out) {
  const core::ProblemSpec& base = c.spec;
  const double pstar = base.critical();
  CsvWriter csv(out.add("verdicts.csv"),
                {"N", "p", "q", "s", "p_star", "fixed_admissible", "fixed_case", "fixed_threshold",
                 "combined_admissible", "combined_case", "combined_threshold",
                 "perturbed_admissible", "perturbed_case", "perturbed_threshold", "kappa_lo",
                 "kappa_hi", "kappa_feasible"});
  for (double q : c.grid_q) {
    for (double s : c.grid_s) {
      if (s >= pstar) continue;
      const core::ProblemSpec spec = with_qs(base, q, s);
      const auto fixed = core::classify_existence_fixed(spec);
      const auto combined = core::classify_existence_combined(spec);
      const auto perturbed = core::classify_existence_perturbed(spec);
      std::vector<CsvCell> row = {static_cast<long long>(spec.N), spec.p, q, s, pstar,
                                  fixed.admissible, std::string(core::to_string(fixed.case_tag)),
                                  fixed.threshold_s, combined.admissible,
                                  std::string(core::to_string(combined.case_tag)),
                                  combined.threshold_s, perturbed.admissible,
                                  std::string(core::to_string(perturbed.case_tag)),
                                  perturbed.threshold_s};
      if (q < core::q_regime_boundary(spec.N, spec.p)) {
        const auto w = core::kappa_window(spec.N, spec.p, q, s);
        row.insert(row.end(), {w.kappa_lo, w.kappa_hi, w.feasible});
      } else {
        row.insert(row.end(), {std::string(), std::string(), std::string()});
      }
      csv.row(row);
    }
  }
  csv.close();
  emit_region_map(out.add("region_map.csv"), base.N, base.p, c.grid_q, c.grid_s, c.region);
}

void run_bubble_rates(const ExperimentConfig& c, Outputs& out) {
  const core::ProblemSpec& spec = c.spec;
  const double S = mountain_pass::cached_sobolev(spec.N, spec.p);
  const auto schedule = mountain_pass::kappa_schedule(c.rates_eps, c.rates_kappa);

  struct Sample {
    double grad_p = 0.0;
    double grad_q = 0.0;
    double power_s = 0.0;
  };
  std::vector<Sample> samples(schedule.size());
  parallel_for(schedule.size(), c.jobs, [&](std::size_t i) {
    const auto params = bubble::normalize(bubble::make_bubble(
        spec.N, spec.p, schedule[i].first, schedule[i].second, bubble::CutoffProfile(spec.rho)));
    samples[i] = {bubble::grad_norm_p(params), bubble::grad_norm_q(params, spec.q),
                  bubble::power_integral(params, spec.s)};
  });

  CsvWriter rates(out.add("bubble_rates.csv"),
                  {"eps", "delta", "grad_p", "grad_p_excess", "grad_q", "power_s"});
  std::vector<std::pair<double, double>> excess, gradq, power;
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const auto [eps, delta] = schedule[i];
    const Sample& s = samples[i];
    rates.row({eps, delta, s.grad_p, s.grad_p - S, s.grad_q, s.power_s});
    excess.emplace_back(eps, s.grad_p - S);
    gradq.emplace_back(eps, s.grad_q);
    power.emplace_back(eps, s.power_s);
  }
  rates.close();

  CsvWriter fits(out.add("bubble_fits.csv"),
                 {"quantity", "regime", "log_factor", "predicted_slope", "fitted_slope",
                  "relative_error", "r_squared"});
  auto fit_row = [&](const std::string& name, const bubble::PredictedRate& rate,
                     const std::vector<std::pair<double, double>>& data) {
    const double predicted = rate.along(c.rates_kappa);
    const RateFit fit = fit_rate(data, rate.log_factor);
    fits.row({name, regime_name(rate.regime), rate.log_factor, predicted, fit.slope,
              relative_slope_error(fit, predicted), fit.r_squared});
  };
  fit_row("grad_p_excess", bubble::gradp_excess_rate(spec.N, spec.p), excess);
  fit_row("grad_q", bubble::gradq_rate(spec.N, spec.p, spec.q), gradq);
  fit_row("power_s", bubble::power_rate(spec.N, spec.p, spec.s), power);
  fits.close();
}

void run_level_sweep(const ExperimentConfig& c, Outputs& out) {
  const core::ProblemSpec& spec = c.spec;
  const auto sweep = mountain_pass::epsilon_sweep(spec, c.schedule());
  CsvWriter csv(out.add("level_sweep.csv"),
                {"eps", "delta", "t_max", "phi_max", "c_star", "margin", "below_threshold",
                 "quotient_gradq", "quotient_scale"});
  for (const auto& row : sweep.rows) {
    const auto& l = row.level;
    csv.row({l.eps, l.delta, l.t_max, l.phi_max, l.c_star, l.margin, l.margin > 0.0,
             row.quotient_gradq, row.quotient_scale});
  }
  csv.close();

  CsvWriter fits(out.add("level_fits.csv"),
                 {"quantity", "kappa", "predicted_slope", "fitted_slope", "relative_error",
                  "r_squared", "sweep_conclusive", "first_flag_eps"});
  const auto decay = mountain_pass::quotient_decay(spec, c.schedule_kappa, c.rates_eps);
  const CsvCell flag_eps = sweep.first_flag
                               ? CsvCell(sweep.rows[*sweep.first_flag].level.eps)
                               : CsvCell(std::string());
  fits.row({std::string("quotient_gradq"), c.schedule_kappa, decay.predicted.first,
            decay.first.slope, decay.first_error, decay.first.r_squared, sweep.conclusive(),
            flag_eps});
  fits.row({std::string("quotient_scale"), c.schedule_kappa, decay.predicted.second,
            decay.second.slope, decay.second_error, decay.second.r_squared, sweep.conclusive(),
            flag_eps});
  fits.close();

  if (!c.level_perturbed) return;
  const auto check = mountain_pass::perturbed_threshold_check(spec, c.rates_eps);
  CsvWriter perturbed(out.add("perturbed.csv"),
                      {"eps", "quotient", "t_max", "phi_max", "c_star", "margin",
                       "predicted_slope", "fitted_slope", "relative_error", "inverse_log",
                       "regime"});
  for (const auto& row : check.rows) {
    perturbed.row({row.eps, row.quotient, row.level.t_max, row.level.phi_max, row.level.c_star,
                   row.level.margin, check.predicted.exponent, check.fit.slope,
                   check.relative_error, check.predicted.inverse_log,
                   regime_name(check.predicted.regime)});
  }
  perturbed.close();
}

void run_eigen(const ExperimentConfig& c, Outputs& out) {
  const core::ProblemSpec& spec = c.spec;
  const auto mesh = radial::build_mesh(spec.N, spec.R, c.mesh_n, c.mesh_grading);
  const std::vector<double> exponents = {spec.p, spec.q};
  std::vector<std::optional<radial::EigenResult>> results(exponents.size());
  parallel_for(exponents.size(), c.jobs,
               [&](std::size_t i) { results[i].emplace(radial::rayleigh_min(mesh, exponents[i])); });

  CsvWriter csv(out.add("eigen.csv"), {"N", "m", "R", "mesh_n", "mesh_grading", "eigenvalue",
                                       "iterations", "residual", "mu_bound"});
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    const CsvCell bound =
        i == 1 ? CsvCell(core::mu_nonexistence_bound(spec.N, spec.p, spec.q, results[i]->value))
               : CsvCell(std::string());
    csv.row({static_cast<long long>(spec.N), exponents[i], spec.R,
             static_cast<long long>(c.mesh_n), c.mesh_grading, results[i]->value,
             static_cast<long long>(results[i]->iterations), results[i]->residual, bound});
  }
  csv.close();

  CsvWriter fn(out.add("eigenfunction.csv"), {"r", "u_p", "u_q"});
  const auto& nodes = mesh->nodes();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    fn.row({nodes[k], results[0]->field.values()[k], results[1]->field.values()[k]});
  }
  fn.close();
}

void run_sobolev(const ExperimentConfig& c, Outputs& out) {
  const core::ProblemSpec& spec = c.spec;
  std::vector<radial::SobolevEstimate> results(c.sobolev_R.size());
  parallel_for(results.size(), c.jobs, [&](std::size_t i) {
    radial::SobolevOptions opts;
    opts.R = c.sobolev_R[i];
    opts.inner_ratio = c.sobolev_inner_ratio;
    opts.mesh_ratio = c.sobolev_mesh_ratio;
    results[i] = radial::sobolev_constant(spec.N, spec.p, opts);
  });
  CsvWriter csv(out.add("sobolev.csv"), {"N", "p", "R", "bubble_estimate", "minimization_estimate",
                                         "relative_gap", "iterations", "c_star"});
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    csv.row({static_cast<long long>(spec.N), spec.p, c.sobolev_R[i], r.bubble, r.minimization,
             std::abs(r.minimization / r.bubble - 1.0), static_cast<long long>(r.iterations),
             core::threshold_energy(r.bubble, spec.N, spec.p)});
  }
  csv.close();
}

void run_pohozaev(const ExperimentConfig& c, Outputs& out) {
  const core::ProblemSpec& spec = c.spec;
  struct Job {
    std::string profile;
    int level = 0;
  };
  std::vector<Job> jobs;
  for (const std::string& name : c.pohozaev_profiles) {
    for (int level : c.pohozaev_levels) jobs.push_back({name, level});
  }
  struct Result {
    pohozaev::PohozaevReport report;
    double volume = 0.0;
    double tested = 0.0;
    double recombination = 0.0;
  };
  std::vector<Result> results(jobs.size());
  parallel_for(jobs.size(), c.jobs, [&](std::size_t i) {
    const auto profile = jobs[i].profile == "parabola" ? pohozaev::parabola_profile(spec.R)
                                                       : pohozaev::cosine_profile(spec.R);
    const auto mesh = radial::build_mesh(spec.N, spec.R, 1 << jobs[i].level, c.mesh_grading);
    const auto sol = pohozaev::manufactured_solution(profile, spec, mesh);
    Result& r = results[i];
    r.report = pohozaev::pohozaev_residual(sol.u, sol.nl, spec);
    r.volume = pohozaev::volume_identity(r.report, spec).relative();
    r.tested = pohozaev::tested_identity(r.report).relative();
    r.recombination = pohozaev::recombination_residual(r.report, spec);
  });

  CsvWriter csv(out.add("pohozaev.csv"),
                {"profile", "N", "p", "q", "R", "mesh_n", "gradq_term", "potential_term",
                 "boundary_term", "residual", "relative_residual", "observed_order",
                 "volume_identity_relative", "tested_identity_relative", "recombination"});
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& rep = results[i].report;
    std::optional<double> order;
    if (i > 0 && jobs[i - 1].profile == jobs[i].profile) {
      const double prev = std::abs(results[i - 1].report.relative());
      const double cur = std::abs(rep.relative());
      const double ratio = static_cast<double>(1 << jobs[i].level) / (1 << jobs[i - 1].level);
      if (prev > 0.0 && cur > 0.0) order = std::log(prev / cur) / std::log(ratio);
    }
    csv.row({jobs[i].profile, static_cast<long long>(spec.N), spec.p, spec.q, spec.R,
             static_cast<long long>(1 << jobs[i].level), rep.gradq_term, rep.potential_term,
             rep.boundary_term, rep.residual, rep.relative(), optional_cell(order),
             results[i].volume, results[i].tested, results[i].recombination});
  }
  csv.close();
}

void run_nonexist_scan(const ExperimentConfig& c, Outputs& out) {
  core::ProblemSpec base = c.spec;
  base.s = base.q;
  base.b = 0.0;
  base.nu = 1.0;
  const auto mesh = radial::build_mesh(base.N, base.R, c.mesh_n, c.mesh_grading);
  const double mu1 = radial::rayleigh_min(mesh, base.q).value;
  const double bound = core::mu_nonexistence_bound(base.N, base.p, base.q, mu1);

  std::vector<core::ProblemSpec> specs;
  for (double f : c.scan_mu_fraction) {
    core::ProblemSpec s = base;
    s.mu = f * bound;
    specs.push_back(s);
  }
  pohozaev::ScanOptions opts;
  opts.mesh_n = c.mesh_n;
  opts.mesh_grading = c.mesh_grading;
  opts.inits = c.scan_inits;
  opts.seed = c.seed;
  opts.random_amplitude = c.scan_amplitude;
  opts.jobs = c.jobs;
  opts.max_iterations = c.scan_max_iterations;
  const auto scan = pohozaev::nonexistence_scan(specs, opts);

  CsvWriter csv(out.add("nonexist_scan.csv"),
                {"label", "mu_fraction", "mu", "mu1", "mu_bound", "within_bound", "init_index",
                 "init_kind", "converged", "diverged", "trivial", "iterations", "residual",
                 "final_norm", "iterates_checked", "rayleigh_ok"});
  for (const auto& r : scan.rows) {
    csv.row({std::string(kScanLabel), c.scan_mu_fraction[r.spec_index], r.mu, r.mu1, r.mu_bound,
             r.within_bound, static_cast<long long>(r.init_index), r.init_kind, r.converged,
             r.diverged, r.trivial, static_cast<long long>(r.iterations), r.residual,
             r.final_norm, static_cast<long long>(r.iterates_checked), r.rayleigh_ok});
  }
  csv.close();

  CsvWriter summary(out.add("nonexist_summary.csv"), {"label", "runs", "consistent"});
  summary.row({std::string(kScanLabel), static_cast<long long>(scan.rows.size()), scan.passes});
  summary.close();
}

}  // namespace

std::vector<std::string> run(const ExperimentConfig& config) {
  Outputs out(config);
  {
    std::ofstream manifest(out.add("manifest.txt"), std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(manifest), ErrorKind::ConfigError, "cannot write manifest.txt");
    manifest << manifest_text(config);
  }
  switch (config.command) {
    case Command::Classify: run_classify(config, out); break;
    case Command::BubbleRates: run_bubble_rates(config, out); break;
    case Command::LevelSweep: run_level_sweep(config, out); break;
    case Command::Eigen: run_eigen(config, out); break;
    case Command::Sobolev: run_sobolev(config, out); break;
    case Command::Pohozaev: run_pohozaev(config, out); break;
    case Command::NonexistScan: run_nonexist_scan(config, out); break;
  }
  return out.files();
}

}  // namespace pqlab::app
