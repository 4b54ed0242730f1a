// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.
//
// Usage: acceptance [scratch_dir]

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "checks.hpp"
#include "oracles.hpp"
#include "pqlab/bubble.hpp"
#include "pqlab/core.hpp"
#include "pqlab/error.hpp"
#include "pqlab/mountain_pass.hpp"
#include "pqlab/pohozaev.hpp"
#include "pqlab/radial.hpp"
#include "pqlab/rate_fit.hpp"

using namespace pqlab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof buffer, format, args);
  va_end(args);
  return buffer;
}

core::ProblemSpec make_spec(int N, double p, double q, double s) {
  core::ProblemSpec spec;
  spec.N = N;
  spec.p = p;
  spec.q = q;
  spec.s = s;
  return spec;
}

std::vector<double> quarter_decades(double from, double to) {
  std::vector<double> out;
  const int n = static_cast<int>(std::lround((to - from) / 0.25));
  for (int k = 0; k <= n; ++k) out.push_back(std::pow(10.0, from + 0.25 * k));
  return out;
}

// Uniform random tuple with 1 < q < p < N and 1 < s < p*.
core::ProblemSpec random_tuple(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int N = 2 + static_cast<int>(u(rng) * 9);
  const double p = 1.0 + (N - 1.0) * (0.01 + 0.98 * u(rng));
  const double q = 1.0 + (p - 1.0) * (0.01 + 0.98 * u(rng));
  const double ps = N * p / (N - p);
  const double s = 1.0 + (ps - 1.0) * (0.005 + 0.99 * u(rng));
  return make_spec(N, p, q, s);
}

Outcome classifier_equivalence() {
  std::mt19937_64 rng(20240101);
  int agree = 0;
  const int total = 10000;
  for (int i = 0; i < total; ++i) {
    const auto spec = random_tuple(rng);
    const auto a = core::classify_existence_fixed(spec);
    const auto b = core::classify_existence_combined(spec);
    if (a.admissible == b.admissible && (!a.admissible || a.case_tag == b.case_tag)) ++agree;
  }
  return {agree == total, fmt("%d/%d tuples agree", agree, total)};
}

Outcome kappa_window_soundness() {
  std::mt19937_64 rng(20240102);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int agree = 0;
  int admissible = 0;
  const int total = 1000;
  for (int i = 0; i < total;) {
    auto spec = random_tuple(rng);
    const double boundary = core::q_regime_boundary(spec.N, spec.p);
    if (!(boundary > 1.0)) continue;
    spec.q = 1.0 + (std::min(boundary, spec.p) - 1.0) * (0.01 + 0.98 * u(rng));
    if (!(spec.q < boundary && spec.q < spec.p)) continue;
    const bool feasible = core::kappa_window(spec.N, spec.p, spec.q, spec.s).feasible;
    const bool case_i = core::classify_existence_fixed(spec).admissible;
    admissible += case_i;
    agree += feasible == case_i;
    ++i;
  }
  return {agree == total, fmt("%d/%d agree (%d admissible)", agree, total, admissible)};
}

Outcome exact_scaling() {
  double worst = 0.0;
  for (int N : {3, 4}) {
    const double s = N == 3 ? 4.0 : 3.0;
    for (double eps : {1e-3, 1e-2, 1e-1}) {
      for (double delta : {0.25, 0.5, 1.0}) {
        for (const auto& [name, r] :
             bubble::scaling_check(N, 2.0, eps, delta, bubble::CutoffProfile(1.0), s, 1.5)) {
          worst = std::max(worst, std::abs(r));
        }
      }
    }
  }
  return {worst < 1e-10, fmt("max relative residual %.3g", worst)};
}

Outcome theta_rates() {
  const std::vector<double> eps = quarter_decades(-5.0, -3.0);
  double worst = 0.0;
  int fits = 0;
  int logs = 0;
  std::string worst_name;
  auto record = [&](const std::string& name, const bubble::PredictedRate& rate, double kappa,
                    const std::vector<std::pair<double, double>>& data) {
    const double predicted = rate.along(kappa);
    const RateFit fit = fit_rate(data, rate.log_factor);
    const double err = relative_slope_error(fit, predicted);
    ++fits;
    logs += rate.log_factor;
    if (err > worst) {
      worst = err;
      worst_name = name;
    }
  };
  for (int N : {3, 4}) {
    const double p = 2.0;
    const double qb = core::q_regime_boundary(N, p);
    const double sb = core::s_regime_boundary(N, p);
    const double ps = core::critical_exponent(N, p);
    const std::vector<double> qs = {0.5 * (1.0 + qb), qb, 0.5 * (qb + p)};
    const std::vector<double> ss = {0.5 * (1.0 + sb), sb, 0.5 * (sb + ps)};
    const double S = oracle::sobolev_constant(N, p);
    for (double kappa : {0.0, 0.25}) {
      std::vector<bubble::BubbleParams> params;
      for (const auto& [e, d] : mountain_pass::kappa_schedule(eps, kappa)) {
        params.push_back(
            bubble::normalize(bubble::make_bubble(N, p, e, d, bubble::CutoffProfile(1.0))));
      }
      std::vector<std::pair<double, double>> data;
      for (std::size_t i = 0; i < eps.size(); ++i) {
        data.emplace_back(eps[i], bubble::grad_norm_p(params[i]) - S);
      }
      record(fmt("N=%d grad_p kappa=%g", N, kappa), bubble::gradp_excess_rate(N, p), kappa, data);
      for (double q : qs) {
        data.clear();
        for (std::size_t i = 0; i < eps.size(); ++i) {
          data.emplace_back(eps[i], bubble::grad_norm_q(params[i], q));
        }
        record(fmt("N=%d grad_q q=%g kappa=%g", N, q, kappa), bubble::gradq_rate(N, p, q), kappa,
               data);
      }
      for (double s : ss) {
        data.clear();
        for (std::size_t i = 0; i < eps.size(); ++i) {
          data.emplace_back(eps[i], bubble::power_integral(params[i], s));
        }
        record(fmt("N=%d power s=%g kappa=%g", N, s, kappa), bubble::power_rate(N, p, s), kappa,
               data);
      }
    }
  }
  return {worst < 0.05, fmt("%d fits (%d log-corrected), worst %.3g%% at %s", fits, logs,
                            100.0 * worst, worst_name.c_str())};
}

Outcome sobolev_constant() {
  double worst_gap = 0.0;
  double worst_scale = 0.0;
  for (int N : {3, 4}) {
    std::vector<radial::SobolevEstimate> est;
    for (double R : {1.0, 2.0}) {
      radial::SobolevOptions opts;
      opts.R = R;
      est.push_back(radial::sobolev_constant(N, 2.0, opts));
      worst_gap = std::max(worst_gap, std::abs(est.back().minimization / est.back().bubble - 1.0));
    }
    worst_scale = std::max(worst_scale, std::abs(est[1].bubble / est[0].bubble - 1.0));
    worst_scale = std::max(worst_scale, std::abs(est[1].minimization / est[0].minimization - 1.0));
  }
  return {worst_gap < 0.01 && worst_scale < 0.01,
          fmt("estimator gap %.3g%%, R-dependence %.3g%%", 100.0 * worst_gap,
              100.0 * worst_scale)};
}

Outcome eigenvalue_oracle() {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double oracle_value = oracle::laplace_eigenvalue(3, 1.0);
  const double lambda = radial::rayleigh_min(radial::build_mesh(3, 1.0, 256, 1.0), 2.0).value;
  const double vs_pi = std::abs(lambda / pi2 - 1.0);
  const double vs_oracle = std::abs(lambda / oracle_value - 1.0);
  double dilation = 0.0;
  for (double m : {2.0, 1.5}) {
    const double one = radial::rayleigh_min(radial::build_mesh(3, 1.0, 256, 1.0), m).value;
    const double two = radial::rayleigh_min(radial::build_mesh(3, 2.0, 256, 1.0), m).value;
    dilation = std::max(dilation, std::abs(two * std::pow(2.0, m) / one - 1.0));
  }
  return {vs_pi < 5e-3 && vs_oracle < 5e-3 && dilation < 5e-3,
          fmt("lambda1=%.8f, vs pi^2 %.2e, vs FD oracle %.2e, dilation %.2e", lambda, vs_pi,
              vs_oracle, dilation)};
}

Outcome fibering_closed_form() {
  double worst_closed = 0.0;
  double worst_threshold = 0.0;
  for (int N : {3, 4}) {
    const double p = 2.0;
    const double ps = core::critical_exponent(N, p);
    const auto params = bubble::normalize(bubble::make_bubble(N, p, 1e-2, 1.0));
    for (const double A : {bubble::grad_norm_p(params), radial::sobolev_bubble_estimate(N, p)}) {
      mountain_pass::FiberingCoefficients c{A, 1.0, 1.0, p, 1.5, 0.5 * (p + ps), ps, 0.0, 0.0};
      const auto m = mountain_pass::fibering_max(c);
      worst_closed = std::max(worst_closed,
                              std::abs(m.t_max / std::pow(A, 1.0 / (ps - p)) - 1.0));
      worst_closed = std::max(worst_closed, std::abs(m.phi_max / (std::pow(A, N / p) / N) - 1.0));
    }
    const double S = radial::sobolev_bubble_estimate(N, p);
    mountain_pass::FiberingCoefficients c{S, 0.0, 1.0, p, 1.5, 0.5 * (p + ps), ps, 0.0, 0.0};
    const auto m = mountain_pass::fibering_max(c);
    worst_threshold =
        std::max(worst_threshold, std::abs(m.phi_max / core::threshold_energy(S, N, p) - 1.0));
  }
  return {worst_closed < 1e-10 && worst_threshold < 1e-8,
          fmt("closed form %.2e, threshold energy %.2e", worst_closed, worst_threshold)};
}

Outcome limit_root() {
  // The tolerance applies to the ray where the only eps-dependence is
  // ∫|∇v|^p → S (b = ν = 0). With b = ν = 1 the lower-order integrals pull
  // t_max off t0 at rate eps^{1/2} for s = 3.5; there we require monotone
  // approach and report the gap.
  const double S = mountain_pass::cached_sobolev(4, 2.0);
  const double t0 = mountain_pass::limit_root(S, 4, 2.0);
  auto gap = [&](const core::ProblemSpec& spec, double eps) {
    const auto params = bubble::normalize(bubble::make_bubble(4, 2.0, eps, 1.0));
    return std::abs(mountain_pass::level_upper_bound(spec, params).t_max / t0 - 1.0);
  };
  auto pure = make_spec(4, 2.0, 1.5, 3.5);
  pure.b = 0.0;
  pure.nu = 0.0;
  const double pure_gap = gap(pure, 1e-3);
  auto full = pure;
  full.b = 1.0;
  full.nu = 1.0;
  std::vector<double> gaps;
  for (double eps : {1e-2, 1e-3, 1e-4, 1e-5}) gaps.push_back(gap(full, eps));
  bool shrinking = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) shrinking = shrinking && gaps[i] < gaps[i - 1];
  return {pure_gap < 1e-2 && shrinking,
          fmt("t0=%.8f; b=nu=0 gap at eps=1e-3 %.2e; b=nu=1 gaps %.2e/%.2e/%.2e/%.2e at "
              "eps=1e-2..1e-5",
              t0, pure_gap, gaps[0], gaps[1], gaps[2], gaps[3])};
}

Outcome level_gap() {
  std::string detail;
  bool pass = true;
  const std::vector<double> fit_eps = quarter_decades(-6.0, -4.0);

  auto n4 = make_spec(4, 2.0, 1.5, 3.5);
  n4.b = 1.0;
  n4.nu = 1.0;
  const auto sweep4 = mountain_pass::epsilon_sweep(
      n4, mountain_pass::kappa_schedule(mountain_pass::default_eps_schedule(), 0.0));
  const auto decay4 = mountain_pass::quotient_decay(n4, 0.0, fit_eps);
  pass = pass && sweep4.conclusive() && decay4.first_error < 0.05 && decay4.second_error < 0.05;
  detail += fmt("N=4: flag at eps=%.3g, slopes %.4f/%.4f (pred %.4f/%.4f)",
                sweep4.conclusive() ? sweep4.rows[*sweep4.first_flag].level.eps : 0.0,
                decay4.first.slope, decay4.second.slope, decay4.predicted.first,
                decay4.predicted.second);

  auto n3 = make_spec(3, 2.0, 1.2, 5.0);
  n3.b = 1.0;
  n3.nu = 1.0;
  const double kappa = core::kappa_window(3, 2.0, 1.2, 5.0).midpoint();
  std::vector<double> schedule;
  for (int k = 0; k <= 10; ++k) schedule.push_back(std::pow(10.0, -1.0 - 0.5 * k));
  const auto sweep3 = mountain_pass::epsilon_sweep(n3, mountain_pass::kappa_schedule(schedule, kappa));
  const auto decay3 = mountain_pass::quotient_decay(n3, kappa, fit_eps);
  pass = pass && sweep3.conclusive() && decay3.first_error < 0.05 && decay3.second_error < 0.05;
  detail += fmt("; N=3 kappa=%.4g: flag at eps=%.3g, slopes %.4f/%.4f (pred %.4f/%.4f)", kappa,
                sweep3.conclusive() ? sweep3.rows[*sweep3.first_flag].level.eps : 0.0,
                decay3.first.slope, decay3.second.slope, decay3.predicted.first,
                decay3.predicted.second);
  return {pass, detail};
}

Outcome pohozaev_identity() {
  core::ProblemSpec spec = make_spec(3, 2.0, 1.5, 1.5);
  spec.b = 0.0;
  double worst_final = 0.0;
  double worst_order = 1e300;
  double worst_recombination = 0.0;
  for (const auto& profile : {pohozaev::parabola_profile(), pohozaev::cosine_profile()}) {
    std::vector<double> ns, residuals;
    for (int level = 9; level <= 12; ++level) {
      const auto mesh = radial::build_mesh(3, 1.0, 1 << level, 1.0);
      const auto sol = pohozaev::manufactured_solution(profile, spec, mesh);
      const auto rep = pohozaev::pohozaev_residual(sol.u, sol.nl, spec);
      ns.push_back(1 << level);
      residuals.push_back(std::abs(rep.relative()));
      worst_recombination =
          std::max(worst_recombination, pohozaev::recombination_residual(rep, spec));
    }
    worst_final = std::max(worst_final, residuals.back());
    worst_order = std::min(worst_order, -oracle::loglog_slope(ns, residuals));
  }
  return {worst_final < 1e-6 && worst_order >= 1.5 && worst_recombination < 1e-12,
          fmt("residual at n=4096 %.2e, observed order %.3f, recombination %.2e", worst_final,
              worst_order, worst_recombination)};
}

Outcome gradient_consistency() {
  core::ProblemSpec spec = make_spec(3, 2.0, 1.5, 3.0);
  spec.b = 1.0;
  spec.nu = 1.0;
  spec.mu = 0.5;
  std::mt19937_64 rng(20240111);
  const auto mesh = radial::build_mesh(3, 1.0, 128, 1.0);
  double worst = 1e300;
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = checks::random_profile_field(mesh, rng);
    const auto d = checks::random_direction(mesh, rng);
    worst = std::min(worst, checks::gradient_consistency(spec, u, d, 1e-2).order);
  }
  return {worst >= 1.9, fmt("minimum observed order %.4f over 20 fields", worst)};
}

Outcome nonexistence_scan() {
  core::ProblemSpec base = make_spec(3, 2.0, 1.5, 1.5);
  base.b = 0.0;
  pohozaev::ScanOptions opts;
  opts.seed = 20240112;
  const auto mesh = radial::build_mesh(3, 1.0, opts.mesh_n, opts.mesh_grading);
  const double mu1 = radial::rayleigh_min(mesh, 1.5).value;
  const double bound = core::mu_nonexistence_bound(3, 2.0, 1.5, mu1);
  std::vector<core::ProblemSpec> specs;
  for (double f : {0.0, 0.5, 1.0}) {
    auto s = base;
    s.mu = f * bound;
    specs.push_back(s);
  }
  const auto scan = pohozaev::nonexistence_scan(specs, opts);
  int trivial = 0, recorded = 0, rayleigh = 0, checked = 0;
  for (const auto& r : scan.rows) {
    trivial += r.trivial;
    recorded += !r.trivial && (!r.converged || r.diverged);
    rayleigh += r.rayleigh_ok;
    checked += r.iterates_checked;
  }
  const int runs = static_cast<int>(scan.rows.size());
  return {scan.passes && runs == 30 && trivial + recorded == runs && rayleigh == runs,
          fmt("consistency evidence, not proof: mu1=%.6f bound=%.6f, %d runs, %d trivial, "
              "%d recorded non-convergence, Rayleigh held on %d checked iterates",
              mu1, bound, runs, trivial, recorded, checked)};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& command, const fs::path& config, const fs::path& out,
            const std::string& extra) {
  const std::string cmd = std::string(PQLAB_CLI_PATH) + " " + command + " --config \"" +
                          config.string() + "\" --out \"" + out.string() + "\" " + extra +
                          " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism(const fs::path& scratch) {
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"classify", "classify.conf"},       {"bubble-rates", "bubble_rates.conf"},
      {"level-sweep", "level_sweep_n4.conf"}, {"eigen", "eigen.conf"},
      {"sobolev", "sobolev.conf"},         {"pohozaev", "pohozaev.conf"},
      {"nonexist-scan", "nonexist_scan.conf"}};
  int files = 0;
  std::string mismatch;
  for (const auto& [command, config] : runs) {
    const fs::path base = scratch / command;
    fs::remove_all(base);
    const fs::path cfg = fs::path(PQLAB_CONFIG_DIR) / config;
    if (run_cli(command, cfg, base / "first", "--jobs 1") != 0 ||
        run_cli(command, cfg, base / "second", "--jobs 2") != 0 ||
        run_cli(command, base / "first" / "manifest.txt", base / "replay", "") != 0) {
      return {false, command + ": CLI run failed"};
    }
    for (const auto& entry : fs::directory_iterator(base / "first")) {
      if (entry.path().extension() != ".csv") continue;
      const std::string name = entry.path().filename().string();
      const std::string reference = read_file(entry.path());
      for (const char* other : {"second", "replay"}) {
        if (read_file(base / other / name) != reference && mismatch.empty()) {
          mismatch = command + "/" + name + " vs " + other;
        }
      }
      ++files;
    }
  }
  if (!mismatch.empty()) return {false, "differs: " + mismatch};
  return {files > 0, fmt("%d CSV files byte-identical across reruns, job counts and manifest "
                         "replay", files)};
}

}  // namespace

int main(int argc, char** argv) {
  const fs::path scratch =
      argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "pqlab_acceptance";
  fs::create_directories(scratch);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"classifier equivalence", classifier_equivalence},
      {"kappa-window soundness", kappa_window_soundness},
      {"exact scaling", exact_scaling},
      {"bubble rates", theta_rates},
      {"Sobolev constant", sobolev_constant},
      {"eigenvalue oracle", eigenvalue_oracle},
      {"fibering closed form", fibering_closed_form},
      {"limit root", limit_root},
      {"level gap", level_gap},
      {"Pohozaev identity", pohozaev_identity},
      {"gradient consistency", gradient_consistency},
      {"nonexistence scan", nonexistence_scan},
      {"determinism", [&] { return determinism(scratch); }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !outcome.pass;
    std::printf("criterion %2zu %s: %s (%s) [%.1fs]\n", i + 1, outcome.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
