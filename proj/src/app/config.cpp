#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <sstream>

#include "pqlab/app.hpp"
#include "pqlab/error.hpp"
#include "pqlab/mountain_pass.hpp"

namespace pqlab::app {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void config_error(const std::string& what) { fail(ErrorKind::ConfigError, what); }

double parse_double(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
    config_error(key + ": not a finite number: '" + text + "'");
  }
  return v;
}

long long parse_integer(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    config_error(key + ": not an integer: '" + text + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  if (out.empty()) out.emplace_back();
  return out;
}

std::vector<double> parse_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split_list(text)) out.push_back(parse_double(key, item));
  return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  config_error(key + ": expected true or false, got '" + text + "'");
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

std::string join(const std::vector<std::string>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += values[i];
  }
  return out;
}

std::string join(const std::vector<int>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

std::vector<double> decades(double from, double to, double step) {
  std::vector<double> out;
  const int n = static_cast<int>(std::lround((to - from) / step));
  for (int i = 0; i <= n; ++i) out.push_back(std::pow(10.0, from + step * i));
  return out;
}

std::string_view region_name(RegionKind kind) {
  switch (kind) {
    case RegionKind::Fixed: return "fixed";
    case RegionKind::Perturbed: return "perturbed";
    case RegionKind::Both: return "both";
  }
  return "both";
}

double resolve_kappa(const core::ProblemSpec& spec, const std::string& key,
                     const std::string& text) {
  if (text != "mid") return parse_double(key, text);
  if (!(spec.q < core::q_regime_boundary(spec.N, spec.p))) {
    config_error(key + " = mid needs q < N(p-1)/(N-1)");
  }
  const core::KappaWindow w = core::kappa_window(spec.N, spec.p, spec.q, spec.s);
  if (!w.feasible) config_error(key + " = mid: the kappa window is empty");
  return w.midpoint();
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::Classify: return "classify";
    case Command::BubbleRates: return "bubble-rates";
    case Command::LevelSweep: return "level-sweep";
    case Command::Eigen: return "eigen";
    case Command::Sobolev: return "sobolev";
    case Command::Pohozaev: return "pohozaev";
    case Command::NonexistScan: return "nonexist-scan";
  }
  return "classify";
}

Command parse_command(std::string_view name) {
  for (Command c : {Command::Classify, Command::BubbleRates, Command::LevelSweep, Command::Eigen,
                    Command::Sobolev, Command::Pohozaev, Command::NonexistScan}) {
    if (to_string(c) == name) return c;
  }
  config_error("unknown command '" + std::string(name) + "'");
}

ConfigMap parse_config(std::string_view text) {
  ConfigMap out;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      config_error("line " + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) config_error("line " + std::to_string(number) + ": empty key");
    if (!out.emplace(key, value).second) {
      config_error("line " + std::to_string(number) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

ConfigMap load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) config_error("cannot read config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::vector<std::pair<double, double>> ExperimentConfig::schedule() const {
  if (schedule_delta.empty()) return mountain_pass::kappa_schedule(schedule_eps, schedule_kappa);
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < schedule_eps.size(); ++i) {
    out.emplace_back(schedule_eps[i], schedule_delta[i]);
  }
  return out;
}

ExperimentConfig resolve_config(Command command, const ConfigMap& raw,
                                const Overrides& overrides) {
  ExperimentConfig c;
  c.command = command;
  c.schedule_eps = mountain_pass::default_eps_schedule();
  c.rates_eps = decades(-5.0, -3.0, 0.25);
  c.sobolev_R = {1.0, 2.0};
  c.pohozaev_profiles = {"parabola", "cosine"};
  c.pohozaev_levels = {9, 10, 11, 12};
  c.scan_mu_fraction = {0.0, 0.5, 1.0};

  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = raw.find(key);
    return it == raw.end() ? nullptr : &it->second;
  };

  using Setter = std::function<void(const std::string& key, const std::string& value)>;
  const std::map<std::string, Setter> setters = {
      {"command",
       [&](const std::string& key, const std::string& v) {
         if (v != to_string(command)) {
           config_error(key + " = " + v + " does not match the requested command");
         }
       }},
      {"seed",
       [&](const std::string& key, const std::string& v) {
         const long long s = parse_integer(key, v);
         if (s < 0) config_error("seed must be >= 0");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"jobs", [&](const std::string& key, const std::string& v) {
         c.jobs = static_cast<int>(parse_integer(key, v));
       }},
      {"output_dir", [&](const std::string&, const std::string& v) { c.output_dir = v; }},
      {"spec.N", [&](const std::string& key, const std::string& v) {
         c.spec.N = static_cast<int>(parse_integer(key, v));
       }},
      {"spec.p", [&](const std::string& k, const std::string& v) { c.spec.p = parse_double(k, v); }},
      {"spec.q", [&](const std::string& k, const std::string& v) { c.spec.q = parse_double(k, v); }},
      {"spec.s", [&](const std::string& k, const std::string& v) { c.spec.s = parse_double(k, v); }},
      {"spec.b", [&](const std::string& k, const std::string& v) { c.spec.b = parse_double(k, v); }},
      {"spec.nu", [&](const std::string& k, const std::string& v) { c.spec.nu = parse_double(k, v); }},
      {"spec.mu", [&](const std::string& k, const std::string& v) { c.spec.mu = parse_double(k, v); }},
      {"spec.R", [&](const std::string& k, const std::string& v) { c.spec.R = parse_double(k, v); }},
      {"spec.rho",
       [&](const std::string& k, const std::string& v) { c.spec.rho = parse_double(k, v); }},
      {"mesh.n", [&](const std::string& key, const std::string& v) {
         c.mesh_n = static_cast<int>(parse_integer(key, v));
       }},
      {"mesh.grading",
       [&](const std::string& k, const std::string& v) { c.mesh_grading = parse_double(k, v); }},
      {"schedule.eps",
       [&](const std::string& k, const std::string& v) { c.schedule_eps = parse_doubles(k, v); }},
      {"schedule.delta",
       [&](const std::string& k, const std::string& v) { c.schedule_delta = parse_doubles(k, v); }},
      {"schedule.kappa", [](const std::string&, const std::string&) {}},  // needs the spec
      {"rates.eps",
       [&](const std::string& k, const std::string& v) { c.rates_eps = parse_doubles(k, v); }},
      {"rates.kappa", [](const std::string&, const std::string&) {}},  // needs the spec
      {"grid.q", [&](const std::string& k, const std::string& v) { c.grid_q = parse_doubles(k, v); }},
      {"grid.s", [&](const std::string& k, const std::string& v) { c.grid_s = parse_doubles(k, v); }},
      {"region.which",
       [&](const std::string& key, const std::string& v) {
         if (v == "fixed") {
           c.region = RegionKind::Fixed;
         } else if (v == "perturbed") {
           c.region = RegionKind::Perturbed;
         } else if (v == "both") {
           c.region = RegionKind::Both;
         } else {
           config_error(key + ": expected fixed, perturbed or both");
         }
       }},
      {"level.perturbed",
       [&](const std::string& k, const std::string& v) { c.level_perturbed = parse_bool(k, v); }},
      {"sobolev.R",
       [&](const std::string& k, const std::string& v) { c.sobolev_R = parse_doubles(k, v); }},
      {"sobolev.inner_ratio",
       [&](const std::string& k, const std::string& v) {
         c.sobolev_inner_ratio = parse_double(k, v);
       }},
      {"sobolev.mesh_ratio",
       [&](const std::string& k, const std::string& v) { c.sobolev_mesh_ratio = parse_double(k, v); }},
      {"pohozaev.profiles",
       [&](const std::string& key, const std::string& v) {
         c.pohozaev_profiles = split_list(v);
         for (const std::string& name : c.pohozaev_profiles) {
           if (name != "parabola" && name != "cosine") {
             config_error(key + ": unknown profile '" + name + "'");
           }
         }
       }},
      {"pohozaev.levels",
       [&](const std::string& key, const std::string& v) {
         c.pohozaev_levels.clear();
         for (const std::string& item : split_list(v)) {
           c.pohozaev_levels.push_back(static_cast<int>(parse_integer(key, item)));
         }
       }},
      {"scan.mu_fraction",
       [&](const std::string& k, const std::string& v) { c.scan_mu_fraction = parse_doubles(k, v); }},
      {"scan.inits", [&](const std::string& key, const std::string& v) {
         c.scan_inits = static_cast<int>(parse_integer(key, v));
       }},
      {"scan.amplitude",
       [&](const std::string& k, const std::string& v) { c.scan_amplitude = parse_double(k, v); }},
      {"scan.max_iterations", [&](const std::string& key, const std::string& v) {
         c.scan_max_iterations = static_cast<int>(parse_integer(key, v));
       }},
  };

  for (const auto& [key, value] : raw) {
    const auto it = setters.find(key);
    if (it == setters.end()) config_error("unknown config key '" + key + "'");
    it->second(key, value);
  }
  if (overrides.output_dir) c.output_dir = *overrides.output_dir;
  if (overrides.seed) c.seed = *overrides.seed;
  if (overrides.jobs) c.jobs = *overrides.jobs;

  try {
    c.spec = core::validate_spec(c.spec);
  } catch (const Error& e) {
    config_error(std::string("invalid spec: ") + e.what());
  }
  if (const std::string* v = get("schedule.kappa")) {
    c.schedule_kappa = resolve_kappa(c.spec, "schedule.kappa", *v);
  }
  if (const std::string* v = get("rates.kappa")) {
    c.rates_kappa = resolve_kappa(c.spec, "rates.kappa", *v);
  }

  if (c.jobs < 1) config_error("jobs must be >= 1");
  if (c.mesh_n < 16) config_error("mesh.n must be >= 16");
  if (!(c.mesh_grading >= 1.0)) config_error("mesh.grading must be >= 1");
  if (c.schedule_eps.empty()) config_error("schedule.eps is empty");
  for (double e : c.schedule_eps) {
    if (!(e > 0.0)) config_error("schedule.eps entries must be > 0");
  }
  if (!c.schedule_delta.empty() && c.schedule_delta.size() != c.schedule_eps.size()) {
    config_error("schedule.delta must match schedule.eps in length");
  }
  for (double d : c.schedule_delta) {
    if (!(d > 0.0 && d <= 1.0)) config_error("schedule.delta entries must be in (0, 1]");
  }
  if (!(c.schedule_kappa >= 0.0 && c.schedule_kappa < 1.0)) {
    config_error("schedule.kappa must be in [0, 1)");
  }
  if (!(c.rates_kappa >= 0.0 && c.rates_kappa < 1.0)) {
    config_error("rates.kappa must be in [0, 1)");
  }
  const auto sched = c.schedule();
  for (std::size_t i = 1; i < sched.size(); ++i) {
    if (!(sched[i].first / sched[i].second < sched[i - 1].first / sched[i - 1].second)) {
      config_error("schedule must have strictly decreasing eps/delta");
    }
  }
  if (c.rates_eps.size() < 4) config_error("rates.eps needs at least 4 values");
  for (double e : c.rates_eps) {
    if (!(e > 0.0 && e < 1.0)) config_error("rates.eps entries must be in (0, 1)");
  }
  for (double R : c.sobolev_R) {
    if (!(R > 0.0)) config_error("sobolev.R entries must be > 0");
  }
  if (!(c.sobolev_inner_ratio > 0.0 && c.sobolev_inner_ratio < 1.0)) {
    config_error("sobolev.inner_ratio must be in (0, 1)");
  }
  if (!(c.sobolev_mesh_ratio > 1.0)) config_error("sobolev.mesh_ratio must be > 1");
  for (int level : c.pohozaev_levels) {
    if (level < 4 || level > 16) config_error("pohozaev.levels entries must be in [4, 16]");
  }
  for (double f : c.scan_mu_fraction) {
    if (!(f >= 0.0)) config_error("scan.mu_fraction entries must be >= 0");
  }
  if (c.scan_inits < 1) config_error("scan.inits must be >= 1");
  if (!(c.scan_amplitude > 0.0)) config_error("scan.amplitude must be > 0");
  if (c.scan_max_iterations < 1) config_error("scan.max_iterations must be >= 1");
  for (double q : c.grid_q) {
    if (!(q > 1.0 && q < c.spec.p)) config_error("grid.q entries must lie in (1, p)");
  }
  for (double s : c.grid_s) {
    if (!(s > 1.0)) config_error("grid.s entries must be > 1");
  }
  if (c.grid_q.empty()) {
    for (int k = 1; k <= 9; ++k) c.grid_q.push_back(1.0 + (c.spec.p - 1.0) * k / 10.0);
  }
  if (c.grid_s.empty()) {
    const double ps = c.spec.critical();
    for (int k = 1; k <= 20; ++k) c.grid_s.push_back(1.0 + (ps - 1.0) * k / 20.0);
  }
  return c;
}

std::string manifest_text(const ExperimentConfig& c) {
  std::ostringstream out;
  auto line = [&](std::string_view key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  out << "# pqlab run manifest; rerun with: pqlab " << to_string(c.command)
      << " --config manifest.txt\n";
  line("command", std::string(to_string(c.command)));
  line("seed", std::to_string(c.seed));
  line("jobs", std::to_string(c.jobs));
  line("spec.N", std::to_string(c.spec.N));
  line("spec.p", format_double(c.spec.p));
  line("spec.q", format_double(c.spec.q));
  line("spec.s", format_double(c.spec.s));
  line("spec.b", format_double(c.spec.b));
  line("spec.nu", format_double(c.spec.nu));
  line("spec.mu", format_double(c.spec.mu));
  line("spec.R", format_double(c.spec.R));
  line("spec.rho", format_double(c.spec.rho));
  line("mesh.n", std::to_string(c.mesh_n));
  line("mesh.grading", format_double(c.mesh_grading));
  line("schedule.eps", join(c.schedule_eps));
  if (!c.schedule_delta.empty()) line("schedule.delta", join(c.schedule_delta));
  line("schedule.kappa", format_double(c.schedule_kappa));
  line("rates.eps", join(c.rates_eps));
  line("rates.kappa", format_double(c.rates_kappa));
  line("grid.q", join(c.grid_q));
  line("grid.s", join(c.grid_s));
  line("region.which", std::string(region_name(c.region)));
  line("level.perturbed", c.level_perturbed ? "true" : "false");
  line("sobolev.R", join(c.sobolev_R));
  line("sobolev.inner_ratio", format_double(c.sobolev_inner_ratio));
  line("sobolev.mesh_ratio", format_double(c.sobolev_mesh_ratio));
  line("pohozaev.profiles", join(c.pohozaev_profiles));
  line("pohozaev.levels", join(c.pohozaev_levels));
  line("scan.mu_fraction", join(c.scan_mu_fraction));
  line("scan.inits", std::to_string(c.scan_inits));
  line("scan.amplitude", format_double(c.scan_amplitude));
  line("scan.max_iterations", std::to_string(c.scan_max_iterations));
  return out.str();
}

}  // namespace pqlab::app
