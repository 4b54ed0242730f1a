#pragma once

// Experiment configuration, CSV output, and the command runners behind the
// pqlab executable.
//
// Config files are flat `key = value` lines with dotted sections
// (spec.N, mesh.n, schedule.eps); `#` starts a comment line; lists are
// comma-separated. Every run writes manifest.txt, itself a valid config that
// reproduces the run.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pqlab/core.hpp"

namespace pqlab::app {

enum class Command { Classify, BubbleRates, LevelSweep, Eigen, Sobolev, Pohozaev, NonexistScan };

std::string_view to_string(Command command);
/// Throws ConfigError for unknown names.
Command parse_command(std::string_view name);

// ---------------------------------------------------------------------------
// Raw key/value configuration.

using ConfigMap = std::map<std::string, std::string>;

/// Throws ConfigError on malformed lines or duplicate keys.
ConfigMap parse_config(std::string_view text);
ConfigMap load_config(const std::filesystem::path& path);

enum class RegionKind { Fixed, Perturbed, Both };

struct ExperimentConfig {
  Command command = Command::Classify;
  core::ProblemSpec spec{};
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string output_dir = "pqlab_out";

  int mesh_n = 256;
  double mesh_grading = 1.0;

  // ε/δ schedule of the level sweep; δ from schedule.delta or ε^κ.
  std::vector<double> schedule_eps;
  std::vector<double> schedule_delta;
  double schedule_kappa = 0.0;

  // Fitting window for rate exponents.
  std::vector<double> rates_eps;
  double rates_kappa = 0.0;

  std::vector<double> grid_q;
  std::vector<double> grid_s;
  RegionKind region = RegionKind::Both;

  bool level_perturbed = false;

  std::vector<double> sobolev_R;
  double sobolev_inner_ratio = 1e-8;
  double sobolev_mesh_ratio = 1.03;

  std::vector<std::string> pohozaev_profiles;
  std::vector<int> pohozaev_levels;

  std::vector<double> scan_mu_fraction;
  int scan_inits = 10;
  double scan_amplitude = 1e-2;
  int scan_max_iterations = 100000;

  /// (ε, δ) pairs of the sweep.
  std::vector<std::pair<double, double>> schedule() const;
};

struct Overrides {
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
};

/// Resolves defaults, validates every key and spec. Unknown keys, bad values
/// and invalid specs all raise ConfigError.
ExperimentConfig resolve_config(Command command, const ConfigMap& raw,
                                const Overrides& overrides = {});

/// Config text echoing every resolved parameter; parse_config accepts it.
std::string manifest_text(const ExperimentConfig& config);

// ---------------------------------------------------------------------------
// CSV output: RFC 4180 quoting, LF line endings, doubles as %.17g.

using CsvCell = std::variant<std::string, double, long long, bool>;

std::string format_double(double value);
std::string csv_escape(std::string_view field);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

  /// Throws Precondition if the cell count differs from the header.
  void row(const std::vector<CsvCell>& cells);
  void close();

 private:
  std::ofstream out_;
  std::size_t columns_;
};

// ---------------------------------------------------------------------------
// Region maps over (q, s) grids.

struct RegionCell {
  double q = 0.0;
  double s = 0.0;
  bool admissible = false;
  core::CaseTag case_tag = core::CaseTag::Inadmissible;
  double threshold_s = 0.0;
};

/// One cell per (q, s). Cells with s ≥ p* are never admissible. Throws
/// OutOfRange unless 1 < q < p and s > 1 on every grid point.
std::vector<RegionCell> region_map(int N, double p, const std::vector<double>& q_grid,
                                   const std::vector<double>& s_grid, RegionKind which);

/// Writes the region map as CSV with columns N,p,map,q,s,admissible,case,threshold_s.
void emit_region_map(const std::filesystem::path& path, int N, double p,
                     const std::vector<double>& q_grid, const std::vector<double>& s_grid,
                     RegionKind which);

// ---------------------------------------------------------------------------
// Runners. Each writes its CSV files and manifest.txt into output_dir and
// returns the list of files written.

std::vector<std::string> run(const ExperimentConfig& config);

}  // namespace pqlab::app
