#include "pqlab/app.hpp"
#include "pqlab/error.hpp"

namespace pqlab::app {

namespace {

RegionCell classify_cell(int N, double p, double q, double s, RegionKind which) {
  RegionCell cell{q, s, false, core::CaseTag::Inadmissible, 0.0};
  const double pstar = core::critical_exponent(N, p);
  if (s >= pstar) {
    // Outside the validated spec range; report the threshold that would apply.
    if (which == RegionKind::Fixed) {
      cell.threshold_s = q < core::q_regime_boundary(N, p) ? core::case_i_s_threshold(N, p)
                                                           : core::case_ii_s_threshold(N, p, q);
    } else {
      cell.threshold_s = N >= p * p ? q : core::perturbed_s_threshold(N, p);
    }
    return cell;
  }
  core::ProblemSpec spec;
  spec.N = N;
  spec.p = p;
  spec.q = q;
  spec.s = s;
  const core::ExistenceVerdict v = which == RegionKind::Fixed
                                       ? core::classify_existence_fixed(spec)
                                       : core::classify_existence_perturbed(spec);
  cell.admissible = v.admissible;
  cell.case_tag = v.case_tag;
  cell.threshold_s = v.threshold_s;
  return cell;
}

std::vector<RegionKind> kinds(RegionKind which) {
  if (which == RegionKind::Both) return {RegionKind::Fixed, RegionKind::Perturbed};
  return {which};
}

}  // namespace

std::vector<RegionCell> region_map(int N, double p, const std::vector<double>& q_grid,
                                   const std::vector<double>& s_grid, RegionKind which) {
  require(N >= 2 && p > 1.0 && p < N, ErrorKind::OutOfRange, "region map needs 1 < p < N");
  for (double q : q_grid) {
    require(q > 1.0 && q < p, ErrorKind::OutOfRange, "region map needs 1 < q < p");
  }
  for (double s : s_grid) require(s > 1.0, ErrorKind::OutOfRange, "region map needs s > 1");
  std::vector<RegionCell> out;
  for (RegionKind kind : kinds(which)) {
    for (double q : q_grid) {
      for (double s : s_grid) out.push_back(classify_cell(N, p, q, s, kind));
    }
  }
  return out;
}

void emit_region_map(const std::filesystem::path& path, int N, double p,
                     const std::vector<double>& q_grid, const std::vector<double>& s_grid,
                     RegionKind which) {
  CsvWriter csv(path, {"N", "p", "map", "q", "s", "admissible", "case", "threshold_s"});
  for (RegionKind kind : kinds(which)) {
    const std::string name = kind == RegionKind::Fixed ? "fixed" : "perturbed";
    for (const RegionCell& c : region_map(N, p, q_grid, s_grid, kind)) {
      csv.row({static_cast<long long>(N), p, name, c.q, c.s, c.admissible,
               std::string(core::to_string(c.case_tag)), c.threshold_s});
    }
  }
  csv.close();
}

}  // namespace pqlab::app
