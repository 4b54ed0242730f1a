#include "pqlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pqlab/error.hpp"

namespace pqlab::core {

namespace {

void check_exponents(int N, double p) {
  require(N >= 2, ErrorKind::OutOfRange, "dimension N must be >= 2");
  require(std::isfinite(p) && p > 1.0 && p < N, ErrorKind::OutOfRange,
          "need 1 < p < N");
}

ExistenceVerdict admit(CaseTag tag, double threshold) {
  return {true, tag, threshold};
}

ExistenceVerdict reject(double threshold) {
  return {false, CaseTag::Inadmissible, threshold};
}

}  // namespace

double ProblemSpec::critical() const { return critical_exponent(N, p); }

std::string_view to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::CaseI: return "case_i";
    case CaseTag::CaseII: return "case_ii";
    case CaseTag::PerturbedI: return "perturbed_i";
    case CaseTag::PerturbedII: return "perturbed_ii";
    case CaseTag::Inadmissible: return "inadmissible";
  }
  return "inadmissible";
}

double KappaWindow::midpoint() const {
  return 0.5 * (std::max(kappa_lo, 0.0) + std::min(kappa_hi, 1.0));
}

ProblemSpec validate_spec(const ProblemSpec& spec) {
  require(spec.N >= 2, ErrorKind::OutOfRange, "dimension N must be >= 2");
  const bool finite = std::isfinite(spec.p) && std::isfinite(spec.q);
  if (!finite || !(1.0 < spec.q && spec.q < spec.p && spec.p < spec.N)) {
    fail(ErrorKind::ExponentOrder, "need 1 < q < p < N, got q=" + std::to_string(spec.q) +
                                       " p=" + std::to_string(spec.p) +
                                       " N=" + std::to_string(spec.N));
  }
  const double pstar = spec.critical();
  require(spec.p < pstar, ErrorKind::ExponentOrder, "p* must exceed p");
  require(std::isfinite(spec.s) && spec.s > 1.0 && spec.s < pstar, ErrorKind::OutOfRange,
          "need 1 < s < p*");
  require(std::isfinite(spec.b) && spec.b >= 0.0, ErrorKind::OutOfRange, "need b >= 0");
  require(std::isfinite(spec.nu) && spec.nu >= 0.0, ErrorKind::OutOfRange, "need nu >= 0");
  require(std::isfinite(spec.mu) && spec.mu >= 0.0, ErrorKind::OutOfRange, "need mu >= 0");
  require(std::isfinite(spec.R) && spec.R > 0.0, ErrorKind::OutOfRange, "need R > 0");
  require(std::isfinite(spec.rho) && spec.rho > 0.0 && spec.rho <= spec.R,
          ErrorKind::OutOfRange, "need 0 < rho <= R");
  return spec;
}

double critical_exponent(int N, double p) {
  check_exponents(N, p);
  return N * p / (N - p);
}

double threshold_energy(double S, int N, double p) {
  check_exponents(N, p);
  require(std::isfinite(S) && S > 0.0, ErrorKind::OutOfRange, "need S > 0");
  return std::pow(S, N / p) / N;
}

double q_regime_boundary(int N, double p) { return N * (p - 1.0) / (N - 1.0); }

double s_regime_boundary(int N, double p) { return N * (p - 1.0) / (N - p); }

double case_i_s_threshold(int N, double p) {
  return static_cast<double>(N) * N * (p - 1.0) / ((N - 1.0) * (N - p));
}

double case_ii_s_threshold(int N, double p, double q) { return N * q / (N - p); }

double perturbed_s_threshold(int N, double p) {
  return (N * p - 2.0 * N + p) * p / ((N - p) * (p - 1.0));
}

ExistenceVerdict classify_existence_fixed(const ProblemSpec& spec) {
  const ProblemSpec v = validate_spec(spec);
  const double pstar = v.critical();
  if (v.q < q_regime_boundary(v.N, v.p)) {
    const double t = case_i_s_threshold(v.N, v.p);
    return (v.s > t && v.s < pstar) ? admit(CaseTag::CaseI, t) : reject(t);
  }
  const double t = case_ii_s_threshold(v.N, v.p, v.q);
  return (v.s > t && v.s < pstar) ? admit(CaseTag::CaseII, t) : reject(t);
}

ExistenceVerdict classify_existence_combined(const ProblemSpec& spec) {
  const ProblemSpec v = validate_spec(spec);
  const double t1 = case_i_s_threshold(v.N, v.p);
  const double t2 = case_ii_s_threshold(v.N, v.p, v.q);
  const double t = std::max(t1, t2);
  if (!(v.s > t && v.s < v.critical())) return reject(t);
  return admit(t1 > t2 ? CaseTag::CaseI : CaseTag::CaseII, t);
}

ExistenceVerdict classify_existence_perturbed(const ProblemSpec& spec) {
  const ProblemSpec v = validate_spec(spec);
  const double pstar = v.critical();
  if (v.N >= v.p * v.p) {
    return (v.q < v.s && v.s < pstar) ? admit(CaseTag::PerturbedI, v.q) : reject(v.q);
  }
  if (v.q < v.s && v.s < v.p) return admit(CaseTag::PerturbedII, v.q);
  const double t = perturbed_s_threshold(v.N, v.p);
  if (t < v.s && v.s < pstar) return admit(CaseTag::PerturbedII, t);
  return reject(t);
}

double mu_nonexistence_bound(int N, double p, double q, double mu1) {
  check_exponents(N, p);
  if (!(1.0 < q && q < p)) fail(ErrorKind::ExponentOrder, "need 1 < q < p");
  require(std::isfinite(mu1) && mu1 > 0.0, ErrorKind::OutOfRange, "need mu1 > 0");
  const double gap = N * (p - q);
  return gap * mu1 / (gap + p * q);
}

KappaWindow kappa_window(int N, double p, double q, double s) {
  check_exponents(N, p);
  require(q < q_regime_boundary(N, p), ErrorKind::Precondition,
          "kappa window needs q < N(p-1)/(N-1)");
  const double lo = (N * p * (p - 1.0) - (N - p) * (p - 1.0) * s - (N - p) * q) /
                    ((N * (p - 1.0) - (N - 1.0) * q) * p);
  const double hi = ((N - p) * (p - 1.0) * s - (N * p - 2.0 * N + p) * p) / ((N - p) * p);
  return {lo, hi, lo < hi && lo < 1.0 && hi > 0.0};
}

}  // namespace pqlab::core
