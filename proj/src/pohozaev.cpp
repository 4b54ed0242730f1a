#include "pqlab/pohozaev.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <limits>
#include <random>
#include <tuple>

#include "pqlab/bubble.hpp"
#include "pqlab/error.hpp"
#include "pqlab/parallel.hpp"
#include "pqlab/quadrature.hpp"
#include "pqlab/simd.hpp"

namespace pqlab::pohozaev {

namespace {

constexpr int kPanels = 60;       // dyadic panels [R 2^{-k-1}, R 2^{-k}]
constexpr int kPanelOrder = 16;
constexpr int kMonotoneSamples = 4096;

// Tables for g(t) = h(u⁻¹(t)) and G(t) = ∫_{u⁻¹(t)}^R h |u'| dρ.
class ProfileInverse {
 public:
  ProfileInverse(RadialProfile profile, double p, double q, int N)
      : profile_(std::move(profile)), p_(p), q_(q), N_(N) {
    const double R = profile_.R;
    edges_.resize(kPanels + 1);
    for (int k = 0; k <= kPanels; ++k) edges_[k] = std::ldexp(R, -k);
    tail_.assign(kPanels + 1, 0.0);
    for (int k = 1; k <= kPanels; ++k) {
      tail_[k] = tail_[k - 1] + panel(edges_[k], edges_[k - 1]);
    }
  }

  // h(r) = -Σ_m r^{1-N} (r^{N-1} |u'|^{m-2} u')'.
  double h(double r) const {
    const double d = profile_.du(r);
    const double d2 = profile_.d2u(r);
    double total = 0.0;
    for (double m : {p_, q_}) {
      const double a = std::abs(d);
      if (a == 0.0) {
        if (m >= 2.0) continue;
        return std::numeric_limits<double>::infinity();
      }
      total -= std::pow(a, m - 2.0) * ((m - 1.0) * d2 + (N_ - 1.0) * d / r);
    }
    return total;
  }

  double radius_of(double t) const {
    const double R = profile_.R;
    if (t <= 0.0) return R;
    if (t >= profile_.u(0.0)) return 0.0;
    double lo = 0.0;
    double hi = R;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      if (profile_.u(mid) > t) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }

  double g_at_radius(double r) const { return h(std::max(r, std::ldexp(profile_.R, -kPanels))); }

  double G_at_radius(double r) const {
    const double R = profile_.R;
    if (r >= R) return 0.0;
    if (r <= edges_[kPanels]) return tail_[kPanels];
    int k = static_cast<int>(std::floor(std::log2(R / r)));
    k = std::clamp(k, 0, kPanels - 1);
    while (k > 0 && r > edges_[k]) --k;
    while (k < kPanels - 1 && r < edges_[k + 1]) ++k;
    return tail_[k] + panel(r, edges_[k]);
  }

  double g(double t) const { return g_at_radius(radius_of(t)); }
  double G(double t) const { return G_at_radius(radius_of(t)); }

 private:
  double panel(double a, double b) const {
    if (b <= a) return 0.0;
    const quad::GaussRule& rule = quad::gauss_legendre(kPanelOrder);
    double sum = 0.0;
    for (int i = 0; i < kPanelOrder; ++i) {
      const double r = 0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[i];
      sum += rule.weights[i] * h(r) * std::abs(profile_.du(r));
    }
    return 0.5 * (b - a) * sum;
  }

  RadialProfile profile_;
  double p_, q_;
  int N_;
  std::vector<double> edges_;
  std::vector<double> tail_;
};

// ∫ F(u_h) dx with the mesh's Gauss points on the linear interpolant.
template <class F>
double potential_integral(const radial::RadialField& u, F&& integrand) {
  const radial::RadialMesh& mesh = u.mesh();
  std::vector<double> v(mesh.cells());
  double total = 0.0;
  for (int k = 0; k < radial::RadialMesh::kPotentialOrder; ++k) {
    simd::lerp(u.values(), mesh.gauss_lambda(k), v);
    for (double& x : v) x = integrand(x);
    total += simd::dot(v, mesh.gauss_weights(k));
  }
  return total;
}

double sphere_area(int N, double R) { return quad::unit_sphere_measure(N) * std::pow(R, N - 1); }

double max_abs(std::initializer_list<double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

std::uint64_t stream_seed(std::uint64_t seed, std::size_t spec, int init) {
  return seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(spec) * 65537ULL +
                                          static_cast<std::uint64_t>(init) + 1ULL));
}

// Uniform [0, 1) from the top 53 bits; portable across standard libraries.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

RadialProfile parabola_profile(double R) {
  require(R > 0.0, ErrorKind::OutOfRange, "profile radius must be > 0");
  return {"parabola", R, [R](double r) { return 1.0 - (r / R) * (r / R); },
          [R](double r) { return -2.0 * r / (R * R); }, [R](double) { return -2.0 / (R * R); }};
}

RadialProfile cosine_profile(double R) {
  require(R > 0.0, ErrorKind::OutOfRange, "profile radius must be > 0");
  const double k = std::numbers::pi / (2.0 * R);
  return {"cosine", R, [k](double r) { return std::cos(k * r); },
          [k](double r) { return -k * std::sin(k * r); },
          [k](double r) { return -k * k * std::cos(k * r); }};
}

ManufacturedSolution manufactured_solution(const RadialProfile& profile,
                                           const core::ProblemSpec& spec,
                                           const radial::MeshPtr& mesh) {
  const core::ProblemSpec checked = core::validate_spec(spec);
  require(mesh != nullptr && std::abs(mesh->radius() - profile.R) <= 1e-12 * profile.R,
          ErrorKind::Precondition, "profile and mesh radii differ");
  require(std::abs(profile.u(profile.R)) <= 1e-12, ErrorKind::NonMonotone,
          "profile must vanish at R");
  for (int i = 1; i <= kMonotoneSamples; ++i) {
    const double r = profile.R * i / kMonotoneSamples;
    require(profile.du(r) < 0.0, ErrorKind::NonMonotone,
            "profile must be strictly decreasing on (0, R]");
  }
  auto table = std::make_shared<const ProfileInverse>(profile, checked.p, checked.q, checked.N);
  ManufacturedSolution out{radial::RadialField::interpolate(mesh, profile.u), {}};
  out.nl.g = [table](double t) { return table->g(t); };
  out.nl.G = [table](double t) { return table->G(t); };
  return out;
}

double boundary_derivative(const radial::RadialField& u) {
  const auto r = u.mesh().nodes();
  const auto v = u.values();
  const std::size_t n = r.size() - 1;
  const double x0 = r[n], x1 = r[n - 1], x2 = r[n - 2];
  const double f0 = v[n], f1 = v[n - 1], f2 = v[n - 2];
  return f0 * (1.0 / (x0 - x1) + 1.0 / (x0 - x2)) + f1 * (x0 - x2) / ((x1 - x0) * (x1 - x2)) +
         f2 * (x0 - x1) / ((x2 - x0) * (x2 - x1));
}

PohozaevReport pohozaev_residual(const radial::RadialField& u, const AutonomousNonlinearity& nl,
                                 const core::ProblemSpec& spec) {
  const core::ProblemSpec checked = core::validate_spec(spec);
  const int N = u.mesh().dimension();
  require(N == checked.N, ErrorKind::Precondition, "field and spec dimensions differ");
  const double p = checked.p;
  const double q = checked.q;
  const double ps = checked.critical();
  const double R = u.mesh().radius();

  PohozaevReport rep;
  rep.grad_p = radial::gradient_integral(u, p);
  rep.grad_q = radial::gradient_integral(u, q);
  rep.G_integral = potential_integral(u, [&](double t) { return t == 0.0 ? 0.0 : nl.G(t); });
  rep.ug_integral = potential_integral(u, [&](double t) { return t == 0.0 ? 0.0 : t * nl.g(t); });
  rep.normal_derivative = boundary_derivative(u);
  const double dn = std::abs(rep.normal_derivative);
  const double surface = R * sphere_area(N, R) *
                         ((1.0 - 1.0 / p) * std::pow(dn, p) + (1.0 - 1.0 / q) * std::pow(dn, q));

  rep.gradq_term = (1.0 / q - 1.0 / p) * rep.grad_q;
  rep.potential_term = rep.G_integral - rep.ug_integral / ps;
  rep.boundary_term = surface / N;
  rep.residual = rep.gradq_term - rep.potential_term + rep.boundary_term;
  rep.scale = max_abs({rep.gradq_term, rep.potential_term, rep.boundary_term});
  return rep;
}

IdentityResidual volume_identity(const PohozaevReport& rep, const core::ProblemSpec& spec) {
  const double N = spec.N;
  const double a = (N / spec.p - 1.0) * rep.grad_p;
  const double b = (N / spec.q - 1.0) * rep.grad_q;
  const double c = N * rep.G_integral;
  const double d = N * rep.boundary_term;
  return {a + b - c + d, max_abs({a, b, c, d})};
}

IdentityResidual tested_identity(const PohozaevReport& rep) {
  return {rep.grad_p + rep.grad_q - rep.ug_integral,
          max_abs({rep.grad_p, rep.grad_q, rep.ug_integral})};
}

double volume_identity_check(const radial::RadialField& u, const AutonomousNonlinearity& nl,
                             const core::ProblemSpec& spec) {
  return volume_identity(pohozaev_residual(u, nl, spec), spec).relative();
}

double tested_identity_check(const radial::RadialField& u, const AutonomousNonlinearity& nl,
                             const core::ProblemSpec& spec) {
  return tested_identity(pohozaev_residual(u, nl, spec)).relative();
}

double recombination_residual(const PohozaevReport& rep, const core::ProblemSpec& spec) {
  const IdentityResidual vol = volume_identity(rep, spec);
  const IdentityResidual tested = tested_identity(rep);
  const double factor = spec.N / spec.p - 1.0;
  const double combined = vol.residual - factor * tested.residual;
  const double target = spec.N * rep.residual;
  const double scale = max_abs({vol.scale, factor * tested.scale, spec.N * rep.scale});
  return scale > 0.0 ? std::abs(combined - target) / scale : 0.0;
}

ChainReport nonexistence_inequality(const radial::RadialField& u, const core::ProblemSpec& spec,
                                    double mu1) {
  const core::ProblemSpec checked = core::validate_spec(spec);
  const double p = checked.p;
  const double q = checked.q;
  const double ps = checked.critical();
  const int N = checked.N;
  const double R = u.mesh().radius();
  const double lq = radial::power_integral(u, q);
  const double gq = radial::gradient_integral(u, q);
  const double dn = std::abs(boundary_derivative(u));

  ChainReport rep;
  rep.boundary = R * sphere_area(N, R) *
                 ((1.0 - 1.0 / p) * std::pow(dn, p) + (1.0 - 1.0 / q) * std::pow(dn, q)) / N;
  rep.middle = (1.0 / q - 1.0 / ps) * checked.mu * lq - (1.0 / q - 1.0 / p) * gq;
  rep.right = (1.0 / q - 1.0 / p) * (mu1 * lq - gq);
  rep.scale = max_abs({(1.0 / q - 1.0 / ps) * checked.mu * lq, (1.0 / q - 1.0 / p) * gq,
                       (1.0 / q - 1.0 / p) * mu1 * lq});
  const double tol = 1e-8 * rep.scale;
  rep.middle_below_right = rep.middle <= rep.right + tol;
  rep.rayleigh_holds = rep.right <= tol;
  rep.pattern_holds = rep.boundary >= -1e-12 && rep.rayleigh_holds;
  return rep;
}

bool rayleigh_inequality_holds(const radial::RadialField& u, double q, double mu1) {
  const double lhs = mu1 * radial::power_integral(u, q);
  const double rhs = radial::gradient_integral(u, q);
  return lhs <= rhs + 1e-8 * std::max(std::abs(lhs), std::abs(rhs));
}

ScanResult nonexistence_scan(const std::vector<core::ProblemSpec>& specs,
                             const ScanOptions& options) {
  require(!specs.empty(), ErrorKind::Precondition, "scan needs at least one spec");
  require(options.inits >= 1, ErrorKind::OutOfRange, "scan needs at least one init");

  struct Prepared {
    core::ProblemSpec spec;
    radial::MeshPtr mesh;
    double mu1 = 0.0;
    double bound = 0.0;
  };
  std::vector<Prepared> prepared;
  std::map<std::tuple<int, double, double>, std::pair<radial::MeshPtr, double>> eigen_cache;
  for (const core::ProblemSpec& raw : specs) {
    core::ProblemSpec spec = raw;
    spec.s = spec.q;
    spec.b = 0.0;
    spec.nu = 1.0;
    spec = core::validate_spec(spec);
    const auto key = std::make_tuple(spec.N, spec.q, spec.R);
    auto it = eigen_cache.find(key);
    if (it == eigen_cache.end()) {
      radial::MeshPtr mesh =
          radial::build_mesh(spec.N, spec.R, options.mesh_n, options.mesh_grading);
      const double mu1 = radial::rayleigh_min(mesh, spec.q).value;
      it = eigen_cache.emplace(key, std::make_pair(mesh, mu1)).first;
    }
    const double mu1 = it->second.second;
    prepared.push_back(
        {spec, it->second.first, mu1, core::mu_nonexistence_bound(spec.N, spec.p, spec.q, mu1)});
  }

  ScanResult out;
  out.rows.resize(prepared.size() * options.inits);
  parallel_for(out.rows.size(), options.jobs, [&](std::size_t index) {
    const std::size_t si = index / options.inits;
    const int ii = static_cast<int>(index % options.inits);
    const Prepared& pr = prepared[si];
    const radial::MeshPtr& mesh = pr.mesh;
    std::mt19937_64 rng(stream_seed(options.seed, si, ii));

    std::vector<double> init(mesh->size(), 0.0);
    ScanRow row;
    row.spec_index = si;
    row.mu = pr.spec.mu;
    row.mu1 = pr.mu1;
    row.mu_bound = pr.bound;
    row.within_bound = pr.spec.mu <= pr.bound;
    row.init_index = ii;
    if (ii % 2 == 0) {
      row.init_kind = "random";
      for (double& v : init) v = options.random_amplitude * (2.0 * unit(rng) - 1.0);
    } else {
      row.init_kind = "bubble";
      const double amplitude = options.random_amplitude * (1.0 + 9.0 * unit(rng));
      const bubble::BubbleParams params = bubble::make_bubble(
          pr.spec.N, pr.spec.p, 0.2, 1.0, bubble::CutoffProfile(pr.spec.R));
      const double peak = bubble::eval_bubble(params, 0.0).value;
      for (std::size_t i = 0; i < init.size(); ++i) {
        init[i] = amplitude * bubble::eval_bubble(params, mesh->nodes()[i]).value / peak;
      }
    }
    const radial::RadialField start(mesh, init);
    row.rayleigh_ok = rayleigh_inequality_holds(start, pr.spec.q, pr.mu1);
    row.iterates_checked = 1;

    radial::DescentOptions dopt;
    dopt.max_iterations = options.max_iterations;
    dopt.divergence_bound = 1e6;
    dopt.trace_every = 1;
    dopt.observer = [&](int, const radial::RadialField& u) {
      row.rayleigh_ok = row.rayleigh_ok && rayleigh_inequality_holds(u, pr.spec.q, pr.mu1);
      ++row.iterates_checked;
    };
    const radial::DescentResult res = radial::descent(pr.spec, start, dopt);
    row.converged = res.converged;
    row.diverged = res.diverged;
    row.iterations = res.iterations;
    row.residual = res.residual;
    row.final_norm = res.field.sup_norm();
    row.trivial = row.final_norm < options.trivial_norm;
    out.rows[index] = row;
  });

  for (const ScanRow& row : out.rows) {
    if (!row.within_bound) continue;
    const bool acceptable = row.trivial || !row.converged;
    if (!acceptable || !row.rayleigh_ok) out.passes = false;
  }
  return out;
}

}  // namespace pqlab::pohozaev
