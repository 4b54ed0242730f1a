#pragma once

// Independent reference computations for the tests. None of these call into
// the library's numerics.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// |S^{N-1}| from the Gamma function.
inline double sphere_measure(int N) {
  return 2.0 * std::pow(std::numbers::pi, N / 2.0) / std::tgamma(N / 2.0);
}

/// Best constant in ∫|∇u|^p ≥ S (∫|u|^{p*})^{p/p*} on R^N (Talenti's formula).
inline double sobolev_constant(int N, double p) {
  const double n = N;
  const double C = std::pow(std::numbers::pi, -0.5) * std::pow(n, -1.0 / p) *
                   std::pow((p - 1.0) / (n - p), 1.0 - 1.0 / p) *
                   std::pow(std::tgamma(1.0 + n / 2.0) * std::tgamma(n) /
                                (std::tgamma(n / p) * std::tgamma(1.0 + n - n / p)),
                            1.0 / n);
  return std::pow(C, -p);
}

/// First Dirichlet eigenvalue of -Δ on B_R ⊂ R^N from a vertex-centered
/// flux finite-difference scheme with n cells, solved densely.
inline double dense_fd_laplace_eigenvalue(int N, double R, int n) {
  const double h = R / n;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double right = std::pow((i + 0.5) * h, N - 1) / h;
    K(i, i) += right;
    if (i + 1 < n) {
      K(i + 1, i + 1) += right;
      K(i, i + 1) -= right;
      K(i + 1, i) -= right;
    }
    M(i, i) = i == 0 ? std::pow(0.5 * h, N) / N
                     : (std::pow((i + 0.5) * h, N) - std::pow((i - 0.5) * h, N)) / N;
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(K, M);
  return solver.eigenvalues()(0);
}

/// Richardson extrapolation of the second-order scheme above.
inline double laplace_eigenvalue(int N, double R, int n = 200) {
  const double coarse = dense_fd_laplace_eigenvalue(N, R, n);
  const double fine = dense_fd_laplace_eigenvalue(N, R, 2 * n);
  return (4.0 * fine - coarse) / 3.0;
}

/// Maximum of a unimodal-on-a-bracket function by dense log-grid search and
/// golden-section refinement.
struct Max {
  double t = 0.0;
  double value = 0.0;
};

inline Max grid_search_max(const std::function<double(double)>& f, double lo, double hi,
                           int points = 20000) {
  double best_t = lo;
  double best = f(lo);
  const double ratio = std::pow(hi / lo, 1.0 / (points - 1));
  double t = lo;
  for (int i = 0; i < points; ++i, t *= ratio) {
    const double v = f(t);
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  double a = best_t / ratio;
  double b = best_t * ratio;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < 200; ++i) {
    const double c = b - g * (b - a);
    const double d = a + g * (b - a);
    if (f(c) > f(d)) {
      b = d;
    } else {
      a = c;
    }
  }
  const double tm = 0.5 * (a + b);
  return {tm, f(tm)};
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
