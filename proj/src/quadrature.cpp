#include "fraclt/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "fraclt/errors.hpp"

namespace fraclt {

GaussRule golub_welsch(std::span<const double> alpha, std::span<const double> beta, double mu0) {
  const auto n = static_cast<Eigen::Index>(alpha.size());
  if (n == 0 || beta.size() + 1 < alpha.size())
    throw DomainError("golub_welsch: inconsistent recurrence lengths");
  Eigen::VectorXd diag(n);
  Eigen::VectorXd sub(std::max<Eigen::Index>(n - 1, 0));
  for (Eigen::Index i = 0; i < n; ++i) diag(i) = alpha[i];
  for (Eigen::Index i = 0; i + 1 < n; ++i) sub(i) = std::sqrt(beta[i]);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericalError("golub_welsch: eigensolver failed");

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v0 = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

GaussRule gauss_legendre(int degree) {
  if (degree < 1) throw DomainError("gauss_legendre: degree must be >= 1");
  std::vector<double> alpha(degree, 0.0);
  std::vector<double> beta(degree - 1);
  for (int k = 1; k < degree; ++k) beta[k - 1] = k * k / (4.0 * k * k - 1.0);
  return golub_welsch(alpha, beta, 2.0);
}

GaussRule gauss_hermite(int degree) {
  if (degree < 1) throw DomainError("gauss_hermite: degree must be >= 1");
  // Probabilists' Hermite: He_{k+1} = x He_k - k He_{k-1}.
  std::vector<double> alpha(degree, 0.0);
  std::vector<double> beta(degree - 1);
  for (int k = 1; k < degree; ++k) beta[k - 1] = k;
  return golub_welsch(alpha, beta, 1.0);
}

namespace {

GaussRule build_half_range_hermite(int degree) {
  constexpr int kPanels = 280;
  constexpr int kPanelNodes = 24;
  constexpr double kUpper = 14.0;
  const GaussRule gl = gauss_legendre(kPanelNodes);

  std::vector<double> x;
  std::vector<double> w;
  x.reserve(kPanels * kPanelNodes);
  w.reserve(kPanels * kPanelNodes);
  const double width = kUpper / kPanels;
  const double inv_sqrt_2pi = 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
  for (int p = 0; p < kPanels; ++p) {
    const double mid = (p + 0.5) * width;
    for (int i = 0; i < kPanelNodes; ++i) {
      const double xi = mid + 0.5 * width * gl.nodes[i];
      x.push_back(xi);
      w.push_back(0.5 * width * gl.weights[i] * inv_sqrt_2pi * std::exp(-0.5 * xi * xi));
    }
  }

  // Discretized Stieltjes procedure on orthonormal polynomials.
  const std::size_t m = x.size();
  double mu0 = 0.0;
  for (double wi : w) mu0 += wi;
  std::vector<double> q_prev(m, 0.0);
  std::vector<double> q_cur(m, 1.0 / std::sqrt(mu0));
  std::vector<double> r(m);
  std::vector<double> alpha(degree);
  std::vector<double> beta(degree > 1 ? degree - 1 : 0);
  double b_prev = 0.0;
  for (int k = 0; k < degree; ++k) {
    double a = 0.0;
    for (std::size_t i = 0; i < m; ++i) a += w[i] * x[i] * q_cur[i] * q_cur[i];
    alpha[k] = a;
    if (k + 1 == degree) break;
    double norm = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      r[i] = (x[i] - a) * q_cur[i] - b_prev * q_prev[i];
      norm += w[i] * r[i] * r[i];
    }
    const double b = std::sqrt(norm);
    beta[k] = norm;
    for (std::size_t i = 0; i < m; ++i) {
      q_prev[i] = q_cur[i];
      q_cur[i] = r[i] / b;
    }
    b_prev = b;
  }
  return golub_welsch(alpha, beta, mu0);
}

}  // namespace

GaussRule half_range_hermite(int degree) {
  if (degree < 1 || degree > 200) throw DomainError("half_range_hermite: degree must be in [1, 200]");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(degree);
  if (it == cache.end()) it = cache.emplace(degree, build_half_range_hermite(degree)).first;
  return it->second;
}

IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     std::span<const double> breakpoints, double rel_tol,
                                     unsigned max_depth) {
  if (!(a < b)) return {};
  std::vector<double> cuts{a};
  std::vector<double> inner;
  for (double p : breakpoints)
    if (p > a && p < b) inner.push_back(p);
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  cuts.insert(cuts.end(), inner.begin(), inner.end());
  cuts.push_back(b);

  using boost::math::quadrature::gauss_kronrod;
  IntegrationResult total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double err = 0.0;
    const double v = gauss_kronrod<double, 15>::integrate(f, cuts[i], cuts[i + 1], max_depth,
                                                         rel_tol, &err);
    total.value += v;
    total.error += err;
  }
  return total;
}

}  // namespace fraclt
