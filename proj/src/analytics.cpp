#include "chase_escape/analytics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "chase_escape/errors.hpp"
#include "chase_escape/geometry.hpp"

namespace chase::analytics {

double rho(double x) {
  if (!(x >= 1.0) || !std::isfinite(x)) throw DomainError("rho: argument must be a finite value >= 1");
  // sqrt(x) - sqrt(x - 1) = 1 / (sqrt(x) + sqrt(x - 1)), free of subtraction.
  const double d = std::sqrt(x) + std::sqrt(x - 1.0);
  return 1.0 / (d * d);
}

double rho_direct(double x) {
  if (!(x >= 1.0) || !std::isfinite(x)) throw DomainError("rho: argument must be a finite value >= 1");
  return 2.0 * x - 1.0 - 2.0 * std::sqrt(x * x - x);
}

double tree_critical_rate(int k) {
  if (k < 1) throw DomainError("tree_critical_rate: k must be at least 1");
  return rho(static_cast<double>(k));
}

double kappa(double r, int dim) {
  if (dim < 1) throw DomainError("kappa: dimension must be at least 1");
  if (!(r >= 0.0)) throw DomainError("kappa: radius must be non-negative");
  return ball_volume(dim, r);
}

SurvivalBounds local_survival_bounds(double mu_s, double mu_w, double r, int dim, double theta) {
  if (!(mu_s >= 0.0) || !(mu_w >= 0.0)) throw DomainError("local_survival_bounds: intensities must be >= 0");
  if (!(theta >= 0.0 && theta <= 1.0)) throw DomainError("local_survival_bounds: theta must lie in [0, 1]");
  const double k = kappa(r, dim);
  return {std::exp(-(mu_s + mu_w) * k), (1.0 - theta) * std::exp(-mu_w * k)};
}

double closed_node_prob(int k, int n, double lambda_i) {
  if (n < 1) throw DomainError("closed_node_prob: needs at least one susceptible neighbour");
  if (k < 0) throw DomainError("closed_node_prob: k must be >= 0");
  if (!(lambda_i > 0.0)) throw DomainError("closed_node_prob: lambda_i must be positive");
  return k / (k + n * lambda_i);
}

double open_node_lower_bound(int n, int m, double lambda_i) {
  if (n < 0 || m < 0) throw DomainError("open_node_lower_bound: n and m must be >= 0");
  if (!(lambda_i > 0.0)) throw DomainError("open_node_lower_bound: lambda_i must be positive");
  return std::pow(lambda_i / (lambda_i + n + m), n);
}

double reflection_decay(double lambda_i) {
  if (!(lambda_i >= 0.0)) throw DomainError("reflection_decay: lambda_i must be >= 0");
  const double s = 1.0 + lambda_i;
  return 4.0 * lambda_i / (s * s);
}

double speed_constant(double gamma, double lambda_i, double r, double alpha) {
  if (!(gamma >= 1.0)) throw DomainError("speed_constant: gamma must be >= 1");
  if (!(lambda_i > 0.0 && r > 0.0)) throw DomainError("speed_constant: lambda_i and r must be positive");
  if (!(alpha > r * lambda_i)) throw DomainError("speed_constant: alpha must exceed r * lambda_i");
  const double t = lambda_i * r / alpha;
  return t - 1.0 - std::log(t) - std::log(gamma);
}

SpeedSolution critical_speed(double gamma, double lambda_i, double r) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) throw DomainError("critical_speed: gamma must exceed 1");
  if (!(lambda_i > 0.0 && r > 0.0)) throw DomainError("critical_speed: lambda_i and r must be positive");
  const double target = std::log(gamma);
  // f(t) = t - 1 - log t decreases from +inf to 0 on (0, 1].
  auto f = [&](double t) { return t - 1.0 - std::log(t) - target; };
  double hi = 1.0;  // f(hi) < 0
  double lo = 0.5;
  while (f(lo) <= 0.0) lo *= 0.5;  // f(lo) > 0
  SpeedSolution sol{gamma, lambda_i, r, 0.0, 0.0, 0};
  while (sol.iterations < kBisectionMaxIterations && (hi - lo) > kBisectionRelTol * lo) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) > 0.0) lo = mid;
    else hi = mid;
    ++sol.iterations;
  }
  sol.t_star = 0.5 * (lo + hi);
  sol.alpha_c = lambda_i * r / sol.t_star;
  if (!(speed_constant(gamma, lambda_i, r, sol.alpha_c * (1.0 + 1e-6)) > 0.0)) {
    throw std::logic_error("critical_speed: root check failed");
  }
  return sol;
}

double expected_saw_count(double mu_s, double r, int dim, int n) {
  if (n < 0) throw DomainError("expected_saw_count: n must be >= 0");
  if (!(mu_s >= 0.0)) throw DomainError("expected_saw_count: mu_s must be >= 0");
  return std::pow(mu_s * kappa(r, dim), n);
}

}  // namespace chase::analytics
