#pragma once

// Closed-form quantities for chase-escape on Gilbert graphs and on the
// comparison models (k-ary tree, one-dimensional chain).

namespace chase::analytics {

// (sqrt(x) - sqrt(x-1))^2 = 1 / (sqrt(x) + sqrt(x-1))^2, which equals
// 2x - 1 - 2 sqrt(x^2 - x) without the cancellation at large x. Threshold for lambda_i when x = mu_s * kappa_r. Requires x >= 1.
double rho(double x);

// The textbook form 2x - 1 - 2 sqrt(x^2 - x), kept for comparison.
double rho_direct(double x);

// Critical infection rate on the rooted k-ary tree: 2k - 1 - 2 sqrt(k^2 - k).
double tree_critical_rate(int k);

struct SurvivalBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// exp(-(mu_s + mu_w) kappa_r) <= P(local survival) <= (1 - theta) exp(-mu_w kappa_r).
SurvivalBounds local_survival_bounds(double mu_s, double mu_w, double r, int dim, double theta);

// Probability that an infected node with k knight neighbours and n
// susceptible neighbours is patched before it transmits: k / (k + n lambda_i).
double closed_node_prob(int k, int n, double lambda_i);

// (lambda_i / (lambda_i + n + m))^n.
double open_node_lower_bound(int n, int m, double lambda_i);

// 4 lambda / (1 + lambda)^2, the per-site decay of reaching distance n on
// the chain with a knight behind the root.
double reflection_decay(double lambda_i);

// C(alpha) = t - 1 - log t - log gamma with t = lambda_i r / alpha. Requires alpha > r lambda_i > 0.
double speed_constant(double gamma, double lambda_i, double r, double alpha);

struct SpeedSolution {
  double gamma = 0.0;
  double lambda_i = 0.0;
  double r = 0.0;
  double alpha_c = 0.0;
  double t_star = 0.0;  // in (0, 1): t - 1 - log t = log gamma
  int iterations = 0;
};

inline constexpr int kBisectionMaxIterations = 200;
inline constexpr double kBisectionRelTol = 1e-10;

// Critical speed alpha_c = lambda_i r / t_star: C(alpha) > 0 exactly for alpha > alpha_c.
SpeedSolution critical_speed(double gamma, double lambda_i, double r);

// Expected number of self-avoiding paths of n edges from the origin in
// g_r(X_S + o): (mu_s kappa_r)^n.
double expected_saw_count(double mu_s, double r, int dim, int n);

// Volume of the radius-r ball in dimension dim.
double kappa(double r, int dim);

}  // namespace chase::analytics
