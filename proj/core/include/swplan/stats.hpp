#pragma once

#include <span>

namespace swplan::stats {

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);  // n-1 denominator

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation.
double incomplete_beta(double a, double b, double x);

/// Two-sided tail probability of Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
};

/// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
/// freedom. Degenerate zero-variance inputs give p = 1 for equal means and
/// p = 0 otherwise.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

/// Spearman rank correlation (average ranks for ties).
double spearman_rho(std::span<const double> x, std::span<const double> y);

}  // namespace swplan::stats
