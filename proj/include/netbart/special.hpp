#pragma once

namespace netbart {

// Regularized lower incomplete gamma P(a, x); Q(a, x) = 1 - P(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

double chi_square_cdf(double x, double dof);
// Inverse of chi_square_cdf in x, by bisection; p in (0, 1).
double chi_square_quantile(double p, double dof);

double normal_cdf(double z);

// Asymptotic two-sample Kolmogorov-Smirnov p-value for statistic d with
// sample sizes n1 and n2.
double ks_two_sample_pvalue(double d, int n1, int n2);

}  // namespace netbart
