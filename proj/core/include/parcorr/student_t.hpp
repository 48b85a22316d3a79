#pragma once

namespace parcorr {

// Regularized incomplete beta function I_x(a, b), a, b > 0, x in [0, 1].
double incomplete_beta(double a, double b, double x);

// Student-t cumulative distribution function with df > 0 degrees of freedom.
double student_t_cdf(double t, double df);

// Upper tail P(T > t).
double student_t_sf(double t, double df);

// P(|T| > |t|).
double student_t_two_sided(double t, double df);

double normal_cdf(double x);

// Inverse of the standard normal CDF for p in (0, 1).
double normal_quantile(double p);

}  // namespace parcorr
