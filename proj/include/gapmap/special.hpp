#pragma once

namespace gapmap {

double log_gamma(double x);
double log_beta(double a, double b);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

// Two-sided p-value 2*P(T >= |t|) for Student's t with df degrees of
// freedom, through I_x(df/2, 1/2) with x = df/(df + t^2).
double student_t_tail(double t, double df);

// Chi-square quantile for 2 degrees of freedom (closed form -2*ln(1-p)).
double chi_square_quantile_2df(double p);

}  // namespace gapmap
