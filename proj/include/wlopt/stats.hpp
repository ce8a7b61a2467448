#pragma once

#include <cstddef>

namespace wlopt {

double std_normal_cdf(double z);

// I_x(a, b), computed with a Lentz-style continued fraction. Converges to
// relative accuracy around 1e-14 for the degrees of freedom used here.
double regularized_incomplete_beta(double a, double b, double x);

// Left tail of Student's t with df degrees of freedom.
double student_t_cdf(double t, double df);

}  // namespace wlopt
