#pragma once

#include <functional>

namespace anisofield {

// tanh-sinh quadrature on a finite interval [a,b]; handles endpoint
// singularities. Converges to ~1e-14 relative on the integrands used here.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, int max_level = 12);

// Adaptive Simpson on [a,b].
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-10, int max_depth = 40);

// Alternating series sum with repeated-averaging (Euler) acceleration.
// terms(k) must return the k-th term including its sign.
double alternating_sum(const std::function<double(int)>& terms, int n_terms);

}  // namespace anisofield
