#pragma once

#include <functional>
#include <vector>

namespace tokentiming::dist {

/// Adaptive Gauss-Kronrod integration of f over [a, b].  Interior breakpoints
/// (kinks, discontinuities of f) are honoured by splitting the interval there
/// before the adaptive pass; b may be +infinity.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const std::vector<double>& breakpoints = {},
                 double abs_tol = 1e-12);

}  // namespace tokentiming::dist
