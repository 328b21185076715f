#include "tokentiming/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace tokentiming::dist {

namespace {

using Integrator = boost::math::quadrature::gauss_kronrod<double, 15>;

double panel(const std::function<double(double)>& f, double a, double b,
             double tol) {
  if (!(b > a)) return 0.0;
  double error = 0.0;
  double value = Integrator::integrate(f, a, b, 15, tol, &error);
  return value;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const std::vector<double>& breakpoints, double abs_tol) {
  if (std::isnan(a) || std::isnan(b)) throw std::invalid_argument("integrate: NaN bound");
  if (!(b > a)) return 0.0;

  std::vector<double> cuts;
  cuts.push_back(a);
  for (double c : breakpoints) {
    if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Relative tolerance for the boost kernel; panels are smooth after the
  // splits so the adaptive pass converges quickly.
  const double tol = std::max(abs_tol * 1e-2, 1e-15);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += panel(f, cuts[i], cuts[i + 1], tol);
  }
  return total;
}

}  // namespace tokentiming::dist
