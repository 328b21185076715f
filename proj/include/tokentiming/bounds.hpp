#pragma once

#include <cstdint>
#include <stdexcept>

#include "tokentiming/iid_order.hpp"

namespace tokentiming::bounds {

/// (lambda, mu, rho, tau, M) bundle for sweeps; checks rho = lambda/mu and
/// M = lambda tau when all are supplied.
struct LoadPoint {
  double lambda;
  double mu;
  double rho;
  double tau;
  int M;

  static LoadPoint make(double lambda, double mu, double tau, int M);
};

/// gamma_T = E[exp(-mu |T1 - T2|)] for independent launches from `input`.
double gamma_T_iid(const iidorder::IIDInput& input, double mu);

/// Jensen bound on the expected ordering entropy:
/// M log(1 + (M-1) gamma_T / 2).
double h_up_gamma_bound(int M, double gamma_T);

/// Certified lower bound gamma_S >= gamma_T / 2 under exponential passage.
double gamma_S_lower(double gamma_T);

/// Z(x) = 2 (x + e^-x - 1) / x^2, the pair kernel of uniform arrivals;
/// series near zero to dodge cancellation.
double Z(double x);

/// gamma_S'(0): growth rate of the pair kernel under the exponential tilt,
/// in closed form at beta = 0 (uniform arrival law on [0, tau]^M).
double gamma_S0_prime(double mu, double tau, int M);

/// Surrogate tilt 1/(4 rho + 1); feeds the (M-1) gamma(beta*) <= 4 rho chain.
double beta_tilde(double rho);

/// Asymptotic per-token capacity upper bound log(1/rho + 4) in nats.
double cq_upper(double rho);

/// Per-unit-time counterpart lambda * cq_upper(rho).
double ct_upper(const LoadPoint& point);

struct BetaPoint {
  double beta;
  double gamma_value;
};

/// Experimental: bisection for the beta* fixed point gamma_S(beta) =
/// (1-beta)/((M-1) beta) against importance-sampled gamma_S estimates.
/// Demonstration only, M <= 4; large-M solutions are impractical and the
/// surrogate chain above replaces them.
BetaPoint beta_star_experimental(double mu, double tau, int M,
                                 std::uint64_t seed, long replications = 200000);

}  // namespace tokentiming::bounds
