#pragma once

#include "tokentiming/density.hpp"
#include "tokentiming/first_passage.hpp"

namespace tokentiming::iidorder {

/// I.i.d. launch law: each of the M launch times is drawn from `marginal`.
struct IIDInput {
  dist::MixedDensity1D marginal;
  double cdf(double t) const { return marginal.cdf(t); }
};

/// Capacity-achieving marginal under a mean launch constraint E[T] = tau:
/// an atom a = 1/(mu tau + 1) at zero plus an exponential tail.
IIDInput mean_constraint_input(double mu, double tau);

/// Capacity-achieving marginal under a launch deadline tau (atoms at 0 and
/// tau plus a uniform interior).
IIDInput deadline_optimal_input(double mu, double tau);

/// phi(t) = int_0^t f_T(x) Gbar(t - x) dx, the chance a token launched
/// before t is still in transit at t.  Jumps by the atom mass at each atom
/// of the marginal.
double phi(const IIDInput& input, const dist::FirstPassageModel& passage,
           double t);

/// phi as a jump-aware function plus its kink locations, for expectations
/// against the marginal.
dist::JumpFn phi_fn(const IIDInput& input, const dist::FirstPassageModel& passage);
std::vector<double> phi_kinks(const IIDInput& input,
                              const dist::FirstPassageModel& passage);

/// E[phi^k(T)] with the path-average rule at the atoms.
double expectation_phi_pow(const IIDInput& input,
                           const dist::FirstPassageModel& passage, int k);

/// Gamma_{M,l} = M C(M-1,l) E[phi^l (1-phi)^{M-1-l}], l in 1..M-1.
double gamma_Ml(const IIDInput& input, const dist::FirstPassageModel& passage,
                int M, int ell);

/// DeltaGamma_{M,l} via the alternating moment sum; falls back to the
/// Gamma-difference form when the alternating terms cancel catastrophically
/// (used_difference_form reports which route produced the value).
double delta_gamma(const IIDInput& input, const dist::FirstPassageModel& passage,
                   int M, int ell, bool* used_difference_form = nullptr);

/// H^(T) = sum_l DeltaGamma_{M,l} log (l+1)!  for i.i.d. launches; nats.
double h_up_iid(const IIDInput& input, const dist::FirstPassageModel& passage,
                int M);

/// ThetaBar_{m,l} for i.i.d. launches (single-integral form); the atoms sweep
/// F_T and phi jointly, so the path average runs over both.
double theta_bar_iid(const IIDInput& input, const dist::FirstPassageModel& passage,
                     int M, int m, int ell);

/// Closed form for the mean-constraint input with exponential passage:
/// (mu tau + 1) E[log K!], K ~ Binomial(M, 1/(1 + mu tau)).
double ordering_entropy_mean_constraint(double mu, double tau, int M);

/// Closed form for the deadline input with exponential passage: the three
/// binomial-expectation terms over K1 ~ Bin(M, e/(e+mu tau)) and
/// K2 ~ Bin(M, 1/(e+mu tau)).
double ordering_entropy_deadline(double mu, double tau, int M);

/// Same quantity summed directly from the per-l DeltaGamma closed form;
/// second algebraic route kept for cross-checks.
double ordering_entropy_deadline_gamma_route(double mu, double tau, int M);

/// lim H/M for the mean-constraint input: E[log K!]/rho, K ~ Poisson(rho).
double asymptotic_mean(double rho);

/// lim H/M for the deadline input: E[(K/rho - 1) log K!], K ~ Poisson(rho).
double asymptotic_deadline(double rho);

/// log k! via lgamma; safe for k ~ 1e4 and beyond.
double log_factorial(double k);

/// Exact C(n, k) as a double (n modest; every intermediate is an integer).
double binomial_coefficient(int n, int k);

/// Binomial PMF in log space; stable for M ~ 1e4.
double binomial_pmf(int trials, double p, int k);

}  // namespace tokentiming::iidorder
