#pragma once

#include <stdexcept>
#include <vector>

#include "tokentiming/density.hpp"
#include "tokentiming/first_passage.hpp"

namespace tokentiming::deadline {

/// Single-token timing channel: exponential first-passage with rate mu,
/// launch time constrained to [0, tau].
struct DeadlineChannel {
  double mu;
  double tau;

  DeadlineChannel(double mu_, double tau_) : mu(mu_), tau(tau_) {
    if (!(mu > 0.0) || !(tau >= 0.0)) throw std::invalid_argument("DeadlineChannel needs mu > 0, tau >= 0");
  }
};

/// Mass the optimal arrival law places before the deadline:
/// sigma* = mu tau / (e + mu tau).
double optimal_sigma(const DeadlineChannel& ch);

/// Channel capacity log(1 + mu tau / e) in nats.
double capacity(const DeadlineChannel& ch);

/// Capacity-achieving launch density: atoms at 0 and tau plus a uniform
/// interior.  Throws for tau = 0 (degenerate input).
dist::MixedDensity1D optimal_input(const DeadlineChannel& ch);

/// Arrival density induced by the optimal input: constant on [0, tau), an
/// exponential tail beyond.
dist::MixedDensity1D optimal_output(const DeadlineChannel& ch);

/// Differential entropy of the optimal arrival law, log((e + mu tau)/mu).
double optimal_output_entropy(const DeadlineChannel& ch);

/// h(S) split at the deadline: h(S) = sigma h(S|I) + (1-sigma) h(S|II) + H_B(sigma).
struct EntropyDecomposition {
  double sigma;
  double h_region1;  // nats, conditional on s in [0, tau]
  double h_region2;  // nats, conditional on s > tau
  double h_binary;   // H_B(sigma)
  double total;      // h(S)
};

EntropyDecomposition entropy_decomposition(const dist::MixedDensity1D& input,
                                           const DeadlineChannel& ch);

struct GridSpec {
  int input_points = 400;   // >= 200, includes mass points at 0 and tau
  int output_points = 4000; // >= 2000
  int max_iterations = 200000;
  double tol = 1e-9;        // successive-change stopping rule
};

struct NumericCapacityResult {
  double capacity_nats = 0.0;
  int iterations = 0;
  double last_change = 0.0;
  double duality_gap = 0.0;              // max_i D_i - C, bound on grid-capacity error
  std::vector<double> input_points;
  std::vector<double> input_weights;
};

/// Raised when an iterative solver hits its cap; carries the last iterate.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, NumericCapacityResult last)
      : std::runtime_error(what), last_iterate(std::move(last)) {}
  NumericCapacityResult last_iterate;
};

/// Blahut-Arimoto capacity of the discretized channel.  Output cells are
/// aligned so every input point sits on a cell edge; with exponential rows
/// the within-cell shape is then input-independent and binning loses nothing.
NumericCapacityResult numeric_capacity(const DeadlineChannel& ch,
                                       const GridSpec& grid = {});

/// Quadratic-fit diagnostics for J(s) = int f_T(t) log f_S(s+t) dt evaluated
/// at the Theorem-1 optimizers.  A nonzero region-I quadratic term is what
/// rules out exponential passage as the minmax corruption.
struct VariationalResidual {
  double region1_quadratic_coeff;
  double region2_quadratic_coeff;
  double fit_residual;  // worst RMS deviation from the per-region quadratic fit
};

VariationalResidual variational_check(const DeadlineChannel& ch,
                                      int points_per_region = 512);

}  // namespace tokentiming::deadline
