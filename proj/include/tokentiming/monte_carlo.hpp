#pragma once

#include <cstdint>
#include <memory>
#include <variant>

#include "tokentiming/iid_order.hpp"
#include "tokentiming/ordering.hpp"

namespace tokentiming::mc {

/// Mean with its standard error (sample sd / sqrt(n)).
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  long replications = 0;
};

using InputLaw = std::variant<iidorder::IIDInput, ordent::LaunchVector>;

/// One Monte-Carlo campaign.  Replication r always uses substream r of the
/// seed, so estimates are bit-identical for any worker count.
struct SimConfig {
  int M = 1;
  std::shared_ptr<const dist::FirstPassageModel> passage;
  InputLaw input;
  long replications = 10000;
  std::uint64_t seed = 0;
  int workers = 1;
};

/// Draw one epoch: launches (i.i.d. or fixed), passages, arrivals, sorting
/// permutation.
ordent::ArrivalRealization simulate_epoch(const SimConfig& cfg,
                                          dist::RandomStream& stream);

/// Mean posterior ordering entropy over epochs, E[H(Omega | s, t)].
Estimate estimate_ordering_entropy(const SimConfig& cfg);

/// Mean of Theta_{m,ell}(t) over sampled launch vectors; unbiased for
/// ThetaBar_{m,ell}.
Estimate estimate_theta_bar(const SimConfig& cfg, int m, int ell);

enum class GammaTarget { LaunchPairs, ArrivalPairs };

/// Pair-kernel average gamma: E[Q(X_i - X_j)] over all ordered pairs, with
/// X the launches or the arrivals S = T + D.
Estimate estimate_gamma(const SimConfig& cfg, GammaTarget target);

/// Variance of sum_{i != j} Q(S_i - S_j) across epochs, with the S vector
/// drawn i.i.d. from the configured law directly (the beta = 0 arrival
/// family); matches M (M-1) gamma_S'(0).  Standard error via the fourth
/// central moment.
Estimate estimate_gamma_variance(const SimConfig& cfg);

/// Mean of h_up_exact over sampled launch vectors, E_t[H^(t)].
Estimate estimate_h_up(const SimConfig& cfg);

/// Paired-sample mean of h_up_exact(t) - H(Omega | s, t); nonnegative in
/// expectation for any passage law, zero exactly for exponential.
Estimate estimate_bound_gap(const SimConfig& cfg);

}  // namespace tokentiming::mc
