#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tokentiming/first_passage.hpp"

namespace tokentiming::ordent {

/// Sorted launch times of one epoch; deadline, when present, bounds them all.
class LaunchVector {
 public:
  explicit LaunchVector(std::vector<double> times,
                        std::optional<double> deadline = std::nullopt);

  const std::vector<double>& times() const { return times_; }
  std::optional<double> deadline() const { return deadline_; }
  int size() const { return static_cast<int>(times_.size()); }

 private:
  std::vector<double> times_;
  std::optional<double> deadline_;
};

/// Distribution of the confusion count for one epoch (Shannon support
/// 0..M-1); probabilities sum to one.
struct OrderingPMF {
  std::vector<double> probs;
  double mean() const;
};

/// One simulated epoch: launches, raw and sorted arrivals and the sorting
/// permutation (sorted_arrivals[i] = raw_arrivals[true_permutation[i]]).
struct ArrivalRealization {
  LaunchVector launches;
  std::vector<double> raw_arrivals;
  std::vector<double> sorted_arrivals;
  std::vector<int> true_permutation;
};

/// Law of the number of tokens among the first m launches still in transit
/// at launch m+1's would-be slot: a Poisson-binomial over the Gbar gaps,
/// computed by iterative convolution (never by the 2^m expansion).
/// Returns probabilities for ell = 0..m; requires 1 <= m <= M-1.
std::vector<double> theta_pmf(const LaunchVector& t, int m,
                              const dist::FirstPassageModel& passage);

/// Direct 2^m enumeration of the same quantity; test oracle, m <= 20.
double brute_force_theta(const LaunchVector& t, int m, int ell,
                         const dist::FirstPassageModel& passage);

/// Exact ordering-entropy upper bound H^(t) for a fixed launch vector,
/// sum_l log(1+l) sum_{m>=l} Theta_{m,l}; O(M^3).
double h_up_exact(const LaunchVector& t, const dist::FirstPassageModel& passage);

/// Confusion-count PMF p_{l|t}: the Theta rows averaged over the M slots,
/// the empty m = 0 slot landing on l = 0.  Requires M >= 2.
OrderingPMF ell_pmf(const LaunchVector& t, const dist::FirstPassageModel& passage);

/// Number of arrival-to-launch matchings with every transit time nonnegative:
/// the permanent of the staircase feasibility matrix, prod_i (c_i - (i-1))
/// with c_i = #{j : t_j <= s_i}.  Both lists sorted ascending, M <= 20.
std::uint64_t feasible_count(const std::vector<double>& s_sorted,
                             const std::vector<double>& t_sorted);

/// Shannon entropy of the posterior over the sorting permutation given the
/// launches and sorted arrivals.  Exponential passage short-circuits to
/// log(feasible_count) (the posterior is uniform over feasible matchings);
/// other models enumerate permutations, so M <= 9 there.
double posterior_ordering_entropy(const ArrivalRealization& real,
                                  const dist::FirstPassageModel& passage);

}  // namespace tokentiming::ordent
