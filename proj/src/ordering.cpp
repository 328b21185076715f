#include "tokentiming/ordering.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tokentiming::ordent {

LaunchVector::LaunchVector(std::vector<double> times,
                           std::optional<double> deadline)
    : times_(std::move(times)), deadline_(deadline) {
  if (times_.empty()) throw std::invalid_argument("LaunchVector: empty");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!(times_[i] >= 0.0)) throw std::invalid_argument("LaunchVector: negative launch time");
    if (i > 0 && times_[i] < times_[i - 1]) throw std::invalid_argument("LaunchVector: not sorted");
    if (deadline_ && times_[i] > *deadline_ + 1e-12) throw std::invalid_argument("LaunchVector: launch beyond deadline");
  }
}

double OrderingPMF::mean() const {
  double m = 0.0;
  for (std::size_t l = 0; l < probs.size(); ++l) m += static_cast<double>(l) * probs[l];
  return m;
}

std::vector<double> theta_pmf(const LaunchVector& t, int m,
                              const dist::FirstPassageModel& passage) {
  const int M = t.size();
  if (m < 1 || m > M - 1) throw std::invalid_argument("theta_pmf: m out of range");
  const auto& tv = t.times();

  std::vector<double> pmf(static_cast<std::size_t>(m) + 1, 0.0);
  pmf[0] = 1.0;
  for (int j = 0; j < m; ++j) {
    const double p = std::clamp(passage.ccdf(tv[m] - tv[j]), 0.0, 1.0);
    for (int l = j + 1; l >= 1; --l) pmf[l] = pmf[l] * (1.0 - p) + pmf[l - 1] * p;
    pmf[0] *= (1.0 - p);
  }
  return pmf;
}

double brute_force_theta(const LaunchVector& t, int m, int ell,
                         const dist::FirstPassageModel& passage) {
  const int M = t.size();
  if (m < 1 || m > M - 1) throw std::invalid_argument("brute_force_theta: m out of range");
  if (m > 20) throw std::invalid_argument("brute_force_theta: m too large for 2^m enumeration");
  if (ell < 0 || ell > m) return 0.0;
  const auto& tv = t.times();

  std::vector<double> gbar(m), g(m);
  for (int j = 0; j < m; ++j) {
    gbar[j] = passage.ccdf(tv[m] - tv[j]);
    g[j] = 1.0 - gbar[j];
  }
  double total = 0.0;
  for (std::uint32_t bits = 0; bits < (1u << m); ++bits) {
    if (std::popcount(bits) != ell) continue;
    double prod = 1.0;
    for (int j = 0; j < m; ++j) prod *= (bits >> j & 1u) ? gbar[j] : g[j];
    total += prod;
  }
  return total;
}

double h_up_exact(const LaunchVector& t, const dist::FirstPassageModel& passage) {
  const int M = t.size();
  double h = 0.0;
  for (int m = 1; m <= M - 1; ++m) {
    const auto pmf = theta_pmf(t, m, passage);
    for (int l = 1; l <= m; ++l) h += std::log1p(static_cast<double>(l)) * pmf[l];
  }
  return h;
}

OrderingPMF ell_pmf(const LaunchVector& t, const dist::FirstPassageModel& passage) {
  const int M = t.size();
  if (M < 2) throw std::invalid_argument("ell_pmf: M must be >= 2");
  OrderingPMF out;
  out.probs.assign(static_cast<std::size_t>(M), 0.0);
  out.probs[0] = 1.0;  // the m = 0 slot never confuses anything
  for (int m = 1; m <= M - 1; ++m) {
    const auto pmf = theta_pmf(t, m, passage);
    for (int l = 0; l <= m; ++l) out.probs[l] += pmf[l];
  }
  for (double& p : out.probs) p /= static_cast<double>(M);
  return out;
}

std::uint64_t feasible_count(const std::vector<double>& s_sorted,
                             const std::vector<double>& t_sorted) {
  const std::size_t M = s_sorted.size();
  if (t_sorted.size() != M) throw std::invalid_argument("feasible_count: length mismatch");
  std::uint64_t count = 1;
  std::size_t c = 0;
  for (std::size_t i = 0; i < M; ++i) {
    while (c < M && t_sorted[c] <= s_sorted[i]) ++c;
    if (c <= i) return 0;
    count *= static_cast<std::uint64_t>(c - i);
  }
  return count;
}

double posterior_ordering_entropy(const ArrivalRealization& real,
                                  const dist::FirstPassageModel& passage) {
  const int M = real.launches.size();
  const auto& s = real.sorted_arrivals;
  const auto& t = real.launches.times();
  if (M == 1) return 0.0;

  if (passage.memoryless()) {
    const std::uint64_t count = feasible_count(s, t);
    if (count == 0) throw std::domain_error("posterior_ordering_entropy: no feasible matching");
    return std::log(static_cast<double>(count));
  }

  if (M > 9) throw std::invalid_argument("posterior_ordering_entropy: general path capped at M = 9");

  std::vector<int> perm(static_cast<std::size_t>(M));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<double> weights;
  do {
    double w = 1.0;
    for (int i = 0; i < M && w > 0.0; ++i) w *= passage.density(s[i] - t[perm[i]]);
    if (w > 0.0) weights.push_back(w);
  } while (std::next_permutation(perm.begin(), perm.end()));

  if (weights.empty()) throw std::domain_error("posterior_ordering_entropy: no feasible matching");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double h = 0.0;
  for (double w : weights) {
    const double p = w / total;
    h -= p * std::log(p);
  }
  return h;
}

}  // namespace tokentiming::ordent
