#include "tokentiming/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <mutex>
#include <thread>
#include <vector>

namespace tokentiming::mc {

namespace {

void validate(const SimConfig& cfg) {
  if (cfg.M < 1) throw std::invalid_argument("SimConfig: M must be >= 1");
  if (!cfg.passage) throw std::invalid_argument("SimConfig: missing passage model");
  if (cfg.replications < 100) throw std::invalid_argument("SimConfig: replications must be >= 100");
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

Estimate summarize(const std::vector<double>& values) {
  const std::size_t n = values.size();
  const double mean = pairwise_sum(values.data(), n) / static_cast<double>(n);
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
  const double var = n > 1 ? pairwise_sum(sq.data(), n) / static_cast<double>(n - 1) : 0.0;
  return {mean, std::sqrt(var / static_cast<double>(n)), static_cast<long>(n)};
}

/// Evaluate fn once per replication; replication r uses substream r, so the
/// result vector does not depend on the worker count.
std::vector<double> per_replication(const SimConfig& cfg,
                                    const std::function<double(dist::RandomStream&)>& fn) {
  const long n = cfg.replications;
  std::vector<double> values(static_cast<std::size_t>(n));
  const dist::RandomStream root(cfg.seed);

  const int workers = std::max(1, cfg.workers);
  if (workers == 1) {
    for (long r = 0; r < n; ++r) {
      dist::RandomStream stream = root.substream(static_cast<std::uint64_t>(r));
      values[static_cast<std::size_t>(r)] = fn(stream);
    }
    return values;
  }

  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    const long lo = n * w / workers, hi = n * (w + 1) / workers;
    pool.emplace_back([&, lo, hi] {
      try {
        for (long r = lo; r < hi; ++r) {
          dist::RandomStream stream = root.substream(static_cast<std::uint64_t>(r));
          values[static_cast<std::size_t>(r)] = fn(stream);
        }
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return values;
}

std::vector<double> draw_launches(const SimConfig& cfg, dist::RandomStream& stream) {
  std::vector<double> t(static_cast<std::size_t>(cfg.M));
  if (const auto* iid = std::get_if<iidorder::IIDInput>(&cfg.input)) {
    for (double& x : t) x = iid->marginal.sample(stream);
  } else {
    const auto& fixed = std::get<ordent::LaunchVector>(cfg.input);
    if (fixed.size() != cfg.M) throw std::invalid_argument("SimConfig: fixed launch vector size != M");
    t = fixed.times();
  }
  return t;
}

ordent::LaunchVector sorted_launches(const SimConfig& cfg, dist::RandomStream& stream) {
  auto t = draw_launches(cfg, stream);
  std::sort(t.begin(), t.end());
  return ordent::LaunchVector(std::move(t));
}

double pair_kernel_mean(const dist::FirstPassageModel& passage,
                        const std::vector<double>& x) {
  const std::size_t m = x.size();
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      total += passage.ccdf(std::abs(x[i] - x[j]));
  return total / (0.5 * static_cast<double>(m) * static_cast<double>(m - 1));
}

}  // namespace

ordent::ArrivalRealization simulate_epoch(const SimConfig& cfg,
                                          dist::RandomStream& stream) {
  auto t = draw_launches(cfg, stream);
  const std::size_t m = t.size();
  std::vector<double> raw(m);
  for (std::size_t i = 0; i < m; ++i) raw[i] = t[i] + cfg.passage->sample(stream);

  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  // arrival ties are measure-zero; break them by launch index
  std::stable_sort(perm.begin(), perm.end(),
                   [&raw](int a, int b) { return raw[a] < raw[b]; });
  std::vector<double> sorted(m);
  for (std::size_t i = 0; i < m; ++i) sorted[i] = raw[perm[i]];

  std::sort(t.begin(), t.end());
  return {ordent::LaunchVector(std::move(t)), std::move(raw), std::move(sorted),
          std::move(perm)};
}

Estimate estimate_ordering_entropy(const SimConfig& cfg) {
  validate(cfg);
  return summarize(per_replication(cfg, [&](dist::RandomStream& stream) {
    const auto real = simulate_epoch(cfg, stream);
    return ordent::posterior_ordering_entropy(real, *cfg.passage);
  }));
}

Estimate estimate_theta_bar(const SimConfig& cfg, int m, int ell) {
  validate(cfg);
  if (m < 1 || m > cfg.M - 1) throw std::invalid_argument("estimate_theta_bar: m out of range");
  return summarize(per_replication(cfg, [&](dist::RandomStream& stream) {
    const auto t = sorted_launches(cfg, stream);
    const auto pmf = ordent::theta_pmf(t, m, *cfg.passage);
    return (ell >= 0 && ell <= m) ? pmf[static_cast<std::size_t>(ell)] : 0.0;
  }));
}

Estimate estimate_gamma(const SimConfig& cfg, GammaTarget target) {
  validate(cfg);
  if (cfg.M < 2) throw std::invalid_argument("estimate_gamma: M must be >= 2");
  return summarize(per_replication(cfg, [&](dist::RandomStream& stream) {
    if (target == GammaTarget::LaunchPairs) {
      return pair_kernel_mean(*cfg.passage, draw_launches(cfg, stream));
    }
    auto x = draw_launches(cfg, stream);
    for (double& v : x) v += cfg.passage->sample(stream);
    return pair_kernel_mean(*cfg.passage, x);
  }));
}

Estimate estimate_gamma_variance(const SimConfig& cfg) {
  validate(cfg);
  if (cfg.M < 2) throw std::invalid_argument("estimate_gamma_variance: M must be >= 2");
  const double pairs = static_cast<double>(cfg.M) * (cfg.M - 1);
  const auto values = per_replication(cfg, [&](dist::RandomStream& stream) {
    return pair_kernel_mean(*cfg.passage, draw_launches(cfg, stream)) * pairs;
  });

  const std::size_t n = values.size();
  const double mean = pairwise_sum(values.data(), n) / static_cast<double>(n);
  std::vector<double> c2(n), c4(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = values[i] - mean;
    c2[i] = d * d;
    c4[i] = d * d * d * d;
  }
  const double nd = static_cast<double>(n);
  const double s2 = pairwise_sum(c2.data(), n) / (nd - 1.0);
  const double m4 = pairwise_sum(c4.data(), n) / nd;
  // var(s^2) = (m4 - s^4 (n-3)/(n-1)) / n
  const double var_s2 = std::max(0.0, (m4 - s2 * s2 * (nd - 3.0) / (nd - 1.0)) / nd);
  return {s2, std::sqrt(var_s2), static_cast<long>(n)};
}

Estimate estimate_h_up(const SimConfig& cfg) {
  validate(cfg);
  return summarize(per_replication(cfg, [&](dist::RandomStream& stream) {
    return ordent::h_up_exact(sorted_launches(cfg, stream), *cfg.passage);
  }));
}

Estimate estimate_bound_gap(const SimConfig& cfg) {
  validate(cfg);
  return summarize(per_replication(cfg, [&](dist::RandomStream& stream) {
    const auto real = simulate_epoch(cfg, stream);
    return ordent::h_up_exact(real.launches, *cfg.passage) -
           ordent::posterior_ordering_entropy(real, *cfg.passage);
  }));
}

}  // namespace tokentiming::mc
