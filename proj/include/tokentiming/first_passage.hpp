#pragma once

#include <limits>
#include <memory>
#include <vector>

#include "tokentiming/random.hpp"

namespace tokentiming::dist {

/// First-passage law of a token: density g, CDF G, CCDF Gbar and a sampler.
/// Models are atom-free with finite mean passage time.
class FirstPassageModel {
 public:
  virtual ~FirstPassageModel() = default;

  virtual double density(double d) const = 0;
  virtual double cdf(double d) const = 0;  // 0 for d <= 0
  virtual double ccdf(double d) const { return 1.0 - cdf(d); }
  virtual double mean_passage() const = 0;
  virtual double sample(RandomStream& rng) const = 0;

  /// Kink locations of g, used as quadrature split points.
  virtual std::vector<double> breakpoints() const { return {0.0}; }
  /// Upper end of the support of g (+inf for open tails).
  virtual double support_hi() const {
    return std::numeric_limits<double>::infinity();
  }
  /// True only for the exponential law; enables closed-form fast paths
  /// (uniform permutation posterior, Gbar products).
  virtual bool memoryless() const { return false; }
};

class ExponentialPassage final : public FirstPassageModel {
 public:
  explicit ExponentialPassage(double mu);

  double density(double d) const override;
  double cdf(double d) const override;
  double ccdf(double d) const override;  // exp(-mu d), exact in the far tail
  double mean_passage() const override { return 1.0 / mu_; }
  double sample(RandomStream& rng) const override;
  bool memoryless() const override { return true; }

  double rate() const { return mu_; }

 private:
  double mu_;
};

/// Uniform passage on [lo, hi]; the spec's singularity-free non-exponential
/// reference (lo = 0, hi = 2/mu keeps the mean at 1/mu).
class UniformPassage final : public FirstPassageModel {
 public:
  UniformPassage(double lo, double hi);

  double density(double d) const override;
  double cdf(double d) const override;
  double mean_passage() const override { return 0.5 * (lo_ + hi_); }
  double sample(RandomStream& rng) const override;
  std::vector<double> breakpoints() const override { return {lo_, hi_}; }
  double support_hi() const override { return hi_; }

 private:
  double lo_, hi_;
};

/// G(d) for the model; Gbar is 1 - result.
double eval_cdf(const FirstPassageModel& model, double d);

/// n i.i.d. draws; the same stream state always produces the same sequence.
std::vector<double> sample(const FirstPassageModel& model, RandomStream& rng,
                           long n);

}  // namespace tokentiming::dist
