#include "tokentiming/first_passage.hpp"

#include <cmath>
#include <stdexcept>

namespace tokentiming::dist {

ExponentialPassage::ExponentialPassage(double mu) : mu_(mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("exponential passage needs mu > 0");
}

double ExponentialPassage::density(double d) const {
  return d < 0.0 ? 0.0 : mu_ * std::exp(-mu_ * d);
}

double ExponentialPassage::cdf(double d) const {
  return d <= 0.0 ? 0.0 : -std::expm1(-mu_ * d);
}

double ExponentialPassage::ccdf(double d) const {
  return d <= 0.0 ? 1.0 : std::exp(-mu_ * d);
}

double ExponentialPassage::sample(RandomStream& rng) const {
  return rng.exponential(mu_);
}

UniformPassage::UniformPassage(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!(lo >= 0.0) || !(hi > lo)) throw std::invalid_argument("uniform passage needs 0 <= lo < hi");
}

double UniformPassage::density(double d) const {
  return (d < lo_ || d > hi_) ? 0.0 : 1.0 / (hi_ - lo_);
}

double UniformPassage::cdf(double d) const {
  if (d <= lo_) return 0.0;
  if (d >= hi_) return 1.0;
  return (d - lo_) / (hi_ - lo_);
}

double UniformPassage::sample(RandomStream& rng) const {
  return rng.uniform(lo_, hi_);
}

double eval_cdf(const FirstPassageModel& model, double d) { return model.cdf(d); }

std::vector<double> sample(const FirstPassageModel& model, RandomStream& rng,
                           long n) {
  if (n < 1) throw std::invalid_argument("sample: n must be >= 1");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (double& x : out) x = model.sample(rng);
  return out;
}

}  // namespace tokentiming::dist
