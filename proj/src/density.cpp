#include "tokentiming/density.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tokentiming/first_passage.hpp"
#include "tokentiming/quadrature.hpp"

namespace tokentiming::dist {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// ---------------------------------------------------------------------------
// Piece

Piece Piece::constant(double lo, double hi, double value) {
  if (!(hi > lo) || !std::isfinite(hi)) throw std::invalid_argument("constant piece needs finite hi > lo");
  if (value < 0.0) throw std::invalid_argument("negative density value");
  Piece p;
  p.kind_ = Kind::Constant;
  p.lo_ = lo;
  p.hi_ = hi;
  p.a_ = value;
  p.mass_ = value * (hi - lo);
  return p;
}

Piece Piece::exponential(double lo, double hi, double coeff, double rate) {
  if (!(hi > lo)) throw std::invalid_argument("exponential piece needs hi > lo");
  if (coeff < 0.0 || !(rate > 0.0)) throw std::invalid_argument("exponential piece needs coeff >= 0, rate > 0");
  Piece p;
  p.kind_ = Kind::Exponential;
  p.lo_ = lo;
  p.hi_ = hi;
  p.a_ = coeff;
  p.b_ = rate;
  p.mass_ = std::isfinite(hi) ? coeff * (-std::expm1(-rate * (hi - lo))) / rate
                              : coeff / rate;
  return p;
}

Piece Piece::callable(double lo, double hi, std::function<double(double)> f) {
  if (!(hi > lo) || !std::isfinite(hi)) throw std::invalid_argument("callable piece needs finite hi > lo");
  Piece p;
  p.kind_ = Kind::Callable;
  p.lo_ = lo;
  p.hi_ = hi;
  p.fn_ = std::move(f);
  p.mass_ = integrate(p.fn_, lo, hi);
  if (!(p.mass_ >= 0.0) || !std::isfinite(p.mass_)) throw std::invalid_argument("callable piece has invalid mass");
  return p;
}

double Piece::operator()(double t) const {
  if (t < lo_ || t >= hi_) return 0.0;
  switch (kind_) {
    case Kind::Constant: return a_;
    case Kind::Exponential: return a_ * std::exp(-b_ * (t - lo_));
    case Kind::Callable: return fn_(t);
  }
  return 0.0;
}

double Piece::mass_below(double t) const {
  if (t <= lo_) return 0.0;
  if (t >= hi_) return mass_;
  switch (kind_) {
    case Kind::Constant: return a_ * (t - lo_);
    case Kind::Exponential: return a_ * (-std::expm1(-b_ * (t - lo_))) / b_;
    case Kind::Callable: return integrate(fn_, lo_, t);
  }
  return 0.0;
}

double Piece::quantile(double u) const {
  const double target = u * mass_;
  switch (kind_) {
    case Kind::Constant:
      return lo_ + target / a_;
    case Kind::Exponential: {
      // invert a/b * (1 - exp(-b(t-lo))) = target
      const double x = 1.0 - target * b_ / a_;
      return lo_ - std::log(std::max(x, 1e-300)) / b_;
    }
    case Kind::Callable: {
      double a = lo_, b = hi_;
      for (int i = 0; i < 64; ++i) {
        const double m = 0.5 * (a + b);
        (mass_below(m) < target ? a : b) = m;
      }
      return 0.5 * (a + b);
    }
  }
  return lo_;
}

// ---------------------------------------------------------------------------
// MixedDensity1D

MixedDensity1D::MixedDensity1D(std::vector<Atom> atoms, std::vector<Piece> pieces,
                               double mass_tol)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)) {
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& x, const Atom& y) { return x.location < y.location; });
  std::sort(pieces_.begin(), pieces_.end(),
            [](const Piece& x, const Piece& y) { return x.lo() < y.lo(); });

  double mass = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const Atom& a = atoms_[i];
    if (!(a.mass > 0.0) || a.mass > 1.0 + 1e-15) throw std::invalid_argument("atom mass must be in (0, 1]");
    if (i > 0 && !(a.location > atoms_[i - 1].location)) throw std::invalid_argument("atom locations must be distinct");
    mass += a.mass;
  }
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (i > 0 && pieces_[i].lo() < pieces_[i - 1].hi() - 1e-15) throw std::invalid_argument("pieces overlap");
    mass += pieces_[i].mass();
  }
  total_mass_ = mass;
  if (std::abs(mass - 1.0) > mass_tol) throw std::invalid_argument("density does not integrate to 1");

  support_lo_ = kInf;
  support_hi_ = -kInf;
  for (const Atom& a : atoms_) {
    support_lo_ = std::min(support_lo_, a.location);
    support_hi_ = std::max(support_hi_, a.location);
    breakpoints_.push_back(a.location);
  }
  for (const Piece& p : pieces_) {
    support_lo_ = std::min(support_lo_, p.lo());
    support_hi_ = std::max(support_hi_, p.hi());
    breakpoints_.push_back(p.lo());
    if (std::isfinite(p.hi())) breakpoints_.push_back(p.hi());
  }
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()),
                     breakpoints_.end());
}

double MixedDensity1D::continuous_at(double t) const {
  double v = 0.0;
  for (const Piece& p : pieces_) v += p(t);
  return v;
}

double MixedDensity1D::cdf(double t) const {
  double c = 0.0;
  for (const Atom& a : atoms_)
    if (a.location <= t) c += a.mass;
  for (const Piece& p : pieces_) c += p.mass_below(t);
  return c;
}

double MixedDensity1D::sample(RandomStream& rng) const {
  double u = rng.next_unit() * total_mass_;
  for (const Atom& a : atoms_) {
    if (u < a.mass) return a.location;
    u -= a.mass;
  }
  for (const Piece& p : pieces_) {
    if (u < p.mass()) return p.quantile(u / p.mass());
    u -= p.mass();
  }
  // u consumed by rounding; fall back to the last component
  if (!pieces_.empty()) return pieces_.back().quantile(0.5);
  return atoms_.back().location;
}

// ---------------------------------------------------------------------------
// Expectations and convolution

namespace {

std::vector<double> merged_breakpoints(const MixedDensity1D& density,
                                       const std::vector<double>& extra) {
  std::vector<double> cuts = density.breakpoints();
  cuts.insert(cuts.end(), extra.begin(), extra.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

double continuous_part_expectation(const MixedDensity1D& density,
                                   const std::function<double(double)>& h,
                                   const std::vector<double>& extra) {
  const auto cuts = merged_breakpoints(density, extra);
  double total = 0.0;
  for (const Piece& p : density.pieces()) {
    total += integrate([&](double t) { return p(t) * h(t); }, p.lo(), p.hi(), cuts);
  }
  return total;
}

}  // namespace

double mixed_expectation(const MixedDensity1D& density,
                         const std::function<double(double)>& integrand,
                         const std::vector<double>& extra_breakpoints) {
  double total = 0.0;
  for (const Atom& a : density.atoms()) total += a.mass * integrand(a.location);
  total += continuous_part_expectation(density, integrand, extra_breakpoints);
  if (!std::isfinite(total)) throw std::domain_error("mixed_expectation: integrand not finite on support");
  return total;
}

double mixed_expectation(const MixedDensity1D& density,
                         const std::function<double(double)>& outer,
                         const JumpFn& base, JumpConvention convention,
                         const std::vector<double>& extra_breakpoints) {
  (void)convention;  // PathAverage is the only rule
  double total = 0.0;
  for (const Atom& atom : density.atoms()) {
    const double a = base.left(atom.location);
    const double b = base.right(atom.location);
    double avg;
    if (std::abs(b - a) <= 1e-14 * std::max({std::abs(a), std::abs(b), 1.0})) {
      avg = outer(0.5 * (a + b));
    } else {
      avg = integrate([&](double w) { return outer(a + w * (b - a)); }, 0.0, 1.0,
                      {}, 1e-14);
    }
    total += atom.mass * avg;
  }
  total += continuous_part_expectation(
      density, [&](double t) { return outer(base.value(t)); }, extra_breakpoints);
  if (!std::isfinite(total)) throw std::domain_error("mixed_expectation: integrand not finite on support");
  return total;
}

double convolve(const MixedDensity1D& input, const FirstPassageModel& passage,
                double s) {
  if (s < input.support_lo()) return 0.0;
  double value = 0.0;
  for (const Atom& a : input.atoms()) value += a.mass * passage.density(s - a.location);

  // Kinks of g(s - t) in t land at s - (kinks of g).
  std::vector<double> cuts;
  for (double c : passage.breakpoints()) cuts.push_back(s - c);
  const double d_hi = passage.support_hi();

  for (const Piece& p : input.pieces()) {
    double lo = p.lo(), hi = std::min(p.hi(), s);
    if (std::isfinite(d_hi)) lo = std::max(lo, s - d_hi);
    if (hi <= lo) continue;
    value += integrate([&](double t) { return p(t) * passage.density(s - t); },
                       lo, hi, cuts);
  }
  return value;
}

}  // namespace tokentiming::dist
