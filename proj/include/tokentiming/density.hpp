#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "tokentiming/random.hpp"

namespace tokentiming::dist {

class FirstPassageModel;

/// Point mass of a mixed probability law.
struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

/// One continuous segment of a mixed density, with closed-form mass and
/// quantile where the shape allows it.
class Piece {
 public:
  enum class Kind { Constant, Exponential, Callable };

  /// value on [lo, hi)
  static Piece constant(double lo, double hi, double value);
  /// coeff * exp(-rate * (t - lo)) on [lo, hi); hi may be +infinity
  static Piece exponential(double lo, double hi, double coeff, double rate);
  /// arbitrary nonnegative evaluator on a finite [lo, hi)
  static Piece callable(double lo, double hi, std::function<double(double)> f);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  Kind kind() const { return kind_; }

  double operator()(double t) const;  // 0 outside [lo, hi)
  double mass() const { return mass_; }
  /// integral of the piece over [lo, min(t, hi))
  double mass_below(double t) const;
  /// t such that mass_below(t) = u * mass(), u in [0, 1)
  double quantile(double u) const;

 private:
  Piece() = default;
  Kind kind_ = Kind::Constant;
  double lo_ = 0.0, hi_ = 0.0;
  double a_ = 0.0;  // constant value / exponential coefficient
  double b_ = 0.0;  // exponential rate
  double mass_ = 0.0;
  std::function<double(double)> fn_;
};

/// One-dimensional probability law made of point atoms plus a piecewise
/// continuous part.  Immutable after construction; the constructor enforces
/// normalization (total mass 1 within `mass_tol`), nonnegativity and sorted,
/// non-overlapping segments.
class MixedDensity1D {
 public:
  MixedDensity1D(std::vector<Atom> atoms, std::vector<Piece> pieces,
                 double mass_tol = 1e-12);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  /// Continuous-part value at t (atoms excluded).
  double continuous_at(double t) const;
  /// P(X <= t), atoms at t included.
  double cdf(double t) const;
  double total_mass() const { return total_mass_; }

  double support_lo() const { return support_lo_; }
  double support_hi() const { return support_hi_; }  // +inf for open tails

  /// Piece edges and atom locations, sorted; quadrature split points.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

  double sample(RandomStream& rng) const;

 private:
  std::vector<Atom> atoms_;
  std::vector<Piece> pieces_;
  std::vector<double> breakpoints_;
  double total_mass_ = 0.0;
  double support_lo_ = 0.0;
  double support_hi_ = 0.0;
};

/// Scalar function of t with one-sided limits, for integrands that jump at
/// atom locations (e.g. phi against an input law with point masses).
struct JumpFn {
  std::function<double(double)> value;
  std::function<double(double)> left;   // limit from below
  std::function<double(double)> right;  // limit from above
};

/// How an atom weighs an integrand that jumps across it.  PathAverage is the
/// generalization of the delta/step rule: the base value is swept linearly
/// from its left to its right limit and the integrand averaged along the
/// sweep, so a pure power base^k against a 0->1 step yields 1/(k+1).
enum class JumpConvention { PathAverage };

/// E[f(X)] for a continuous integrand f (no jumps at the atoms).
double mixed_expectation(const MixedDensity1D& density,
                         const std::function<double(double)>& integrand,
                         const std::vector<double>& extra_breakpoints = {});

/// E[outer(base(X))] where base may jump at the atom locations of `density`.
double mixed_expectation(const MixedDensity1D& density,
                         const std::function<double(double)>& outer,
                         const JumpFn& base,
                         JumpConvention convention = JumpConvention::PathAverage,
                         const std::vector<double>& extra_breakpoints = {});

/// Density of S = T + D at s, with T ~ input and D ~ passage (independent).
/// The output carries no atoms because the passage density has none.
double convolve(const MixedDensity1D& input, const FirstPassageModel& passage,
                double s);

}  // namespace tokentiming::dist
