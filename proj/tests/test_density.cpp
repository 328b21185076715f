#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "tokentiming/density.hpp"
#include "tokentiming/first_passage.hpp"
#include "tokentiming/quadrature.hpp"
#include "tokentiming/random.hpp"

using namespace tokentiming;
using dist::Atom;
using dist::MixedDensity1D;
using dist::Piece;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

MixedDensity1D pure_atom_at_zero() { return {{Atom{0.0, 1.0}}, {}}; }

dist::JumpFn unit_step() {
  dist::JumpFn fn;
  fn.value = [](double t) { return t >= 0.0 ? 1.0 : 0.0; };
  fn.left = [](double t) { return t > 0.0 ? 1.0 : 0.0; };
  fn.right = [](double t) { return t >= 0.0 ? 1.0 : 0.0; };
  return fn;
}

}  // namespace

TEST_CASE("random streams are reproducible and splittable") {
  dist::RandomStream a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  dist::RandomStream root(7);
  auto s1 = root.substream(1);
  auto s1_again = root.substream(1);
  auto s2 = root.substream(2);
  CHECK(s1.next_u64() == s1_again.next_u64());
  CHECK(s1.next_u64() != s2.next_u64());

  dist::RandomStream u(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.next_unit();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("eval_cdf on exponential models") {
  const dist::ExponentialPassage one(1.0), two(2.0);
  CHECK(dist::eval_cdf(one, 0.0) == 0.0);
  CHECK(dist::eval_cdf(one, -3.0) == 0.0);
  CHECK(dist::eval_cdf(one, 1e9) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(dist::eval_cdf(two, 0.5) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-14));
  CHECK(one.ccdf(0.5) == doctest::Approx(1.0 - one.cdf(0.5)).epsilon(1e-14));
  // far tail stays meaningful through the dedicated ccdf
  CHECK(one.ccdf(800.0) > 0.0);
}

TEST_CASE("sampler contracts") {
  const dist::ExponentialPassage one(1.0);
  dist::RandomStream rng(11);
  CHECK_THROWS_AS(dist::sample(one, rng, 0), std::invalid_argument);

  dist::RandomStream r1(5), r2(5);
  CHECK(dist::sample(one, r1, 1)[0] == dist::sample(one, r2, 1)[0]);

  const long n = 1000000;
  dist::RandomStream rs(123);
  const auto xs = dist::sample(one, rs, n);
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  // law of large numbers: 4 standard errors around 1.0 (sd = 1)
  CHECK(std::abs(mean - 1.0) < 4.0 / std::sqrt(static_cast<double>(n)));

  const dist::ExponentialPassage two(2.0);
  dist::RandomStream rt(321);
  const auto ys = dist::sample(two, rt, n);
  long below = std::count_if(ys.begin(), ys.end(), [](double y) { return y <= 0.5; });
  const double p = 1.0 - std::exp(-1.0);
  const double se = std::sqrt(p * (1.0 - p) / n);
  CHECK(std::abs(static_cast<double>(below) / n - p) < 4.0 * se);
}

TEST_CASE("one-sample Kolmogorov-Smirnov against eval_cdf") {
  const dist::ExponentialPassage model(1.0);
  dist::RandomStream rng(2024);  // fixed seed guards against flakiness
  const long n = 100000;
  auto xs = dist::sample(model, rng, n);
  std::sort(xs.begin(), xs.end());
  double d = 0.0;
  for (long i = 0; i < n; ++i) {
    const double f = model.cdf(xs[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  // 0.999 critical value: sqrt(-ln(alpha/2)/2)/sqrt(n)
  const double crit = std::sqrt(-std::log(0.0005) / 2.0) / std::sqrt(static_cast<double>(n));
  CHECK(d < crit);
}

TEST_CASE("mixed density construction invariants") {
  CHECK_THROWS_AS(MixedDensity1D({Atom{0.0, 0.0}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(MixedDensity1D({Atom{0.0, 0.5}, Atom{0.0, 0.5}}, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(MixedDensity1D({Atom{0.0, 0.9}}, {}), std::invalid_argument);
  CHECK_THROWS_AS(MixedDensity1D({}, {Piece::constant(0.0, 1.0, 0.7),
                                      Piece::constant(0.5, 1.5, 0.3)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Piece::constant(0.0, 1.0, -0.1), std::invalid_argument);

  const MixedDensity1D d({Atom{0.0, 0.25}}, {Piece::constant(0.0, 1.5, 0.5)});
  CHECK(d.total_mass() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(d.cdf(-1.0) == 0.0);
  CHECK(d.cdf(0.0) == doctest::Approx(0.25));
  CHECK(d.cdf(0.75) == doctest::Approx(0.25 + 0.375));
  CHECK(d.cdf(10.0) == doctest::Approx(1.0));
}

TEST_CASE("mixed_expectation: atom against a step power is 1/(k+1)") {
  const auto d = pure_atom_at_zero();
  const auto step = unit_step();
  for (int k = 0; k <= 6; ++k) {
    const double got = dist::mixed_expectation(
        d, [k](double v) { return std::pow(v, k); }, step);
    CHECK(got == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
  }
}

TEST_CASE("mixed_expectation: uniform mean and exact constants") {
  const MixedDensity1D u({}, {Piece::constant(0.0, 1.0, 1.0)});
  CHECK(dist::mixed_expectation(u, [](double t) { return t; }) ==
        doctest::Approx(0.5).epsilon(1e-13));

  const MixedDensity1D mixed({Atom{0.0, 0.3}, Atom{2.0, 0.2}},
                             {Piece::constant(0.0, 1.0, 0.5)});
  CHECK(dist::mixed_expectation(mixed, [](double) { return 3.25; }) ==
        doctest::Approx(3.25).epsilon(1e-15));
}

TEST_CASE("mixed_expectation rejects non-finite integrands") {
  const MixedDensity1D u({}, {Piece::constant(0.0, 1.0, 1.0)});
  CHECK_THROWS_AS(dist::mixed_expectation(
                      u, [](double t) { return 1.0 / (t - t); }),
                  std::domain_error);
}

TEST_CASE("convolve: atom at zero reproduces the passage density") {
  const auto d = pure_atom_at_zero();
  const dist::ExponentialPassage model(1.7);
  for (double s : {0.0, 0.2, 1.0, 3.5}) {
    CHECK(dist::convolve(d, model, s) ==
          doctest::Approx(1.7 * std::exp(-1.7 * s)).epsilon(1e-13));
  }
}

TEST_CASE("convolve matches a dense-grid convolution oracle") {
  // mean-constraint style input: atom at zero plus exponential tail
  const double mu = 1.0, a = 0.5;
  const MixedDensity1D input({Atom{0.0, a}},
                             {Piece::exponential(0.0, kInf, mu * a * (1 - a), mu * a)});
  const dist::ExponentialPassage passage(mu);

  // independent oracle: Simpson rule on a 10^4-point grid for the continuous
  // part, exact atom term
  const auto oracle = [&](double s) {
    const int n = 10000;
    const double h = s / n;
    double acc = 0.0;
    const auto f = [&](double t) {
      return input.continuous_at(t) * mu * std::exp(-mu * (s - t));
    };
    for (int i = 0; i < n; i += 2)
      acc += f(i * h) + 4.0 * f((i + 1) * h) + f((i + 2) * h);
    acc *= h / 3.0;
    return acc + a * mu * std::exp(-mu * s);
  };

  for (double s : {0.3, 1.0, 2.5}) {
    CHECK(std::abs(dist::convolve(input, passage, s) - oracle(s)) < 1e-8);
  }

  // convolution preserves mass
  const double mass = dist::integrate(
      [&](double s) { return dist::convolve(input, passage, s); }, 0.0, 80.0,
      input.breakpoints());
  CHECK(std::abs(mass - 1.0) < 1e-8);
}

TEST_CASE("mixed density sampling matches its own cdf") {
  const MixedDensity1D d({Atom{0.0, 0.25}, Atom{2.0, 0.15}},
                         {Piece::constant(0.0, 1.0, 0.35),
                          Piece::exponential(1.0, kInf, 0.25, 1.0)});
  dist::RandomStream rng(99);
  const long n = 200000;
  long at_zero = 0, at_two = 0, in_piece = 0;
  for (long i = 0; i < n; ++i) {
    const double x = d.sample(rng);
    if (x == 0.0) ++at_zero;
    else if (x == 2.0) ++at_two;
    else if (x < 1.0) ++in_piece;
  }
  const double se = 1.0 / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(at_zero / double(n) - 0.25) < 4 * se);
  CHECK(std::abs(at_two / double(n) - 0.15) < 4 * se);
  CHECK(std::abs(in_piece / double(n) - 0.35) < 4 * se);
}
