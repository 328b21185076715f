#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "tokentiming/deadline.hpp"
#include "tokentiming/quadrature.hpp"
#include "tokentiming/random.hpp"

using namespace tokentiming;
using deadline::DeadlineChannel;

namespace {
constexpr double kE = std::numbers::e;
}

TEST_CASE("optimal_sigma closed form") {
  CHECK(deadline::optimal_sigma({1.0, 0.0}) == 0.0);
  CHECK(deadline::optimal_sigma({1.0, kE}) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(deadline::optimal_sigma({1.0, 1.0}) ==
        doctest::Approx(1.0 / (kE + 1.0)).epsilon(1e-14));
}

TEST_CASE("capacity closed form") {
  CHECK(deadline::capacity({1.0, 0.0}) == 0.0);
  CHECK(deadline::capacity({1.0, kE}) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(deadline::capacity({2.0, 3.0}) ==
        doctest::Approx(std::log1p(6.0 / kE)).epsilon(1e-14));
}

TEST_CASE("optimal_input mass bookkeeping") {
  CHECK_THROWS_AS(deadline::optimal_input({1.0, 0.0}), std::invalid_argument);

  const auto d = deadline::optimal_input({1.0, 1.0});
  REQUIRE(d.atoms().size() == 2);
  CHECK(d.atoms()[0].mass == doctest::Approx(1.0 / (kE + 1.0)).epsilon(1e-14));
  CHECK(d.atoms()[1].location == 1.0);
  CHECK(d.atoms()[1].mass == doctest::Approx((kE - 1.0) / (kE + 1.0)).epsilon(1e-14));
  CHECK(d.pieces()[0].mass() == doctest::Approx(1.0 / (kE + 1.0)).epsilon(1e-14));
  CHECK(d.total_mass() == doctest::Approx(1.0).epsilon(1e-14));

  // mu*tau -> infinity flattens toward the uniform density
  const auto flat = deadline::optimal_input({1.0, 1e6});
  CHECK(flat.atoms()[0].mass < 1e-5);
  CHECK(flat.atoms()[1].mass < 2e-6 * (kE - 1.0) / 1.0 + 1e-5);
  CHECK(flat.continuous_at(5e5) == doctest::Approx(1e-6).epsilon(1e-2));
}

TEST_CASE("convolving the optimal input yields the optimal output") {
  const DeadlineChannel ch(2.0, 3.0);
  const auto input = deadline::optimal_input(ch);
  const auto output = deadline::optimal_output(ch);
  const dist::ExponentialPassage passage(ch.mu);
  const double denom = kE + ch.mu * ch.tau;
  for (double s : {0.0, 0.4, 1.0, 2.9, 3.0, 3.7, 8.0}) {
    const double got = dist::convolve(input, passage, s);
    const double want = s < ch.tau
                            ? ch.mu / denom
                            : kE / denom * ch.mu * std::exp(-ch.mu * (s - ch.tau));
    CHECK(got == doctest::Approx(want).epsilon(1e-10));
    CHECK(output.continuous_at(s) == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("optimal_output entropy and normalization") {
  // tau = 0: the bare exponential, h = 1 - log mu
  const auto bare = deadline::optimal_output({1.0, 0.0});
  const double h0 = dist::integrate(
      [&](double s) {
        const double f = bare.continuous_at(s);
        return f > 0 ? -f * std::log(f) : 0.0;
      },
      0.0, 60.0, bare.breakpoints());
  CHECK(h0 == doctest::Approx(1.0).epsilon(1e-10));

  const DeadlineChannel ch(1.0, kE);
  CHECK(deadline::optimal_output_entropy(ch) ==
        doctest::Approx(std::log(2.0 * kE)).epsilon(1e-14));
  const auto out = deadline::optimal_output(ch);
  const double h = dist::integrate(
      [&](double s) {
        const double f = out.continuous_at(s);
        return f > 0 ? -f * std::log(f) : 0.0;
      },
      0.0, ch.tau + 60.0, out.breakpoints());
  CHECK(h == doctest::Approx(std::log(2.0 * kE)).epsilon(1e-10));
  CHECK(out.total_mass() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("entropy_decomposition on reference inputs") {
  const DeadlineChannel ch(1.0, 1.0);

  SUBCASE("optimal input attains log((e + mu tau)/mu)") {
    const auto dec = deadline::entropy_decomposition(deadline::optimal_input(ch), ch);
    CHECK(dec.total == doctest::Approx(std::log(kE + 1.0)).epsilon(1e-10));
    CHECK(dec.sigma == doctest::Approx(deadline::optimal_sigma(ch)).epsilon(1e-10));
    CHECK(dec.total ==
          doctest::Approx(dec.sigma * dec.h_region1 + (1 - dec.sigma) * dec.h_region2 +
                          dec.h_binary)
              .epsilon(1e-10));
  }

  SUBCASE("atom at zero gives the exponential entropy 1 - log mu") {
    const DeadlineChannel ch2(2.0, 1.0);
    const dist::MixedDensity1D atom({dist::Atom{0.0, 1.0}}, {});
    const auto dec = deadline::entropy_decomposition(atom, ch2);
    CHECK(dec.total == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-10));
  }

  SUBCASE("uniform input matches a direct entropy quadrature") {
    const dist::MixedDensity1D uni({}, {dist::Piece::constant(0.0, 1.0, 1.0)});
    const auto dec = deadline::entropy_decomposition(uni, ch);
    const dist::ExponentialPassage passage(1.0);
    const double direct = dist::integrate(
        [&](double s) {
          const double f = dist::convolve(uni, passage, s);
          return f > 0 ? -f * std::log(f) : 0.0;
        },
        0.0, 61.0, {1.0});
    CHECK(dec.total == doctest::Approx(direct).epsilon(1e-8));
  }
}

TEST_CASE("capacity identity against the entropy decomposition") {
  for (auto [mu, tau] : std::vector<std::pair<double, double>>{
           {1.0, 1.0}, {2.0, 0.5}, {0.7, 3.0}}) {
    const DeadlineChannel ch(mu, tau);
    const auto dec = deadline::entropy_decomposition(deadline::optimal_input(ch), ch);
    CHECK(deadline::capacity(ch) ==
          doctest::Approx(dec.total - (1.0 - std::log(mu))).epsilon(1e-10));
  }
}

TEST_CASE("entropy decomposition never exceeds the hSmax bound") {
  const DeadlineChannel ch(1.3, 2.0);
  const double bound = std::log((kE + ch.mu * ch.tau) / ch.mu);
  dist::RandomStream rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    // random mix: optional atoms at the ends plus two constant pieces
    double a0 = rng.uniform(0.0, 0.4), a1 = rng.uniform(0.0, 0.4);
    double c1 = rng.uniform(0.1, 1.0), c2 = rng.uniform(0.1, 1.0);
    const double mid = ch.tau / 2;
    double mass = a0 + a1 + c1 * mid + c2 * mid;
    a0 /= mass;
    a1 /= mass;
    c1 /= mass;
    c2 /= mass;
    std::vector<dist::Atom> atoms;
    if (a0 > 0) atoms.push_back({0.0, a0});
    if (a1 > 0) atoms.push_back({ch.tau, a1});
    const dist::MixedDensity1D input(
        atoms,
        {dist::Piece::constant(0.0, mid, c1), dist::Piece::constant(mid, ch.tau, c2)},
        1e-9);
    const auto dec = deadline::entropy_decomposition(input, ch);
    CHECK(dec.total <= bound + 1e-8);
  }
}

TEST_CASE("numeric capacity: Blahut-Arimoto against the closed form") {
  const DeadlineChannel ch(1.0, 1.0);
  deadline::GridSpec grid;
  grid.input_points = 400;
  grid.output_points = 4000;
  const auto res = deadline::numeric_capacity(ch, grid);
  CHECK(std::abs(res.capacity_nats - deadline::capacity(ch)) < 1e-3);
  CHECK(res.capacity_nats <= deadline::capacity(ch) + 1e-9);

  // recovered input concentrates at the ends plus a flat interior
  const double denom = kE + 1.0;
  std::vector<double> ideal(res.input_points.size(), 0.0);
  const double dt = ch.tau / (static_cast<double>(res.input_points.size()) - 1);
  for (std::size_t i = 0; i < ideal.size(); ++i) {
    const bool edge = i == 0 || i + 1 == ideal.size();
    ideal[i] = (edge ? 0.5 : 1.0) * dt / denom;  // uniform part, half cells at ends
  }
  ideal.front() += 1.0 / denom;
  ideal.back() += (kE - 1.0) / denom;
  double tv = 0.0;
  for (std::size_t i = 0; i < ideal.size(); ++i)
    tv += std::abs(ideal[i] - res.input_weights[i]);
  CHECK(0.5 * tv < 0.05);
}

TEST_CASE("numeric capacity refinement halves the error") {
  const DeadlineChannel ch(1.0, 1.0);
  deadline::GridSpec coarse{100, 1000, 200000, 1e-9};
  deadline::GridSpec fine{200, 2000, 200000, 1e-9};
  const double c = deadline::capacity(ch);
  const double e_coarse = std::abs(c - deadline::numeric_capacity(ch, coarse).capacity_nats);
  const double e_fine = std::abs(c - deadline::numeric_capacity(ch, fine).capacity_nats);
  CHECK(e_fine <= 0.5 * e_coarse + 1e-9);
}

TEST_CASE("numeric capacity degenerates cleanly at tau = 0") {
  const auto res = deadline::numeric_capacity({1.0, 0.0});
  CHECK(res.capacity_nats == 0.0);
}

TEST_CASE("variational check quantifies the Theorem-2 obstruction") {
  for (auto [mu, tau] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {2.0, 0.5}}) {
    const auto r = deadline::variational_check({mu, tau});
    const double want = -mu * mu / (2.0 * (kE + mu * tau));
    CHECK(std::abs(r.region1_quadratic_coeff - want) < 1e-6);
    CHECK(std::abs(r.region2_quadratic_coeff) < 1e-8);
    CHECK(r.fit_residual < 1e-8);
  }
}
