#include "tokentiming/bounds.hpp"

#include <cmath>
#include <vector>

#include "tokentiming/quadrature.hpp"
#include "tokentiming/random.hpp"

namespace tokentiming::bounds {

LoadPoint LoadPoint::make(double lambda, double mu, double tau, int M) {
  if (!(lambda >= 0.0) || !(mu > 0.0)) throw std::invalid_argument("LoadPoint needs lambda >= 0, mu > 0");
  LoadPoint p{lambda, mu, lambda / mu, tau, M};
  if (M > 0 && tau > 0.0 && std::abs(lambda * tau - M) > 1e-9 * std::max(1.0, static_cast<double>(M)))
    throw std::invalid_argument("LoadPoint: M != lambda * tau");
  return p;
}

double gamma_T_iid(const iidorder::IIDInput& input, double mu) {
  const auto& d = input.marginal;
  const auto q = [mu](double x) { return std::exp(-mu * std::abs(x)); };

  double total = 0.0;
  for (const dist::Atom& a : d.atoms())
    for (const dist::Atom& b : d.atoms()) total += a.mass * b.mass * q(a.location - b.location);

  const auto& cuts = d.breakpoints();
  // atom-continuous cross terms (both orders)
  for (const dist::Atom& a : d.atoms()) {
    for (const dist::Piece& p : d.pieces()) {
      std::vector<double> c = cuts;
      c.push_back(a.location);
      total += 2.0 * a.mass *
               dist::integrate([&](double t) { return p(t) * q(a.location - t); },
                               p.lo(), p.hi(), c);
    }
  }
  // continuous-continuous double integral; the inner kernel kinks at t
  for (const dist::Piece& po : d.pieces()) {
    total += dist::integrate(
        [&](double t) {
          double inner = 0.0;
          for (const dist::Piece& pi : d.pieces()) {
            std::vector<double> c = cuts;
            c.push_back(t);
            inner += dist::integrate(
                [&](double x) { return pi(x) * q(t - x); }, pi.lo(), pi.hi(), c,
                1e-11);
          }
          return po(t) * inner;
        },
        po.lo(), po.hi(), cuts, 1e-10);
  }
  return total;
}

double h_up_gamma_bound(int M, double gamma_T) {
  if (M < 1) throw std::invalid_argument("M must be >= 1");
  if (gamma_T < 0.0 || gamma_T > 1.0) throw std::invalid_argument("gamma_T must be in [0, 1]");
  return M * std::log1p(0.5 * (M - 1) * gamma_T);
}

double gamma_S_lower(double gamma_T) { return 0.5 * gamma_T; }

double Z(double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("Z: x must be >= 0");
  if (x < 1e-4) return 1.0 - x / 3.0 + x * x / 12.0;
  return 2.0 / (x * x) * (x + std::exp(-x) - 1.0);
}

namespace {

// 24 (x - 2 + e^-x (2 + x)) / x^3, series-guarded near zero
double w_kernel(double x) {
  if (x < 5e-2) return 4.0 - 2.0 * x + 0.6 * x * x - (2.0 / 15.0) * x * x * x;
  return 24.0 / (x * x * x) * (x - 2.0 + std::exp(-x) * (2.0 + x));
}

}  // namespace

double gamma_S0_prime(double mu, double tau, int M) {
  if (M < 2) throw std::invalid_argument("gamma_S0_prime needs M >= 2");
  const double x = mu * tau;
  const double g0 = Z(x);
  const double md = static_cast<double>(M);
  return (md - 2.0) * (md - 3.0) * g0 * g0 + 2.0 * Z(2.0 * x) +
         (md - 2.0) * w_kernel(x) - md * (md - 1.0) * g0 * g0;
}

double beta_tilde(double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be > 0");
  return 1.0 / (4.0 * rho + 1.0);
}

double cq_upper(double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be > 0");
  return std::log(1.0 / rho + 4.0);
}

double ct_upper(const LoadPoint& point) {
  if (point.lambda == 0.0) return 0.0;
  return point.lambda * cq_upper(point.rho);
}

BetaPoint beta_star_experimental(double mu, double tau, int M,
                                 std::uint64_t seed, long replications) {
  if (M < 2 || M > 4) throw std::invalid_argument("beta_star_experimental: demonstration solver, 2 <= M <= 4");

  // Draw uniform arrival vectors once; gamma_S(beta) is then a reweighted
  // pair average, E_0[Q e^{b Sum}] / E_0[e^{b Sum}] over the same sample.
  dist::RandomStream rng(seed);
  const long n = replications;
  std::vector<double> sum_q(n), mean_q(n);
  const double pairs = static_cast<double>(M) * (M - 1);
  std::vector<double> s(static_cast<std::size_t>(M));
  for (long r = 0; r < n; ++r) {
    dist::RandomStream stream = rng.substream(static_cast<std::uint64_t>(r));
    for (int i = 0; i < M; ++i) s[i] = stream.uniform(0.0, tau);
    double total = 0.0;
    for (int i = 0; i < M; ++i)
      for (int j = 0; j < M; ++j)
        if (i != j) total += std::exp(-mu * std::abs(s[i] - s[j]));
    sum_q[r] = total;
    mean_q[r] = total / pairs;
  }

  const auto gamma_s = [&](double beta) {
    double num = 0.0, den = 0.0;
    for (long r = 0; r < n; ++r) {
      const double w = std::exp(beta * sum_q[r]);
      num += w * mean_q[r];
      den += w;
    }
    return num / den;
  };

  // gamma_S increases in beta while (1-beta)/((M-1) beta) decreases, so the
  // crossing is unique; bisect on (1/M, 1].
  double lo = 1.0 / M + 1e-9, hi = 1.0;
  const auto excess = [&](double beta) {
    return gamma_s(beta) - (1.0 - beta) / ((M - 1) * beta);
  };
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  const double beta = 0.5 * (lo + hi);
  return {beta, gamma_s(beta)};
}

}  // namespace tokentiming::bounds
