#include "tokentiming/iid_order.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tokentiming/deadline.hpp"
#include "tokentiming/quadrature.hpp"

namespace tokentiming::iidorder {

namespace {
constexpr double kE = std::numbers::e;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

double log_factorial(double k) { return std::lgamma(k + 1.0); }

double binomial_coefficient(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

double binomial_pmf(int trials, double p, int k) {
  if (k < 0 || k > trials) return 0.0;
  if (p <= 0.0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == trials ? 1.0 : 0.0;
  const double lb = std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) -
                    std::lgamma(trials - k + 1.0);
  return std::exp(lb + k * std::log(p) + (trials - k) * std::log1p(-p));
}

IIDInput mean_constraint_input(double mu, double tau) {
  if (!(mu > 0.0) || !(tau > 0.0)) throw std::invalid_argument("mean_constraint_input needs mu, tau > 0");
  const double a = 1.0 / (mu * tau + 1.0);
  std::vector<dist::Atom> atoms{{0.0, a}};
  std::vector<dist::Piece> pieces{
      dist::Piece::exponential(0.0, kInf, mu * a * (1.0 - a), mu * a)};
  return {dist::MixedDensity1D(std::move(atoms), std::move(pieces))};
}

IIDInput deadline_optimal_input(double mu, double tau) {
  return {deadline::optimal_input(deadline::DeadlineChannel(mu, tau))};
}

namespace {

double phi_below(const IIDInput& input, const dist::FirstPassageModel& passage,
                 double t, bool include_atom_at_t) {
  if (t < input.marginal.support_lo()) return 0.0;
  double v = 0.0;
  for (const dist::Atom& a : input.marginal.atoms()) {
    if (a.location < t || (include_atom_at_t && a.location == t))
      v += a.mass * passage.ccdf(t - a.location);
  }
  std::vector<double> cuts;
  for (double c : passage.breakpoints()) cuts.push_back(t - c);
  const double d_hi = passage.support_hi();
  for (const dist::Piece& p : input.marginal.pieces()) {
    double lo = p.lo(), hi = std::min(p.hi(), t);
    if (std::isfinite(d_hi)) lo = std::max(lo, t - d_hi);
    if (hi <= lo) continue;
    v += dist::integrate([&](double x) { return p(x) * passage.ccdf(t - x); },
                         lo, hi, cuts);
  }
  return v;
}

}  // namespace

double phi(const IIDInput& input, const dist::FirstPassageModel& passage,
           double t) {
  return phi_below(input, passage, t, true);
}

dist::JumpFn phi_fn(const IIDInput& input,
                    const dist::FirstPassageModel& passage) {
  dist::JumpFn fn;
  fn.value = [&input, &passage](double t) { return phi_below(input, passage, t, true); };
  fn.left = [&input, &passage](double t) { return phi_below(input, passage, t, false); };
  fn.right = [&input, &passage](double t) { return phi_below(input, passage, t, true); };
  return fn;
}

std::vector<double> phi_kinks(const IIDInput& input,
                              const dist::FirstPassageModel& passage) {
  std::vector<double> kinks;
  for (double b : input.marginal.breakpoints()) {
    for (double g : passage.breakpoints()) {
      const double k = b + g;
      if (std::isfinite(k)) kinks.push_back(k);
    }
  }
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());
  return kinks;
}

double expectation_phi_pow(const IIDInput& input,
                           const dist::FirstPassageModel& passage, int k) {
  if (k == 0) return 1.0;
  const auto base = phi_fn(input, passage);
  return dist::mixed_expectation(
      input.marginal, [k](double v) { return std::pow(v, k); }, base,
      dist::JumpConvention::PathAverage, phi_kinks(input, passage));
}

double gamma_Ml(const IIDInput& input, const dist::FirstPassageModel& passage,
                int M, int ell) {
  if (ell < 1 || ell > M - 1) throw std::invalid_argument("gamma_Ml: need 1 <= ell <= M-1");
  const auto base = phi_fn(input, passage);
  const int q = M - 1 - ell;
  const double value = dist::mixed_expectation(
      input.marginal,
      [ell, q](double v) { return std::pow(v, ell) * std::pow(1.0 - v, q); },
      base, dist::JumpConvention::PathAverage, phi_kinks(input, passage));
  return M * binomial_coefficient(M - 1, ell) * value;
}

double delta_gamma(const IIDInput& input, const dist::FirstPassageModel& passage,
                   int M, int ell, bool* used_difference_form) {
  if (ell < 1 || ell > M - 1) throw std::invalid_argument("delta_gamma: need 1 <= ell <= M-1");
  if (used_difference_form) *used_difference_form = false;

  std::vector<double> moments(static_cast<std::size_t>(M - ell));
  for (int r = 0; r < M - ell; ++r)
    moments[r] = expectation_phi_pow(input, passage, r + ell);

  const double outer = binomial_coefficient(M, ell + 1);
  double sum = 0.0, peak = 0.0;
  for (int r = 0; r <= M - ell - 1; ++r) {
    double term = binomial_coefficient(M - ell - 1, r) * (ell + r + 1) * moments[r];
    if (r % 2) term = -term;
    sum += term;
    peak = std::max(peak, std::abs(term));
  }
  double value = outer * sum;

  if (peak > 1e6 * std::max(std::abs(sum), 1e-300)) {
    // catastrophic cancellation in the alternating sum; the difference of
    // Gammas is benign
    const double g0 = gamma_Ml(input, passage, M, ell);
    const double g1 = ell + 1 <= M - 1 ? gamma_Ml(input, passage, M, ell + 1) : 0.0;
    value = g0 - g1;
    if (used_difference_form) *used_difference_form = true;
  }
  return value;
}

double h_up_iid(const IIDInput& input, const dist::FirstPassageModel& passage,
                int M) {
  if (M < 1) throw std::invalid_argument("h_up_iid: M must be >= 1");
  double h = 0.0;
  for (int ell = 1; ell <= M - 1; ++ell)
    h += delta_gamma(input, passage, M, ell) * log_factorial(ell + 1);
  return h;
}

double theta_bar_iid(const IIDInput& input, const dist::FirstPassageModel& passage,
                     int M, int m, int ell) {
  if (m < 1 || m > M - 1 || ell < 0 || ell > m) throw std::invalid_argument("theta_bar_iid: need 0 <= ell <= m <= M-1");
  const auto& marginal = input.marginal;
  const auto base = phi_fn(input, passage);
  const int a_exp = M - m - 1, c_exp = m - ell;
  const auto integrand = [&](double f_cdf, double ph) {
    return std::pow(1.0 - f_cdf, a_exp) * std::pow(ph, ell) *
           std::pow(f_cdf - ph, c_exp);
  };

  double total = 0.0;
  // Atoms sweep F_T and phi together (both jump by the atom mass), so
  // F_T - phi is constant along the sweep.
  for (const dist::Atom& atom : marginal.atoms()) {
    const double f_left = marginal.cdf(atom.location) - atom.mass;
    const double p_left = base.left(atom.location);
    const double avg = dist::integrate(
        [&](double w) {
          return integrand(f_left + w * atom.mass, p_left + w * atom.mass);
        },
        0.0, 1.0, {}, 1e-14);
    total += atom.mass * avg;
  }
  const auto kinks = phi_kinks(input, passage);
  for (const dist::Piece& p : marginal.pieces()) {
    total += dist::integrate(
        [&](double t) {
          return p(t) * integrand(marginal.cdf(t), base.value(t));
        },
        p.lo(), p.hi(), kinks);
  }
  return M * binomial_coefficient(M - 1, ell) *
         binomial_coefficient(M - ell - 1, m - ell) * total;
}

double ordering_entropy_mean_constraint(double mu, double tau, int M) {
  if (M < 1) throw std::invalid_argument("M must be >= 1");
  const double p = 1.0 / (mu * tau + 1.0);
  double e_logk = 0.0;
  for (int k = 2; k <= M; ++k)
    e_logk += binomial_pmf(M, p, k) * log_factorial(k);
  return (mu * tau + 1.0) * e_logk;
}

double ordering_entropy_deadline(double mu, double tau, int M) {
  if (M < 1) throw std::invalid_argument("M must be >= 1");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  const double mt = mu * tau;
  const double p1 = kE / (kE + mt);
  const double p2 = 1.0 / (kE + mt);
  double e1 = 0.0, e2k = 0.0, e2 = 0.0;
  for (int k = 2; k <= M; ++k) {
    const double lf = log_factorial(k);
    e1 += binomial_pmf(M, p1, k) * lf;
    const double b2 = binomial_pmf(M, p2, k);
    e2k += b2 * k * lf;
    e2 += b2 * lf;
  }
  return e1 + mt / (1.0 - p2) * e2k - mt * M / ((1.0 - p2) * (mt + kE)) * e2;
}

double ordering_entropy_deadline_gamma_route(double mu, double tau, int M) {
  if (M < 1) throw std::invalid_argument("M must be >= 1");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
  const double mt = mu * tau;
  const double p1 = kE / (kE + mt);
  const double p2 = 1.0 / (kE + mt);
  double h = 0.0;
  for (int k = 2; k <= M; ++k) {
    const double dg = binomial_pmf(M, p1, k) +
                      mt / (1.0 - p2) * (k - M / (mt + kE)) * binomial_pmf(M, p2, k);
    h += dg * log_factorial(k);
  }
  return h;
}

namespace {

double poisson_pmf(int k, double rho) {
  return std::exp(-rho + k * std::log(rho) - std::lgamma(k + 1.0));
}

}  // namespace

double asymptotic_mean(double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be > 0");
  double sum = 0.0;
  for (int k = 2; k < 100000; ++k) {
    const double term = poisson_pmf(k, rho) * log_factorial(k);
    sum += term;
    if (k > rho && term < 1e-15 * sum) break;
  }
  return sum / rho;
}

double asymptotic_deadline(double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be > 0");
  double sum = 0.0;
  for (int k = 2; k < 100000; ++k) {
    const double term = poisson_pmf(k, rho) * (k / rho - 1.0) * log_factorial(k);
    sum += term;
    if (k > rho + 1.0 && std::abs(term) < 1e-15 * (std::abs(sum) + 1e-300)) break;
  }
  return sum;
}

}  // namespace tokentiming::iidorder
