#include "tokentiming/deadline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tokentiming/quadrature.hpp"

namespace tokentiming::deadline {

namespace {

constexpr double kE = std::numbers::e;

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

struct QuadraticFit {
  double c0, c1, c2;  // in the scaled coordinate x in [-1, 1]
  double rms;
};

// Least-squares quadratic through (x_k, y_k) with x mapped to [-1, 1].
QuadraticFit fit_quadratic(const std::vector<double>& x,
                           const std::vector<double>& y) {
  const std::size_t n = x.size();
  double s[5] = {0, 0, 0, 0, 0};
  double b[3] = {0, 0, 0};
  for (std::size_t k = 0; k < n; ++k) {
    double xp = 1.0;
    for (int d = 0; d < 5; ++d) {
      s[d] += xp;
      if (d < 3) b[d] += xp * y[k];
      xp *= x[k];
    }
  }
  double A[3][3] = {{s[0], s[1], s[2]}, {s[1], s[2], s[3]}, {s[2], s[3], s[4]}};
  double c[3] = {b[0], b[1], b[2]};
  // Gaussian elimination with partial pivoting on the 3x3 normal equations.
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    std::swap(A[col], A[piv]);
    std::swap(c[col], c[piv]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = A[r][col] / A[col][col];
      for (int cc = col; cc < 3; ++cc) A[r][cc] -= f * A[col][cc];
      c[r] -= f * c[col];
    }
  }
  double sol[3];
  for (int r = 2; r >= 0; --r) {
    double v = c[r];
    for (int cc = r + 1; cc < 3; ++cc) v -= A[r][cc] * sol[cc];
    sol[r] = v / A[r][r];
  }
  double ss = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double fit = sol[0] + sol[1] * x[k] + sol[2] * x[k] * x[k];
    ss += (y[k] - fit) * (y[k] - fit);
  }
  return {sol[0], sol[1], sol[2], std::sqrt(ss / static_cast<double>(n))};
}

}  // namespace

double optimal_sigma(const DeadlineChannel& ch) {
  const double mt = ch.mu * ch.tau;
  return mt / (kE + mt);
}

double capacity(const DeadlineChannel& ch) {
  return std::log1p(ch.mu * ch.tau / kE);
}

dist::MixedDensity1D optimal_input(const DeadlineChannel& ch) {
  if (!(ch.tau > 0.0)) throw std::invalid_argument("optimal_input: tau = 0 leaves only a degenerate input");
  const double denom = kE + ch.mu * ch.tau;
  std::vector<dist::Atom> atoms{{0.0, 1.0 / denom}, {ch.tau, (kE - 1.0) / denom}};
  std::vector<dist::Piece> pieces{
      dist::Piece::constant(0.0, ch.tau, ch.mu / denom)};
  return {std::move(atoms), std::move(pieces)};
}

dist::MixedDensity1D optimal_output(const DeadlineChannel& ch) {
  const double denom = kE + ch.mu * ch.tau;
  std::vector<dist::Piece> pieces;
  if (ch.tau > 0.0) pieces.push_back(dist::Piece::constant(0.0, ch.tau, ch.mu / denom));
  pieces.push_back(dist::Piece::exponential(
      ch.tau, std::numeric_limits<double>::infinity(), kE * ch.mu / denom, ch.mu));
  return {{}, std::move(pieces)};
}

double optimal_output_entropy(const DeadlineChannel& ch) {
  return std::log((kE + ch.mu * ch.tau) / ch.mu);
}

EntropyDecomposition entropy_decomposition(const dist::MixedDensity1D& input,
                                           const DeadlineChannel& ch) {
  const dist::ExponentialPassage passage(ch.mu);
  const auto f_s = [&](double s) { return dist::convolve(input, passage, s); };

  std::vector<double> cuts = input.breakpoints();
  cuts.push_back(ch.tau);

  const double sigma = dist::integrate(f_s, 0.0, ch.tau, cuts);
  const double tail_hi = ch.tau + 60.0 / ch.mu;
  const double e1 = dist::integrate([&](double s) { return -xlogx(f_s(s)); },
                                    0.0, ch.tau, cuts);
  const double e2 = dist::integrate([&](double s) { return -xlogx(f_s(s)); },
                                    ch.tau, tail_hi, cuts);

  EntropyDecomposition out{};
  out.sigma = sigma;
  const double eps = 1e-14;
  out.h_region1 = sigma > eps ? e1 / sigma + std::log(sigma) : 0.0;
  out.h_region2 = (1.0 - sigma) > eps ? e2 / (1.0 - sigma) + std::log(1.0 - sigma) : 0.0;
  out.h_binary = -xlogx(sigma) - xlogx(1.0 - sigma);
  out.total = e1 + e2;
  return out;
}

NumericCapacityResult numeric_capacity(const DeadlineChannel& ch,
                                       const GridSpec& grid) {
  NumericCapacityResult res;
  if (!(ch.tau > 0.0) || grid.input_points < 2) {
    res.input_points = {0.0};
    res.input_weights = {1.0};
    return res;  // single usable input, zero capacity
  }
  const int n_in = grid.input_points;
  const double mu = ch.mu, tau = ch.tau;
  const double s_max = tau + 40.0 / mu;

  // Output cells.  Region I is the input grid refined by an integer factor so
  // each input point lands on a cell edge; region II is uniform up to s_max,
  // then one tail cell holds the rest of the mass.
  const int gaps = n_in - 1;
  const double frac1 = tau / s_max;
  int refine = std::max(1, static_cast<int>(std::floor(grid.output_points * frac1 / gaps)));
  const int k1 = gaps * refine;
  const int k2 = std::max(grid.output_points - k1, 16);

  std::vector<double> edges;
  edges.reserve(static_cast<std::size_t>(k1 + k2) + 1);
  for (int j = 0; j <= k1; ++j) edges.push_back(tau * j / k1);
  for (int j = 1; j <= k2; ++j) edges.push_back(tau + (s_max - tau) * j / k2);
  const int n_bins = static_cast<int>(edges.size());  // includes the tail cell

  std::vector<double> inputs(n_in);
  for (int i = 0; i < n_in; ++i) inputs[i] = tau * i / gaps;

  // Row i: cell masses from the first edge at/after t_i; exact exponentials.
  std::vector<int> offset(n_in);
  std::vector<std::vector<double>> w(n_in);
  std::vector<double> row_const(n_in, 0.0);
  for (int i = 0; i < n_in; ++i) {
    const double t = inputs[i];
    const int first = i * refine;  // t sits exactly on this edge
    offset[i] = first;
    auto& row = w[i];
    row.resize(static_cast<std::size_t>(n_bins - first));
    double c = 0.0;
    for (int j = first; j + 1 < n_bins; ++j) {
      const double m = std::exp(-mu * (edges[j] - t)) - std::exp(-mu * (edges[j + 1] - t));
      row[j - first] = m;
      if (m > 0.0) c += m * std::log(m);
    }
    const double tail = std::exp(-mu * (edges[n_bins - 1] - t));
    row.back() = tail;
    if (tail > 0.0) c += tail * std::log(tail);
    row_const[i] = c;
  }

  std::vector<double> p(n_in, 1.0 / n_in), d(n_in), q(n_bins), logq(n_bins);
  double c_low = 0.0, prev = -1.0;
  int iter = 0;
  double gap = std::numeric_limits<double>::infinity();
  for (; iter < grid.max_iterations; ++iter) {
    std::fill(q.begin(), q.end(), 0.0);
    for (int i = 0; i < n_in; ++i) {
      const auto& row = w[i];
      const double pi = p[i];
      if (pi <= 0.0) continue;
      double* qb = q.data() + offset[i];
      for (std::size_t j = 0; j < row.size(); ++j) qb[j] += pi * row[j];
    }
    for (int j = 0; j < n_bins; ++j) logq[j] = q[j] > 0.0 ? std::log(q[j]) : 0.0;

    double c_up = -std::numeric_limits<double>::infinity();
    c_low = 0.0;
    for (int i = 0; i < n_in; ++i) {
      const auto& row = w[i];
      const double* lq = logq.data() + offset[i];
      double dot = 0.0;
      for (std::size_t j = 0; j < row.size(); ++j) dot += row[j] * lq[j];
      d[i] = row_const[i] - dot;
      c_low += p[i] * d[i];
      c_up = std::max(c_up, d[i]);
    }
    gap = c_up - c_low;

    const double change = std::abs(c_low - prev);
    prev = c_low;
    if ((change < grid.tol && gap < 1e-6) || gap < 1e-10) {
      res.last_change = change;
      ++iter;
      break;
    }

    double norm = 0.0;
    for (int i = 0; i < n_in; ++i) {
      p[i] *= std::exp(d[i] - c_up);
      norm += p[i];
    }
    for (int i = 0; i < n_in; ++i) p[i] /= norm;
  }

  res.capacity_nats = c_low;
  res.iterations = iter;
  res.duality_gap = gap;
  res.input_points = std::move(inputs);
  res.input_weights = std::move(p);
  if (iter >= grid.max_iterations) {
    throw ConvergenceError("numeric_capacity: Blahut-Arimoto hit the iteration cap", res);
  }
  return res;
}

VariationalResidual variational_check(const DeadlineChannel& ch,
                                      int points_per_region) {
  if (!(ch.tau > 0.0)) throw std::invalid_argument("variational_check needs tau > 0");
  const double mu = ch.mu, tau = ch.tau;
  const double denom = kE + mu * tau;
  const int n = points_per_region;

  // log of the Theorem-1 optimal arrival density
  const auto log_fs = [&](double s) {
    if (s < tau) return std::log(mu / denom);
    return std::log(mu * kE / denom) - mu * (s - tau);
  };
  // J(s) with the optimal input: two atom terms plus the uniform interior.
  const auto J = [&](double s) {
    double v = (1.0 / denom) * log_fs(s) + ((kE - 1.0) / denom) * log_fs(s + tau);
    v += dist::integrate([&](double t) { return (mu / denom) * log_fs(s + t); },
                         0.0, tau, {tau - s});
    return v;
  };

  std::vector<double> x(n), y(n);

  // Region I: s in [0, tau)
  for (int k = 0; k < n; ++k) {
    const double s = tau * k / n;
    x[k] = 2.0 * s / tau - 1.0;
    y[k] = J(s);
  }
  const QuadraticFit f1 = fit_quadratic(x, y);
  const double scale1 = 2.0 / tau;

  // Region II: s in [tau, tau + 20/mu]; the exponential tail is below double
  // precision past that.
  const double hi = tau + 20.0 / mu;
  for (int k = 0; k < n; ++k) {
    const double s = tau + (hi - tau) * k / (n - 1);
    x[k] = 2.0 * (s - tau) / (hi - tau) - 1.0;
    y[k] = J(s);
  }
  const QuadraticFit f2 = fit_quadratic(x, y);
  const double scale2 = 2.0 / (hi - tau);

  VariationalResidual out{};
  out.region1_quadratic_coeff = f1.c2 * scale1 * scale1;
  out.region2_quadratic_coeff = f2.c2 * scale2 * scale2;
  out.fit_residual = std::max(f1.rms, f2.rms);
  return out;
}

}  // namespace tokentiming::deadline
