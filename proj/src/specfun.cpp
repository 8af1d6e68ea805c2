#include "lgr/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lgr/error.hpp"

namespace lgr {

namespace {

template <class T>
T laguerre_recurrence(int n, double alpha, T x) {
  if (n <= 0) return T(1.0);
  T prev(1.0);
  T cur = T(1.0 + alpha) - x;
  for (int k = 1; k < n; ++k) {
    T next = ((T(2.0 * k + 1.0 + alpha) - x) * cur - T(k + alpha) * prev) / T(k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double bessel_series(int m, double x) {
  // m >= 0, x small enough that the alternating sum loses at most ~5 digits.
  const long double half = 0.5L * x;
  const long double q = -half * half;
  long double term = 1.0L;
  for (int i = 1; i <= m; ++i) term *= half / i;
  long double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<long double>(k) * (k + m));
    sum += term;
    if (std::fabs(term) < 1e-21L * std::fabs(sum) && k > 2) break;
  }
  return static_cast<double>(sum);
}

double bessel_miller(int m, double x) {
  const double big = 1e200;
  const int top = std::max(m, static_cast<int>(x));
  int start = top + 20 + static_cast<int>(std::sqrt(60.0 * top));
  if (start % 2) ++start;
  double jp1 = 0.0;
  double j = 1e-300;
  double result = 0.0;
  double norm = 0.0;
  const double two_over_x = 2.0 / x;
  for (int k = start; k > 0; --k) {
    const double jm1 = k * two_over_x * j - jp1;
    jp1 = j;
    j = jm1;
    if (std::fabs(j) > big) {
      j /= big;
      jp1 /= big;
      result /= big;
      norm /= big;
    }
    // j now holds the (unnormalized) order k-1 value.
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
    if (k - 1 == m) result = j;
  }
  norm += j;
  return result / norm;
}

}  // namespace

double laguerre(int n, double alpha, double x) { return laguerre_recurrence<double>(n, alpha, x); }

cplx laguerre(int n, double alpha, cplx x) { return laguerre_recurrence<cplx>(n, alpha, x); }

double laguerre_derivative(int n, double alpha, double x) {
  if (n <= 0) return 0.0;
  return -laguerre(n - 1, alpha + 1.0, x);
}

cplx laguerre_derivative(int n, double alpha, cplx x) {
  if (n <= 0) return cplx(0.0);
  return -laguerre(n - 1, alpha + 1.0, x);
}

double bessel_j(int m, double x) {
  if (x < 0.0) throw DomainError("bessel_j: negative argument " + std::to_string(x));
  if (m < 0) {
    const double v = bessel_j(-m, x);
    return (m % 2 == 0) ? v : -v;
  }
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  if (x < 12.0) return bessel_series(m, x);
  return bessel_miller(m, x);
}

double bessel_j_derivative(int m, double x) {
  return 0.5 * (bessel_j(m - 1, x) - bessel_j(m + 1, x));
}

QuadratureRule QuadratureRule::legendre(int order, double a, double b) {
  if (order < 1) throw DomainError("legendre rule: order must be >= 1");
  if (!(b > a)) throw DomainError("legendre rule: empty interval");
  QuadratureRule rule;
  rule.kind_ = QuadratureKind::legendre;
  rule.a_ = a;
  rule.b_ = b;
  const int n = order;
  std::vector<double> x(n), w(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    bool converged = false;
    for (int step = 0; step < 100; ++step) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / pp;
      z -= dz;
      if (std::fabs(dz) <= 1e-15) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw ConvergenceError("legendre rule: Newton iteration did not converge for node " +
                             std::to_string(i) + " of order " + std::to_string(n));
    }
    // Weight from the derivative at the converged node.
    {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
    }
    const double wt = 2.0 / ((1.0 - z * z) * pp * pp);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = wt;
    w[n - 1 - i] = wt;
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  rule.nodes_.resize(n);
  rule.weights_.resize(n);
  for (int i = 0; i < n; ++i) {
    rule.nodes_[i] = mid + half * x[i];
    rule.weights_[i] = half * w[i];
  }
  return rule;
}

namespace {

// L_n^alpha(x) and L_{n-1}^alpha(x), rescaled by 1e100 per overflow event.
struct ScaledLaguerre {
  double p1;
  double p2;
  int scale_count;
};

ScaledLaguerre scaled_laguerre(int n, double alpha, double x) {
  constexpr double rescale = 1e100;
  double p1 = 1.0, p2 = 0.0;
  int count = 0;
  for (int j = 1; j <= n; ++j) {
    const double p3 = p2;
    p2 = p1;
    p1 = ((2.0 * j - 1.0 + alpha - x) * p2 - (j - 1.0 + alpha) * p3) / j;
    if (std::fabs(p1) > rescale) {
      p1 /= rescale;
      p2 /= rescale;
      ++count;
    }
  }
  return {p1, p2, count};
}

}  // namespace

QuadratureRule QuadratureRule::laguerre(int order, double scale, double alpha) {
  if (order < 1) throw DomainError("laguerre rule: order must be >= 1");
  if (!(scale > 0.0)) throw DomainError("laguerre rule: scale must be > 0");
  if (alpha <= -1.0) throw DomainError("laguerre rule: alpha must be > -1");
  QuadratureRule rule;
  rule.kind_ = QuadratureKind::laguerre;
  rule.scale_ = scale;
  rule.alpha_ = alpha;
  rule.a_ = 0.0;
  rule.b_ = INFINITY;
  const int n = order;
  const double log_rescale = std::log(1e100);
  const double log_gamma_ratio = std::lgamma(alpha + n) - std::lgamma(static_cast<double>(n));

  // Bracket every zero by scanning with a step well below the local zero
  // spacing pi / kappa(x), kappa^2 <= nu/(4x) + |1 - alpha^2|/(4x^2).
  const double nu = 4.0 * n + 2.0 * alpha + 2.0;
  const double x_end = nu + 10.0 * std::cbrt(nu) + 10.0;
  std::vector<std::pair<double, double>> brackets;
  double x_prev = 1e-4 / nu;
  double f_prev = scaled_laguerre(n, alpha, x_prev).p1;
  while (x_prev < x_end && static_cast<int>(brackets.size()) < n) {
    const double kappa = std::sqrt(nu / (4.0 * x_prev) + std::fabs(1.0 - alpha * alpha) / (4.0 * x_prev * x_prev));
    const double x = x_prev + 0.1 * std::numbers::pi / kappa;
    const double f = scaled_laguerre(n, alpha, x).p1;
    if ((f > 0.0) != (f_prev > 0.0) || f == 0.0) brackets.emplace_back(x_prev, x);
    x_prev = x;
    f_prev = f;
  }
  if (static_cast<int>(brackets.size()) != n) {
    throw ConvergenceError("laguerre rule: bracketed " + std::to_string(brackets.size()) + " of " +
                           std::to_string(n) + " nodes");
  }

  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double lo = brackets[i].first, hi = brackets[i].second;
    const bool lo_positive = scaled_laguerre(n, alpha, lo).p1 > 0.0;
    double z = 0.5 * (lo + hi);
    bool converged = false;
    ScaledLaguerre s{};
    double pp = 0.0;
    for (int step = 0; step < 100; ++step) {
      s = scaled_laguerre(n, alpha, z);
      if ((s.p1 > 0.0) == lo_positive) lo = z; else hi = z;
      pp = (n * s.p1 - (n + alpha) * s.p2) / z;
      double next = z - s.p1 / pp;
      // Newton step, falling back to bisection when it leaves the bracket.
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      const double dz = next - z;
      z = next;
      if (std::fabs(dz) <= 1e-15 * z || hi - lo <= 4e-16 * z) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw ConvergenceError("laguerre rule: Newton iteration did not converge for node " +
                             std::to_string(i) + " of order " + std::to_string(n));
    }
    s = scaled_laguerre(n, alpha, z);
    pp = (n * s.p1 - (n + alpha) * s.p2) / z;
    x[i] = z;
    const double log_w = log_gamma_ratio - std::log(std::fabs(pp)) - std::log(static_cast<double>(n)) -
                         std::log(std::fabs(s.p2)) - 2.0 * s.scale_count * log_rescale;
    w[i] = std::exp(log_w);
  }
  rule.nodes_.resize(n);
  rule.weights_.resize(n);
  const double wscale = std::pow(scale, -(alpha + 1.0));
  for (int i = 0; i < n; ++i) {
    rule.nodes_[i] = x[i] / scale;
    rule.weights_[i] = w[i] * wscale;
  }
  for (int i = 1; i < n; ++i) {
    if (!(rule.nodes_[i] > rule.nodes_[i - 1])) {
      throw ConvergenceError("laguerre rule: nodes not strictly increasing at order " + std::to_string(n));
    }
  }
  return rule;
}

QuadratureRule make_rule(QuadratureKind kind, int order, const RuleParams& params) {
  if (kind == QuadratureKind::legendre) return QuadratureRule::legendre(order, params.a, params.b);
  return QuadratureRule::laguerre(order, params.scale, params.alpha);
}

}  // namespace lgr
