#pragma once

// Special functions and Gauss quadrature rules used by every other module.

#include <complex>
#include <string_view>
#include <vector>

namespace lgr {

using cplx = std::complex<double>;

/// Generalized Laguerre polynomial L_n^alpha(x) by the upward three-term
/// recurrence. The complex overload runs the identical recurrence.
double laguerre(int n, double alpha, double x);
cplx laguerre(int n, double alpha, cplx x);

/// d/dx L_n^alpha(x) = -L_{n-1}^{alpha+1}(x); zero for n = 0.
double laguerre_derivative(int n, double alpha, double x);
cplx laguerre_derivative(int n, double alpha, cplx x);

/// Bessel function of the first kind J_m(x) for x >= 0.
///
/// Power series (in extended precision) for x < 12, normalized downward
/// Miller recurrence otherwise. Negative orders use J_{-m} = (-1)^m J_m.
double bessel_j(int m, double x);

/// dJ_m/dx via (J_{m-1} - J_{m+1}) / 2.
double bessel_j_derivative(int m, double x);

enum class QuadratureKind { legendre, laguerre };

/// Immutable Gauss rule. Legendre rules live on [a, b]; Laguerre rules
/// integrate f(y) e^{-scale*y} over [0, inf) with the weight folded in, i.e.
/// sum_i w_i f(y_i) ~ int_0^inf f(y) e^{-scale*y} dy.
class QuadratureRule {
 public:
  static QuadratureRule legendre(int order, double a, double b);
  static QuadratureRule laguerre(int order, double scale = 1.0, double alpha = 0.0);

  QuadratureKind kind() const { return kind_; }
  int order() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  double a() const { return a_; }
  double b() const { return b_; }
  double scale() const { return scale_; }
  double alpha() const { return alpha_; }

  template <class F>
  auto integrate(F&& f) const {
    using R = decltype(f(0.0));
    R sum{};
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(nodes_[i]);
    return sum;
  }

 private:
  QuadratureRule() = default;

  QuadratureKind kind_{QuadratureKind::legendre};
  std::vector<double> nodes_;
  std::vector<double> weights_;
  double a_{-1.0};
  double b_{1.0};
  double scale_{1.0};
  double alpha_{0.0};
};

struct RuleParams {
  double a{-1.0};
  double b{1.0};
  double scale{1.0};
  double alpha{0.0};
};

/// Builds a rule by Newton iteration on the orthogonal-polynomial recurrence.
/// Throws ConvergenceError when a node needs more than 100 Newton steps.
QuadratureRule make_rule(QuadratureKind kind, int order, const RuleParams& params = {});

}  // namespace lgr
