#include "lgr/exactwave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>
#include <numbers>
#include <random>

#include "lgr/error.hpp"
#include "lgr/parallel.hpp"
#include "lgr/specfun.hpp"

namespace lgr {

namespace {

constexpr cplx kI{0.0, 1.0};
constexpr double kC = kSpeedOfLight;

// (i sigma)^m for any integer m.
cplx i_sigma_power(int sigma, int m) {
  static const cplx cycle[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  const int mm = ((m % 4) + 4) % 4;
  const double s = (sigma < 0 && (m % 2 != 0)) ? -1.0 : 1.0;
  return s * cycle[mm];
}

// omega t - k_z z written through t+- without forming t or z.
double carrier_phase(const BesselModeParams& p, const SpacetimePoint& x) {
  const double w = p.omega();
  return 0.5 * (w - kC * p.k_z) * x.t_plus + 0.5 * (w + kC * p.k_z) * x.t_minus;
}

SpacetimePoint shift_r(SpacetimePoint x, double h) {
  x.r += h;
  return x;
}
SpacetimePoint shift_phi(SpacetimePoint x, double h) {
  x.phi += h;
  return x;
}
SpacetimePoint shift_z(SpacetimePoint x, double h) {
  x.t_plus += h / kC;
  x.t_minus -= h / kC;
  return x;
}
SpacetimePoint shift_t(SpacetimePoint x, double h) {
  x.t_plus += h;
  x.t_minus += h;
  return x;
}
SpacetimePoint shift_tp(SpacetimePoint x, double h) {
  x.t_plus += h;
  return x;
}
SpacetimePoint shift_tm(SpacetimePoint x, double h) {
  x.t_minus += h;
  return x;
}

template <class F, class S>
auto d1_4(F&& f, S&& shift, const SpacetimePoint& x, double h) {
  return (f(shift(x, -2 * h)) - 8.0 * f(shift(x, -h)) + 8.0 * f(shift(x, h)) - f(shift(x, 2 * h))) / (12.0 * h);
}

template <class F, class S>
auto d2_4(F&& f, S&& shift, const SpacetimePoint& x, double h) {
  return (-f(shift(x, -2 * h)) + 16.0 * f(shift(x, -h)) - 30.0 * f(x) + 16.0 * f(shift(x, h)) - f(shift(x, 2 * h))) /
         (12.0 * h * h);
}

struct Defects {
  double curl{0.0};
  double div{0.0};
};

Defects maxwell_at(const FieldSampler& field, const SpacetimePoint& x, double k_scale, double h) {
  const double r = x.r;
  const double ha = h / r;  // azimuthal angle step
  auto fr = [&](const SpacetimePoint& y) { return field(y).f_r; };
  auto fp = [&](const SpacetimePoint& y) { return field(y).f_phi; };
  auto fz = [&](const SpacetimePoint& y) { return field(y).f_z; };
  auto r_fr = [&](const SpacetimePoint& y) { return y.r * field(y).f_r; };
  auto r_fp = [&](const SpacetimePoint& y) { return y.r * field(y).f_phi; };

  const RSField f0 = field(x);
  const double ht = h / kC;
  const cplx dt_r = d1_4(fr, shift_t, x, ht);
  const cplx dt_p = d1_4(fp, shift_t, x, ht);
  const cplx dt_z = d1_4(fz, shift_t, x, ht);

  const cplx curl_r = d1_4(fz, shift_phi, x, ha) / r - d1_4(fp, shift_z, x, h);
  const cplx curl_p = d1_4(fr, shift_z, x, h) - d1_4(fz, shift_r, x, h);
  const cplx curl_z = (d1_4(r_fp, shift_r, x, h) - d1_4(fr, shift_phi, x, ha)) / r;
  const cplx div = d1_4(r_fr, shift_r, x, h) / r + d1_4(fp, shift_phi, x, ha) / r + d1_4(fz, shift_z, x, h);

  const cplx e_r = dt_r + kI * kC * curl_r;
  const cplx e_p = dt_p + kI * kC * curl_p;
  const cplx e_z = dt_z + kI * kC * curl_z;
  const double fn = f0.norm();
  if (fn == 0.0) return {};
  Defects d;
  d.curl = std::sqrt(std::norm(e_r) + std::norm(e_p) + std::norm(e_z)) / (kC * fn * k_scale);
  d.div = std::abs(div) / (fn * k_scale);
  return d;
}

}  // namespace

BesselModeParams::BesselModeParams(int m_, int sigma_, double k_t_, double k_z_)
    : m(m_), sigma(sigma_), k_t(k_t_), k_z(k_z_) {
  if (sigma != 1 && sigma != -1) throw DomainError("BesselModeParams: sigma must be +1 or -1");
  if (!(k_t > 0.0) || !std::isfinite(k_t)) throw DomainError("BesselModeParams: k_t must be > 0");
  if (!std::isfinite(k_z)) throw DomainError("BesselModeParams: k_z must be finite");
}

double BesselModeParams::k() const { return std::hypot(k_t, k_z); }

SpacetimePoint SpacetimePoint::from_lab(double r, double phi, double z, double t) {
  return {r, phi, t + z / kC, t - z / kC};
}

SpacetimePoint SpacetimePoint::from_light_cone(double r, double phi, double t_plus, double t_minus) {
  return {r, phi, t_plus, t_minus};
}

double RSField::norm() const { return std::sqrt(std::norm(f_r) + std::norm(f_phi) + std::norm(f_z)); }

cplx chi_bessel(const BesselModeParams& p, const SpacetimePoint& x) {
  if (x.r < 0.0) throw DomainError("chi_bessel: r must be >= 0");
  const double k = p.k();
  const cplx pref = i_sigma_power(p.sigma, p.m) / (k * p.k_t * std::sqrt(2.0));
  const double phase = p.sigma * (carrier_phase(p, x) - p.m * x.phi);
  return pref * std::exp(kI * phase) * bessel_j(p.m, p.k_t * x.r);
}

RSField rs_bessel_field(const BesselModeParams& p, const SpacetimePoint& x) {
  if (!(x.r > 0.0)) throw DomainError("rs_bessel_field: r must be > 0");
  const double k = p.k();
  const double s = p.sigma;
  const double u = p.k_t * x.r;
  const double j = bessel_j(p.m, u);
  const double jp = bessel_j_derivative(p.m, u);
  const cplx pref = i_sigma_power(p.sigma, p.m) / (k * std::sqrt(2.0)) *
                    std::exp(-kI * (s * (carrier_phase(p, x) - p.m * x.phi)));
  RSField f;
  f.f_r = pref * (kI * s * p.k_z * jp + kI * (k * p.m / u) * j);
  f.f_phi = pref * (-s * k * jp - (p.k_z * p.m / u) * j);
  f.f_z = pref * (p.k_t * j);
  return f;
}

MaxwellReport maxwell_residual(const FieldSampler& field, const SpacetimePoint& x, double k_scale, double step) {
  if (!(k_scale > 0.0)) throw DomainError("maxwell_residual: k_scale must be > 0");
  MaxwellReport rep;
  rep.step = step > 0.0 ? step : 1e-4 * 2.0 * std::numbers::pi / k_scale;
  if (!(x.r > 2.0 * rep.step)) throw DomainError("maxwell_residual: r must exceed twice the step");
  const Defects full = maxwell_at(field, x, k_scale, rep.step);
  const Defects half = maxwell_at(field, x, k_scale, 0.5 * rep.step);
  rep.curl_defect = full.curl;
  rep.div_defect = full.div;
  rep.curl_defect_half = half.curl;
  rep.div_defect_half = half.div;
  // Below this the defect is roundoff and halving is expected to make it worse.
  // Rounding of a carrier phase of size k (r + |z| + c|t|) enters every
  // difference quotient divided by k h.
  const double phase = k_scale * (x.r + std::fabs(x.z()) + kC * std::fabs(x.t()));
  const double floor =
      std::max(1e-9, 10.0 * std::numeric_limits<double>::epsilon() * (1.0 + phase) / (k_scale * rep.step));
  rep.roundoff_floor = floor;
  const bool curl_bad = full.curl > floor && !(half.curl < full.curl);
  const bool div_bad = full.div > floor && !(half.div < full.div);
  if (curl_bad || div_bad) {
    rep.step_warning = true;
    rep.warning = std::string("defect did not decrease under step halving (") + (curl_bad ? "curl" : "") +
                  (curl_bad && div_bad ? ", " : "") + (div_bad ? "div" : "") + "); step may be too large";
  }
  return rep;
}

double wave_residual(const ScalarSampler& f, const SpacetimePoint& x, const WaveSteps& steps) {
  if (!(x.r > 2.0 * steps.r)) throw DomainError("wave_residual: r must exceed twice the radial step");
  if (!(steps.r > 0 && steps.phi > 0 && steps.t_plus > 0 && steps.t_minus > 0)) {
    throw DomainError("wave_residual: steps must be positive");
  }
  auto d_minus = [&](const SpacetimePoint& y) { return d1_4(f, shift_tm, y, steps.t_minus); };
  const cplx mixed = d1_4(d_minus, shift_tp, x, steps.t_plus);
  const cplx a = 4.0 / (kC * kC) * mixed;
  const double r = x.r;
  const cplx lap = d2_4(f, shift_r, x, steps.r) + d1_4(f, shift_r, x, steps.r) / r +
                   d2_4(f, shift_phi, x, steps.phi) / (r * r);
  const double scale = std::abs(a) + std::abs(lap);
  return scale > 0.0 ? std::abs(a - lap) / scale : 0.0;
}

cplx beam_parameter(const ExactMomentumParams& p, double t_plus) {
  return cplx(p.w * p.w, p.sigma * kC * kC * t_plus / p.omega);
}

cplx chi_closed_form(const ExactMomentumParams& p, const SpacetimePoint& x) {
  if (x.r < 0.0) throw DomainError("chi_closed_form: r must be >= 0");
  const int am = p.abs_m();
  const cplx a = beam_parameter(p, x.t_plus);
  const cplx arg = x.r * x.r / a;
  const cplx phase = std::exp(-kI * (p.sigma * p.omega * x.t_minus)) * std::exp(kI * (p.sigma * p.m * x.phi));
  return std::pow(x.r, am) / std::pow(a, p.n + am + 1) * phase * std::exp(-arg) * laguerre(p.n, am, arg);
}

namespace {

// Integrand without the k-^{n+|m|} e^{-beta k-} weight.
cplx synthesis_kernel(const ExactMomentumParams& p, const SpacetimePoint& x, bool k_factor, double y) {
  const int am = p.abs_m();
  const double kp = p.k_plus();
  const double sy = std::sqrt(y);
  // J_m(2 r sqrt(k+ y)) / y^{|m|/2} stays smooth at y -> 0.
  const double bess = bessel_j(p.m, 2.0 * x.r * std::sqrt(kp) * sy) / std::pow(sy, am);
  const double kf = k_factor ? kp + y : 1.0;
  return bess * kf * std::exp(-kI * (p.sigma * kC * x.t_plus * y));
}

// Rules are reused across evaluation points of one beam.
const QuadratureRule& cached_laguerre(int order, double scale, double alpha) {
  thread_local std::map<std::tuple<int, double, double>, QuadratureRule> cache;
  const auto key = std::make_tuple(order, scale, alpha);
  auto it = cache.find(key);
  if (it == cache.end()) {
    if (cache.size() > 64) cache.clear();
    it = cache.emplace(key, QuadratureRule::laguerre(order, scale, alpha)).first;
  }
  return it->second;
}

}  // namespace

SynthesisResult synthesize_lg_detail(const ExactMomentumParams& p, const SpacetimePoint& x,
                                     const SynthesisOptions& options) {
  if (options.order < 8) throw DomainError("synthesize_lg: quadrature order must be >= 8");
  if (x.r < 0.0) throw DomainError("synthesize_lg: r must be >= 0");
  const double beta = p.beta();
  const double alpha = p.n + p.abs_m();
  const cplx outer = std::exp(-kI * (p.sigma * p.omega * x.t_minus)) * std::exp(kI * (p.sigma * p.m * x.phi));

  auto run = [&](int order, double& magnitude) {
    const auto& rule = cached_laguerre(order, beta, alpha);
    cplx s = 0.0;
    magnitude = 0.0;
    for (int i = 0; i < order; ++i) {
      const cplx t = rule.weights()[static_cast<std::size_t>(i)] *
                     synthesis_kernel(p, x, options.include_k_factor, rule.nodes()[static_cast<std::size_t>(i)]);
      s += t;
      magnitude += std::abs(t);
    }
    return s;
  };

  int order = options.order;
  double mag = 0.0;
  cplx prev = run(order, mag);
  while (2 * order <= options.max_order) {
    order *= 2;
    double mag2 = 0.0;
    const cplx cur = run(order, mag2);
    if (std::abs(cur - prev) <= options.tolerance * std::max(mag, mag2)) return {outer * cur, order};
    prev = cur;
    mag = mag2;
  }
  throw ConvergenceError("synthesize_lg: Gauss-Laguerre sum did not settle by order " +
                         std::to_string(options.max_order));
}

cplx synthesize_lg(const ExactMomentumParams& p, const SpacetimePoint& x, int quad_order) {
  SynthesisOptions o;
  o.order = quad_order;
  return synthesize_lg_detail(p, x, o).value;
}

ScaleFit fit_global_scale(const std::vector<cplx>& target, const std::vector<cplx>& model) {
  if (target.size() != model.size() || target.empty()) {
    throw DomainError("fit_global_scale: vectors must be nonempty and equal length");
  }
  cplx num = 0.0;
  double den = 0.0, tn = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    num += std::conj(model[i]) * target[i];
    den += std::norm(model[i]);
    tn += std::norm(target[i]);
    peak = std::max(peak, std::abs(model[i]));
  }
  if (den == 0.0) throw DomainError("fit_global_scale: model is identically zero");
  ScaleFit fit;
  fit.scale = num / den;
  double res = 0.0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    res += std::norm(target[i] - fit.scale * model[i]);
  }
  for (std::size_t i = 0; i < target.size(); ++i) {
    fit.scale_spread =
        std::max(fit.scale_spread, std::abs(target[i] - fit.scale * model[i]) / (std::abs(fit.scale) * peak));
  }
  fit.residual = tn > 0.0 ? std::sqrt(res / tn) : std::sqrt(res);
  return fit;
}

std::vector<SpacetimePoint> bridge_sample_points(const ExactMomentumParams& p, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double tp_unit = 0.5 * p.w * p.w * p.omega / (kC * kC);
  const double period = 2.0 * std::numbers::pi / p.omega;
  const double tp_values[3] = {0.0, tp_unit, -tp_unit};
  std::vector<SpacetimePoint> pts;
  pts.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double r = 3.0 * p.w * u(rng);
    const double phi = 2.0 * std::numbers::pi * u(rng);
    const double tm = period * u(rng);
    pts.push_back(SpacetimePoint::from_light_cone(r, phi, tp_values[i % 3], tm));
  }
  return pts;
}

BridgeReport paraxial_bridge(const ExactMomentumParams& p, int samples) {
  if (samples < 2) throw DomainError("paraxial_bridge: need at least 2 samples");
  const LGParams lg(p.n, p.m, p.k_plus(), p.w);
  double lo = INFINITY, hi = 0.0, sum = 0.0;
  for (int i = 1; i <= samples; ++i) {
    const double r = 2.5 * p.w * i / samples;
    const cplx chi = chi_closed_form(p, SpacetimePoint::from_lab(r, 0.0, 0.0, 0.0));
    const cplx par = lg_field(lg, r, 0.0, 0.0);
    const double ratio = std::abs(chi) / std::abs(par);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    sum += ratio;
  }
  BridgeReport rep;
  rep.samples = samples;
  rep.modulus_spread = (hi - lo) / (sum / samples);
  return rep;
}

}  // namespace lgr
