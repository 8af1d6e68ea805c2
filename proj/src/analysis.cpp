#include "lgr/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lgr/error.hpp"
#include "lgr/parallel.hpp"

namespace lgr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double grid_extent(const PolarGrid& g) { return g.r_nodes().back() + g.r_nodes().front(); }

// Radial quadrature of conj(f) A f at phi = 0; the phi integral is 2 pi
// because A keeps the e^{i l phi} dependence.
cplx radial_expectation(const OperatorKind& op, const LGParams& params, double z, const PolarGrid& g) {
  std::vector<cplx> terms(g.n_r());
  parallel_for(g.n_r(), [&](std::size_t i) {
    const double r = g.r_nodes()[i];
    terms[i] = g.r_weights()[i] * std::conj(lg_field(params, r, 0.0, z)) * apply_at(op, params, r, 0.0, z);
  });
  cplx s = 0.0;
  for (auto t : terms) s += t;
  return kTwoPi * s;
}

double total_ss(const std::vector<double>& y) {
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  return ss;
}

void require_same_size(const std::vector<double>& x, const std::vector<double>& y, const char* who) {
  if (x.size() != y.size() || x.empty()) throw DomainError(std::string(who) + ": x and y must be nonempty and equal length");
}

}  // namespace

Expectation expectation_detail(const OperatorKind& op, const LGParams& params, double z) {
  PolarGrid g = converged_radial_grid(params, params.n, params.abs_l(), z, 1);
  const double r_max = grid_extent(g);
  int order = static_cast<int>(g.n_r());
  cplx prev = radial_expectation(op, params, z, g);
  for (int it = 0; it < 5; ++it) {
    order *= 2;
    PolarGrid finer = PolarGrid::gauss_legendre(r_max, order, 1, z);
    const cplx cur = radial_expectation(op, params, z, finer);
    if (std::abs(cur - prev) <= 1e-7 * std::max(1.0, std::abs(cur))) {
      return {cur.real(), cur.imag(), order};
    }
    prev = cur;
  }
  throw ConvergenceError("expectation of " + std::string(to_string(op.tag)) + " did not settle to 1e-7");
}

double expectation(const OperatorKind& op, const LGParams& params, double z) {
  return expectation_detail(op, params, z).value;
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  require_same_size(x, y, "linear_fit");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw DomainError("linear_fit: abscissa has no spread");
  LinearFit f;
  f.slope = (n * sxy - sx * sy) / den;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += e * e;
  }
  const double ss_tot = total_ss(y);
  f.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  return f;
}

LinearFit power_fit_through_origin(const std::vector<double>& x, const std::vector<double>& y, int power) {
  require_same_size(x, y, "power_fit_through_origin");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double b = std::pow(x[i], power);
    num += b * y[i];
    den += b * b;
  }
  if (den == 0.0) throw DomainError("power_fit_through_origin: basis vanishes at every abscissa");
  LinearFit f;
  f.slope = num / den;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - f.slope * std::pow(x[i], power);
    ss_res += e * e;
  }
  const double ss_tot = total_ss(y);
  f.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  return f;
}

ExpectationSeries ph_vs_z(const LGParams& params, const std::vector<double>& z_list) {
  if (z_list.empty()) throw DomainError("ph_vs_z: empty z list");
  ExpectationSeries s;
  s.abscissa_kind = AbscissaKind::z;
  s.params = params;
  for (double z : z_list) {
    auto e = expectation_detail(OperatorKind::ph(), params, z);
    s.abscissa.push_back(z);
    s.values.push_back(e.value);
    s.imag_residue.push_back(e.imag_residue);
  }
  if (z_list.size() >= 2) s.z_fit = linear_fit(s.abscissa, s.values);
  return s;
}

ExpectationSeries ph_vs_w0(const LGParams& params, const std::vector<double>& w0_list, double z) {
  if (w0_list.empty()) throw DomainError("ph_vs_w0: empty w0 list");
  for (std::size_t i = 0; i < w0_list.size(); ++i) {
    if (!(w0_list[i] > 0.0) || (i > 0 && !(w0_list[i] > w0_list[i - 1]))) {
      throw DomainError("ph_vs_w0: w0 list must be positive and increasing");
    }
  }
  ExpectationSeries s;
  s.abscissa_kind = AbscissaKind::w0;
  s.params = params;
  s.fixed_z = z;
  for (double w0 : w0_list) {
    LGParams p(params.n, params.l, params.k, w0);
    auto e = expectation_detail(OperatorKind::ph(), p, z);
    s.abscissa.push_back(w0);
    s.values.push_back(e.value);
    s.imag_residue.push_back(e.imag_residue);
  }
  DecayDiagnostics d;
  d.all_finite = std::all_of(s.values.begin(), s.values.end(), [](double v) { return std::isfinite(v); });
  d.strictly_decreasing = true;
  for (std::size_t i = 1; i < s.values.size(); ++i) d.strictly_decreasing &= s.values[i] < s.values[i - 1];
  d.last_over_first = s.values.back() / s.values.front();
  const bool positive = std::all_of(s.values.begin(), s.values.end(), [](double v) { return v > 0.0; });
  if (positive && s.values.size() >= 2) {
    std::vector<double> lv, lw;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      lv.push_back(std::log(s.values[i]));
      lw.push_back(std::log(s.abscissa[i]));
    }
    d.semilog = linear_fit(s.abscissa, lv);
    d.loglog = linear_fit(lw, lv);
  }
  s.decay = d;
  return s;
}

ExpectationSeries curvature_term_vs_z(const LGParams& params, const std::vector<double>& z_list) {
  if (z_list.empty()) throw DomainError("curvature_term_vs_z: empty z list");
  ExpectationSeries s;
  s.abscissa_kind = AbscissaKind::z;
  s.params = params;
  for (double z : z_list) {
    auto e = expectation_detail(OperatorKind::curvature_term(params, z), params, z);
    s.abscissa.push_back(z);
    s.values.push_back(e.value);
    s.imag_residue.push_back(e.imag_residue);
  }
  s.z_fit = power_fit_through_origin(s.abscissa, s.values, 2);
  return s;
}

namespace {

// entries[i][j] = <LG(na[i], l; z_a, w_a) | LG(nb[j], l; z_b, w_b)>
std::vector<std::vector<cplx>> radial_overlaps(int l, const std::vector<int>& na, double z_a, double w_a,
                                               const std::vector<int>& nb, double z_b, double w_b, double k) {
  const int abs_l = l < 0 ? -l : l;
  const int n_max = std::max(*std::max_element(na.begin(), na.end()), *std::max_element(nb.begin(), nb.end()));
  const LGParams pa(0, l, k, w_a), pb(0, l, k, w_b);
  const auto ga = beam_geometry(pa, z_a), gb = beam_geometry(pb, z_b);
  const double w_big = std::max(ga.w_z, gb.w_z), w_small = std::min(ga.w_z, gb.w_z);
  const double r_max = w_big * (std::sqrt(2.0 * n_max + abs_l + 1.0) + 4.5);
  const double phase = 0.5 * k * r_max * r_max * (std::fabs(ga.inv_R_z) + std::fabs(gb.inv_R_z));
  int order = static_cast<int>(std::ceil(r_max / w_small * (6.0 + 1.5 * std::sqrt(2.0 * n_max + abs_l + 1.0)) +
                                         2.0 * (2 * n_max + abs_l) + 0.6 * phase));
  order = std::max(order, 64);

  auto compute = [&](int ord) {
    const auto g = PolarGrid::gauss_legendre(r_max, ord, 1, 0.0);
    const std::size_t nr = g.n_r();
    // Radial profiles at phi = 0, one row per mode.
    std::vector<std::vector<cplx>> fa(na.size(), std::vector<cplx>(nr)), fb(nb.size(), std::vector<cplx>(nr));
    parallel_for(nr, [&](std::size_t i) {
      const double r = g.r_nodes()[i];
      for (std::size_t a = 0; a < na.size(); ++a) fa[a][i] = lg_field(LGParams(na[a], l, k, w_a), r, 0.0, z_a);
      for (std::size_t b = 0; b < nb.size(); ++b) fb[b][i] = lg_field(LGParams(nb[b], l, k, w_b), r, 0.0, z_b);
    });
    std::vector<std::vector<cplx>> m(na.size(), std::vector<cplx>(nb.size()));
    parallel_for(na.size(), [&](std::size_t a) {
      for (std::size_t b = 0; b < nb.size(); ++b) {
        cplx s = 0.0;
        for (std::size_t i = 0; i < nr; ++i) s += g.r_weights()[i] * std::conj(fa[a][i]) * fb[b][i];
        m[a][b] = kTwoPi * s;
      }
    });
    return m;
  };

  auto prev = compute(order);
  for (int it = 0; it < 6; ++it) {
    order *= 2;
    auto cur = compute(order);
    double change = 0.0;
    for (std::size_t a = 0; a < cur.size(); ++a)
      for (std::size_t b = 0; b < cur[a].size(); ++b) change = std::max(change, std::abs(cur[a][b] - prev[a][b]));
    if (change < 1e-11) return cur;
    prev = std::move(cur);
  }
  throw ConvergenceError("overlap quadrature did not settle to 1e-11");
}

}  // namespace

cplx overlap(const ModeSpec& a, const ModeSpec& b, double k) {
  if (!(k > 0.0) || !(a.w0 > 0.0) || !(b.w0 > 0.0) || a.n < 0 || b.n < 0) {
    throw DomainError("overlap: need k > 0, w0 > 0 and n >= 0");
  }
  if (a.l != b.l) return 0.0;
  return radial_overlaps(a.l, {a.n}, a.z, a.w0, {b.n}, b.z, b.w0, k)[0][0];
}

int modes_needed(const std::vector<double>& weights, double threshold) {
  double s = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    s += weights[i];
    if (s >= threshold) return static_cast<int>(i) + 1;
  }
  return -1;
}

OverlapMatrix overlap_matrix(int l, const std::vector<int>& n_set, double z, double z_prime, double w0,
                             double w0_prime, double k, double threshold) {
  if (n_set.empty()) throw DomainError("overlap_matrix: empty n set");
  for (std::size_t i = 0; i < n_set.size(); ++i) {
    if (n_set[i] != static_cast<int>(i)) throw DomainError("overlap_matrix: n set must be 0, 1, ..., N");
  }
  if (!(k > 0.0) || !(w0 > 0.0) || !(w0_prime > 0.0)) throw DomainError("overlap_matrix: need k > 0 and w0 > 0");
  OverlapMatrix m;
  m.l = l;
  m.n_set = n_set;
  m.z = z;
  m.z_prime = z_prime;
  m.w0 = w0;
  m.w0_prime = w0_prime;
  m.k = k;
  m.threshold = threshold;
  m.entries = radial_overlaps(l, n_set, z, w0, n_set, z_prime, w0_prime, k);
  const std::size_t n = n_set.size();
  m.completeness.assign(n, 0.0);
  m.modes_for_threshold.assign(n, -1);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = std::norm(m.entries[i][j]);
    for (double v : col) m.completeness[j] += v;
    m.modes_for_threshold[j] = modes_needed(col, threshold);
  }
  return m;
}

Decomposition decompose(const FieldGrid& field, const Basis& basis) {
  const auto& g = field.grid();
  if (!g.has_quadrature()) throw DomainError("decompose: field grid needs radial quadrature");
  if (g.z() != basis.z) {
    throw DomainError("decompose: field at z = " + std::to_string(g.z()) + " but basis at z = " + std::to_string(basis.z));
  }
  Decomposition d;
  FieldGrid rebuilt(g);
  for (int n : basis.n_set) {
    const FieldGrid mode = sample(LGParams(n, basis.l, basis.k, basis.w0), g);
    const cplx c = inner_product(mode, field);
    d.coefficients.push_back(c);
    d.captured += std::norm(c);
    rebuilt += c * mode;
  }
  const double fn = norm(field);
  d.field_norm2 = fn * fn;
  d.residual = fn > 0.0 ? norm(field - rebuilt) / fn : 0.0;
  return d;
}

}  // namespace lgr
