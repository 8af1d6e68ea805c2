#include "lgr/lgmode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lgr/error.hpp"
#include "lgr/parallel.hpp"

namespace lgr {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

double lg_prefactor(int n, int abs_l) {
  // sqrt(2 n! / (pi (n+|l|)!))
  const double log_ratio = std::lgamma(n + 1.0) - std::lgamma(n + abs_l + 1.0);
  return std::sqrt(2.0 / kPi * std::exp(log_ratio));
}

// Integer power that avoids pow() for small exponents.
double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

}  // namespace

LGParams::LGParams(int n_, int l_, double k_, double w0_) : n(n_), l(l_), k(k_), w0(w0_) {
  if (n < 0) throw DomainError("LGParams: radial index n must be >= 0, got " + std::to_string(n));
  if (!(k > 0.0)) throw DomainError("LGParams: wavenumber k must be > 0");
  if (!(w0 > 0.0)) throw DomainError("LGParams: waist w0 must be > 0");
}

LGParams LGParams::from_wavelength(int n, int l, double wavelength, double w0) {
  if (!(wavelength > 0.0)) throw DomainError("LGParams: wavelength must be > 0");
  return LGParams(n, l, 2.0 * kPi / wavelength, w0);
}

BeamGeometry beam_geometry(const LGParams& params, double z) {
  const double zr = params.rayleigh_range();
  BeamGeometry g;
  g.z = z;
  g.w_z = params.w0 * std::sqrt(1.0 + (z / zr) * (z / zr));
  // 1/R_z with R_z = z + z_R^2 / z, written to stay finite at z = 0.
  g.inv_R_z = z / (z * z + zr * zr);
  g.phi_g = std::atan(z / zr);
  return g;
}

PolarGrid::PolarGrid(std::vector<double> r_nodes, int n_phi, double z, double t)
    : r_(std::move(r_nodes)), z_(z), t_(t) {
  if (r_.empty()) throw DomainError("PolarGrid: no radial nodes");
  if (n_phi < 1) throw DomainError("PolarGrid: need at least one azimuthal node");
  for (std::size_t i = 0; i < r_.size(); ++i) {
    if (!(r_[i] > 0.0)) throw DomainError("PolarGrid: radial nodes must be > 0");
    if (i > 0 && !(r_[i] > r_[i - 1])) throw DomainError("PolarGrid: radial nodes must be strictly increasing");
  }
  phi_.resize(static_cast<std::size_t>(n_phi));
  for (int j = 0; j < n_phi; ++j) phi_[static_cast<std::size_t>(j)] = 2.0 * kPi * j / n_phi;
}

PolarGrid PolarGrid::gauss_legendre(double r_max, int n_r, int n_phi, double z, double t) {
  auto rule = QuadratureRule::legendre(n_r, 0.0, r_max);
  PolarGrid grid(rule.nodes(), n_phi, z, t);
  grid.r_weights_.resize(rule.nodes().size());
  for (std::size_t i = 0; i < rule.nodes().size(); ++i) grid.r_weights_[i] = rule.weights()[i] * rule.nodes()[i];
  return grid;
}

double PolarGrid::phi_step() const { return 2.0 * kPi / static_cast<double>(phi_.size()); }

PolarGrid PolarGrid::with_z(double z) const {
  PolarGrid g = *this;
  g.z_ = z;
  return g;
}

FieldGrid::FieldGrid(PolarGrid grid) : grid_(std::move(grid)), values_(grid_.n_r() * grid_.n_phi()) {}

FieldGrid::FieldGrid(PolarGrid grid, std::vector<cplx> values) : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.n_r() * grid_.n_phi()) {
    throw DomainError("FieldGrid: value count " + std::to_string(values_.size()) + " does not match grid " +
                      std::to_string(grid_.n_r()) + "x" + std::to_string(grid_.n_phi()));
  }
}

FieldGrid& FieldGrid::operator*=(cplx s) {
  for (auto& v : values_) v *= s;
  return *this;
}

FieldGrid& FieldGrid::operator+=(const FieldGrid& other) {
  if (other.values_.size() != values_.size()) throw DomainError("FieldGrid: shape mismatch in +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

FieldGrid& FieldGrid::operator-=(const FieldGrid& other) {
  if (other.values_.size() != values_.size()) throw DomainError("FieldGrid: shape mismatch in -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

FieldGrid operator*(cplx s, FieldGrid f) { return f *= s; }
FieldGrid operator+(FieldGrid a, const FieldGrid& b) { return a += b; }
FieldGrid operator-(FieldGrid a, const FieldGrid& b) { return a -= b; }

cplx lg_field(const LGParams& params, double r, double phi, double z) {
  if (r < 0.0) throw DomainError("lg_field: r must be >= 0");
  const auto g = beam_geometry(params, z);
  const int a = params.abs_l();
  const double rho2 = 2.0 * r * r / (g.w_z * g.w_z);
  const double amplitude = lg_prefactor(params.n, a) / g.w_z * ipow(std::sqrt(2.0) * r / g.w_z, a) *
                           laguerre(params.n, a, rho2);
  const double phase = params.l * phi + 0.5 * params.k * r * r * g.inv_R_z - (2.0 * params.n + a + 1.0) * g.phi_g;
  return amplitude * std::exp(cplx(-r * r / (g.w_z * g.w_z), phase));
}

FieldGrid sample(const LGParams& params, const PolarGrid& grid) {
  FieldGrid out(grid);
  const auto& rn = grid.r_nodes();
  const auto& pn = grid.phi_nodes();
  parallel_for(rn.size(), [&](std::size_t i) {
    // Separable: radial profile once, azimuthal phase per node.
    const cplx radial = lg_field(params, rn[i], 0.0, grid.z());
    for (std::size_t j = 0; j < pn.size(); ++j) out.at(i, j) = radial * std::exp(kI * (params.l * pn[j]));
  });
  return out;
}

cplx inner_product(const FieldGrid& a, const FieldGrid& b) {
  const auto& ga = a.grid();
  if (!ga.has_quadrature() || !b.grid().has_quadrature()) {
    throw DomainError("inner_product: field grid carries no radial quadrature weights");
  }
  if (ga.n_r() != b.grid().n_r() || ga.n_phi() != b.grid().n_phi()) {
    throw DomainError("inner_product: grids differ in shape");
  }
  const auto& w = ga.r_weights();
  const double dphi = ga.phi_step();
  cplx sum = 0.0;
  for (std::size_t i = 0; i < ga.n_r(); ++i) {
    cplx ring = 0.0;
    for (std::size_t j = 0; j < ga.n_phi(); ++j) ring += std::conj(a.at(i, j)) * b.at(i, j);
    sum += w[i] * ring;
  }
  return sum * dphi;
}

double norm(const FieldGrid& field) {
  if (!field.grid().has_quadrature()) {
    throw DomainError("norm: field grid carries no radial quadrature weights");
  }
  return std::sqrt(std::max(0.0, inner_product(field, field).real()));
}

LGPartials lg_partials(const LGParams& params, double r, double phi, double z) {
  if (!(r > 0.0)) throw DomainError("lg_partials: operators are applied on r > 0 only");
  const auto g = beam_geometry(params, z);
  const int a = params.abs_l();
  const int n = params.n;
  const double w2 = g.w_z * g.w_z;
  const double x = 2.0 * r * r / w2;
  const double dx = 4.0 * r / w2;
  const double ddx = 4.0 / w2;

  // Profile S(r) = r^a * L(x(r)) * exp(-q r^2) with complex q.
  const cplx q(1.0 / w2, -0.5 * params.k * g.inv_R_z);
  const double A = ipow(r, a);
  const double A1 = a >= 1 ? a * ipow(r, a - 1) : 0.0;
  const double A2 = a >= 2 ? a * (a - 1.0) * ipow(r, a - 2) : 0.0;
  const double L0 = laguerre(n, a, x);
  const double L1 = laguerre_derivative(n, a, x);
  const double L2 = n >= 2 ? laguerre(n - 2, a + 2.0, x) : 0.0;
  const double B = L0;
  const double B1 = L1 * dx;
  const double B2 = L2 * dx * dx + L1 * ddx;
  const cplx E = std::exp(-q * r * r);
  const cplx E1 = -2.0 * q * r * E;
  const cplx E2 = (4.0 * q * q * r * r - 2.0 * q) * E;

  const cplx S = A * B * E;
  const cplx S1 = A1 * B * E + A * B1 * E + A * B * E1;
  const cplx S2 = A2 * B * E + A * B2 * E + A * B * E2 + 2.0 * (A1 * B1 * E + A1 * B * E1 + A * B1 * E1);

  const double scale = lg_prefactor(n, a) / g.w_z * ipow(std::sqrt(2.0) / g.w_z, a);
  const cplx phase = std::exp(kI * (params.l * phi - (2.0 * n + a + 1.0) * g.phi_g));
  const cplx c = scale * phase;

  LGPartials p;
  p.value = c * S;
  p.d_r = c * S1;
  p.d_rr = c * S2;
  p.d_phi = kI * static_cast<double>(params.l) * p.value;
  p.d_phiphi = -static_cast<double>(params.l) * params.l * p.value;
  return p;
}

double turning_radius(int n, int abs_l, double w_z) { return w_z * std::sqrt(2.0 * n + abs_l + 1.0); }

namespace {

int radial_order_for(double r_max, const LGParams& params, int n_max, int l_max, double z) {
  const auto g = beam_geometry(params, z);
  // Amplitude structure: polynomial degree plus Gaussian envelope across r_max.
  const double per_waist = 6.0 + 1.5 * std::sqrt(2.0 * n_max + l_max + 1.0);
  // Curvature phase k r^2 / (2 R) across the window.
  const double phase = 0.5 * params.k * r_max * r_max * std::fabs(g.inv_R_z);
  const double order = r_max / g.w_z * per_waist + 2.0 * (2 * n_max + l_max) + 0.6 * phase;
  return std::max(48, static_cast<int>(std::ceil(order)));
}

}  // namespace

PolarGrid converged_radial_grid(const LGParams& params, int n_max, int l_max, double z, int n_phi) {
  const auto g = beam_geometry(params, z);
  LGParams probe = params;
  probe.n = n_max;
  probe.l = l_max;
  double r_max = 1.5 * turning_radius(n_max, l_max, g.w_z);
  auto grid_at = [&](double rm) {
    return PolarGrid::gauss_legendre(rm, radial_order_for(rm, params, n_max, l_max, z), n_phi, z);
  };
  auto mode_norm2 = [&](const PolarGrid& grid) {
    double s = 0.0;
    for (std::size_t i = 0; i < grid.n_r(); ++i) s += grid.r_weights()[i] * std::norm(lg_field(probe, grid.r_nodes()[i], 0.0, z));
    return s * 2.0 * kPi;
  };
  PolarGrid current = grid_at(r_max);
  double prev = mode_norm2(current);
  for (int iter = 0; iter < 8; ++iter) {
    r_max *= 2.0;
    PolarGrid next = grid_at(r_max);
    const double val = mode_norm2(next);
    const bool done = std::fabs(val - prev) < 1e-10;
    current = std::move(next);
    prev = val;
    if (done) return current;
  }
  throw ConvergenceError("converged_radial_grid: norm did not settle below 1e-10");
}

PolarGrid fd_radial_grid(const LGParams& params, int n_max, int l_max, double z, int n_phi, int refine) {
  if (refine < 1) throw DomainError("fd_radial_grid: refine must be >= 1");
  const PolarGrid base = converged_radial_grid(params, n_max, l_max, z, 1);
  // Gauss-Legendre nodes stop short of r_max; recover it from the rule.
  const double r_max = base.r_nodes().back() + base.r_nodes().front();
  return PolarGrid::gauss_legendre(r_max, static_cast<int>(base.n_r()) * refine, n_phi, z);
}

int intensity_ring_count(const LGParams& params, double z, int samples) {
  const auto g = beam_geometry(params, z);
  const double r_end = 3.0 * turning_radius(params.n, params.abs_l(), g.w_z);
  std::vector<double> inten(static_cast<std::size_t>(samples) + 1);
  for (int i = 0; i <= samples; ++i) inten[static_cast<std::size_t>(i)] = std::norm(lg_field(params, r_end * i / samples, 0.0, z));
  double peak = *std::max_element(inten.begin(), inten.end());
  const double floor = 1e-12 * peak;
  int count = 0;
  if (inten[0] > inten[1] && inten[0] > floor) ++count;
  for (std::size_t i = 1; i + 1 < inten.size(); ++i) {
    if (inten[i] > inten[i - 1] && inten[i] >= inten[i + 1] && inten[i] > floor) ++count;
  }
  return count;
}

FieldGrid propagate_hankel(const FieldGrid& field, int l, double k, double dz, const PolarGrid& target,
                           double q_max, int q_order) {
  const auto& src = field.grid();
  if (!src.has_quadrature()) throw DomainError("propagate_hankel: input grid needs radial quadrature");
  const int order = l < 0 ? -l : l;
  const std::size_t nr = src.n_r();
  const std::size_t np = src.n_phi();

  // Azimuthal projection onto e^{i l phi}.
  std::vector<cplx> profile(nr);
  for (std::size_t i = 0; i < nr; ++i) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < np; ++j) s += field.at(i, j) * std::exp(-kI * (l * src.phi_nodes()[j]));
    profile[i] = s / static_cast<double>(np);
  }

  const auto qrule = QuadratureRule::legendre(q_order, 0.0, q_max);
  const auto& qn = qrule.nodes();
  std::vector<cplx> spectrum(qn.size());
  parallel_for(qn.size(), [&](std::size_t iq) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < nr; ++i) s += src.r_weights()[i] * profile[i] * bessel_j(order, qn[iq] * src.r_nodes()[i]);
    spectrum[iq] = s * std::exp(cplx(0.0, -qn[iq] * qn[iq] * dz / (2.0 * k)));
  });

  PolarGrid out_grid = target.with_z(src.z() + dz);
  FieldGrid out(out_grid);
  const auto& rn = out_grid.r_nodes();
  parallel_for(rn.size(), [&](std::size_t i) {
    cplx s = 0.0;
    for (std::size_t iq = 0; iq < qn.size(); ++iq) s += qrule.weights()[iq] * qn[iq] * spectrum[iq] * bessel_j(order, qn[iq] * rn[i]);
    for (std::size_t j = 0; j < out_grid.n_phi(); ++j) out.at(i, j) = s * std::exp(kI * (l * out_grid.phi_nodes()[j]));
  });
  return out;
}

}  // namespace lgr
