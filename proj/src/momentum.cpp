#include "lgr/momentum.hpp"

#include <cmath>
#include <numbers>

#include "lgr/differentiation.hpp"
#include "lgr/error.hpp"

namespace lgr {

namespace {

constexpr cplx kI{0.0, 1.0};

cplx azimuth(const ExactMomentumParams& p, double k_phi) { return std::exp(kI * (p.sigma * p.m * k_phi)); }

// Coefficient c in (azimuthal term) psi = c psi for an e^{i sigma m phi} factor,
// where the term is (i/sigma) d_phi (verbatim) or -|m| (symmetrized).
double azimuthal_factor(const ExactMomentumParams& p, SignPolicy policy) {
  if (policy == SignPolicy::symmetrized) return -static_cast<double>(p.abs_m());
  // (i/sigma) * (i sigma m)
  return (kI / static_cast<double>(p.sigma) * (kI * static_cast<double>(p.sigma * p.m))).real();
}

}  // namespace

ExactMomentumParams::ExactMomentumParams(int n_, int m_, int sigma_, double omega_, double w_)
    : n(n_), m(m_), sigma(sigma_), omega(omega_), w(w_) {
  if (n < 0) throw DomainError("ExactMomentumParams: n must be >= 0");
  if (sigma != 1 && sigma != -1) throw DomainError("ExactMomentumParams: sigma must be +1 or -1");
  if (!(omega > 0.0) || !std::isfinite(omega)) throw DomainError("ExactMomentumParams: omega must be > 0");
  if (!(w > 0.0) || !std::isfinite(w)) throw DomainError("ExactMomentumParams: w must be > 0");
}

ExactMomentumParams ExactMomentumParams::from_wavelength(int n, int m, int sigma, double wavelength, double w) {
  if (!(wavelength > 0.0)) throw DomainError("wavelength must be > 0");
  return {n, m, sigma, 2.0 * std::numbers::pi * kSpeedOfLight / wavelength, w};
}

MomentumCoords MomentumCoords::from_light_cone(double k_plus, double k_minus, double k_phi) {
  if (k_plus < 0.0 || k_minus < 0.0) throw DomainError("MomentumCoords: k+ and k- must be >= 0");
  MomentumCoords c;
  c.k_plus = k_plus;
  c.k_minus = k_minus;
  c.k_phi = k_phi;
  c.k_z = k_plus - k_minus;
  c.k_t = 2.0 * std::sqrt(k_plus * k_minus);
  return c;
}

MomentumCoords MomentumCoords::from_polar(double k_t, double k_z, double k_phi) {
  if (k_t < 0.0) throw DomainError("MomentumCoords: k_t must be >= 0");
  MomentumCoords c;
  c.k_t = k_t;
  c.k_z = k_z;
  c.k_phi = k_phi;
  const double k = std::hypot(k_t, k_z);
  // The smaller of k +- k_z via k_t^2 / (2 (k -+ k_z)) to avoid cancellation.
  if (k_z >= 0.0) {
    c.k_plus = 0.5 * (k + k_z);
    c.k_minus = k > 0.0 ? 0.25 * k_t * k_t / c.k_plus : 0.0;
  } else {
    c.k_minus = 0.5 * (k - k_z);
    c.k_plus = 0.25 * k_t * k_t / c.k_minus;
  }
  return c;
}

cplx psi_exact(const ExactMomentumParams& p, double k_minus, double k_phi, bool with_k_factor) {
  if (k_minus < 0.0) throw DomainError("psi_exact: k- must be >= 0");
  const double radial = std::pow(k_minus, p.power()) * std::exp(-p.beta() * k_minus);
  const double k = with_k_factor ? p.k_plus() + k_minus : 1.0;
  return azimuth(p, k_phi) * (radial * k);
}

cplx psi_exact_polar(const ExactMomentumParams& p, double k_t, double k_z, double k_phi) {
  const auto c = MomentumCoords::from_polar(k_t, k_z, k_phi);
  const double radial = std::pow(c.k_minus, p.power()) * std::exp(-p.beta() * c.k_minus);
  return azimuth(p, k_phi) * (radial * c.k());
}

double nk_eigenvalue(const ExactMomentumParams& p, SignPolicy policy) {
  if (policy == SignPolicy::symmetrized) return p.n;
  return p.n + 0.5 * (p.abs_m() - p.m);
}

cplx apply_nk(const ExactMomentumParams& p, double k_minus, double k_phi, SignPolicy policy) {
  if (k_minus < 0.0) throw DomainError("apply_nk: k- must be >= 0");
  const double beta = p.beta();
  const double k = p.k_plus() + k_minus;
  const double h = std::pow(k_minus, p.power()) * std::exp(-beta * k_minus);
  const cplx e = azimuth(p, k_phi);
  const cplx psi = e * (h * k);
  // k- d/dk- of h k, written out so no negative power of k- appears.
  const cplx km_dpsi = e * (h * ((p.power() - beta * k_minus) * k + k_minus));
  const cplx az = 0.5 * azimuthal_factor(p, policy) * psi;
  return km_dpsi + az - (k_minus / k) * psi + beta * k_minus * psi;
}

cplx nk_polar(const ExactMomentumParams& p, double k_t, double k_z, double k_phi, SignPolicy policy) {
  const auto c = MomentumCoords::from_polar(k_t, k_z, k_phi);
  const double k = c.k();
  const double km = c.k_minus;
  const double beta = p.beta();
  const cplx psi = psi_exact_polar(p, k_t, k_z, k_phi);
  // Logarithmic partials of k-^p e^{-beta k-} and of k.
  // k_t d_kt k- = k_t^2 / (2k), and k_t^2 / (2 k k-) = (k + k_z) / k.
  const double kt_dkt_log_h = (p.power() - beta * km) * ((k + k_z) / k);
  const double kt_dkt_log_k = k_t * k_t / (k * k);
  // (k - k_z) d_kz k- = (k - k_z)(k_z/k - 1)/2 = -2 k-^2 / k.
  const double diff = 2.0 * km;  // k - k_z without cancellation
  const double dkz_log_h_times = (p.power() - beta * km) * (-2.0 * km / k);
  const double dkz_log_k_times = diff * k_z / (k * k);
  const cplx kt_dkt = (kt_dkt_log_h + kt_dkt_log_k) * psi;
  const cplx az = azimuthal_factor(p, policy) * psi;
  const cplx diff_dkz = (dkz_log_h_times + dkz_log_k_times) * psi;
  return 0.5 * (kt_dkt + az - diff_dkz - diff * (1.0 / k - beta) * psi);
}

double nk_pointwise_residual(const ExactMomentumParams& p, double k_minus, double k_phi, SignPolicy policy) {
  const cplx psi = psi_exact(p, k_minus, k_phi);
  const cplx out = apply_nk(p, k_minus, k_phi, policy);
  return std::abs(out - nk_eigenvalue(p, policy) * psi) / std::abs(psi);
}

double k_minus_exact(double k_t, double k_z) { return MomentumCoords::from_polar(k_t, k_z, 0.0).k_minus; }

double k_minus_taylor(double k_t, double k_z) {
  if (k_z <= 0.0) throw DomainError("k_minus_taylor: needs k_z > 0");
  return k_t * k_t / (4.0 * k_z);
}

cplx psi_paraxial(const ExactMomentumParams& p, double k_t, double k_phi) {
  if (k_t < 0.0) throw DomainError("psi_paraxial: k_t must be >= 0");
  const double radial = std::pow(k_t, 2 * p.n + p.abs_m()) * std::exp(-0.5 * p.w * p.w * k_t * k_t);
  return azimuth(p, k_phi) * radial;
}

cplx apply_nk_paraxial(const ExactMomentumParams& p, double k_t, double k_phi, SignPolicy policy) {
  const cplx psi = psi_paraxial(p, k_t, k_phi);
  const double w2kt2 = p.w * p.w * k_t * k_t;
  const cplx kt_dkt = (2.0 * p.n + p.abs_m() - w2kt2) * psi;
  return 0.5 * (kt_dkt + azimuthal_factor(p, policy) * psi + w2kt2 * psi);
}

FieldGrid sample_paraxial(const ExactMomentumParams& p, const PolarGrid& grid) {
  FieldGrid out(grid);
  for (std::size_t i = 0; i < grid.n_r(); ++i)
    for (std::size_t j = 0; j < grid.n_phi(); ++j)
      out.at(i, j) = psi_paraxial(p, grid.r_nodes()[i], grid.phi_nodes()[j]);
  return out;
}

PolarGrid paraxial_momentum_grid(const ExactMomentumParams& p, int n_kt, int n_phi) {
  const double kt_max = (std::sqrt(2.0 * p.n + p.abs_m() + 1.0) + 8.0) / p.w;
  return PolarGrid::gauss_legendre(kt_max, n_kt, n_phi, 0.0);
}

FieldGrid apply_momentum_operator(MomentumOperator op, const FieldGrid& psi, double w, int sigma, SignPolicy policy) {
  if (sigma != 1 && sigma != -1) throw DomainError("apply_momentum_operator: sigma must be +1 or -1");
  const auto& g = psi.grid();
  const std::size_t nr = g.n_r(), np = g.n_phi();
  const auto& v = psi.values();
  std::vector<cplx> d1(v.size());
  RadialDifferentiator diff(g.r_nodes());
  for (std::size_t j = 0; j < np; ++j) diff.apply(v, d1, {}, np, j);

  FieldGrid out(g);
  for (std::size_t i = 0; i < nr; ++i) {
    const double kt = g.r_nodes()[i];
    std::vector<cplx> az(np, 0.0);
    if (op == MomentumOperator::nk_paraxial) {
      if (np < 8) throw DomainError("apply_momentum_operator: needs at least 8 azimuthal nodes");
      std::span<const cplx> ring(v.data() + i * np, np);
      if (policy == SignPolicy::verbatim) {
        az = spectral_derivative(ring, 1);
        for (auto& a : az) a *= kI / static_cast<double>(sigma);
      } else {
        az = spectral_abs_derivative(ring);
        for (auto& a : az) a = -a;
      }
    }
    for (std::size_t j = 0; j < np; ++j) {
      const std::size_t idx = i * np + j;
      const cplx euler = kt * d1[idx];
      out.at(i, j) = op == MomentumOperator::radial_euler ? euler : 0.5 * (euler + az[j] + w * w * kt * kt * v[idx]);
    }
  }
  return out;
}

cplx hermiticity_defect(MomentumOperator op, const FieldGrid& psi, double w, int sigma, SignPolicy policy) {
  const FieldGrid a = apply_momentum_operator(op, psi, w, sigma, policy);
  return inner_product(a, psi) - inner_product(psi, a);
}

cplx paraxial_expectation(const ExactMomentumParams& p, const PolarGrid& grid, SignPolicy policy) {
  if (!grid.has_quadrature()) throw DomainError("paraxial_expectation: grid needs radial quadrature");
  const FieldGrid psi = sample_paraxial(p, grid);
  FieldGrid npsi(grid);
  for (std::size_t i = 0; i < grid.n_r(); ++i)
    for (std::size_t j = 0; j < grid.n_phi(); ++j)
      npsi.at(i, j) = apply_nk_paraxial(p, grid.r_nodes()[i], grid.phi_nodes()[j], policy);
  return inner_product(psi, npsi) / inner_product(psi, psi);
}

}  // namespace lgr
