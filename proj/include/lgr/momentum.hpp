#pragma once

// Momentum-space LG wavefunctions on the monochromatic surface k+ = Omega/c,
// the radial-momentum operator in light-cone and polar coordinates, the
// paraxial limit, and hermiticity checks on sampled wavefunctions.

#include "lgr/lgmode.hpp"
#include "lgr/paraxops.hpp"

namespace lgr {

inline constexpr double kSpeedOfLight = 299792458.0;

struct ExactMomentumParams {
  int n{0};
  int m{0};
  int sigma{1};       // helicity, +1 or -1
  double omega{0.0};  // rad/s, fixes k+ = omega / c
  double w{0.0};      // m, width parameter of the exponential

  /// Validates n >= 0, sigma = +-1, omega > 0, w > 0. Throws DomainError.
  ExactMomentumParams(int n_, int m_, int sigma_, double omega_, double w_);
  ExactMomentumParams() = default;

  /// omega from a vacuum wavelength.
  static ExactMomentumParams from_wavelength(int n, int m, int sigma, double wavelength, double w);

  double k_plus() const { return omega / kSpeedOfLight; }
  /// beta = w^2 omega / c, the decay rate in k-.
  double beta() const { return w * w * omega / kSpeedOfLight; }
  /// n + |m|/2, the power of k-.
  double power() const { return n + 0.5 * (m < 0 ? -m : m); }
  int abs_m() const { return m < 0 ? -m : m; }
};

/// A momentum point in both light-cone and polar form.
struct MomentumCoords {
  double k_plus{0.0};
  double k_minus{0.0};
  double k_t{0.0};
  double k_z{0.0};
  double k_phi{0.0};

  static MomentumCoords from_light_cone(double k_plus, double k_minus, double k_phi);
  static MomentumCoords from_polar(double k_t, double k_z, double k_phi);
  double k() const { return k_plus + k_minus; }
};

/// e^{i sigma m k_phi} k-^{n+|m|/2} e^{-beta k-} k with k = omega/c + k-,
/// unnormalized. `with_k_factor = false` drops the trailing k.
cplx psi_exact(const ExactMomentumParams& p, double k_minus, double k_phi, bool with_k_factor = true);

/// The same function read in polar coordinates: k- = (k - k_z)/2 and
/// k = sqrt(k_t^2 + k_z^2), with the delta on k+ left implicit.
cplx psi_exact_polar(const ExactMomentumParams& p, double k_t, double k_z, double k_phi);

/// N_k psi = k- d_k- psi + (i/2 sigma) d_phi psi - (k-/k) psi + beta k- psi,
/// all derivatives taken analytically. Symmetrized policy swaps the azimuthal
/// term for -|m|/2.
cplx apply_nk(const ExactMomentumParams& p, double k_minus, double k_phi,
              SignPolicy policy = SignPolicy::symmetrized);

/// (1/2)(k_t d_kt + (i/sigma) d_phi - (k - k_z)(d_kz + 1/k - beta)) applied to
/// psi_exact_polar through its analytic partials.
cplx nk_polar(const ExactMomentumParams& p, double k_t, double k_z, double k_phi,
              SignPolicy policy = SignPolicy::symmetrized);

/// n + (|m| - m)/2 for verbatim, n for symmetrized.
double nk_eigenvalue(const ExactMomentumParams& p, SignPolicy policy);

/// |N_k psi - a psi| / |psi| at one point (light-cone form).
double nk_pointwise_residual(const ExactMomentumParams& p, double k_minus, double k_phi,
                             SignPolicy policy = SignPolicy::symmetrized);

/// Exact and Taylor-approximated k- at (k_t, k_z).
double k_minus_exact(double k_t, double k_z);
double k_minus_taylor(double k_t, double k_z);

/// e^{i sigma m k_phi} k_t^{2n+|m|} e^{-w^2 k_t^2 / 2}, unnormalized.
cplx psi_paraxial(const ExactMomentumParams& p, double k_t, double k_phi);

/// (1/2)(k_t d_kt + (i/sigma) d_phi + w^2 k_t^2) on psi_paraxial, analytic.
cplx apply_nk_paraxial(const ExactMomentumParams& p, double k_t, double k_phi,
                       SignPolicy policy = SignPolicy::symmetrized);

/// Samples psi_paraxial on a grid whose radial nodes are k_t and azimuthal
/// nodes are k_phi; measure k_t dk_t dk_phi.
FieldGrid sample_paraxial(const ExactMomentumParams& p, const PolarGrid& grid);

/// Gauss-Legendre k_t grid on [0, kt_max] wide enough for psi_paraxial.
PolarGrid paraxial_momentum_grid(const ExactMomentumParams& p, int n_kt, int n_phi);

enum class MomentumOperator {
  nk_paraxial,  // (1/2)(k_t d_kt + (i/sigma) d_phi + w^2 k_t^2)
  radial_euler  // k_t d_kt alone
};

/// Applies the operator to a sampled wavefunction: 7-point stencils in k_t,
/// spectral differentiation in k_phi.
FieldGrid apply_momentum_operator(MomentumOperator op, const FieldGrid& psi, double w, int sigma,
                                  SignPolicy policy = SignPolicy::symmetrized);

/// <A psi, psi> - <psi, A psi> under k_t dk_t dk_phi.
cplx hermiticity_defect(MomentumOperator op, const FieldGrid& psi, double w, int sigma,
                        SignPolicy policy = SignPolicy::symmetrized);

/// <psi, N'_k psi> / <psi, psi> for the sampled paraxial wavefunction.
cplx paraxial_expectation(const ExactMomentumParams& p, const PolarGrid& grid,
                          SignPolicy policy = SignPolicy::symmetrized);

}  // namespace lgr
