#pragma once

// Exact (non-paraxial) beams: Bessel-basis scalar modes, the
// Riemann-Silberstein field of a Bessel mode, Maxwell and wave-equation
// residuals, the closed-form exact LG scalar, and its synthesis from the
// momentum wavefunction.

#include <functional>
#include <string>
#include <vector>

#include "lgr/momentum.hpp"

namespace lgr {

struct BesselModeParams {
  int m{0};
  int sigma{1};
  double k_t{0.0};  // rad/m, > 0
  double k_z{0.0};  // rad/m

  /// Validates sigma = +-1 and k_t > 0. Throws DomainError.
  BesselModeParams(int m_, int sigma_, double k_t_, double k_z_);
  BesselModeParams() = default;

  double k() const;
  double omega() const { return kSpeedOfLight * k(); }
};

/// A point in space-time. Light-cone times t+- = t +- z/c are stored
/// directly: the exact LG scalar varies on very different scales along
/// them and rebuilding them from (z, t) would lose the small steps.
struct SpacetimePoint {
  double r{0.0};
  double phi{0.0};
  double t_plus{0.0};
  double t_minus{0.0};

  static SpacetimePoint from_lab(double r, double phi, double z, double t);
  static SpacetimePoint from_light_cone(double r, double phi, double t_plus, double t_minus);
  double t() const { return 0.5 * (t_plus + t_minus); }
  double z() const { return 0.5 * kSpeedOfLight * (t_plus - t_minus); }
};

/// (i sigma)^m / (k k_t sqrt 2) e^{i sigma (omega t - k_z z - m phi)} J_m(k_t r),
/// the printed basis scalar with the azimuthal momentum phase left to the
/// caller. Throws at r < 0.
cplx chi_bessel(const BesselModeParams& p, const SpacetimePoint& x);

struct RSField {
  cplx f_r{0.0};
  cplx f_phi{0.0};
  cplx f_z{0.0};
  double norm() const;
};

/// Cylindrical components of the Bessel-mode RS vector, with
/// prefactor (i sigma)^m / (k sqrt 2) e^{-i sigma (omega t - k_z z - m phi)}.
/// Requires r > 0.
RSField rs_bessel_field(const BesselModeParams& p, const SpacetimePoint& x);

using FieldSampler = std::function<RSField(const SpacetimePoint&)>;
using ScalarSampler = std::function<cplx(const SpacetimePoint&)>;

struct MaxwellReport {
  double curl_defect{0.0};       // |d_t F + i c curl F| / (c |F| k_scale)
  double div_defect{0.0};        // |div F| / (|F| k_scale)
  double curl_defect_half{0.0};  // same at half the step
  double div_defect_half{0.0};
  double step{0.0};
  double roundoff_floor{0.0};  // defects below this are not expected to shrink
  bool step_warning{false};
  std::string warning;
};

/// Fourth-order central differences in r, phi, z and t at `x` with spatial
/// step `step` (time step step / c). step <= 0 picks 1e-4 of 2 pi / k_scale.
/// The step is halved once; a defect that does not shrink while above a
/// roundoff floor (1e-9, or more when the carrier phase at x is large)
/// raises step_warning. Needs x.r > 2 * step.
MaxwellReport maxwell_residual(const FieldSampler& field, const SpacetimePoint& x, double k_scale, double step = 0.0);

struct WaveSteps {
  double r{0.0};
  double phi{0.0};
  double t_plus{0.0};
  double t_minus{0.0};
};

/// |(4/c^2) d_t+ d_t- f - grad_t^2 f| normalized by the sum of the two term
/// magnitudes. The light-cone form avoids differencing the carrier twice.
/// Fourth-order stencils; needs x.r > 2 * steps.r.
double wave_residual(const ScalarSampler& f, const SpacetimePoint& x, const WaveSteps& steps);

/// a(t+) = w^2 + i sigma c^2 t+ / omega.
cplx beam_parameter(const ExactMomentumParams& p, double t_plus);

/// r^|m| / a^{n+|m|+1} e^{-i sigma omega (t - z/c)} e^{i sigma m phi}
///   e^{-r^2/a} L_n^|m|(r^2/a), normalization 1.
cplx chi_closed_form(const ExactMomentumParams& p, const SpacetimePoint& x);

struct SynthesisOptions {
  int order{32};                // starting Gauss-Laguerre order, >= 8
  int max_order{2048};
  double tolerance{1e-12};      // change under doubling, relative to sum |w f|
  bool include_k_factor{true};  // the trailing k of the momentum wavefunction
};

struct SynthesisResult {
  cplx value{0.0};
  int order{0};
};

/// int_0^inf dk- psi(k-) e^{-i sigma c (k+ t- + k- t+)} J_m(2 r sqrt(k+ k-))
/// times e^{i sigma m phi}, on the surface k+ = omega/c. Gauss-Laguerre in
/// k- with scale w^2 omega / c and the k-^{n+|m|} power folded into the rule.
/// Doubles the order until converged; throws ConvergenceError otherwise.
SynthesisResult synthesize_lg_detail(const ExactMomentumParams& p, const SpacetimePoint& x,
                                     const SynthesisOptions& options = {});
cplx synthesize_lg(const ExactMomentumParams& p, const SpacetimePoint& x, int quad_order = 32);

struct ScaleFit {
  cplx scale{0.0};
  double residual{0.0};      // |target - scale model| / |target|
  // max |target_i - scale model_i| / (|scale| max |model|); pointwise ratios
  // are useless near zeros of the model.
  double scale_spread{0.0};
};

/// Least-squares complex scale with target ~ scale * model.
ScaleFit fit_global_scale(const std::vector<cplx>& target, const std::vector<cplx>& model);

/// Deterministic sample: r in [0, 3w], phi in [0, 2 pi), t+ cycling through
/// {0, +0.5, -0.5} w^2 omega / c^2, t- in one optical period.
std::vector<SpacetimePoint> bridge_sample_points(const ExactMomentumParams& p, int count, unsigned seed = 7);

struct BridgeReport {
  double modulus_spread{0.0};  // (max - min) / mean of |chi / LG| over the sample
  int samples{0};
};

/// Compares chi_closed_form at z = 0, t = 0 with the paraxial LG(n, m) of
/// waist w and wavenumber omega/c on r in (0, 2.5 w].
BridgeReport paraxial_bridge(const ExactMomentumParams& p, int samples = 64);

}  // namespace lgr
