#pragma once

// Paraxial Laguerre-Gauss modes: beam geometry, pointwise fields, analytic
// partial derivatives, and sampled fields on polar grids.

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "lgr/specfun.hpp"

namespace lgr {

/// Defaults used by fixtures and the CLI: HeNe wavelength, 1 mm waist.
inline constexpr double kDefaultWavelength = 633e-9;
inline constexpr double kDefaultWaist = 1e-3;

/// The four numbers that fix a paraxial LG mode.
struct LGParams {
  int n{0};
  int l{0};
  double k{0.0};   // rad/m
  double w0{0.0};  // m

  /// Validates k > 0, w0 > 0, n >= 0. Throws DomainError.
  LGParams(int n_, int l_, double k_, double w0_);
  LGParams() = default;

  static LGParams from_wavelength(int n, int l, double wavelength, double w0);

  double rayleigh_range() const { return 0.5 * k * w0 * w0; }
  /// k * w0; values below 20 strain the small-angle assumption.
  double paraxiality() const { return k * w0; }
  bool paraxial_warning() const { return paraxiality() < 20.0; }
  int abs_l() const { return l < 0 ? -l : l; }
};

struct BeamGeometry {
  double w_z{0.0};
  double inv_R_z{0.0};
  double phi_g{0.0};
  double z{0.0};
};

BeamGeometry beam_geometry(const LGParams& params, double z);

/// Polar sampling of a transverse plane. Radial nodes exclude the origin;
/// azimuthal nodes are uniform on [0, 2 pi). When radial weights are present
/// they integrate g(r) r dr (the r factor is already included).
class PolarGrid {
 public:
  /// Arbitrary strictly increasing r > 0 nodes without quadrature weights.
  PolarGrid(std::vector<double> r_nodes, int n_phi, double z, double t = 0.0);

  /// Gauss-Legendre radial nodes on [0, r_max] with weights for r dr.
  static PolarGrid gauss_legendre(double r_max, int n_r, int n_phi, double z, double t = 0.0);

  std::size_t n_r() const { return r_.size(); }
  std::size_t n_phi() const { return phi_.size(); }
  const std::vector<double>& r_nodes() const { return r_; }
  const std::vector<double>& phi_nodes() const { return phi_; }
  /// Empty when the grid carries no quadrature.
  const std::vector<double>& r_weights() const { return r_weights_; }
  bool has_quadrature() const { return !r_weights_.empty(); }
  double phi_step() const;
  double z() const { return z_; }
  double t() const { return t_; }

  PolarGrid with_z(double z) const;

 private:
  std::vector<double> r_;
  std::vector<double> r_weights_;
  std::vector<double> phi_;
  double z_{0.0};
  double t_{0.0};
};

/// Complex samples on a PolarGrid, row-major over (r, phi).
class FieldGrid {
 public:
  explicit FieldGrid(PolarGrid grid);
  FieldGrid(PolarGrid grid, std::vector<cplx> values);

  const PolarGrid& grid() const { return grid_; }
  const std::vector<cplx>& values() const { return values_; }
  std::vector<cplx>& values() { return values_; }

  cplx& at(std::size_t ir, std::size_t ip) { return values_[ir * grid_.n_phi() + ip]; }
  const cplx& at(std::size_t ir, std::size_t ip) const { return values_[ir * grid_.n_phi() + ip]; }

  FieldGrid& operator*=(cplx s);
  FieldGrid& operator+=(const FieldGrid& other);
  FieldGrid& operator-=(const FieldGrid& other);

 private:
  PolarGrid grid_;
  std::vector<cplx> values_;
};

FieldGrid operator*(cplx s, FieldGrid f);
FieldGrid operator+(FieldGrid a, const FieldGrid& b);
FieldGrid operator-(FieldGrid a, const FieldGrid& b);

/// Complex amplitude of the LG mode at (r, phi, z).
cplx lg_field(const LGParams& params, double r, double phi, double z);

FieldGrid sample(const LGParams& params, const PolarGrid& grid);

/// sqrt(int |f|^2 r dr dphi). Requires a grid with radial quadrature.
double norm(const FieldGrid& field);

/// <a, b> = int conj(a) b r dr dphi on a shared quadrature grid.
cplx inner_product(const FieldGrid& a, const FieldGrid& b);

struct LGPartials {
  cplx value;
  cplx d_r;
  cplx d_rr;
  cplx d_phi;
  cplx d_phiphi;
};

/// Exact first and second partials in r and phi. Throws DomainError at r = 0.
LGPartials lg_partials(const LGParams& params, double r, double phi, double z);

/// Radius of the outermost intensity lobe, w_z * sqrt(2n + |l| + 1).
double turning_radius(int n, int abs_l, double w_z);

/// Gauss-Legendre grid wide and dense enough for all modes with n <= n_max,
/// |l| <= l_max at plane z. Starts from 1.5x the turning radius and doubles
/// the extent (and order) until the norm of the highest mode changes by less
/// than 1e-10.
PolarGrid converged_radial_grid(const LGParams& params, int n_max, int l_max, double z, int n_phi);

/// Same extent as converged_radial_grid with `refine` times the radial order.
/// Finite-difference stencils need the extra density in the middle of the
/// Gauss-Legendre interval.
PolarGrid fd_radial_grid(const LGParams& params, int n_max, int l_max, double z, int n_phi, int refine = 4);

/// Number of local maxima of |LG|^2 along a ray, sampled on `samples` points
/// out to 3x the turning radius.
int intensity_ring_count(const LGParams& params, double z, int samples = 20000);

/// Propagates a sampled field containing a single azimuthal order l from its
/// plane to grid.z() + dz, using an order-l Hankel transform and the
/// transfer function of grad_t^2 E + 2ik dE/dz = 0, which is the paraxial
/// equation lg_field satisfies. Output is sampled on `target` (whose z is overwritten).
/// Requires a quadrature grid on input.
FieldGrid propagate_hankel(const FieldGrid& field, int l, double k, double dz, const PolarGrid& target,
                           double q_max, int q_order);

}  // namespace lgr
