#pragma once

// Quadrature expectations, hyperbolic-momentum sweeps, overlap matrices
// under z / w0 mismatch, and modal decomposition.

#include <optional>
#include <vector>

#include "lgr/lgmode.hpp"
#include "lgr/paraxops.hpp"

namespace lgr {

struct Expectation {
  double value{0.0};
  double imag_residue{0.0};  // imaginary part of the quadrature, discarded from value
  int radial_order{0};
};

/// <LG| op |LG> over the transverse plane at z (measure r dr dphi).
/// Doubles the radial order until the result moves by less than 1e-7;
/// throws ConvergenceError otherwise.
Expectation expectation_detail(const OperatorKind& op, const LGParams& params, double z);
double expectation(const OperatorKind& op, const LGParams& params, double z);

struct LinearFit {
  double slope{0.0};
  double intercept{0.0};
  double r_squared{0.0};
};

/// Least squares y = a + b x.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// Least squares y = a x^power (no intercept); r_squared uses the total sum
/// of squares about the mean of y.
LinearFit power_fit_through_origin(const std::vector<double>& x, const std::vector<double>& y, int power);

struct DecayDiagnostics {
  bool strictly_decreasing{false};
  bool all_finite{false};
  double last_over_first{0.0};
  LinearFit semilog;  // ln v against w0
  LinearFit loglog;   // ln v against ln w0
};

enum class AbscissaKind { z, w0 };

struct ExpectationSeries {
  AbscissaKind abscissa_kind{AbscissaKind::z};
  std::vector<double> abscissa;
  std::vector<double> values;
  std::vector<double> imag_residue;
  LGParams params;  // the swept field is whatever params held on entry
  double fixed_z{0.0};  // only for w0 sweeps
  std::optional<LinearFit> z_fit;
  std::optional<DecayDiagnostics> decay;
};

/// <P_H>(z) with a linear fit attached.
ExpectationSeries ph_vs_z(const LGParams& params, const std::vector<double>& z_list);

/// <P_H>(w0) at fixed z with decay diagnostics attached.
ExpectationSeries ph_vs_w0(const LGParams& params, const std::vector<double>& w0_list, double z);

/// Expectation of the curvature term i z/(k w0^2)(r d_r + 1) of Nz, which is
/// -(z/(k w0^2)) <P_H>. Fit attached is a z^2 law through the origin.
ExpectationSeries curvature_term_vs_z(const LGParams& params, const std::vector<double>& z_list);

struct ModeSpec {
  int n{0};
  int l{0};
  double z{0.0};
  double w0{kDefaultWaist};
};

/// <LG_a(z_a) | LG_b(z_b)> over r dr dphi with a shared wavenumber.
cplx overlap(const ModeSpec& a, const ModeSpec& b, double k);

struct OverlapMatrix {
  int l{0};
  std::vector<int> n_set;
  double z{0.0};
  double z_prime{0.0};
  double w0{0.0};
  double w0_prime{0.0};
  double k{0.0};
  // entries[i][j] = <LG_{n_set[i]}(z, w0) | LG_{n_set[j]}(z', w0')>
  std::vector<std::vector<cplx>> entries;
  // Sum over rows of |entries|^2 for each column.
  std::vector<double> completeness;
  // Smallest mode count (rows 0..count-1) reaching `threshold` per column; -1 if never.
  std::vector<int> modes_for_threshold;
  double threshold{0.99};
};

/// n_set must be 0, 1, ..., N. Modes are sampled on shared radial
/// Gauss-Legendre nodes; the order is doubled until entries settle to 1e-11.
OverlapMatrix overlap_matrix(int l, const std::vector<int>& n_set, double z, double z_prime, double w0,
                             double w0_prime, double k, double threshold = 0.99);

/// Smallest count of leading entries whose |.|^2 sum reaches threshold, or -1.
int modes_needed(const std::vector<double>& weights, double threshold);

struct Basis {
  int l{0};
  std::vector<int> n_set;
  double z{0.0};
  double w0{kDefaultWaist};
  double k{0.0};
};

struct Decomposition {
  std::vector<cplx> coefficients;
  double captured{0.0};        // sum |c_n|^2
  double field_norm2{0.0};     // ||f||^2
  double residual{0.0};        // ||f - sum c_n LG_n|| / ||f||
};

/// Projects a sampled field onto LG_n(basis) for n in basis.n_set. The field
/// grid needs radial quadrature and must sit at basis.z.
Decomposition decompose(const FieldGrid& field, const Basis& basis);

}  // namespace lgr
