#pragma once

// Paraxial position-space operators: OAM, transverse Laplacian, hyperbolic
// momentum, and the radial-index operators at the focus and at any z.
// hbar = 1 throughout, so eigenvalues are plain mode numbers.

#include <functional>
#include <string>
#include <string_view>

#include "lgr/lgmode.hpp"

namespace lgr {

enum class OperatorTag { Lz, LaplacianT, PH, N0, Nz, RadiusOfCurvatureTerm };

/// How the OAM term inside N0 / Nz treats negative l.
///  verbatim:     -Lz/2 exactly as written, eigenvalue n + (|l| - l)/2.
///  symmetrized:  -|Lz|/2, eigenvalue n for every l.
enum class SignPolicy { symmetrized, verbatim };

enum class Method { analytic, finite_difference };

std::string_view to_string(OperatorTag tag);
std::string_view to_string(SignPolicy policy);
OperatorTag parse_operator_tag(std::string_view name);
SignPolicy parse_sign_policy(std::string_view name);

struct OperatorKind {
  OperatorTag tag{OperatorTag::Lz};
  double z{0.0};   // plane of Nz and the curvature term
  double k{0.0};   // wavenumber (N0, Nz, curvature term)
  double w0{0.0};  // focal waist (N0, Nz, curvature term)
  SignPolicy policy{SignPolicy::symmetrized};

  static OperatorKind lz() { return {OperatorTag::Lz}; }
  static OperatorKind laplacian() { return {OperatorTag::LaplacianT}; }
  static OperatorKind ph() { return {OperatorTag::PH}; }
  static OperatorKind n0(const LGParams& p, SignPolicy policy = SignPolicy::symmetrized) {
    return {OperatorTag::N0, 0.0, p.k, p.w0, policy};
  }
  static OperatorKind nz(const LGParams& p, double z, SignPolicy policy = SignPolicy::symmetrized) {
    return {OperatorTag::Nz, z, p.k, p.w0, policy};
  }
  static OperatorKind curvature_term(const LGParams& p, double z) {
    return {OperatorTag::RadiusOfCurvatureTerm, z, p.k, p.w0};
  }
};

struct AppliedField {
  FieldGrid input;
  FieldGrid output;
  OperatorKind op;
  Method method;
};

/// Finite-difference application to an arbitrary sampled field: 7-point
/// stencils in r, spectral differentiation in phi.
AppliedField apply(const OperatorKind& op, const FieldGrid& field);

/// Analytic application to an LG mode sampled on `grid` (at grid.z()).
AppliedField apply(const OperatorKind& op, const LGParams& params, const PolarGrid& grid);

/// Pointwise analytic application at a single (r, phi, z).
cplx apply_at(const OperatorKind& op, const LGParams& params, double r, double phi, double z);

AppliedField apply_lz(const FieldGrid& field);
AppliedField apply_lz(const LGParams& params, const PolarGrid& grid);
AppliedField apply_laplacian_t(const FieldGrid& field);
AppliedField apply_laplacian_t(const LGParams& params, const PolarGrid& grid);
AppliedField apply_ph(const FieldGrid& field);
AppliedField apply_ph(const LGParams& params, const PolarGrid& grid);
/// Requires a z = 0 field.
AppliedField apply_n0(const FieldGrid& field, const LGParams& params, SignPolicy policy = SignPolicy::symmetrized);
AppliedField apply_n0(const LGParams& params, const PolarGrid& grid, SignPolicy policy = SignPolicy::symmetrized);
/// Requires field.grid().z() == z.
AppliedField apply_nz(const FieldGrid& field, const LGParams& params, double z,
                      SignPolicy policy = SignPolicy::symmetrized);
AppliedField apply_nz(const LGParams& params, const PolarGrid& grid, double z,
                      SignPolicy policy = SignPolicy::symmetrized);

/// Eigenvalue an LG mode should show under `op` (Lz, N0 or Nz).
double expected_eigenvalue(const OperatorKind& op, const LGParams& params);

/// ||A f - a f|| / ||f|| for f = LG(params) sampled at the operator's plane.
double eigen_residual(const LGParams& params, const OperatorKind& op, const PolarGrid& grid,
                      Method method = Method::analytic);

struct DilationReport {
  double identity_defect{0.0};   // ||D_0 f - f|| / ||f||
  double unitarity{0.0};         // ||D_gamma f|| / ||f||
  double generator_defect{0.0};  // ||(D_d f - D_-d f)/(2d) - i P_H f|| / ||f||
};

/// Checks that D_gamma f(r) = e^gamma f(e^gamma r) is unitary under r dr and
/// that its generator is i * P_H (P_H applied by finite differences).
/// `grid` must carry radial quadrature and be wide enough for D_gamma f.
DilationReport dilation_check(const std::function<cplx(double)>& f, double gamma, double delta, const PolarGrid& grid);

/// ||(AB - BA) f - C f|| / ||f|| with the known commutator C, all operators
/// applied by finite differences. Supported pairs: any operator with itself,
/// Lz with any operator (C = 0), N0 or Nz with Lz (C = 0), and LaplacianT
/// with PH (C = -2i grad_t^2). Throws DomainError otherwise.
double commutator_residual(const OperatorKind& a, const OperatorKind& b, const FieldGrid& field);

}  // namespace lgr
