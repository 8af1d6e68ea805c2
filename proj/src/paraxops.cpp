#include "lgr/paraxops.hpp"

#include <cmath>
#include <string>

#include "lgr/differentiation.hpp"
#include "lgr/error.hpp"
#include "lgr/parallel.hpp"

namespace lgr {

namespace {

constexpr cplx kI{0.0, 1.0};

// Local derivative bundle at one node.
struct Jet {
  cplx f, fr, frr, fphi, fphiphi, abs_lz;
};

cplx lz_term(const Jet& d, SignPolicy policy) {
  return policy == SignPolicy::verbatim ? -kI * d.fphi : d.abs_lz;
}

cplx combine(const OperatorKind& op, const Jet& d, double r) {
  switch (op.tag) {
    case OperatorTag::Lz:
      return -kI * d.fphi;
    case OperatorTag::LaplacianT:
      return d.frr + d.fr / r + d.fphiphi / (r * r);
    case OperatorTag::PH:
      return -kI * (r * d.fr + d.f);
    case OperatorTag::RadiusOfCurvatureTerm:
      return kI * (op.z / (op.k * op.w0 * op.w0)) * (r * d.fr + d.f);
    case OperatorTag::N0:
    case OperatorTag::Nz: {
      const double z = op.tag == OperatorTag::N0 ? 0.0 : op.z;
      const double zr = 0.5 * op.k * op.w0 * op.w0;
      const double wz2 = op.w0 * op.w0 * (1.0 + (z / zr) * (z / zr));
      const cplx lap = d.frr + d.fr / r + d.fphiphi / (r * r);
      const cplx curvature = kI * (z / (op.k * op.w0 * op.w0)) * (r * d.fr + d.f);
      return -(wz2 / 8.0) * lap + curvature - 0.5 * lz_term(d, op.policy) +
             0.5 * (r * r / (op.w0 * op.w0) - 1.0) * d.f;
    }
  }
  return 0.0;
}

bool needs_context(OperatorTag tag) {
  return tag == OperatorTag::N0 || tag == OperatorTag::Nz || tag == OperatorTag::RadiusOfCurvatureTerm;
}

void check_context(const OperatorKind& op) {
  if (needs_context(op.tag) && !(op.k > 0.0 && op.w0 > 0.0)) {
    throw DomainError(std::string("operator ") + std::string(to_string(op.tag)) + " needs k > 0 and w0 > 0");
  }
}

bool uses_phi(OperatorTag tag) {
  return tag == OperatorTag::Lz || tag == OperatorTag::N0 || tag == OperatorTag::Nz;
}

}  // namespace

std::string_view to_string(OperatorTag tag) {
  switch (tag) {
    case OperatorTag::Lz: return "Lz";
    case OperatorTag::LaplacianT: return "LaplacianT";
    case OperatorTag::PH: return "PH";
    case OperatorTag::N0: return "N0";
    case OperatorTag::Nz: return "Nz";
    case OperatorTag::RadiusOfCurvatureTerm: return "RadiusOfCurvatureTerm";
  }
  return "?";
}

std::string_view to_string(SignPolicy policy) {
  return policy == SignPolicy::verbatim ? "verbatim" : "symmetrized";
}

OperatorTag parse_operator_tag(std::string_view name) {
  for (auto t : {OperatorTag::Lz, OperatorTag::LaplacianT, OperatorTag::PH, OperatorTag::N0, OperatorTag::Nz,
                 OperatorTag::RadiusOfCurvatureTerm}) {
    if (name == to_string(t)) return t;
  }
  throw DomainError("unknown operator '" + std::string(name) + "'");
}

SignPolicy parse_sign_policy(std::string_view name) {
  if (name == "symmetrized") return SignPolicy::symmetrized;
  if (name == "verbatim") return SignPolicy::verbatim;
  throw DomainError("unknown sign policy '" + std::string(name) + "' (expected symmetrized or verbatim)");
}

AppliedField apply(const OperatorKind& op, const FieldGrid& field) {
  check_context(op);
  const auto& grid = field.grid();
  const std::size_t nr = grid.n_r();
  const std::size_t np = grid.n_phi();
  if (uses_phi(op.tag) && np < 8) {
    throw DomainError("finite-difference " + std::string(to_string(op.tag)) + " needs at least 8 azimuthal nodes, got " +
                      std::to_string(np));
  }
  if (op.tag == OperatorTag::N0 && grid.z() != 0.0) {
    throw DomainError("N0 applies to z = 0 fields; field is at z = " + std::to_string(grid.z()));
  }
  if (op.tag == OperatorTag::Nz && grid.z() != op.z) {
    throw DomainError("Nz built for z = " + std::to_string(op.z) + " applied to a field at z = " +
                      std::to_string(grid.z()));
  }

  const auto& vals = field.values();
  std::vector<cplx> fr(vals.size()), frr(vals.size()), fp(vals.size()), fpp(vals.size()), fabs(vals.size());
  RadialDifferentiator diff(grid.r_nodes());
  for (std::size_t j = 0; j < np; ++j) diff.apply(vals, fr, frr, np, j);
  parallel_for(nr, [&](std::size_t i) {
    std::span<const cplx> ring(vals.data() + i * np, np);
    auto d1 = spectral_derivative(ring, 1);
    auto d2 = spectral_derivative(ring, 2);
    auto da = spectral_abs_derivative(ring);
    for (std::size_t j = 0; j < np; ++j) {
      fp[i * np + j] = d1[j];
      fpp[i * np + j] = d2[j];
      fabs[i * np + j] = da[j];
    }
  });

  FieldGrid out(grid);
  for (std::size_t i = 0; i < nr; ++i) {
    const double r = grid.r_nodes()[i];
    for (std::size_t j = 0; j < np; ++j) {
      const std::size_t idx = i * np + j;
      Jet d{vals[idx], fr[idx], frr[idx], fp[idx], fpp[idx], fabs[idx]};
      out.at(i, j) = combine(op, d, r);
    }
  }
  return {field, std::move(out), op, Method::finite_difference};
}

cplx apply_at(const OperatorKind& op, const LGParams& params, double r, double phi, double z) {
  check_context(op);
  const auto p = lg_partials(params, r, phi, z);
  Jet d{p.value, p.d_r, p.d_rr, p.d_phi, p.d_phiphi, static_cast<double>(params.abs_l()) * p.value};
  return combine(op, d, r);
}

AppliedField apply(const OperatorKind& op, const LGParams& params, const PolarGrid& grid) {
  check_context(op);
  if (op.tag == OperatorTag::N0 && grid.z() != 0.0) {
    throw DomainError("N0 applies to z = 0 fields; grid is at z = " + std::to_string(grid.z()));
  }
  if (op.tag == OperatorTag::Nz && grid.z() != op.z) {
    throw DomainError("Nz built for z = " + std::to_string(op.z) + " applied on a grid at z = " +
                      std::to_string(grid.z()));
  }
  FieldGrid in = sample(params, grid);
  if (op.tag == OperatorTag::Lz) return {in, cplx(params.l) * in, op, Method::analytic};
  FieldGrid out(grid);
  parallel_for(grid.n_r(), [&](std::size_t i) {
    for (std::size_t j = 0; j < grid.n_phi(); ++j) {
      out.at(i, j) = apply_at(op, params, grid.r_nodes()[i], grid.phi_nodes()[j], grid.z());
    }
  });
  return {std::move(in), std::move(out), op, Method::analytic};
}

AppliedField apply_lz(const FieldGrid& field) { return apply(OperatorKind::lz(), field); }
AppliedField apply_lz(const LGParams& params, const PolarGrid& grid) { return apply(OperatorKind::lz(), params, grid); }
AppliedField apply_laplacian_t(const FieldGrid& field) { return apply(OperatorKind::laplacian(), field); }
AppliedField apply_laplacian_t(const LGParams& params, const PolarGrid& grid) {
  return apply(OperatorKind::laplacian(), params, grid);
}
AppliedField apply_ph(const FieldGrid& field) { return apply(OperatorKind::ph(), field); }
AppliedField apply_ph(const LGParams& params, const PolarGrid& grid) { return apply(OperatorKind::ph(), params, grid); }

AppliedField apply_n0(const FieldGrid& field, const LGParams& params, SignPolicy policy) {
  return apply(OperatorKind::n0(params, policy), field);
}
AppliedField apply_n0(const LGParams& params, const PolarGrid& grid, SignPolicy policy) {
  return apply(OperatorKind::n0(params, policy), params, grid);
}
AppliedField apply_nz(const FieldGrid& field, const LGParams& params, double z, SignPolicy policy) {
  return apply(OperatorKind::nz(params, z, policy), field);
}
AppliedField apply_nz(const LGParams& params, const PolarGrid& grid, double z, SignPolicy policy) {
  return apply(OperatorKind::nz(params, z, policy), params, grid);
}

double expected_eigenvalue(const OperatorKind& op, const LGParams& params) {
  switch (op.tag) {
    case OperatorTag::Lz:
      return params.l;
    case OperatorTag::N0:
    case OperatorTag::Nz:
      if (op.policy == SignPolicy::verbatim) return params.n + 0.5 * (params.abs_l() - params.l);
      return params.n;
    default:
      throw DomainError("eigen_residual: LG modes are not eigenfunctions of " + std::string(to_string(op.tag)));
  }
}

double eigen_residual(const LGParams& params, const OperatorKind& op, const PolarGrid& grid, Method method) {
  const double eigenvalue = expected_eigenvalue(op, params);
  const double z = op.tag == OperatorTag::Nz ? op.z : (op.tag == OperatorTag::N0 ? 0.0 : grid.z());
  const PolarGrid g = grid.with_z(z);
  AppliedField applied = method == Method::analytic ? apply(op, params, g) : apply(op, sample(params, g));
  FieldGrid diff = applied.output - cplx(eigenvalue) * applied.input;
  return norm(diff) / norm(applied.input);
}

DilationReport dilation_check(const std::function<cplx(double)>& f, double gamma, double delta, const PolarGrid& grid) {
  if (!grid.has_quadrature()) throw DomainError("dilation_check: grid needs radial quadrature");
  const PolarGrid& g1 = grid;
  const auto& rn = g1.r_nodes();
  const auto& w = g1.r_weights();
  auto l2 = [&](const std::vector<cplx>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += w[i] * std::norm(v[i]);
    return std::sqrt(s);
  };
  auto dilate = [&](double g) {
    std::vector<cplx> v(rn.size());
    const double e = std::exp(g);
    for (std::size_t i = 0; i < rn.size(); ++i) v[i] = e * f(e * rn[i]);
    return v;
  };
  std::vector<cplx> base(rn.size());
  for (std::size_t i = 0; i < rn.size(); ++i) base[i] = f(rn[i]);
  const double base_norm = l2(base);

  DilationReport rep;
  {
    auto d0 = dilate(0.0);
    for (std::size_t i = 0; i < d0.size(); ++i) d0[i] -= base[i];
    rep.identity_defect = l2(d0) / base_norm;
  }
  rep.unitarity = l2(dilate(gamma)) / base_norm;

  // Radial field on a single azimuthal node; P_H only differentiates in r.
  FieldGrid field(PolarGrid(rn, 1, g1.z()), base);
  const auto ph = apply_ph(field).output.values();
  auto plus = dilate(delta);
  auto minus = dilate(-delta);
  std::vector<cplx> defect(rn.size());
  for (std::size_t i = 0; i < rn.size(); ++i) defect[i] = (plus[i] - minus[i]) / (2.0 * delta) - kI * ph[i];
  rep.generator_defect = l2(defect) / base_norm;
  return rep;
}

namespace {

FieldGrid op_apply(const OperatorKind& op, const FieldGrid& f) { return apply(op, f).output; }

}  // namespace

double commutator_residual(const OperatorKind& a, const OperatorKind& b, const FieldGrid& field) {
  auto is = [](const OperatorKind& op, OperatorTag t) { return op.tag == t; };
  // Expected commutator [a, b] applied to field.
  std::function<FieldGrid()> expected;
  const bool a_lz = is(a, OperatorTag::Lz);
  const bool b_lz = is(b, OperatorTag::Lz);
  const bool same = a.tag == b.tag && a.z == b.z && a.k == b.k && a.w0 == b.w0 && a.policy == b.policy;
  if (same || a_lz || b_lz) {
    expected = [&] { return FieldGrid(field.grid()); };
  } else if (is(a, OperatorTag::LaplacianT) && is(b, OperatorTag::PH)) {
    expected = [&] { return cplx(0.0, -2.0) * op_apply(OperatorKind::laplacian(), field); };
  } else if (is(a, OperatorTag::PH) && is(b, OperatorTag::LaplacianT)) {
    expected = [&] { return cplx(0.0, 2.0) * op_apply(OperatorKind::laplacian(), field); };
  } else {
    throw DomainError("commutator_residual: no reference commutator for (" + std::string(to_string(a.tag)) + ", " +
                      std::string(to_string(b.tag)) + ")");
  }
  FieldGrid ab = op_apply(a, op_apply(b, field));
  FieldGrid ba = op_apply(b, op_apply(a, field));
  FieldGrid diff = ab - ba - expected();
  return norm(diff) / norm(field);
}

}  // namespace lgr
