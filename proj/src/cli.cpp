#include "lgr/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "lgr/analysis.hpp"
#include "lgr/exactwave.hpp"
#include "lgr/io.hpp"
#include "lgr/momentum.hpp"
#include "lgr/parallel.hpp"
#include "lgr/paraxops.hpp"

namespace lgr::cli {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

json default_config() {
  return json{
      {"mode", {{"n", 0}, {"l", 0}, {"wavelength_nm", 633.0}, {"w0_m", kDefaultWaist}, {"z_m", 0.0}, {"sigma", 1}}},
      {"policy", "symmetrized"},
      {"seed", 7},
      {"render", {{"window_m", 6e-3}, {"pixels", 256}, {"batch", false}}},
      {"phexp",
       {{"axis", "z"},
        {"n_list", {0, 1, 2, 3, 4}},
        {"z_list_m", nullptr},
        {"z_points", 25},
        {"z_range_zr", 3.0},
        {"w0_list_m", nullptr},
        {"w0_min_m", 5e-4},
        {"w0_max_m", 5e-3},
        {"w0_points", 10},
        {"fixed_z_m", 1.0}}},
      {"overlap",
       {{"n_max", 40},
        {"dz_list_m", {0.0, 2.5, 5.0, 10.0, 15.0, 20.0}},
        {"w0_prime_m", nullptr},
        {"threshold", 0.99}}},
      {"verify",
       {{"n_max", 5},
        {"l_max", 4},
        {"synthesis_samples", 64},
        {"suites", {"eigen", "negative_index", "commutators", "momentum", "exact", "overlaps"}}}},
      {"output", {{"dir", "."}, {"prefix", "lg"}}},
  };
}

namespace {

void merge_into(json& base, const json& user, const std::string& where) {
  if (!user.is_object()) throw ConfigError("config" + where + " must be a JSON object");
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string key = where.empty() ? it.key() : where + "." + it.key();
    if (!base.contains(it.key())) throw ConfigError("unknown config key: " + key);
    json& slot = base[it.key()];
    if (slot.is_object()) {
      merge_into(slot, *it, key);
    } else {
      slot = *it;
    }
  }
}

}  // namespace

json merge_config(const json& user) {
  json cfg = default_config();
  if (!user.is_null()) merge_into(cfg, user, "");
  return cfg;
}

void apply_override(json& config, const std::string& dotted_key, const std::string& text) {
  json* node = &config;
  std::string path;
  std::stringstream ss(dotted_key);
  std::string part;
  while (std::getline(ss, part, '.')) {
    path += path.empty() ? part : "." + part;
    if (part.empty() || !node->is_object() || !node->contains(part)) throw ConfigError("unknown config key: " + path);
    node = &(*node)[part];
  }
  if (node->is_object()) throw ConfigError("cannot override a whole section: " + dotted_key);
  json value = json::parse(text, nullptr, false);
  *node = value.is_discarded() ? json(text) : value;
}

namespace {

// ---- config readers

template <class T>
T get(const json& cfg, const char* section, const char* key) {
  try {
    return cfg.at(section).at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for ") + section + "." + key);
  }
}

std::vector<double> get_list(const json& cfg, const char* section, const char* key) {
  const json& v = cfg.at(section).at(key);
  if (v.is_null()) return {};
  try {
    return v.get<std::vector<double>>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(section) + "." + key + " must be a list of numbers");
  }
}

double wavelength_m(const json& cfg) { return get<double>(cfg, "mode", "wavelength_nm") * 1e-9; }

LGParams mode_params(const json& cfg, int n, int l, double w0) {
  try {
    return LGParams::from_wavelength(n, l, wavelength_m(cfg), w0);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

LGParams mode_params(const json& cfg) {
  return mode_params(cfg, get<int>(cfg, "mode", "n"), get<int>(cfg, "mode", "l"), get<double>(cfg, "mode", "w0_m"));
}

SignPolicy policy_of(const json& cfg) {
  try {
    return parse_sign_policy(cfg.at("policy").get<std::string>());
  } catch (const std::exception&) {
    throw ConfigError("policy must be \"symmetrized\" or \"verbatim\"");
  }
}

struct Output {
  std::filesystem::path dir;
  std::string prefix;
  std::ostream& log;

  std::filesystem::path path(const std::string& suffix) const { return dir / (prefix + suffix); }
  void write(const std::string& suffix, const std::string& bytes) const {
    const auto p = path(suffix);
    write_file(p, bytes);
    log << "wrote " << p.string() << "\n";
  }
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// ---- render

std::vector<cplx> render_field(const LGParams& p, double z, double window, int pixels) {
  std::vector<cplx> f(static_cast<std::size_t>(pixels) * pixels);
  const double step = window / pixels;
  parallel_for(pixels, [&](std::size_t row) {
    const double y = 0.5 * window - (row + 0.5) * step;
    for (int col = 0; col < pixels; ++col) {
      const double x = (col + 0.5) * step - 0.5 * window;
      f[row * pixels + col] = lg_field(p, std::hypot(x, y), std::atan2(y, x), z);
    }
  });
  return f;
}

int cmd_render(const json& cfg, const Output& out) {
  const double window = get<double>(cfg, "render", "window_m");
  const int pixels = get<int>(cfg, "render", "pixels");
  const double z = get<double>(cfg, "mode", "z_m");
  const double w0 = get<double>(cfg, "mode", "w0_m");
  if (!(window > 0.0) || pixels < 2) throw ConfigError("render.window_m must be > 0 and render.pixels >= 2");

  std::vector<std::pair<int, int>> modes;
  const bool batch = get<bool>(cfg, "render", "batch");
  if (batch) {
    for (int n = 0; n <= 2; ++n)
      for (int l = 0; l <= 2; ++l) modes.emplace_back(n, l);
  } else {
    modes.emplace_back(get<int>(cfg, "mode", "n"), get<int>(cfg, "mode", "l"));
  }

  json summary = json::array();
  std::vector<GrayImage> inten, phase;
  for (auto [n, l] : modes) {
    const LGParams p = mode_params(cfg, n, l, w0);
    const auto f = render_field(p, z, window, pixels);
    inten.push_back(intensity_image(f, pixels, pixels));
    phase.push_back(phase_image(f, pixels, pixels));
    const std::string tag = "_n" + std::to_string(n) + "_l" + std::to_string(l);
    out.write(tag + "_intensity.pgm", format_pgm(inten.back()));
    out.write(tag + "_phase.pgm", format_pgm(phase.back()));
    summary.push_back({{"n", n},
                       {"l", l},
                       {"rings", intensity_ring_count(p, z)},
                       {"paraxial_warning", p.paraxial_warning()},
                       {"w_z_m", beam_geometry(p, z).w_z}});
  }
  if (batch) {
    // rows n = 0, 1, 2; columns l = 0, 1, 2
    out.write("_batch_intensity.pgm", format_pgm(mosaic(inten, 3, 3)));
    out.write("_batch_phase.pgm", format_pgm(mosaic(phase, 3, 3)));
  }
  out.write("_render.json", dump(json{{"window_m", window}, {"pixels", pixels}, {"z_m", z}, {"modes", summary}}));
  return ok;
}

// ---- phexp

json fit_json(const LinearFit& f) {
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared}};
}

int cmd_phexp(const json& cfg, const Output& out) {
  const std::string axis = get<std::string>(cfg, "phexp", "axis");
  const auto n_list = get<std::vector<int>>(cfg, "phexp", "n_list");
  const int l = get<int>(cfg, "mode", "l");
  const double w0 = get<double>(cfg, "mode", "w0_m");
  if (n_list.empty()) throw ConfigError("phexp.n_list is empty");

  CsvTable table;
  table.header = {axis == "z" ? "z_m" : "w0_m", "value", "n"};
  json fits = json::object();
  fits["axis"] = axis;
  fits["l"] = l;
  json per_n = json::array();

  for (int n : n_list) {
    const LGParams p = mode_params(cfg, n, l, w0);
    ExpectationSeries s;
    json entry{{"n", n}};
    if (axis == "z") {
      auto zs = get_list(cfg, "phexp", "z_list_m");
      if (zs.empty()) {
        const int pts = get<int>(cfg, "phexp", "z_points");
        const double range = get<double>(cfg, "phexp", "z_range_zr") * p.rayleigh_range();
        if (pts < 2) throw ConfigError("phexp.z_points must be >= 2");
        for (int i = 0; i < pts; ++i) zs.push_back(-range + 2.0 * range * i / (pts - 1));
      }
      s = ph_vs_z(p, zs);
      entry["fit"] = fit_json(*s.z_fit);
      const auto curv = curvature_term_vs_z(p, zs);
      entry["curvature_term_fit_z2"] = {{"coefficient", curv.z_fit->slope}, {"r_squared", curv.z_fit->r_squared}};
    } else if (axis == "w0") {
      auto ws = get_list(cfg, "phexp", "w0_list_m");
      if (ws.empty()) {
        const int pts = get<int>(cfg, "phexp", "w0_points");
        const double a = get<double>(cfg, "phexp", "w0_min_m"), b = get<double>(cfg, "phexp", "w0_max_m");
        if (pts < 2 || !(a > 0.0) || !(b > a)) throw ConfigError("phexp.w0 range is invalid");
        for (int i = 0; i < pts; ++i) ws.push_back(a * std::pow(b / a, static_cast<double>(i) / (pts - 1)));
      }
      s = ph_vs_w0(p, ws, get<double>(cfg, "phexp", "fixed_z_m"));
      const auto& d = *s.decay;
      entry["decay"] = {{"strictly_decreasing", d.strictly_decreasing},
                        {"all_finite", d.all_finite},
                        {"last_over_first", d.last_over_first},
                        {"semilog", fit_json(d.semilog)},
                        {"loglog", fit_json(d.loglog)}};
      entry["fixed_z_m"] = s.fixed_z;
    } else {
      throw ConfigError("phexp.axis must be \"z\" or \"w0\"");
    }
    double imag = 0.0;
    for (std::size_t i = 0; i < s.abscissa.size(); ++i) {
      table.add_row({s.abscissa[i], s.values[i], static_cast<long long>(n)});
      imag = std::max(imag, std::fabs(s.imag_residue[i]));
    }
    entry["max_imag_residue"] = imag;
    per_n.push_back(entry);
  }
  fits["series"] = per_n;
  out.write("_phexp.csv", format_csv(table));
  out.write("_phexp.json", dump(fits));
  return ok;
}

// ---- overlap

int cmd_overlap(const json& cfg, const Output& out) {
  const int n_max = get<int>(cfg, "overlap", "n_max");
  const auto dz_list = get_list(cfg, "overlap", "dz_list_m");
  const double threshold = get<double>(cfg, "overlap", "threshold");
  const LGParams p = mode_params(cfg);
  const double z = get<double>(cfg, "mode", "z_m");
  const json& wp = cfg.at("overlap").at("w0_prime_m");
  const double w0p = wp.is_null() ? p.w0 : wp.get<double>();
  if (n_max < 0 || dz_list.empty()) throw ConfigError("overlap needs n_max >= 0 and a nonempty dz_list_m");
  if (p.n > n_max) throw ConfigError("mode.n exceeds overlap.n_max");
  std::vector<int> n_set(n_max + 1);
  for (int i = 0; i <= n_max; ++i) n_set[i] = i;

  CsvTable entries, compl_table;
  entries.header = {"dz_m", "n", "n_prime", "re", "im", "abs2"};
  compl_table.header = {"dz_m", "n_prime", "completeness", "modes_for_threshold"};
  json summary = json::array();
  for (double dz : dz_list) {
    const auto m = overlap_matrix(p.l, n_set, z, z + dz, p.w0, w0p, p.k, threshold);
    for (int i = 0; i <= n_max; ++i)
      for (int j = 0; j <= n_max; ++j) {
        const cplx e = m.entries[i][j];
        entries.add_row({dz, static_cast<long long>(i), static_cast<long long>(j), e.real(), e.imag(), std::norm(e)});
      }
    for (int j = 0; j <= n_max; ++j)
      compl_table.add_row({dz, static_cast<long long>(j), m.completeness[j],
                           static_cast<long long>(m.modes_for_threshold[j])});
    summary.push_back({{"dz_m", dz},
                       {"column_n_prime", p.n},
                       {"completeness", m.completeness[p.n]},
                       {"modes_for_threshold", m.modes_for_threshold[p.n]}});
  }
  out.write("_overlap.csv", format_csv(entries));
  out.write("_completeness.csv", format_csv(compl_table));
  out.write("_overlap.json", dump(json{{"l", p.l},
                                       {"n_max", n_max},
                                       {"threshold", threshold},
                                       {"z_m", z},
                                       {"w0_m", p.w0},
                                       {"w0_prime_m", w0p},
                                       {"wavelength_m", wavelength_m(cfg)},
                                       {"columns", summary}}));
  return ok;
}

// ---- verify

struct Checks {
  json list = json::array();
  bool all = true;

  void below(const std::string& name, double measured, double tol, const std::string& note = {}) {
    add(name, measured, tol, "<", measured < tol, note);
  }
  void above(const std::string& name, double measured, double tol, const std::string& note = {}) {
    add(name, measured, tol, ">", measured > tol, note);
  }
  void add(const std::string& name, double measured, double tol, const char* cmp, bool pass, const std::string& note) {
    json c{{"name", name}, {"measured", measured}, {"tolerance", tol}, {"comparison", cmp}, {"passed", pass}};
    if (!note.empty()) c["note"] = note;
    list.push_back(c);
    all = all && pass;
  }
};

void verify_eigen(const json& cfg, Checks& checks) {
  const int n_max = get<int>(cfg, "verify", "n_max");
  const int l_max = get<int>(cfg, "verify", "l_max");
  const double w0 = get<double>(cfg, "mode", "w0_m");
  double an = 0, fd = 0, lz = 0;
  double nz_an[3] = {0, 0, 0}, nz_fd[3] = {0, 0, 0};
  const double fr[3] = {0.5, 1.0, 2.0};
  for (int n = 0; n <= n_max; ++n)
    for (int l = 0; l <= l_max; ++l) {
      const LGParams p = mode_params(cfg, n, l, w0);
      const auto g = converged_radial_grid(p, n, l, 0.0, 16);
      an = std::max(an, eigen_residual(p, OperatorKind::n0(p), g));
      fd = std::max(fd, eigen_residual(p, OperatorKind::n0(p), fd_radial_grid(p, n, l, 0.0, 16),
                                       Method::finite_difference));
      lz = std::max(lz, eigen_residual(p, OperatorKind::lz(), g));
      for (int i = 0; i < 3; ++i) {
        const double z = fr[i] * p.rayleigh_range();
        const auto op = OperatorKind::nz(p, z);
        nz_an[i] = std::max(nz_an[i], eigen_residual(p, op, converged_radial_grid(p, n, l, z, 16)));
        nz_fd[i] = std::max(nz_fd[i], eigen_residual(p, op, fd_radial_grid(p, n, l, z, 16), Method::finite_difference));
      }
    }
  checks.below("eigen.n0.analytic", an, 1e-8);
  checks.below("eigen.n0.finite_difference", fd, 1e-4);
  checks.below("eigen.lz.analytic", lz, 1e-8);
  const char* tags[3] = {"0.5zR", "1zR", "2zR"};
  for (int i = 0; i < 3; ++i) {
    checks.below(std::string("eigen.nz.") + tags[i] + ".analytic", nz_an[i], 1e-8);
    checks.below(std::string("eigen.nz.") + tags[i] + ".finite_difference", nz_fd[i], 1e-4);
  }
}

void verify_negative_index(const json& cfg, Checks& checks) {
  const double w0 = get<double>(cfg, "mode", "w0_m");
  const int n_max = get<int>(cfg, "verify", "n_max");
  for (int l : {-1, -2}) {
    for (auto policy : {SignPolicy::verbatim, SignPolicy::symmetrized}) {
      double worst = 0.0;
      for (int n = 0; n <= n_max; ++n) {
        const LGParams p = mode_params(cfg, n, l, w0);
        worst = std::max(worst, eigen_residual(p, OperatorKind::n0(p, policy), converged_radial_grid(p, n, -l, 0.0, 16)));
      }
      const std::string note = policy == SignPolicy::verbatim
                                   ? "eigenvalue n+|l|: the -Lz/2 term contributes +|l|/2 when l < 0"
                                   : "eigenvalue n: the -|Lz|/2 term cancels the |l| in the Gouy-like offset";
      checks.below("negative_index.l" + std::to_string(l) + "." + std::string(to_string(policy)), worst, 1e-8, note);
    }
  }
  // The configured mode under the configured policy.
  const LGParams p = mode_params(cfg);
  const SignPolicy policy = policy_of(cfg);
  const auto op = OperatorKind::n0(p, policy);
  const double ev = expected_eigenvalue(op, p);
  std::string note = "expected eigenvalue " + format_number(ev);
  if (policy == SignPolicy::verbatim && p.l < 0) note += " = n+|l| (verbatim sign on a negative l)";
  checks.below("configured_mode.n0", eigen_residual(p, op, converged_radial_grid(p, p.n, p.abs_l(), 0.0, 16)), 1e-8,
               note);
}

void verify_commutators(const json& cfg, Checks& checks) {
  const LGParams p = mode_params(cfg, 2, 2, get<double>(cfg, "mode", "w0_m"));
  const auto f = sample(p, fd_radial_grid(p, 2, 2, 0.0, 16));
  checks.below("commutator.n0_lz", commutator_residual(OperatorKind::n0(p), OperatorKind::lz(), f), 1e-6);
  // Smooth family: a unit Gaussian.
  const auto gg = PolarGrid::gauss_legendre(7.0, 600, 8, 0.0);
  FieldGrid e(gg);
  for (std::size_t i = 0; i < gg.n_r(); ++i)
    for (std::size_t j = 0; j < gg.n_phi(); ++j) e.at(i, j) = std::exp(-gg.r_nodes()[i] * gg.r_nodes()[i]);
  checks.below("commutator.laplacian_ph", commutator_residual(OperatorKind::laplacian(), OperatorKind::ph(), e), 1e-5,
               "[grad_t^2, P_H] = -2i grad_t^2");
  const auto dg = PolarGrid::gauss_legendre(40.0, 400, 1, 0.0);
  const auto rep = dilation_check([](double r) { return cplx(std::exp(-r * r)); }, 0.3, 1e-4, dg);
  checks.below("dilation.unitarity", std::fabs(rep.unitarity - 1.0), 1e-10);
  checks.below("dilation.generator", rep.generator_defect, 1e-6, "generator compared against i P_H");
}

void verify_momentum(const json& cfg, Checks& checks) {
  const double lambda = wavelength_m(cfg);
  const double w = get<double>(cfg, "mode", "w0_m");
  double exact = 0.0, parax = 0.0;
  for (int n = 0; n <= 5; ++n)
    for (int m = 0; m <= 4; ++m)
      for (int s : {1, -1}) {
        const auto p = ExactMomentumParams::from_wavelength(n, m, s, lambda, w);
        for (double x : {0.05, 0.3, 1.0, 2.5, 6.0, 12.0}) {
          exact = std::max(exact, nk_pointwise_residual(p, x / p.beta(), 0.37));
          const double kt = std::sqrt(x) / w;
          const cplx psi = psi_paraxial(p, kt, 0.37);
          parax = std::max(parax, std::abs(apply_nk_paraxial(p, kt, 0.37) - cplx(n) * psi) / std::abs(psi));
        }
      }
  checks.below("momentum.nk_exact", exact, 1e-10);
  checks.below("momentum.nk_paraxial", parax, 1e-10);

  const auto p = ExactMomentumParams::from_wavelength(2, 1, 1, lambda, w);
  const auto grid = paraxial_momentum_grid(p, 400, 16);
  FieldGrid psi = sample_paraxial(p, grid);
  psi *= cplx(1.0 / norm(psi));
  checks.below("hermiticity.lg", std::abs(hermiticity_defect(MomentumOperator::nk_paraxial, psi, p.w, p.sigma)), 1e-9);
  FieldGrid twisted = psi;
  for (std::size_t i = 0; i < grid.n_r(); ++i)
    for (std::size_t j = 0; j < grid.n_phi(); ++j) twisted.at(i, j) *= std::exp(cplx(0, grid.r_nodes()[i] * p.w));
  const double n2 = norm(twisted) * norm(twisted);
  checks.above("hermiticity.complex_radial_counterexample",
               std::abs(hermiticity_defect(MomentumOperator::nk_paraxial, twisted, p.w, p.sigma)) / n2, 1e-3,
               "radial factor exp(i k_t w) leaves the restricted class");
}

void verify_exact(const json& cfg, Checks& checks) {
  const double lambda = wavelength_m(cfg);
  const double w = get<double>(cfg, "mode", "w0_m");
  const int samples = get<int>(cfg, "verify", "synthesis_samples");
  unsigned seed = 0;
  try {
    seed = static_cast<unsigned>(cfg.at("seed").get<long long>());
  } catch (const json::exception&) {
    throw ConfigError("seed must be an integer");
  }
  double worst = 0.0;
  for (int n = 0; n <= 3; ++n)
    for (int m = 0; m <= 3; ++m)
      for (int s : {1, -1}) {
        const auto p = ExactMomentumParams::from_wavelength(n, m, s, lambda, w);
        std::vector<cplx> syn, closed;
        for (const auto& x : bridge_sample_points(p, samples, seed)) {
          syn.push_back(synthesize_lg(p, x));
          closed.push_back(chi_closed_form(p, x));
        }
        worst = std::max(worst, fit_global_scale(syn, closed).residual);
      }
  checks.below("synthesis.closed_form", worst, 1e-6, "relative L2 residual after one global complex scale");

  const double k = 2 * kPi / lambda;
  double curl = 0.0, div = 0.0;
  int warnings = 0;
  for (int m : {0, 1, 3, -2})
    for (int s : {1, -1})
      for (double frac : {0.02, 0.3}) {
        const BesselModeParams bp(m, s, frac * k, std::sqrt(1 - frac * frac) * k);
        const auto x = SpacetimePoint::from_lab(2.5 / bp.k_t, 0.4, 0.0, 0.0);
        const auto rep = maxwell_residual([&](const SpacetimePoint& y) { return rs_bessel_field(bp, y); }, x, bp.k());
        curl = std::max({curl, rep.curl_defect, rep.curl_defect_half});
        div = std::max({div, rep.div_defect, rep.div_defect_half});
        warnings += rep.step_warning ? 1 : 0;
      }
  checks.below("maxwell.curl", curl, 1e-6);
  checks.below("maxwell.div", div, 1e-6);
  checks.below("maxwell.step_warnings", warnings, 0.5);
}

void verify_overlaps(const json& cfg, Checks& checks) {
  const LGParams p = mode_params(cfg, 0, 1, get<double>(cfg, "mode", "w0_m"));
  const std::vector<int> n_set{0, 1, 2, 3, 4, 5};
  const auto m = overlap_matrix(p.l, n_set, 0.3, 0.3, p.w0, p.w0, p.k);
  double dev = 0.0;
  for (std::size_t i = 0; i < n_set.size(); ++i)
    for (std::size_t j = 0; j < n_set.size(); ++j) dev = std::max(dev, std::abs(m.entries[i][j] - cplx(i == j ? 1 : 0)));
  checks.below("overlap.orthonormality", dev, 1e-8);

  const auto g = converged_radial_grid(p, 5, 1, 0.3, 16);
  const std::vector<cplx> c{0.5, cplx(0, 0.3), -0.2, cplx(0.1, 0.1), 0.05, 0.0};
  FieldGrid f(g);
  for (std::size_t i = 0; i < c.size(); ++i) f += c[i] * sample(mode_params(cfg, n_set[i], p.l, p.w0), g);
  const auto d = decompose(f, Basis{p.l, n_set, 0.3, p.w0, p.k});
  checks.below("overlap.parseval", std::fabs(d.captured - d.field_norm2) / d.field_norm2, 1e-7);
}

}  // namespace

json verify_report(const json& config) {
  using Suite = void (*)(const json&, Checks&);
  const std::vector<std::pair<std::string, Suite>> suites{
      {"eigen", verify_eigen},         {"negative_index", verify_negative_index},
      {"commutators", verify_commutators}, {"momentum", verify_momentum},
      {"exact", verify_exact},         {"overlaps", verify_overlaps}};
  const auto wanted = get<std::vector<std::string>>(config, "verify", "suites");
  for (const auto& w : wanted)
    if (std::none_of(suites.begin(), suites.end(), [&](const auto& s) { return s.first == w; }))
      throw ConfigError("unknown verify suite: " + w);
  Checks checks;
  for (const auto& [name, fn] : suites)
    if (std::find(wanted.begin(), wanted.end(), name) != wanted.end()) fn(config, checks);
  return json{{"checks", checks.list}, {"passed", checks.all}, {"policy", config.at("policy")}};
}

namespace {

int cmd_verify(const json& cfg, const Output& out) {
  const json report = verify_report(cfg);
  for (const auto& c : report.at("checks")) {
    out.log << (c.at("passed").get<bool>() ? "PASS " : "FAIL ") << c.at("name").get<std::string>() << " "
            << c.at("measured").get<double>() << " " << c.at("comparison").get<std::string>() << " "
            << c.at("tolerance").get<double>() << "\n";
  }
  out.write("_verify.json", dump(report));
  return report.at("passed").get<bool>() ? ok : verify_failed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  // Dotted keys and top-level scalars are config overrides; split them off before CLI11 sees them
  // so values such as "-2" are not mistaken for flags.
  std::vector<std::pair<std::string, std::string>> overrides;
  std::vector<std::string> rest;
  const json top = default_config();
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    const std::string key = a.rfind("--", 0) == 0 ? a.substr(2, a.find('=') - 2) : "";
    const bool is_override =
        !key.empty() && (key.find('.') != std::string::npos || (top.contains(key) && !top[key].is_object()));
    if (is_override) {
      const auto eq = a.find('=');
      if (eq != std::string::npos) {
        overrides.emplace_back(a.substr(2, eq - 2), a.substr(eq + 1));
      } else if (i + 1 < args.size()) {
        overrides.emplace_back(a.substr(2), args[++i]);
      } else {
        err << "error: " << a << " needs a value\n";
        return usage_error;
      }
    } else {
      rest.push_back(a);
    }
  }

  CLI::App app{"Laguerre-Gauss radial-index toolkit"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  std::vector<CLI::App*> subs;
  for (const char* name : {"render", "phexp", "overlap", "verify"}) {
    auto* s = app.add_subcommand(name);
    s->add_option("--config", config_path, "JSON config file, - for stdin");
    s->add_option("--out", out_dir, "output directory");
    subs.push_back(s);
  }
  subs[0]->description("intensity and phase PGM maps");
  subs[1]->description("hyperbolic-momentum expectation series");
  subs[2]->description("overlap matrices under a z shift");
  subs[3]->description("run the verification suites");

  std::vector<std::string> rev(rest.rbegin(), rest.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return usage_error;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  json cfg;
  try {
    json user;
    if (!config_path.empty()) {
      std::string text;
      if (config_path == "-") {
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
      } else {
        text = read_file(config_path);
      }
      user = json::parse(text);
    }
    cfg = merge_config(user);
    for (const auto& [k, v] : overrides) apply_override(cfg, k, v);
    if (!out_dir.empty()) cfg["output"]["dir"] = out_dir;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return io_error;
  } catch (const json::parse_error& e) {
    err << "error: config is not valid JSON: " << e.what() << "\n";
    return usage_error;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  }

  try {
    const Output o{get<std::string>(cfg, "output", "dir"), get<std::string>(cfg, "output", "prefix"), out};
    if (command == "render") return cmd_render(cfg, o);
    if (command == "phexp") return cmd_phexp(cfg, o);
    if (command == "overlap") return cmd_overlap(cfg, o);
    return cmd_verify(cfg, o);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  } catch (const json::exception& e) {
    err << "error: bad config value: " << e.what() << "\n";
    return usage_error;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return io_error;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return usage_error;
  }
}

}  // namespace lgr::cli
