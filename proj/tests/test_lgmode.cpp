#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "lgr/error.hpp"
#include "lgr/lgmode.hpp"

using lgr::cplx;
using lgr::LGParams;
constexpr double kPi = std::numbers::pi;

namespace {

const double kK = 2.0 * kPi / 633e-9;
const double kW0 = 1e-3;

// Symbol-by-symbol evaluation of the LG mode: R_z used directly (z != 0),
// Laguerre from its explicit sum, factorials by products.
cplx lg_reference(int n, int l, double k, double w0, double r, double phi, double z) {
  const int a = std::abs(l);
  const double wz = w0 * std::sqrt(1.0 + 4.0 * z * z / (k * k * std::pow(w0, 4)));
  const double Rz = z + k * k * std::pow(w0, 4) / (4.0 * z);
  const double gouy = std::atan(2.0 * z / (k * w0 * w0));
  auto fact = [](int m) { double f = 1; for (int i = 2; i <= m; ++i) f *= i; return f; };
  const double x = 2.0 * r * r / (wz * wz);
  double lag = 0.0;
  for (int j = 0; j <= n; ++j) lag += std::pow(-1.0, j) * fact(n + a) / (fact(n - j) * fact(a + j) * fact(j)) * std::pow(x, j);
  const double amp = std::sqrt(2.0 * fact(n) / (kPi * fact(n + a))) / wz * std::pow(std::sqrt(2.0) * r / wz, a) * lag;
  return amp * std::exp(cplx(-r * r / (wz * wz), l * phi + k * r * r / (2.0 * Rz) - (2 * n + a + 1) * gouy));
}

// Sixth-order central differences.
template <class F>
cplx d1_6(F&& f, double x, double h) {
  return (-f(x - 3 * h) + 9.0 * f(x - 2 * h) - 45.0 * f(x - h) + 45.0 * f(x + h) - 9.0 * f(x + 2 * h) + f(x + 3 * h)) /
         (60.0 * h);
}
template <class F>
cplx d2_6(F&& f, double x, double h) {
  return (2.0 * f(x - 3 * h) - 27.0 * f(x - 2 * h) + 270.0 * f(x - h) - 490.0 * f(x) + 270.0 * f(x + h) -
          27.0 * f(x + 2 * h) + 2.0 * f(x + 3 * h)) /
         (180.0 * h * h);
}

}  // namespace

TEST_CASE("LGParams validation and paraxiality flag") {
  CHECK_THROWS_AS(LGParams(-1, 0, kK, kW0), lgr::DomainError);
  CHECK_THROWS_AS(LGParams(0, 0, 0.0, kW0), lgr::DomainError);
  CHECK_THROWS_AS(LGParams(0, 0, kK, -1.0), lgr::DomainError);
  CHECK_FALSE(LGParams(0, 0, kK, kW0).paraxial_warning());
  CHECK(LGParams(0, 0, 1.0, 5.0).paraxial_warning());
  auto p = LGParams::from_wavelength(1, 2, 633e-9, kW0);
  CHECK(p.k == doctest::Approx(kK));
}

TEST_CASE("beam_geometry") {
  LGParams p(0, 0, kK, kW0);
  auto g0 = lgr::beam_geometry(p, 0.0);
  CHECK(g0.w_z == kW0);
  CHECK(g0.inv_R_z == 0.0);
  CHECK(g0.phi_g == 0.0);

  const double zr = p.rayleigh_range();
  auto g1 = lgr::beam_geometry(p, zr);
  CHECK(g1.w_z == doctest::Approx(kW0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(g1.phi_g == doctest::Approx(kPi / 4).epsilon(1e-14));
  CHECK(g1.inv_R_z == doctest::Approx(1.0 / (2.0 * zr)).epsilon(1e-14));

  for (double z : {0.3, 4.0, 25.0}) {
    auto a = lgr::beam_geometry(p, z);
    auto b = lgr::beam_geometry(p, -z);
    CHECK(a.w_z == b.w_z);
    CHECK(a.inv_R_z == -b.inv_R_z);
    CHECK(a.phi_g == -b.phi_g);
    CHECK(a.w_z > kW0);
    CHECK(std::fabs(a.phi_g) < kPi / 2);
    CHECK(a.inv_R_z == doctest::Approx(1.0 / (z + zr * zr / z)).epsilon(1e-13));
  }
}

TEST_CASE("lg_field: point values") {
  CHECK(lgr::lg_field(LGParams(0, 0, kK, kW0), 0.0, 0.4, 0.0) == cplx(std::sqrt(2.0 / kPi) / kW0));
  for (int l : {1, -2, 3}) CHECK(lgr::lg_field(LGParams(2, l, kK, kW0), 0.0, 1.0, 0.7) == cplx(0.0));
  // L_1^0 vanishes where 2 r^2 / w0^2 = 1.
  CHECK(std::abs(lgr::lg_field(LGParams(1, 0, kK, kW0), kW0 / std::sqrt(2.0), 0.0, 0.0)) < 1e-10);

  const cplx v = lgr::lg_field(LGParams(2, 1, kK, kW0), 0.3e-3, 1.0, 2.0);
  const cplx ref = lg_reference(2, 1, kK, kW0, 0.3e-3, 1.0, 2.0);
  CHECK(std::abs(v - ref) < 1e-12 * std::abs(ref));
  // Frozen from a 30-digit evaluation.
  CHECK(v.real() == doctest::Approx(118.49306749313853765).epsilon(1e-12));
  CHECK(v.imag() == doctest::Approx(-378.2807826077803346).epsilon(1e-12));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ur(0.0, 4e-3), up(0.0, 2 * kPi), uz(-12.0, 12.0);
  for (int i = 0; i < 200; ++i) {
    const int n = i % 5, l = (i % 7) - 3;
    const double r = ur(rng), phi = up(rng), z = uz(rng);
    const cplx a = lgr::lg_field(LGParams(n, l, kK, kW0), r, phi, z);
    const cplx b = lg_reference(n, l, kK, kW0, r, phi, z);
    CHECK(std::abs(a - b) <= 1e-11 * (std::abs(b) + 1e-3));
  }
}

TEST_CASE("sample and norm") {
  LGParams p(0, 0, kK, kW0);
  lgr::PolarGrid one({0.5e-3}, 1, 1.5);
  auto f1 = lgr::sample(p, one);
  CHECK(f1.values()[0] == lgr::lg_field(p, 0.5e-3, 0.0, 1.5));

  auto grid = lgr::converged_radial_grid(p, 0, 0, 0.0, 8);
  auto f = lgr::sample(p, grid);
  CHECK(std::fabs(lgr::norm(f) - 1.0) < 1e-8);

  lgr::FieldGrid zero(grid);
  CHECK(lgr::norm(zero) == 0.0);
  CHECK(lgr::norm(cplx(2.0) * f) == doctest::Approx(2.0 * lgr::norm(f)).epsilon(1e-14));

  for (auto [n, l, z] : {std::tuple{3, 2, 0.0}, {1, -4, 7.5}, {5, 0, -20.0}, {2, 1, 40.0}}) {
    LGParams q(n, l, kK, kW0);
    auto g = lgr::converged_radial_grid(q, n, std::abs(l), z, 16);
    CHECK(std::fabs(lgr::norm(lgr::sample(q, g)) - 1.0) < 1e-8);
  }

  lgr::PolarGrid bare({1e-4, 2e-4, 3e-4}, 8, 0.0);
  CHECK_THROWS_AS(lgr::norm(lgr::sample(p, bare)), lgr::DomainError);
  CHECK_THROWS_AS(lgr::PolarGrid({2e-4, 1e-4}, 8, 0.0), lgr::DomainError);
  CHECK_THROWS_AS(lgr::PolarGrid({0.0, 1e-4}, 8, 0.0), lgr::DomainError);
}

TEST_CASE("sample: LG(0,2) phase winds twice around a ring") {
  LGParams p(0, 2, kK, kW0);
  lgr::PolarGrid ring({kW0}, 720, 0.0);
  auto f = lgr::sample(p, ring);
  double total = 0.0;
  for (std::size_t j = 0; j < 720; ++j) {
    const cplx a = f.at(0, j), b = f.at(0, (j + 1) % 720);
    total += std::arg(b / a);
  }
  CHECK(total / (2 * kPi) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("lg_partials") {
  LGParams p(2, 3, kK, kW0);
  CHECK_THROWS_AS(lgr::lg_partials(p, 0.0, 0.0, 0.0), lgr::DomainError);
  auto d = lgr::lg_partials(p, 0.7e-3, 0.4, 1.0);
  CHECK(std::abs(d.d_phi - cplx(0, 3) * d.value) < 1e-14 * std::abs(d.value));
  CHECK(std::abs(d.d_phiphi + 9.0 * d.value) < 1e-14 * std::abs(d.value));

  // LG(1,0) at focus: outer ring maximum where 2r^2/w0^2 = 3.
  LGParams q(1, 0, kK, kW0);
  const double r_peak = kW0 * std::sqrt(1.5);
  auto dq = lgr::lg_partials(q, r_peak, 0.0, 0.0);
  CHECK(std::abs(dq.d_r) < 1e-12 * std::abs(dq.value) / kW0);

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ur(0.1e-3, 3e-3), up(0.0, 2 * kPi), uz(-10.0, 10.0);
  for (int i = 0; i < 100; ++i) {
    LGParams m(i % 5, (i % 9) - 4, kK, kW0);
    const double r = ur(rng), phi = up(rng), z = uz(rng);
    auto a = lgr::lg_partials(m, r, phi, z);
    const double wz = lgr::beam_geometry(m, z).w_z;
    const double h = 0.02 * std::min(r, wz) / 3.0;
    auto fr = [&](double x) { return lgr::lg_field(m, x, phi, z); };
    auto fp = [&](double x) { return lgr::lg_field(m, r, x, z); };
    const double scale = std::abs(a.value) + 1e-3 / kW0;
    CHECK(std::abs(a.d_r - d1_6(fr, r, h)) <= 1e-6 * (std::abs(a.d_r) + scale / wz));
    CHECK(std::abs(a.d_rr - d2_6(fr, r, h)) <= 1e-6 * (std::abs(a.d_rr) + scale / (wz * wz)));
    CHECK(std::abs(a.d_phi - d1_6(fp, phi, 0.01)) <= 1e-6 * (std::abs(a.d_phi) + scale));
    CHECK(std::abs(a.d_phiphi - d2_6(fp, phi, 0.01)) <= 1e-6 * (std::abs(a.d_phiphi) + scale));
  }
}

TEST_CASE("orthonormality within an azimuthal order") {
  for (double z : {0.0, 3.0, -9.0}) {
    for (int l : {0, 2, -1}) {
      LGParams base(0, l, kK, kW0);
      auto grid = lgr::converged_radial_grid(base, 6, std::abs(l), z, 1);
      std::vector<lgr::FieldGrid> modes;
      for (int n = 0; n <= 6; ++n) modes.push_back(lgr::sample(LGParams(n, l, kK, kW0), grid));
      for (int a = 0; a <= 6; ++a)
        for (int b = 0; b <= 6; ++b) {
          const cplx ip = lgr::inner_product(modes[a], modes[b]);
          CHECK(std::abs(ip - cplx(a == b ? 1.0 : 0.0)) < 1e-8);
        }
    }
  }
}

TEST_CASE("different azimuthal orders are orthogonal on a uniform azimuthal grid") {
  LGParams a(1, 2, kK, kW0), b(1, -1, kK, kW0);
  auto grid = lgr::converged_radial_grid(a, 1, 2, 0.5, 16);
  CHECK(std::abs(lgr::inner_product(lgr::sample(a, grid), lgr::sample(b, grid))) < 1e-12);
}

TEST_CASE("intensity ring count at focus") {
  for (int n = 0; n <= 4; ++n) {
    for (int l : {1, 2, -3}) CHECK(lgr::intensity_ring_count(LGParams(n, l, kK, kW0), 0.0) == n + 1);
    // l = 0: n rings around a central dot.
    CHECK(lgr::intensity_ring_count(LGParams(n, 0, kK, kW0), 0.0) == n + 1);
  }
}

TEST_CASE("Hankel propagation reproduces the closed-form mode") {
  for (auto [n, l] : {std::pair{0, 0}, {2, 1}, {1, -3}}) {
    LGParams p(n, l, kK, kW0);
    const double zr = p.rayleigh_range();
    auto src = lgr::sample(p, lgr::PolarGrid::gauss_legendre(9.0 * kW0, 220, 8, 0.0));
    for (double dz : {0.5 * zr, 1.5 * zr, 3.0 * zr}) {
      const double wz = lgr::beam_geometry(p, dz).w_z;
      auto target = lgr::PolarGrid::gauss_legendre(8.0 * wz, 220, 8, dz);
      auto prop = lgr::propagate_hankel(src, l, kK, dz, target, 14.0 / kW0, 360);
      auto exact = lgr::sample(p, target);
      CHECK(prop.grid().z() == doctest::Approx(dz));
      CHECK(lgr::norm(prop - exact) / lgr::norm(exact) < 1e-5);
    }
  }
}
