#include "lgr/differentiation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lgr/error.hpp"

namespace lgr {

std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes, int max_deriv) {
  const int n = static_cast<int>(nodes.size()) - 1;
  const int m = max_deriv;
  std::vector<std::vector<double>> c(static_cast<std::size_t>(m + 1), std::vector<double>(nodes.size(), 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[static_cast<std::size_t>(i)] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[static_cast<std::size_t>(i)] - nodes[static_cast<std::size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

RadialDifferentiator::RadialDifferentiator(std::vector<double> nodes, int width)
    : nodes_(std::move(nodes)), width_(width) {
  const std::size_t n = nodes_.size();
  if (width_ < 3) throw DomainError("RadialDifferentiator: stencil width must be >= 3");
  if (n < static_cast<std::size_t>(width_)) {
    throw DomainError("RadialDifferentiator: need at least " + std::to_string(width_) + " radial nodes");
  }
  start_.resize(n);
  w1_.resize(n * static_cast<std::size_t>(width_));
  w2_.resize(n * static_cast<std::size_t>(width_));
  const std::size_t half = static_cast<std::size_t>(width_ / 2);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t s = i >= half ? i - half : 0;
    s = std::min(s, n - static_cast<std::size_t>(width_));
    start_[i] = s;
    auto c = fornberg_weights(nodes_[i], std::span<const double>(nodes_.data() + s, static_cast<std::size_t>(width_)), 2);
    for (int j = 0; j < width_; ++j) {
      w1_[i * width_ + j] = c[1][static_cast<std::size_t>(j)];
      w2_[i * width_ + j] = c[2][static_cast<std::size_t>(j)];
    }
  }
}

void RadialDifferentiator::apply(std::span<const cplx> f, std::span<cplx> d1, std::span<cplx> d2, std::size_t stride,
                                 std::size_t offset) const {
  const std::size_t n = nodes_.size();
  for (std::size_t i = 0; i < n; ++i) {
    cplx a = 0.0, b = 0.0;
    const std::size_t s = start_[i];
    for (int j = 0; j < width_; ++j) {
      const cplx v = f[(s + static_cast<std::size_t>(j)) * stride + offset];
      a += w1_[i * width_ + j] * v;
      b += w2_[i * width_ + j] * v;
    }
    if (!d1.empty()) d1[i * stride + offset] = a;
    if (!d2.empty()) d2[i * stride + offset] = b;
  }
}

namespace {

// Direct DFT; azimuthal sample counts are small.
std::vector<cplx> dft(std::span<const cplx> x, int sign) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>((k * j) % n) / static_cast<double>(n);
      s += x[j] * cplx(std::cos(ang), std::sin(ang));
    }
    out[k] = s;
  }
  return out;
}

template <class Mult>
std::vector<cplx> spectral_apply(std::span<const cplx> samples, Mult&& mult) {
  const std::size_t n = samples.size();
  auto spec = dft(samples, -1);
  for (std::size_t k = 0; k < n; ++k) {
    // Signed wavenumber; the Nyquist bin (even n) is passed as n/2 with a flag.
    const long m = (k <= n / 2) ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
    const bool nyquist = (n % 2 == 0) && (k == n / 2);
    spec[k] *= mult(m, nyquist);
  }
  auto out = dft(spec, +1);
  for (auto& v : out) v /= static_cast<double>(n);
  return out;
}

}  // namespace

std::vector<cplx> spectral_derivative(std::span<const cplx> samples, int order) {
  if (order != 1 && order != 2) throw DomainError("spectral_derivative: order must be 1 or 2");
  return spectral_apply(samples, [order](long m, bool nyquist) -> cplx {
    if (order == 1) return nyquist ? cplx(0.0) : cplx(0.0, static_cast<double>(m));
    return cplx(-static_cast<double>(m) * static_cast<double>(m));
  });
}

std::vector<cplx> spectral_abs_derivative(std::span<const cplx> samples) {
  return spectral_apply(samples, [](long m, bool) -> cplx { return cplx(std::fabs(static_cast<double>(m))); });
}

}  // namespace lgr
