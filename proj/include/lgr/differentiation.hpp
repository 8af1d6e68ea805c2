#pragma once

// Finite-difference stencils on nonuniform nodes and spectral derivatives on
// periodic samples.

#include <cstddef>
#include <span>
#include <vector>

#include "lgr/specfun.hpp"

namespace lgr {

/// Fornberg weights: c[d][j] is the weight of f(nodes[j]) in the d-th
/// derivative at x0, for d = 0..max_deriv.
std::vector<std::vector<double>> fornberg_weights(double x0, std::span<const double> nodes, int max_deriv);

/// First and second derivative operators on a fixed, strictly increasing node
/// set, built from local `width`-point stencils (7 points = 6th order in the
/// interior). Stencils shift inward near the ends.
class RadialDifferentiator {
 public:
  explicit RadialDifferentiator(std::vector<double> nodes, int width = 7);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }

  /// Derivatives of samples taken with the given stride (for strided rows of
  /// a row-major (r, phi) array pass stride = n_phi and offset = column).
  void apply(std::span<const cplx> f, std::span<cplx> d1, std::span<cplx> d2, std::size_t stride = 1,
             std::size_t offset = 0) const;

 private:
  std::vector<double> nodes_;
  int width_;
  std::vector<std::size_t> start_;
  std::vector<double> w1_;
  std::vector<double> w2_;
};

/// Spectral derivative of order `order` (1 or 2) of uniformly spaced samples
/// over one period [0, 2 pi). The Nyquist mode is dropped for odd orders.
std::vector<cplx> spectral_derivative(std::span<const cplx> samples, int order);

/// Multiplies Fourier mode m by |m| (the spectral absolute value of -i d/dphi).
std::vector<cplx> spectral_abs_derivative(std::span<const cplx> samples);

}  // namespace lgr
