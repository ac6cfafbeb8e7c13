#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "inexact/lasso.hpp"
#include "inexact/linalg.hpp"

namespace inexact {

inline constexpr std::size_t kMaxBlurSide = 64;

/**
 * Separable 2-D Gaussian blur on side x side images stored row-major, with
 * reflexive (mirror) boundary conditions: pixel -1 reads pixel 0, -2 reads 1.
 * The kernel has (2 radius + 1) taps per axis and sums to one.
 */
class GaussianBlur final : public LinearOperator {
 public:
  GaussianBlur(std::size_t side, int radius, double sigma);

  std::size_t rows() const override { return side_ * side_; }
  std::size_t cols() const override { return side_ * side_; }
  void apply(std::span<const double> x, std::span<double> out) const override;
  void apply_adjoint(std::span<const double> y, std::span<double> out) const override;

  std::size_t side() const { return side_; }
  const std::vector<double>& kernel() const { return kernel_; }

 private:
  // 1-D pass along rows (horizontal) or columns; adjoint scatters instead of gathers.
  void pass(std::span<const double> in, std::span<double> out, bool horizontal, bool adjoint) const;

  std::size_t side_;
  int radius_;
  std::vector<double> kernel_;
};

/// Mirror index into [0, n) with period 2n.
std::size_t reflect_index(long i, std::size_t n);

struct BlurSetup {
  std::size_t side = 32;
  int radius = 4;
  double sigma = 4.0;
  double noise_sigma = 1e-3;
  double gamma = 1e-4;
  double lambda = 5.0;
  std::uint64_t seed = 7;
};

struct BlurInstance {
  LassoInstance lasso;
  Vector truth;
  Vector observed;  // b; also the initial point
};

/// Seeded piecewise-constant truth in [0,1]: a few rectangles and a disk on a flat background.
Vector piecewise_constant_image(std::size_t side, std::uint64_t seed);

/// b = blur(truth) + noise. Throws std::invalid_argument when side exceeds kMaxBlurSide.
BlurInstance blur_instance(const BlurSetup& setup);

/// Binary PGM (P5, maxval 255); values are clamped to [0,1] before scaling.
void write_pgm(std::ostream& out, const Vector& image, std::size_t side);
/// Reads a P5 image written by write_pgm, returning pixels scaled to [0,1].
std::vector<double> read_pgm(std::istream& in, std::size_t& width, std::size_t& height);

}  // namespace inexact
