#include "inexact/blur.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "inexact/rng.hpp"

namespace inexact {

std::size_t reflect_index(long i, std::size_t n) {
  const long period = 2 * static_cast<long>(n);
  long r = i % period;
  if (r < 0) r += period;
  if (r >= static_cast<long>(n)) r = period - 1 - r;
  return static_cast<std::size_t>(r);
}

GaussianBlur::GaussianBlur(std::size_t side, int radius, double sigma)
    : side_(side), radius_(radius) {
  if (side_ == 0) throw std::invalid_argument("GaussianBlur: side must be positive");
  if (radius_ < 0) throw std::invalid_argument("GaussianBlur: radius must be >= 0");
  if (radius_ > 0 && !(sigma > 0.0)) throw std::invalid_argument("GaussianBlur: sigma must be positive");
  kernel_.resize(2 * static_cast<std::size_t>(radius_) + 1);
  double total = 0.0;
  for (int t = -radius_; t <= radius_; ++t) {
    const double w = radius_ == 0 ? 1.0 : std::exp(-0.5 * t * t / (sigma * sigma));
    kernel_[static_cast<std::size_t>(t + radius_)] = w;
    total += w;
  }
  for (double& w : kernel_) w /= total;
}

void GaussianBlur::pass(std::span<const double> in, std::span<double> out, bool horizontal,
                        bool adjoint) const {
  const std::size_t n = side_;
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t line = 0; line < n; ++line) {
    for (std::size_t p = 0; p < n; ++p) {
      for (int t = -radius_; t <= radius_; ++t) {
        const std::size_t q = reflect_index(static_cast<long>(p) + t, n);
        const double w = kernel_[static_cast<std::size_t>(t + radius_)];
        const std::size_t at_p = horizontal ? line * n + p : p * n + line;
        const std::size_t at_q = horizontal ? line * n + q : q * n + line;
        if (adjoint) {
          out[at_q] += w * in[at_p];
        } else {
          out[at_p] += w * in[at_q];
        }
      }
    }
  }
}

void GaussianBlur::apply(std::span<const double> x, std::span<double> out) const {
  require_same_size(x.size(), rows(), "GaussianBlur::apply");
  require_same_size(out.size(), rows(), "GaussianBlur::apply output");
  std::vector<double> tmp(x.size());
  pass(x, tmp, true, false);
  pass(tmp, out, false, false);
}

void GaussianBlur::apply_adjoint(std::span<const double> y, std::span<double> out) const {
  require_same_size(y.size(), rows(), "GaussianBlur::apply_adjoint");
  require_same_size(out.size(), rows(), "GaussianBlur::apply_adjoint output");
  std::vector<double> tmp(y.size());
  pass(y, tmp, false, true);
  pass(tmp, out, true, true);
}

Vector piecewise_constant_image(std::size_t side, std::uint64_t seed) {
  Rng rng(seed);
  Vector img(side * side, 0.1);
  const double s = static_cast<double>(side);
  for (int r = 0; r < 4; ++r) {
    const auto x0 = static_cast<std::size_t>(rng.uniform(0.0, 0.6 * s));
    const auto y0 = static_cast<std::size_t>(rng.uniform(0.0, 0.6 * s));
    const auto w = static_cast<std::size_t>(rng.uniform(0.15 * s, 0.4 * s)) + 1;
    const auto h = static_cast<std::size_t>(rng.uniform(0.15 * s, 0.4 * s)) + 1;
    const double level = rng.uniform(0.3, 1.0);
    for (std::size_t i = y0; i < std::min(side, y0 + h); ++i)
      for (std::size_t j = x0; j < std::min(side, x0 + w); ++j) img[i * side + j] = level;
  }
  const double cx = rng.uniform(0.3 * s, 0.7 * s);
  const double cy = rng.uniform(0.3 * s, 0.7 * s);
  const double radius = rng.uniform(0.1 * s, 0.25 * s);
  const double level = rng.uniform(0.5, 1.0);
  for (std::size_t i = 0; i < side; ++i)
    for (std::size_t j = 0; j < side; ++j) {
      const double dx = static_cast<double>(j) + 0.5 - cx;
      const double dy = static_cast<double>(i) + 0.5 - cy;
      if (dx * dx + dy * dy <= radius * radius) img[i * side + j] = level;
    }
  return img;
}

BlurInstance blur_instance(const BlurSetup& setup) {
  if (setup.side == 0) throw std::invalid_argument("blur_instance: side must be positive");
  if (setup.side > kMaxBlurSide) {
    throw std::invalid_argument("blur_instance: side " + std::to_string(setup.side) +
                                " exceeds the desk-scale limit of " +
                                std::to_string(kMaxBlurSide) + " pixels");
  }
  auto op = std::make_shared<GaussianBlur>(setup.side, setup.radius, setup.sigma);
  Vector truth = piecewise_constant_image(setup.side, setup.seed);
  Vector b = apply(*op, truth);
  Rng noise(setup.seed ^ 0x5deece66dULL);
  for (double& v : b) v += setup.noise_sigma * noise.normal();
  BlurInstance out{LassoInstance::make(op, b, setup.gamma), std::move(truth), b};
  return out;
}

void write_pgm(std::ostream& out, const Vector& image, std::size_t side) {
  require_same_size(image.size(), side * side, "write_pgm");
  out << "P5\n" << side << ' ' << side << "\n255\n";
  for (double v : image) {
    const double c = std::clamp(v, 0.0, 1.0);
    out.put(static_cast<char>(static_cast<unsigned char>(std::lround(c * 255.0))));
  }
}

std::vector<double> read_pgm(std::istream& in, std::size_t& width, std::size_t& height) {
  std::string magic;
  int maxval = 0;
  in >> magic >> width >> height >> maxval;
  if (!in || magic != "P5" || maxval != 255) throw std::runtime_error("read_pgm: not an 8-bit P5 image");
  in.get();  // single whitespace before the raster
  std::vector<double> pixels(width * height);
  for (double& p : pixels) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) throw std::runtime_error("read_pgm: truncated raster");
    p = static_cast<double>(c) / 255.0;
  }
  return pixels;
}

}  // namespace inexact
