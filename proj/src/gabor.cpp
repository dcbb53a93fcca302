#include "tenmet/gabor.hpp"

#include <cmath>
#include <numbers>

#include "tenmet/errors.hpp"

namespace tenmet {

namespace {

void check_bank(const GaborBank& bank) {
  if (bank.kernel_size < 1 || bank.kernel_size % 2 == 0)
    throw BadKernel("kernel_size must be a positive odd integer");
  if (bank.scale_count < 1 || bank.orientation_count < 1)
    throw InvalidArgument("filter bank needs at least one scale and orientation");
  if (bank.wavelength_base <= 0.0 || bank.sigma_ratio <= 0.0)
    throw InvalidArgument("wavelength_base and sigma_ratio must be positive");
}

}  // namespace

GaborBank default_bank() { return GaborBank{}; }

std::vector<GaborKernel> make_kernels(const GaborBank& bank) {
  check_bank(bank);
  const int half = bank.kernel_size / 2;

  std::vector<GaborKernel> kernels;
  kernels.reserve(static_cast<std::size_t>(bank.channel_count()));
  for (int s = 0; s < bank.scale_count; ++s) {
    const double wavelength =
        bank.wavelength_base * std::pow(std::numbers::sqrt2, s);
    const double sigma = bank.sigma_ratio * wavelength;
    for (int o = 0; o < bank.orientation_count; ++o) {
      const double theta =
          std::numbers::pi * o / static_cast<double>(bank.orientation_count);
      const double ct = std::cos(theta), st = std::sin(theta);

      GaborKernel k;
      k.even = Matrix(bank.kernel_size, bank.kernel_size);
      k.odd = Matrix(bank.kernel_size, bank.kernel_size);
      for (int y = -half; y <= half; ++y)
        for (int x = -half; x <= half; ++x) {
          const double xr = x * ct + y * st;
          const double yr = -x * st + y * ct;
          const double envelope =
              std::exp(-(xr * xr + yr * yr) / (2.0 * sigma * sigma));
          const double phase = 2.0 * std::numbers::pi * xr / wavelength;
          k.even(y + half, x + half) = envelope * std::cos(phase);
          k.odd(y + half, x + half) = envelope * std::sin(phase);
        }
      k.even.array() -= k.even.mean();  // kill the DC gain
      kernels.push_back(std::move(k));
    }
  }
  return kernels;
}

DenseTensor gabor_lift(const DenseTensor& image, const GaborBank& bank) {
  if (image.order() != 2)
    throw ShapeMismatch("gabor_lift: input must be an order-2 tensor");
  const auto kernels = make_kernels(bank);

  const Index h = image.dim(1), w = image.dim(2);
  const Index c = static_cast<Index>(bank.channel_count());
  const int half = bank.kernel_size / 2;
  DenseTensor out({h, w, c});  // border band stays zero

  for (Index ch = 0; ch < c; ++ch) {
    const Matrix& ke = kernels[static_cast<std::size_t>(ch)].even;
    const Matrix& ko = kernels[static_cast<std::size_t>(ch)].odd;
    for (Index y = half; y + half < h; ++y)
      for (Index x = half; x + half < w; ++x) {
        double re = 0.0, im = 0.0;
        for (int a = -half; a <= half; ++a)
          for (int b = -half; b <= half; ++b) {
            const double v = image.at({y + a, x + b});
            re += ke(a + half, b + half) * v;
            im += ko(a + half, b + half) * v;
          }
        out.at({y, x, ch}) = std::hypot(re, im);
      }
  }
  return out;
}

}  // namespace tenmet
