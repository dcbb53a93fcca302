#ifndef TENMET_GABOR_HPP
#define TENMET_GABOR_HPP

#include <vector>

#include "tenmet/tensor.hpp"
#include "tenmet/types.hpp"

namespace tenmet {

/// Filter-bank geometry. Wavelength grows by a factor sqrt(2) per scale;
/// the Gaussian envelope width is sigma_ratio * wavelength. Orientations are
/// uniform over [0, pi).
struct GaborBank {
  int scale_count = 4;
  int orientation_count = 7;
  int kernel_size = 11;  // odd, so kernels are centered
  double wavelength_base = 4.0;
  double sigma_ratio = 0.56;

  int channel_count() const { return scale_count * orientation_count; }
};

/// Even/odd quadrature pair for one channel. The even kernel is mean-removed
/// so constant inputs produce zero response; the odd kernel sums to zero by
/// antisymmetry.
struct GaborKernel {
  Matrix even;
  Matrix odd;
};

GaborBank default_bank();

/// Kernels in channel order: scale-major, then orientation
/// (channel = scale * orientation_count + orientation).
std::vector<GaborKernel> make_kernels(const GaborBank& bank);

/// Lifts an H x W image to H x W x channel_count magnitude responses
/// sqrt(even^2 + odd^2). Responses use the kernel's full support only; the
/// border band of half-kernel width is zero.
DenseTensor gabor_lift(const DenseTensor& image, const GaborBank& bank);

}  // namespace tenmet

#endif  // TENMET_GABOR_HPP
