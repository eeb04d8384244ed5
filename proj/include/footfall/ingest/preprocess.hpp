#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "footfall/simd/dispatch.hpp"

namespace footfall::ingest {

// 8-bit interleaved RGB, row-major.
struct PixelImage {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<std::uint8_t> data;

  std::uint8_t at(std::size_t y, std::size_t x, std::size_t channel) const {
    return data[(y * width + x) * 3 + channel];
  }

  friend bool operator==(const PixelImage&, const PixelImage&) = default;
};

// Single-batch NCHW float tensor, channel 0 = blue, 1 = green, 2 = red.
struct InputTensor {
  std::array<std::size_t, 4> shape{1, 3, 0, 0};
  std::vector<float> values;

  float at(std::size_t channel, std::size_t y, std::size_t x) const {
    return values[(channel * shape[2] + y) * shape[3] + x];
  }
};

/// Detector-adapter preprocessing: bilinear resize (half-pixel centers, edge
/// clamped) to target_h x target_w, RGB -> BGR, interleaved -> planar, cast
/// to float with no rescaling (values stay in 0..255).
/// Throws Error(kEmptyImage) for a zero-sized image and Error(kInvalidField)
/// for a zero target or a data buffer of the wrong length.
InputTensor preprocess(const PixelImage& image, std::size_t target_h, std::size_t target_w,
                       const simd::KernelTable& kernels = simd::active_kernels());

/// Swaps the first and third channel of every pixel.
PixelImage swap_red_blue(PixelImage image);

}  // namespace footfall::ingest
