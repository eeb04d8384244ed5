#include "footfall/ingest/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "footfall/error.hpp"

namespace footfall::ingest {
namespace {

struct Sample {
  std::size_t lo;
  std::size_t hi;
  float weight;
};

// Half-pixel-center mapping of destination index to a source lerp.
Sample source_sample(std::size_t dst, std::size_t dst_size, std::size_t src_size) {
  const double scale = static_cast<double>(src_size) / static_cast<double>(dst_size);
  const double pos = std::max(0.0, (static_cast<double>(dst) + 0.5) * scale - 0.5);
  const std::size_t lo = std::min(static_cast<std::size_t>(pos), src_size - 1);
  const std::size_t hi = std::min(lo + 1, src_size - 1);
  return {lo, hi, static_cast<float>(pos - static_cast<double>(lo))};
}

}  // namespace

InputTensor preprocess(const PixelImage& image, std::size_t target_h, std::size_t target_w,
                       const simd::KernelTable& kernels) {
  if (image.height == 0 || image.width == 0) {
    throw Error(ErrorCode::kEmptyImage, "image has zero height or width");
  }
  if (image.data.size() != image.height * image.width * 3) {
    throw Error(ErrorCode::kInvalidField,
                "image data length " + std::to_string(image.data.size()) + " != height*width*3");
  }
  if (target_h == 0 || target_w == 0) {
    throw Error(ErrorCode::kInvalidField, "target size must be positive");
  }

  InputTensor tensor;
  tensor.shape = {1, 3, target_h, target_w};
  tensor.values.resize(3 * target_h * target_w);
  const std::size_t plane = target_h * target_w;
  float* out_b = tensor.values.data();
  float* out_g = out_b + plane;
  float* out_r = out_g + plane;

  std::vector<std::int32_t> left(target_w);
  std::vector<std::int32_t> right(target_w);
  std::vector<float> weight(target_w);
  for (std::size_t x = 0; x < target_w; ++x) {
    const Sample s = source_sample(x, target_w, image.width);
    left[x] = static_cast<std::int32_t>(s.lo * 3);
    right[x] = static_cast<std::int32_t>(s.hi * 3);
    weight[x] = s.weight;
  }

  const std::size_t row_len = image.width * 3;
  std::vector<float> blended(row_len);
  for (std::size_t y = 0; y < target_h; ++y) {
    const Sample s = source_sample(y, target_h, image.height);
    kernels.blend_rows(image.data.data() + s.lo * row_len, image.data.data() + s.hi * row_len,
                       s.weight, row_len, blended.data());
    const std::size_t offset = y * target_w;
    kernels.resample_row(blended.data(), left.data(), right.data(), weight.data(), target_w,
                         out_b + offset, out_g + offset, out_r + offset);
  }
  return tensor;
}

PixelImage swap_red_blue(PixelImage image) {
  for (std::size_t i = 0; i + 2 < image.data.size(); i += 3) {
    std::swap(image.data[i], image.data[i + 2]);
  }
  return image;
}

}  // namespace footfall::ingest
