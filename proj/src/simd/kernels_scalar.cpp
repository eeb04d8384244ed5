#include <algorithm>

#include "footfall/simd/kernels.hpp"

namespace footfall::simd {
namespace {

void iou_row_scalar(const double* box, BoxColumns others, double* out) {
  const double area_a = (box[2] - box[0]) * (box[3] - box[1]);
  for (std::size_t i = 0; i < others.size; ++i) {
    const double iw = std::max(0.0, std::min(box[2], others.x_max[i]) - std::max(box[0], others.x_min[i]));
    const double ih = std::max(0.0, std::min(box[3], others.y_max[i]) - std::max(box[1], others.y_min[i]));
    const double inter = iw * ih;
    const double area_b = (others.x_max[i] - others.x_min[i]) * (others.y_max[i] - others.y_min[i]);
    out[i] = inter / (area_a + area_b - inter);
  }
}

void blend_rows_scalar(const std::uint8_t* row0, const std::uint8_t* row1, float weight,
                       std::size_t n, float* out) {
  for (std::size_t i = 0; i < n; ++i) {
    const float a = static_cast<float>(row0[i]);
    const float b = static_cast<float>(row1[i]);
    out[i] = a + weight * (b - a);
  }
}

void resample_row_scalar(const float* row, const std::int32_t* left, const std::int32_t* right,
                         const float* weight, std::size_t n, float* out_b, float* out_g,
                         float* out_r) {
  for (std::size_t x = 0; x < n; ++x) {
    const float* p0 = row + left[x];
    const float* p1 = row + right[x];
    const float w = weight[x];
    out_r[x] = p0[0] + w * (p1[0] - p0[0]);
    out_g[x] = p0[1] + w * (p1[1] - p0[1]);
    out_b[x] = p0[2] + w * (p1[2] - p0[2]);
  }
}

constexpr KernelTable kScalar{"scalar", iou_row_scalar, blend_rows_scalar, resample_row_scalar};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace footfall::simd
