#include <arm_neon.h>

#include "footfall/simd/kernels.hpp"

namespace footfall::simd {
namespace {

void iou_row_neon(const double* box, BoxColumns others, double* out) {
  const double area_a = (box[2] - box[0]) * (box[3] - box[1]);
  const float64x2_t ax0 = vdupq_n_f64(box[0]);
  const float64x2_t ay0 = vdupq_n_f64(box[1]);
  const float64x2_t ax1 = vdupq_n_f64(box[2]);
  const float64x2_t ay1 = vdupq_n_f64(box[3]);
  const float64x2_t va = vdupq_n_f64(area_a);
  const float64x2_t zero = vdupq_n_f64(0.0);

  std::size_t i = 0;
  for (; i + 2 <= others.size; i += 2) {
    const float64x2_t bx0 = vld1q_f64(others.x_min + i);
    const float64x2_t by0 = vld1q_f64(others.y_min + i);
    const float64x2_t bx1 = vld1q_f64(others.x_max + i);
    const float64x2_t by1 = vld1q_f64(others.y_max + i);
    const float64x2_t iw = vmaxq_f64(vsubq_f64(vminq_f64(bx1, ax1), vmaxq_f64(bx0, ax0)), zero);
    const float64x2_t ih = vmaxq_f64(vsubq_f64(vminq_f64(by1, ay1), vmaxq_f64(by0, ay0)), zero);
    const float64x2_t inter = vmulq_f64(iw, ih);
    const float64x2_t vb = vmulq_f64(vsubq_f64(bx1, bx0), vsubq_f64(by1, by0));
    const float64x2_t uni = vsubq_f64(vaddq_f64(va, vb), inter);
    vst1q_f64(out + i, vdivq_f64(inter, uni));
  }
  if (i < others.size) {
    BoxColumns tail{others.x_min + i, others.y_min + i, others.x_max + i, others.y_max + i,
                    others.size - i};
    scalar_kernels().iou_row(box, tail, out + i);
  }
}

void blend_rows_neon(const std::uint8_t* row0, const std::uint8_t* row1, float weight,
                     std::size_t n, float* out) {
  const float32x4_t w = vdupq_n_f32(weight);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const uint16x8_t a16 = vmovl_u8(vld1_u8(row0 + i));
    const uint16x8_t b16 = vmovl_u8(vld1_u8(row1 + i));
    const float32x4_t a_lo = vcvtq_f32_u32(vmovl_u16(vget_low_u16(a16)));
    const float32x4_t a_hi = vcvtq_f32_u32(vmovl_u16(vget_high_u16(a16)));
    const float32x4_t b_lo = vcvtq_f32_u32(vmovl_u16(vget_low_u16(b16)));
    const float32x4_t b_hi = vcvtq_f32_u32(vmovl_u16(vget_high_u16(b16)));
    vst1q_f32(out + i, vaddq_f32(a_lo, vmulq_f32(w, vsubq_f32(b_lo, a_lo))));
    vst1q_f32(out + i + 4, vaddq_f32(a_hi, vmulq_f32(w, vsubq_f32(b_hi, a_hi))));
  }
  if (i < n) scalar_kernels().blend_rows(row0 + i, row1 + i, weight, n - i, out + i);
}

void resample_row_neon(const float* row, const std::int32_t* left, const std::int32_t* right,
                       const float* weight, std::size_t n, float* out_b, float* out_g,
                       float* out_r) {
  std::size_t x = 0;
  for (; x + 4 <= n; x += 4) {
    // No gather on NEON; a de-interleaving load of each sample pixel is the
    // cheapest way to get per-channel lanes.
    float32x4x3_t p0{};
    float32x4x3_t p1{};
    p0 = vld3q_lane_f32(row + left[x + 0], p0, 0);
    p0 = vld3q_lane_f32(row + left[x + 1], p0, 1);
    p0 = vld3q_lane_f32(row + left[x + 2], p0, 2);
    p0 = vld3q_lane_f32(row + left[x + 3], p0, 3);
    p1 = vld3q_lane_f32(row + right[x + 0], p1, 0);
    p1 = vld3q_lane_f32(row + right[x + 1], p1, 1);
    p1 = vld3q_lane_f32(row + right[x + 2], p1, 2);
    p1 = vld3q_lane_f32(row + right[x + 3], p1, 3);
    const float32x4_t w = vld1q_f32(weight + x);
    vst1q_f32(out_r + x, vaddq_f32(p0.val[0], vmulq_f32(w, vsubq_f32(p1.val[0], p0.val[0]))));
    vst1q_f32(out_g + x, vaddq_f32(p0.val[1], vmulq_f32(w, vsubq_f32(p1.val[1], p0.val[1]))));
    vst1q_f32(out_b + x, vaddq_f32(p0.val[2], vmulq_f32(w, vsubq_f32(p1.val[2], p0.val[2]))));
  }
  if (x < n) {
    scalar_kernels().resample_row(row, left + x, right + x, weight + x, n - x, out_b + x,
                                  out_g + x, out_r + x);
  }
}

constexpr KernelTable kNeon{"neon", iou_row_neon, blend_rows_neon, resample_row_neon};

}  // namespace

const KernelTable* neon_kernels() { return &kNeon; }

}  // namespace footfall::simd
