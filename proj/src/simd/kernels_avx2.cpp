#include <immintrin.h>

#include <algorithm>

#include "footfall/simd/kernels.hpp"

namespace footfall::simd {
namespace {

void iou_row_avx2(const double* box, BoxColumns others, double* out) {
  const double area_a = (box[2] - box[0]) * (box[3] - box[1]);
  const __m256d ax0 = _mm256_set1_pd(box[0]);
  const __m256d ay0 = _mm256_set1_pd(box[1]);
  const __m256d ax1 = _mm256_set1_pd(box[2]);
  const __m256d ay1 = _mm256_set1_pd(box[3]);
  const __m256d va = _mm256_set1_pd(area_a);
  const __m256d zero = _mm256_setzero_pd();

  std::size_t i = 0;
  for (; i + 4 <= others.size; i += 4) {
    const __m256d bx0 = _mm256_loadu_pd(others.x_min + i);
    const __m256d by0 = _mm256_loadu_pd(others.y_min + i);
    const __m256d bx1 = _mm256_loadu_pd(others.x_max + i);
    const __m256d by1 = _mm256_loadu_pd(others.y_max + i);
    // MAXPD returns the second operand for (-0, +0), so a zero width stays +0 as in std::max(0.0, v).
    const __m256d iw = _mm256_max_pd(_mm256_sub_pd(_mm256_min_pd(bx1, ax1), _mm256_max_pd(bx0, ax0)), zero);
    const __m256d ih = _mm256_max_pd(_mm256_sub_pd(_mm256_min_pd(by1, ay1), _mm256_max_pd(by0, ay0)), zero);
    const __m256d inter = _mm256_mul_pd(iw, ih);
    const __m256d vb = _mm256_mul_pd(_mm256_sub_pd(bx1, bx0), _mm256_sub_pd(by1, by0));
    const __m256d uni = _mm256_sub_pd(_mm256_add_pd(va, vb), inter);
    _mm256_storeu_pd(out + i, _mm256_div_pd(inter, uni));
  }
  if (i < others.size) {
    BoxColumns tail{others.x_min + i, others.y_min + i, others.x_max + i, others.y_max + i,
                    others.size - i};
    scalar_kernels().iou_row(box, tail, out + i);
  }
}

inline __m256 load8_u8(const std::uint8_t* p) {
  const __m128i bytes = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(p));
  return _mm256_cvtepi32_ps(_mm256_cvtepu8_epi32(bytes));
}

void blend_rows_avx2(const std::uint8_t* row0, const std::uint8_t* row1, float weight,
                     std::size_t n, float* out) {
  const __m256 w = _mm256_set1_ps(weight);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256 a = load8_u8(row0 + i);
    const __m256 b = load8_u8(row1 + i);
    _mm256_storeu_ps(out + i, _mm256_add_ps(a, _mm256_mul_ps(w, _mm256_sub_ps(b, a))));
  }
  if (i < n) scalar_kernels().blend_rows(row0 + i, row1 + i, weight, n - i, out + i);
}

void resample_row_avx2(const float* row, const std::int32_t* left, const std::int32_t* right,
                       const float* weight, std::size_t n, float* out_b, float* out_g,
                       float* out_r) {
  std::size_t x = 0;
  for (; x + 8 <= n; x += 8) {
    const __m256i l = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(left + x));
    const __m256i r = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(right + x));
    const __m256 w = _mm256_loadu_ps(weight + x);
    float* planes[3] = {out_r, out_g, out_b};
    for (int c = 0; c < 3; ++c) {
      const __m256 p0 = _mm256_i32gather_ps(row + c, l, 4);
      const __m256 p1 = _mm256_i32gather_ps(row + c, r, 4);
      _mm256_storeu_ps(planes[c] + x, _mm256_add_ps(p0, _mm256_mul_ps(w, _mm256_sub_ps(p1, p0))));
    }
  }
  if (x < n) {
    scalar_kernels().resample_row(row, left + x, right + x, weight + x, n - x, out_b + x,
                                  out_g + x, out_r + x);
  }
}

constexpr KernelTable kAvx2{"avx2", iou_row_avx2, blend_rows_avx2, resample_row_avx2};

}  // namespace

const KernelTable* avx2_kernels() { return &kAvx2; }

}  // namespace footfall::simd
