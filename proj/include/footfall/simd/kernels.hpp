#pragma once

// Data-parallel inner loops with a scalar reference implementation and
// optional AVX2 / NEON variants. Every variant must produce bit-identical
// results to the scalar one: the same operations are applied in the same
// order and kernel sources are compiled with -ffp-contract=off.

#include <cstddef>
#include <cstdint>

namespace footfall::simd {

// Boxes in structure-of-arrays layout.
struct BoxColumns {
  const double* x_min;
  const double* y_min;
  const double* x_max;
  const double* y_max;
  std::size_t size;
};

// out[i] = IoU(box, others[i]); box is {x_min, y_min, x_max, y_max}.
using IouRowFn = void (*)(const double* box, BoxColumns others, double* out);

// out[i] = row0[i] + weight * (row1[i] - row0[i]) for i in [0, n).
using BlendRowsFn = void (*)(const std::uint8_t* row0, const std::uint8_t* row1, float weight,
                             std::size_t n, float* out);

// Horizontal lerp of an interleaved RGB float row into three planes with
// the channel order reversed. left/right are element offsets of the
// sample pixels (pixel index * 3), weight the fractional position.
using ResampleRowFn = void (*)(const float* row, const std::int32_t* left,
                               const std::int32_t* right, const float* weight, std::size_t n,
                               float* out_b, float* out_g, float* out_r);

struct KernelTable {
  const char* name;
  IouRowFn iou_row;
  BlendRowsFn blend_rows;
  ResampleRowFn resample_row;
};

const KernelTable& scalar_kernels();
// nullptr when not compiled in for this target.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

}  // namespace footfall::simd
