#pragma once

#include <string_view>
#include <vector>

#include "footfall/simd/kernels.hpp"

namespace footfall::simd {

/// Kernel tables that are both compiled in and supported by the running CPU,
/// scalar first.
std::vector<const KernelTable*> available_kernels();

/// Widest available table, chosen once per process. FOOTFALL_SIMD=scalar|avx2|neon
/// forces a specific table when it is available.
const KernelTable& active_kernels();

const KernelTable* find_kernels(std::string_view name);

}  // namespace footfall::simd
