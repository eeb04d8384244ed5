#include "footfall/simd/dispatch.hpp"

#include <cstdlib>

namespace footfall::simd {

#if !defined(FOOTFALL_HAVE_AVX2)
const KernelTable* avx2_kernels() { return nullptr; }
#endif
#if !defined(FOOTFALL_HAVE_NEON)
const KernelTable* neon_kernels() { return nullptr; }
#endif

namespace {

bool cpu_has_avx2() {
#if defined(FOOTFALL_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable& select_kernels() {
  const auto available = available_kernels();
  if (const char* forced = std::getenv("FOOTFALL_SIMD")) {
    for (const KernelTable* table : available) {
      if (std::string_view(table->name) == forced) return *table;
    }
  }
  return *available.back();
}

}  // namespace

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> tables{&scalar_kernels()};
  if (const KernelTable* t = avx2_kernels(); t != nullptr && cpu_has_avx2()) tables.push_back(t);
  // NEON is mandatory on AArch64, so compiled-in means usable.
  if (const KernelTable* t = neon_kernels(); t != nullptr) tables.push_back(t);
  return tables;
}

const KernelTable& active_kernels() {
  static const KernelTable& table = select_kernels();
  return table;
}

const KernelTable* find_kernels(std::string_view name) {
  for (const KernelTable* table : available_kernels()) {
    if (name == table->name) return table;
  }
  return nullptr;
}

}  // namespace footfall::simd
