#pragma once

#include <cstdint>
#include <random>

namespace footfall::simulate {

// Portable seeded source. std::mt19937_64's output sequence is fixed by the
// C++ standard; the std distributions are not, so values are derived from raw
// engine output with plain IEEE arithmetic only:
//   uniform()  = (x >> 11) * 2^-53            in [0, 1)
//   normal()   = sum of 12 uniform() - 6       (Irwin-Hall, mean 0, variance 1)
// No libm transcendental is involved, so streams are bit-identical across
// platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Inclusive range. lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<double>(hi - lo + 1);
    const auto offset = static_cast<std::int64_t>(uniform() * span);
    return lo + (offset > hi - lo ? hi - lo : offset);
  }

  double normal() {
    double sum = 0.0;
    for (int i = 0; i < 12; ++i) sum += uniform();
    return sum - 6.0;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace footfall::simulate
