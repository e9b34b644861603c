#pragma once

#include <cstdint>
#include <random>

namespace bt {

/// mt19937_64 with a portable bounded draw (std distributions are not
/// reproducible across standard libraries).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, n); n > 0.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return x % n;
  }
  /// Uniform in [lo, hi].
  long range(long lo, long hi) { return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  bool coin() { return below(2) == 1; }
  std::uint64_t raw() { return gen_(); }

private:
  std::mt19937_64 gen_;
};

} // namespace bt
