#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace graphdrift {

// SplitMix64 (Steele, Lea, Flood 2014). 8 bytes of state, so large populations
// of independent streams stay cheap; every randomised routine in this library
// derives its own stream from a root seed plus a role tag, which keeps results
// identical no matter how work is scheduled across threads.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in (0,1]; never returns 0 so it is safe under log().
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Uniform in [0,1).
  double next_unit_co() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, n). Fixed-point multiply; bias is < 2^-53 and
  // irrelevant here, while the draw stays deterministic and branch-free.
  std::uint64_t next_below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Standard normal via Box-Muller; consumes exactly two u64 draws.
  double next_normal() {
    double u1 = next_unit();
    double u2 = next_unit_co();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // Chi-squared with `dof` degrees of freedom. Even dof uses the exact
  // -2 log(prod U_i) identity; odd dof adds one squared normal.
  double next_chi_squared(int dof) {
    double acc = 1.0;
    for (int i = 0; i < dof / 2; ++i) acc *= next_unit();
    double x = -2.0 * std::log(acc);
    if (dof % 2 == 1) {
      double z = next_normal();
      x += z * z;
    }
    return x;
  }

 private:
  std::uint64_t state_;
};

// Stateless mix used to derive independent sub-stream seeds. Tags separate
// roles (replicates, trajectories, restarts, ...) so streams never collide.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag, std::uint64_t index = 0) {
  std::uint64_t z = root ^ (0x9e3779b97f4a7c15ULL * (tag + 1)) ^ (0xd1b54a32d192ed03ULL * (index + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Role tags for derive_seed. Central list avoids accidental reuse.
namespace seed_tag {
constexpr std::uint64_t kCalibration = 1;
constexpr std::uint64_t kKCentres = 2;
constexpr std::uint64_t kStream = 3;
constexpr std::uint64_t kReplicate = 4;
constexpr std::uint64_t kBootstrapCi = 5;
constexpr std::uint64_t kSynthetic = 6;
constexpr std::uint64_t kScalarBaseline = 7;
constexpr std::uint64_t kTraining = 8;
constexpr std::uint64_t kTheory = 9;
}  // namespace seed_tag

// Uniform random subset of k distinct indices in [0, n), Floyd's algorithm.
inline std::vector<std::size_t> sample_distinct(SplitMix64& rng, std::size_t n, std::size_t k) {
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t j = n - k; j < n; ++j) {
    std::size_t t = static_cast<std::size_t>(rng.next_below(j + 1));
    bool seen = false;
    for (std::size_t v : out) {
      if (v == t) { seen = true; break; }
    }
    out.push_back(seen ? j : t);
  }
  return out;
}

}  // namespace graphdrift
