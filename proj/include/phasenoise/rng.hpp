#pragma once

#include <cstdint>
#include <random>

namespace pn {

// Seeded random stream with counter-derived substreams. A substream is a
// fresh engine seeded from (root seed, index) through a splitmix64 mix, so a
// Monte-Carlo run split into chunks produces the same numbers no matter how
// the chunks are distributed over workers.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : seed_(seed), eng_(mix(seed)) {}

  RngStream substream(std::uint64_t index) const {
    return RngStream(mix(seed_ ^ (0x9e3779b97f4a7c15ull + index * 0xbf58476d1ce4e5b9ull)));
  }

  std::uint64_t seed() const { return seed_; }
  std::mt19937_64& engine() { return eng_; }

  double uniform() {  // [0, 1)
    return std::uniform_real_distribution<double>(0.0, 1.0)(eng_);
  }
  double uniform_angle() {  // [0, 2*pi)
    return std::uniform_real_distribution<double>(0.0, 2.0 * M_PI)(eng_);
  }
  double normal(double sigma = 1.0) {
    return std::normal_distribution<double>(0.0, sigma)(eng_);
  }
  // Gamma(1/2, 1): square of a standard normal over two.
  double gamma_half() {
    const double z = normal();
    return 0.5 * z * z;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 eng_;
};

}  // namespace pn
