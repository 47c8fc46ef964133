#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ipp {

using Engine = std::mt19937_64;

/// Splits one episode seed into independent named substreams, so adding
/// draws in one consumer (e.g. perception) leaves the others untouched.
class RngStreams {
 public:
  explicit RngStreams(std::uint64_t seed) : seed_(seed) {}

  Engine stream(std::string_view name) const;
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// 64-bit FNV-1a over a byte string. Used for config hashes and trace checksums.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace ipp
