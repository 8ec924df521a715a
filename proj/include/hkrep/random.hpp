#pragma once

#include <cstdint>
#include <random>

namespace hkrep {

/// SplitMix64 step; derives independent per-sample seeds from one master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class FieldSampler {
 public:
  FieldSampler(std::uint32_t p, std::uint64_t seed) : engine_(seed), dist_(0, p - 1) {}
  std::uint32_t operator()() { return dist_(engine_); }

 private:
  std::mt19937_64 engine_;
  std::uniform_int_distribution<std::uint32_t> dist_;
};

}  // namespace hkrep
