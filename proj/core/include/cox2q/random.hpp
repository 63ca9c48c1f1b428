#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <random>

namespace cox2q {

// splitmix64 finalizer. Used to derive independent per-replication seeds from
// a master seed: seed_k = split_seed(master, k).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

// Anything that yields i.i.d. uniforms on (0,1].
template <typename S>
concept UniformSource = requires(S s) {
    { s.next_unit() } -> std::same_as<double>;
};

// Deterministic uniform stream on (0,1] backed by mt19937_64.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    // 53-bit mantissa, shifted into (0,1] so -log() stays finite.
    double next_unit() {
        return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
    }

  private:
    std::mt19937_64 gen_;
};

static_assert(UniformSource<RandomStream>);

// Inverse-transform exponential draw.
template <UniformSource S>
double sample_exponential(double rate, S& stream) {
    return -std::log(stream.next_unit()) / rate;
}

}  // namespace cox2q
