#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bdr {

// SplitMix64 finalizer, used to derive independent seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Folds a list of integers into one seed; order matters.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts);

enum class StreamPurpose : std::uint64_t { Channel = 1, Coins = 2, Calibration = 3 };

// One named random stream. The uniform is built from raw engine bits so that
// sequences are identical across standard library implementations.
class Stream {
public:
    explicit Stream(std::uint64_t seed);
    Stream(std::uint64_t seed, StreamPurpose purpose);

    // Uniform on (0, 1].
    double uniform();
    bool bernoulli(double p);

private:
    std::mt19937_64 engine_;
};

}  // namespace bdr
