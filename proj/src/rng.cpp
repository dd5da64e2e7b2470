#include "bdr/rng.hpp"

namespace bdr {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = splitmix64(base);
    for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    return h;
}

Stream::Stream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

Stream::Stream(std::uint64_t seed, StreamPurpose purpose)
    : Stream(derive_seed(seed, {static_cast<std::uint64_t>(purpose)})) {}

double Stream::uniform() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
}

bool Stream::bernoulli(double p) { return uniform() <= p; }

}  // namespace bdr
