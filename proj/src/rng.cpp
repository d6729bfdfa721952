#include "jumpgauss/rng.hpp"

#include <cstring>

namespace jumpgauss::sampling {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;
}

std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

std::uint64_t derive_stream_key(std::uint64_t master_seed, const StreamLabel& label) {
    // Chain the label fields through the avalanche mix so that streams whose
    // labels differ in any one field land far apart in counter space.
    std::uint64_t h = mix64(master_seed + kGolden);
    h = mix64(h ^ (label.experiment + kGolden));
    h = mix64(h ^ (label.path + kGolden));
    h = mix64(h ^ (static_cast<std::uint64_t>(label.purpose) + kGolden));
    h = mix64(h ^ (label.subid + kGolden));
    return h;
}

RngStream::RngStream(std::uint64_t master_seed, const StreamLabel& label)
    : base_(derive_stream_key(master_seed, label)) {}

std::uint64_t RngStream::next_u64() {
    ++n_;
    return mix64(base_ + n_ * kGolden);
}

double RngStream::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed) {
    const unsigned char* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace jumpgauss::sampling
