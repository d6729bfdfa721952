#pragma once

#include <cstdint>

namespace jumpgauss::sampling {

/// What a stream is consumed for. Folded into the stream key so that the
/// draws feeding different parts of one path never overlap.
enum class Purpose : std::uint64_t {
    generic = 0,
    jump_count = 1,
    jump_time = 2,
    jump_mark = 3,
    euler_gauss = 4,
    split_draw = 5,
    band_size = 6,
    poisson = 7,
};

struct StreamLabel {
    std::uint64_t experiment = 0;
    std::uint64_t path = 0;
    Purpose purpose = Purpose::generic;
    std::uint64_t subid = 0;
};

/// Counter-based random stream: the n-th output is a pure function of
/// (master seed, label, n). Identical (seed, label) pairs reproduce the
/// same sequence bit-for-bit on any thread; distinct labels give
/// statistically independent streams. No shared mutable state.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, const StreamLabel& label);

    std::uint64_t next_u64();
    /// Uniform on [0,1), 53-bit resolution.
    double next_uniform();
    /// Uniform on (0,1]; safe as a log() argument.
    double next_uniform_pos();

    std::uint64_t counter() const { return n_; }

private:
    std::uint64_t base_;
    std::uint64_t n_ = 0;
};

/// SplitMix64 output mix; also used to chain-hash label fields.
std::uint64_t mix64(std::uint64_t x);

/// Derive the stream key for (seed, label). Exposed for manifest reporting.
std::uint64_t derive_stream_key(std::uint64_t master_seed, const StreamLabel& label);

/// FNV-1a 64-bit over raw bytes; used for content hashes and jump digests.
std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 0xcbf29ce484222325ull);

} // namespace jumpgauss::sampling
