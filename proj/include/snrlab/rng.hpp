#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace snrlab {

/// Philox4x64-10 block function. Pure: the same (key, counter) always maps
/// to the same four words.
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 2> key,
                                        std::array<std::uint64_t, 4> counter);

/// Counter-based random stream keyed by (master_seed, stream_id).
///
/// Every draw consumes whole 256-bit blocks addressed by a block counter, so
/// any block can be computed independently of the others. Bulk fills are
/// therefore identical for every thread count. Normals use Box-Muller on two
/// 53-bit uniforms: block words (w0, w1) give normals 0 and 1, (w2, w3) give
/// normals 2 and 3.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : master_seed_(master_seed), stream_id_(stream_id) {}

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }
    std::uint64_t position() const { return counter_; }

    /// Stream with the same master seed and a stream id derived from
    /// (stream_id, tag).
    RngStream split(std::uint64_t tag) const;

    std::array<std::uint64_t, 4> block(std::uint64_t index) const;

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double next_uniform();
    double next_normal();
    /// Uniform integer in [0, bound), unbiased (Lemire rejection).
    std::uint64_t next_below(std::uint64_t bound);

    /// Fills `out` with standard normals. Element t comes from block
    /// position() + t/4, slot t%4. Advances by ceil(size/4) blocks.
    void fill_normals(std::span<double> out);

    /// Marks `count` blocks as consumed (used after random-access fills).
    void skip_blocks(std::uint64_t count) { counter_ += count; }

    /// The t-th normal of the block sequence starting at `first_block`.
    double normal_at(std::uint64_t first_block, std::uint64_t t) const;

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::uint64_t counter_ = 0;

    std::array<std::uint64_t, 4> u64_buf_{};
    int u64_left_ = 0;
    std::array<double, 4> normal_buf_{};
    int normal_left_ = 0;
};

/// Four standard normals from one Philox block.
std::array<double, 4> block_normals(const std::array<std::uint64_t, 4>& words);

/// SplitMix64 finalizer, used to derive stream ids.
std::uint64_t mix64(std::uint64_t x);

}  // namespace snrlab
