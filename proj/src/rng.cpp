#include "snrlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace snrlab {

namespace {

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kPhiloxW0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kPhiloxW1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
    const unsigned __int128 product = static_cast<unsigned __int128>(a) * b;
    hi = static_cast<std::uint64_t>(product >> 64);
    lo = static_cast<std::uint64_t>(product);
}

// Uniform in (0, 1], safe for log().
inline double open_low_uniform(std::uint64_t w) {
    return static_cast<double>((w >> 11) + 1) * 0x1.0p-53;
}

inline double closed_low_uniform(std::uint64_t w) {
    return static_cast<double>(w >> 11) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 2> key,
                                        std::array<std::uint64_t, 4> ctr) {
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kPhiloxW0;
            key[1] += kPhiloxW1;
        }
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::array<double, 4> block_normals(const std::array<std::uint64_t, 4>& w) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::array<double, 4> z{};
    for (int pair = 0; pair < 2; ++pair) {
        const double radius = std::sqrt(-2.0 * std::log(open_low_uniform(w[2 * pair])));
        const double angle = two_pi * closed_low_uniform(w[2 * pair + 1]);
        z[2 * pair] = radius * std::cos(angle);
        z[2 * pair + 1] = radius * std::sin(angle);
    }
    return z;
}

RngStream RngStream::split(std::uint64_t tag) const {
    return RngStream(master_seed_, mix64(stream_id_ ^ mix64(tag + 0x632BE59BD9B4E019ULL)));
}

std::array<std::uint64_t, 4> RngStream::block(std::uint64_t index) const {
    return philox4x64({master_seed_, stream_id_}, {index, 0, 0, 0});
}

std::uint64_t RngStream::next_u64() {
    if (u64_left_ == 0) {
        u64_buf_ = block(counter_++);
        u64_left_ = 4;
    }
    return u64_buf_[4 - u64_left_--];
}

double RngStream::next_uniform() { return closed_low_uniform(next_u64()); }

double RngStream::next_normal() {
    if (normal_left_ == 0) {
        normal_buf_ = block_normals(block(counter_++));
        normal_left_ = 4;
    }
    return normal_buf_[4 - normal_left_--];
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
    // Lemire, "Fast random integer generation in an interval" (2019).
    std::uint64_t x = next_u64();
    unsigned __int128 m = static_cast<unsigned __int128>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        while (low < threshold) {
            x = next_u64();
            m = static_cast<unsigned __int128>(x) * bound;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return static_cast<std::uint64_t>(m >> 64);
}

double RngStream::normal_at(std::uint64_t first_block, std::uint64_t t) const {
    return block_normals(block(first_block + t / 4))[t % 4];
}

void RngStream::fill_normals(std::span<double> out) {
    const std::uint64_t first = counter_;
    const auto size = static_cast<std::int64_t>(out.size());
    const std::int64_t blocks = (size + 3) / 4;
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < blocks; ++b) {
        const auto z = block_normals(block(first + static_cast<std::uint64_t>(b)));
        for (std::int64_t s = 0; s < 4; ++s) {
            const std::int64_t t = 4 * b + s;
            if (t < size) out[static_cast<std::size_t>(t)] = z[static_cast<std::size_t>(s)];
        }
    }
    counter_ += static_cast<std::uint64_t>(blocks);
}

}  // namespace snrlab
