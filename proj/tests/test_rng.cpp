#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include <omp.h>

#include "doctest.h"
#include "snrlab/rng.hpp"
#include "snrlab/stats.hpp"

using namespace snrlab;

// Known answers from numpy.random.Philox(key=..., counter=...).
TEST_CASE("philox matches numpy known answers") {
    auto a = philox4x64({0, 0}, {1, 0, 0, 0});
    CHECK(a[0] == 0x2f4ba6408e4d89bULL);
    CHECK(a[1] == 0x3dd62b0b9ca8c5b2ULL);
    CHECK(a[2] == 0x1c8667a55d902e79ULL);
    CHECK(a[3] == 0x907d7a052fd5b4dcULL);

    auto b = philox4x64({12345, 7}, {1, 0, 0, 0});
    CHECK(b[0] == 0xa6effe13fb51d09ULL);
    CHECK(b[1] == 0x550d7ff1e9b79c89ULL);
    CHECK(b[2] == 0x5b961d1c4db72c59ULL);
    CHECK(b[3] == 0x5881711dc14b2d09ULL);
    CHECK(philox4x64({12345, 7}, {2, 0, 0, 0})[0] == 0x561828786974a38aULL);
    CHECK(philox4x64({0xdeadbeef, 0}, {6, 0, 0, 0})[0] == 0xe31338377fa587d8ULL);
}

TEST_CASE("identical keys give identical sequences, distinct keys differ") {
    RngStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        CHECK(x != c.next_u64());
        CHECK(x != d.next_u64());
    }
}

TEST_CASE("split streams are deterministic and distinct") {
    const RngStream root(7, 11);
    CHECK(root.split(1).stream_id() == root.split(1).stream_id());
    std::set<std::uint64_t> ids;
    for (std::uint64_t t = 0; t < 1000; ++t) ids.insert(root.split(t).stream_id());
    CHECK(ids.size() == 1000);
    CHECK(root.split(1).master_seed() == 7);
}

TEST_CASE("fill_normals equals sequential draws and random access") {
    RngStream bulk(5, 9), seq(5, 9);
    std::vector<double> v(37);
    bulk.fill_normals(v);
    for (std::size_t t = 0; t < v.size(); ++t) {
        CHECK(v[t] == seq.next_normal());
        CHECK(v[t] == RngStream(5, 9).normal_at(0, t));
    }
    CHECK(bulk.position() == 10);
}

TEST_CASE("block normals follow Box-Muller on 53-bit uniforms") {
    const std::array<std::uint64_t, 4> w{0x2f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL,
                                         0x907d7a052fd5b4dcULL};
    const auto z = block_normals(w);
    auto unit = [](std::uint64_t x, bool open_zero) {
        return static_cast<double>((x >> 11) + (open_zero ? 1 : 0)) * 0x1.0p-53;
    };
    const double r0 = std::sqrt(-2.0 * std::log(unit(w[0], true)));
    const double r1 = std::sqrt(-2.0 * std::log(unit(w[2], true)));
    CHECK(z[0] == doctest::Approx(r0 * std::cos(2.0 * M_PI * unit(w[1], false))).epsilon(1e-14));
    CHECK(z[1] == doctest::Approx(r0 * std::sin(2.0 * M_PI * unit(w[1], false))).epsilon(1e-14));
    CHECK(z[2] == doctest::Approx(r1 * std::cos(2.0 * M_PI * unit(w[3], false))).epsilon(1e-14));
    CHECK(z[3] == doctest::Approx(r1 * std::sin(2.0 * M_PI * unit(w[3], false))).epsilon(1e-14));
}

TEST_CASE("normal moments") {
    RngStream rng(2024, 0);
    std::vector<double> v(400000);
    rng.fill_normals(v);
    const MeanSe m = mean_se(v);
    std::vector<double> sq(v.size());
    std::transform(v.begin(), v.end(), sq.begin(), [](double x) { return x * x; });
    CHECK(std::abs(m.mean) <= 4.0 / std::sqrt(400000.0));
    CHECK(std::abs(mean_se(sq).mean - 1.0) <= 4.0 * std::sqrt(2.0 / 400000.0));
}

TEST_CASE("next_below is in range and roughly uniform") {
    RngStream rng(1, 1);
    std::vector<int> counts(7, 0);
    const int draws = 70000;
    for (int i = 0; i < draws; ++i) {
        const auto x = rng.next_below(7);
        REQUIRE(x < 7);
        ++counts[x];
    }
    const double se = std::sqrt(draws * (1.0 / 7) * (6.0 / 7));
    for (int c : counts) CHECK(std::abs(c - draws / 7.0) <= 4.0 * se);
}

TEST_CASE("uniforms lie in [0, 1)") {
    RngStream rng(3, 3);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.next_uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}
