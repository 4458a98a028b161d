#include <doctest.h>

#include <limits>

#include "ped/distance.hpp"
#include "ped/rng.hpp"

using namespace ped;

namespace {

std::vector<std::int64_t> brute_force(const BoundaryMap& src) {
    std::vector<std::int64_t> out(src.bits.size(), kUnreachable);
    for (int y = 0; y < src.height; ++y)
        for (int x = 0; x < src.width; ++x) {
            std::int64_t best = std::numeric_limits<std::int64_t>::max();
            for (int sy = 0; sy < src.height; ++sy)
                for (int sx = 0; sx < src.width; ++sx)
                    if (src.at(sx, sy)) {
                        const std::int64_t dx = x - sx, dy = y - sy;
                        best = std::min(best, dx * dx + dy * dy);
                    }
            if (best != std::numeric_limits<std::int64_t>::max())
                out[static_cast<std::size_t>(y) * src.width + x] = best;
        }
    return out;
}

} // namespace

TEST_CASE("distance field of empty map is unreachable everywhere") {
    const auto d = squared_distance_field(BoundaryMap(5, 4));
    for (std::int64_t v : d)
        CHECK(v == kUnreachable);
}

TEST_CASE("distance field of single pixel") {
    BoundaryMap m(7, 5);
    m.set(3, 2);
    const auto d = squared_distance_field(m);
    for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 7; ++x) {
            const std::int64_t dx = x - 3, dy = y - 2;
            CHECK(d[static_cast<std::size_t>(y) * 7 + x] == dx * dx + dy * dy);
        }
}

TEST_CASE("distance field equals brute force exactly on random maps") {
    Rng rng(19);
    for (int trial = 0; trial < 60; ++trial) {
        const int w = 1 + static_cast<int>(rng.next_below(24));
        const int h = 1 + static_cast<int>(rng.next_below(24));
        BoundaryMap m(w, h);
        const int density = 1 + static_cast<int>(rng.next_below(16));
        for (auto& b : m.bits)
            b = rng.next_below(static_cast<std::uint64_t>(density)) == 0 ? 1 : 0;
        CHECK(squared_distance_field(m) == brute_force(m));
    }
}

TEST_CASE("distance field handles full rows and columns of sources") {
    BoundaryMap m(9, 6);
    for (int x = 0; x < 9; ++x)
        m.set(x, 0);
    CHECK(squared_distance_field(m) == brute_force(m));
}

TEST_CASE("tolerance gate floors the squared tolerance") {
    CHECK(squared_tolerance_gate(2.0, 32, 32) == 4);
    CHECK(squared_tolerance_gate(1.5, 32, 32) == 2);
    CHECK(squared_tolerance_gate(0.0, 32, 32) == 0);
    // huge tolerances clamp to the canvas diagonal, below kUnreachable
    CHECK(squared_tolerance_gate(1e9, 32, 32) == max_canvas_dist_sq(32, 32));
    CHECK_THROWS_AS(squared_tolerance_gate(-1.0, 32, 32), ParamError);
}
