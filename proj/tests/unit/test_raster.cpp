#include <doctest.h>

#include "ped/raster.hpp"
#include "ped/rng.hpp"

using namespace ped;

namespace {

BoundaryMap map_with(int w, int h, std::initializer_list<std::pair<int, int>> pixels) {
    BoundaryMap m(w, h);
    for (const auto& [x, y] : pixels)
        m.set(x, y);
    return m;
}

} // namespace

TEST_CASE("bbox_of single pixel") {
    const Box b = bbox_of(map_with(8, 8, {{3, 5}}));
    CHECK(b == Box{3, 5, 4, 6});
}

TEST_CASE("bbox_of full frame") {
    BoundaryMap m(8, 8);
    std::fill(m.bits.begin(), m.bits.end(), 1);
    CHECK(bbox_of(m) == Box{0, 0, 8, 8});
}

TEST_CASE("bbox_of two pixels, exhaustive scan oracle") {
    const BoundaryMap m = map_with(8, 8, {{1, 1}, {4, 2}});
    CHECK(bbox_of(m) == Box{1, 1, 5, 3});

    // oracle: min/max over random masks
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        BoundaryMap r(11, 9);
        for (auto& b : r.bits)
            b = rng.next_below(4) == 0 ? 1 : 0;
        if (r.empty()) {
            CHECK_THROWS_AS(bbox_of(r), EmptyMaskError);
            continue;
        }
        int x0 = 11, y0 = 9, x1 = 0, y1 = 0;
        for (int y = 0; y < 9; ++y)
            for (int x = 0; x < 11; ++x)
                if (r.at(x, y)) {
                    x0 = std::min(x0, x);
                    y0 = std::min(y0, y);
                    x1 = std::max(x1, x + 1);
                    y1 = std::max(y1, y + 1);
                }
        CHECK(bbox_of(r) == Box{x0, y0, x1, y1});
    }
}

TEST_CASE("bbox_of empty mask throws") {
    CHECK_THROWS_AS(bbox_of(BoundaryMap(4, 4)), EmptyMaskError);
}

TEST_CASE("embed places crop inside box") {
    ProbMap crop(1, 2, 2);
    std::fill(crop.values.begin(), crop.values.end(), 1.0f);
    const ProbMap canvas = embed(crop, Box{0, 0, 2, 2}, 4, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x)
            CHECK(canvas.at(0, x, y) == (x < 2 && y < 2 ? 1.0f : 0.0f));
}

TEST_CASE("embed identity when crop covers canvas") {
    ProbMap crop(1, 3, 2);
    for (std::size_t i = 0; i < crop.values.size(); ++i)
        crop.values[i] = 0.1f * static_cast<float>(i);
    const ProbMap canvas = embed(crop, Box{0, 0, 3, 2}, 3, 2);
    CHECK(canvas.values == crop.values);
}

TEST_CASE("embed single value") {
    ProbMap crop(1, 1, 1);
    crop.values[0] = 0.7f;
    const ProbMap canvas = embed(crop, Box{3, 3, 4, 4}, 4, 4);
    CHECK(canvas.at(0, 3, 3) == 0.7f);
    CHECK(canvas.at(0, 0, 0) == 0.0f);
}

TEST_CASE("embed shape errors") {
    ProbMap crop(1, 2, 2);
    CHECK_THROWS_AS(embed(crop, Box{0, 0, 3, 2}, 4, 4), ShapeError);
    CHECK_THROWS_AS(embed(crop, Box{3, 3, 5, 5}, 4, 4), ShapeError);
}

TEST_CASE("embed then restrict recovers crop") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int w = 2 + static_cast<int>(rng.next_below(5));
        const int h = 2 + static_cast<int>(rng.next_below(5));
        ProbMap crop(1, w, h);
        for (auto& v : crop.values)
            v = static_cast<float>(rng.next_double());
        const int x0 = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(12 - w)));
        const int y0 = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(12 - h)));
        const Box box{x0, y0, x0 + w, y0 + h};
        const ProbMap canvas = embed(crop, box, 12, 12);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                CHECK(canvas.at(0, box.x0 + x, box.y0 + y) == crop.at(0, x, y));
    }
}

TEST_CASE("bbox of embedded support is the crop support bbox translated by the box origin") {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        ProbMap crop(1, 5, 4);
        for (auto& v : crop.values)
            v = rng.next_below(3) == 0 ? 1.0f : 0.0f;
        BoundaryMap crop_support(5, 4);
        for (std::size_t i = 0; i < crop.values.size(); ++i)
            crop_support.bits[i] = crop.values[i] > 0.0f;
        if (crop_support.empty())
            continue;
        const Box box{3, 2, 8, 6};
        const ProbMap canvas = embed(crop, box, 12, 10);
        BoundaryMap canvas_support(12, 10);
        for (std::size_t i = 0; i < canvas.values.size(); ++i)
            canvas_support.bits[i] = canvas.values[i] > 0.0f;
        const Box inner = bbox_of(crop_support);
        const Box outer = bbox_of(canvas_support);
        CHECK(outer == Box{inner.x0 + box.x0, inner.y0 + box.y0, inner.x1 + box.x0,
                           inner.y1 + box.y0});
    }
}

TEST_CASE("binarize thresholds with >= convention") {
    ProbMap m(1, 2, 1);
    m.values = {0.4f, 0.6f};
    const BoundaryMap b = binarize(m, 0.5);
    CHECK_FALSE(b.at(0, 0));
    CHECK(b.at(1, 0));

    ProbMap exact(1, 1, 1);
    exact.values = {0.5f};
    CHECK(binarize(exact, 0.5).at(0, 0)); // closed on the left

    ProbMap zeros(1, 3, 3);
    CHECK(binarize(zeros, 0.5).empty());
}

TEST_CASE("binarize rejects theta outside (0,1)") {
    ProbMap m(1, 1, 1);
    CHECK_THROWS_AS(binarize(m, 0.0), ParamError);
    CHECK_THROWS_AS(binarize(m, 1.0), ParamError);
    CHECK_THROWS_AS(binarize(m, -0.2), ParamError);
}

TEST_CASE("binarize is monotone in theta") {
    Rng rng(3);
    ProbMap m(1, 9, 9);
    for (auto& v : m.values)
        v = static_cast<float>(rng.next_double());
    const BoundaryMap lo = binarize(m, 0.3);
    const BoundaryMap hi = binarize(m, 0.7);
    for (std::size_t i = 0; i < lo.bits.size(); ++i)
        if (hi.bits[i])
            CHECK(lo.bits[i]);
}

TEST_CASE("category set lookups and validation") {
    const CategorySet cats({{1, "sky", CategoryKind::Stuff}, {7, "car", CategoryKind::Instance}});
    CHECK(cats.size() == 2);
    CHECK(cats.stuff_count() == 1);
    CHECK(cats.instance_count() == 1);
    CHECK(cats.index_of(7) == 1);
    CHECK_FALSE(cats.contains(2));
    CHECK_THROWS_AS(cats.index_of(2), LabelError);
    CHECK_THROWS_AS(CategorySet({{1, "a", CategoryKind::Stuff}, {1, "b", CategoryKind::Stuff}}),
                    ParamError);
}
