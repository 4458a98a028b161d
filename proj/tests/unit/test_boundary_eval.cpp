#include <doctest.h>

#include <algorithm>

#include "../support/oracles.hpp"
#include "ped/boundary_eval.hpp"
#include "ped/rng.hpp"

using namespace ped;
using ped::testing::naive_accumulate_pr;
using ped::testing::naive_correspond;
using ped::testing::naive_mf_ods;

namespace {

BoundaryMap random_map(Rng& rng, int w, int h, int inv_density) {
    BoundaryMap m(w, h);
    for (auto& b : m.bits)
        b = rng.next_below(static_cast<std::uint64_t>(inv_density)) == 0 ? 1 : 0;
    return m;
}

ProbMap random_probs(Rng& rng, int w, int h) {
    ProbMap m(1, w, h);
    for (auto& v : m.values)
        v = static_cast<float>(rng.next_double());
    return m;
}

} // namespace

TEST_CASE("correspond: identical nonempty maps fully match") {
    Rng rng(5);
    const BoundaryMap m = random_map(rng, 12, 9, 4);
    REQUIRE(m.count() > 0);
    const MatchCounts c = correspond(m, m, 2.0);
    CHECK(c.pred_matched == c.pred_total);
    CHECK(c.gt_matched == c.gt_total);
    CHECK(c.pred_total == m.count());
}

TEST_CASE("correspond: far shift matches nothing") {
    BoundaryMap pred(16, 16), gt(16, 16);
    pred.set(1, 1);
    gt.set(12, 12);
    const MatchCounts c = correspond(pred, gt, 2.0);
    CHECK(c.pred_matched == 0);
    CHECK(c.gt_matched == 0);
    CHECK(c.pred_total == 1);
    CHECK(c.gt_total == 1);
}

TEST_CASE("correspond: one-pixel shift inside tolerance 2") {
    BoundaryMap gt(16, 16), pred(16, 16);
    for (int y = 2; y < 14; ++y)
        gt.set(7, y);
    for (int y = 2; y < 14; ++y)
        pred.set(8, y); // shifted by one column
    const MatchCounts fast = correspond(pred, gt, 2.0);
    CHECK(fast == naive_correspond(pred, gt, 2.0));
    CHECK(fast.pred_matched == fast.pred_total);
    CHECK(fast.gt_matched == fast.gt_total);
}

TEST_CASE("correspond equals all-pairs oracle on random maps") {
    Rng rng(23);
    for (int trial = 0; trial < 80; ++trial) {
        const int w = 4 + static_cast<int>(rng.next_below(20));
        const int h = 4 + static_cast<int>(rng.next_below(20));
        const BoundaryMap pred = random_map(rng, w, h, 5);
        const BoundaryMap gt = random_map(rng, w, h, 5);
        for (double tol : {0.0, 1.0, 1.5, 2.0, 4.0})
            CHECK(correspond(pred, gt, tol) == naive_correspond(pred, gt, tol));
    }
}

TEST_CASE("correspond excludes ignore pixels from all four counts") {
    Rng rng(31);
    const BoundaryMap pred = random_map(rng, 14, 14, 3);
    const BoundaryMap gt = random_map(rng, 14, 14, 3);
    BoundaryMap ignore(14, 14);
    for (int y = 0; y < 14; ++y)
        for (int x = 0; x < 7; ++x)
            ignore.set(x, y);
    const MatchCounts c = correspond(pred, gt, 2.0, &ignore);
    CHECK(c == naive_correspond(pred, gt, 2.0, &ignore));
    // masked pixels cannot act as match targets either: shrink to the
    // unmasked halves and compare
    BoundaryMap pred_half = pred, gt_half = gt;
    for (int y = 0; y < 14; ++y)
        for (int x = 0; x < 7; ++x) {
            pred_half.set(x, y, false);
            gt_half.set(x, y, false);
        }
    CHECK(c == correspond(pred_half, gt_half, 2.0));
}

TEST_CASE("correspond rejects shape mismatch") {
    CHECK_THROWS_AS(correspond(BoundaryMap(3, 3), BoundaryMap(4, 3), 1.0), ShapeError);
}

TEST_CASE("accumulate_pr: perfect prediction gives P=R=1 at every theta") {
    Rng rng(41);
    const BoundaryMap gt = random_map(rng, 20, 20, 4);
    REQUIRE(gt.count() > 0);
    ProbMap pred(1, 20, 20);
    for (std::size_t i = 0; i < gt.bits.size(); ++i)
        pred.values[i] = gt.bits[i] ? 1.0f : 0.0f;
    const auto grid = threshold_grid(99);
    PrAccumulator acc(grid);
    accumulate_pr(pred, gt, grid, 2.0, acc);
    for (const MatchCounts& c : acc.counts) {
        CHECK(precision(c) == 1.0);
        CHECK(recall(c) == 1.0);
    }
    CHECK(acc.images == 1);
}

TEST_CASE("accumulate_pr: empty GT contributes nothing") {
    const auto grid = threshold_grid(9);
    PrAccumulator acc(grid);
    ProbMap pred(1, 8, 8);
    std::fill(pred.values.begin(), pred.values.end(), 0.9f);
    accumulate_pr(pred, BoundaryMap(8, 8), grid, 2.0, acc);
    CHECK(acc.empty());
    CHECK(acc.images == 0);
}

TEST_CASE("accumulate_pr equals naive per-threshold recomputation") {
    Rng rng(53);
    const auto grid = threshold_grid(25);
    for (int trial = 0; trial < 25; ++trial) {
        const ProbMap pred = random_probs(rng, 8, 8);
        const BoundaryMap gt = random_map(rng, 8, 8, 3);
        BoundaryMap ignore = random_map(rng, 8, 8, 6);
        const BoundaryMap* ig = (trial % 2 == 0) ? &ignore : nullptr;

        PrAccumulator fast(grid), naive(grid);
        accumulate_pr(pred, gt, grid, 2.0, fast, ig);
        naive_accumulate_pr(pred, gt, grid, 2.0, naive, ig);
        CHECK(fast.images == naive.images);
        for (std::size_t t = 0; t < grid.size(); ++t)
            CHECK(fast.counts[t] == naive.counts[t]);
    }
}

TEST_CASE("accumulate_pr counts are monotone in theta") {
    Rng rng(67);
    const auto grid = threshold_grid(50);
    PrAccumulator acc(grid);
    for (int i = 0; i < 4; ++i)
        accumulate_pr(random_probs(rng, 16, 16), random_map(rng, 16, 16, 4), grid, 2.0, acc);
    for (std::size_t t = 1; t < grid.size(); ++t) {
        CHECK(acc.counts[t].pred_total <= acc.counts[t - 1].pred_total);
        CHECK(acc.counts[t].pred_matched <= acc.counts[t - 1].pred_matched);
        CHECK(acc.counts[t].gt_matched <= acc.counts[t - 1].gt_matched);
        CHECK(acc.counts[t].gt_total == acc.counts[t - 1].gt_total);
    }
}

TEST_CASE("accumulate_pr rejects grid mismatch") {
    PrAccumulator acc(threshold_grid(9));
    ProbMap pred(1, 4, 4);
    BoundaryMap gt(4, 4);
    gt.set(1, 1);
    CHECK_THROWS_AS(accumulate_pr(pred, gt, threshold_grid(5), 1.0, acc), ParamError);
}

TEST_CASE("accumulator merge is order independent and bit identical") {
    Rng rng(71);
    const auto grid = threshold_grid(30);
    std::vector<PrAccumulator> parts;
    for (int i = 0; i < 6; ++i) {
        PrAccumulator a(grid);
        accumulate_pr(random_probs(rng, 10, 10), random_map(rng, 10, 10, 4), grid, 2.0, a);
        parts.push_back(std::move(a));
    }
    PrAccumulator forward(grid), backward(grid);
    for (const auto& p : parts)
        forward += p;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it)
        backward += *it;
    CHECK(forward.images == backward.images);
    for (std::size_t t = 0; t < grid.size(); ++t)
        CHECK(forward.counts[t] == backward.counts[t]);
    CHECK_THROWS_AS(forward += PrAccumulator(threshold_grid(5)), ParamError);
}

TEST_CASE("mf_ods: perfect accumulator returns 1 at the lowest theta") {
    const auto grid = threshold_grid(99);
    PrAccumulator acc(grid);
    for (auto& c : acc.counts)
        c = MatchCounts{50, 50, 50, 50};
    const OdsResult r = mf_ods(acc);
    CHECK(r.f == 1.0);
    CHECK(r.theta == grid.front());
}

TEST_CASE("mf_ods: no predictions means F = 0") {
    const auto grid = threshold_grid(9);
    PrAccumulator acc(grid);
    for (auto& c : acc.counts)
        c = MatchCounts{0, 0, 40, 0};
    const OdsResult r = mf_ods(acc);
    CHECK(r.f == 0.0);
}

TEST_CASE("mf_ods equals brute force over the grid") {
    Rng rng(83);
    const auto grid = threshold_grid(3);
    for (int trial = 0; trial < 40; ++trial) {
        PrAccumulator acc(grid);
        for (auto& c : acc.counts) {
            c.pred_total = rng.next_below(30);
            c.pred_matched = c.pred_total == 0 ? 0 : rng.next_below(c.pred_total + 1);
            c.gt_total = rng.next_below(30);
            c.gt_matched = c.gt_total == 0 ? 0 : rng.next_below(c.gt_total + 1);
        }
        const OdsResult fast = mf_ods(acc);
        const OdsResult naive = naive_mf_ods(acc);
        CHECK(fast.f == naive.f);
        CHECK(fast.theta == naive.theta);
        for (std::size_t t = 0; t < grid.size(); ++t)
            CHECK(fast.f >= f_measure(precision(acc.counts[t]), recall(acc.counts[t])));
    }
}

TEST_CASE("adding far spurious pixels lowers precision, never raises it") {
    Rng rng(89);
    for (int trial = 0; trial < 20; ++trial) {
        BoundaryMap gt(24, 24);
        for (int x = 4; x < 20; ++x)
            gt.set(x, 6 + static_cast<int>(rng.next_below(4)));
        BoundaryMap pred = gt;
        const MatchCounts before = correspond(pred, gt, 2.0);
        // add pixels strictly beyond the tolerance of every gt pixel
        BoundaryMap extended = pred;
        for (int x = 0; x < 24; ++x)
            extended.set(x, 20);
        const MatchCounts after = correspond(extended, gt, 2.0);
        CHECK(precision(after) < precision(before));
        CHECK(recall(after) >= recall(before));
    }
}

TEST_CASE("adding a true GT pixel to pred never decreases recall") {
    Rng rng(97);
    for (int trial = 0; trial < 20; ++trial) {
        const BoundaryMap gt = random_map(rng, 16, 16, 3);
        if (gt.count() == 0)
            continue;
        BoundaryMap pred = random_map(rng, 16, 16, 6);
        const double r_before = recall(correspond(pred, gt, 1.0));
        // copy one gt pixel into pred
        for (int y = 0; y < 16; ++y)
            for (int x = 0; x < 16; ++x)
                if (gt.at(x, y) && !pred.at(x, y)) {
                    pred.set(x, y);
                    y = 16;
                    break;
                }
        CHECK(recall(correspond(pred, gt, 1.0)) >= r_before);
    }
}

TEST_CASE("accumulator rejects malformed grids") {
    CHECK_THROWS_AS(PrAccumulator({0.5, 0.4}), ParamError);
    CHECK_THROWS_AS(PrAccumulator({0.0, 0.5}), ParamError);
    CHECK_THROWS_AS(PrAccumulator({0.5, 1.0}), ParamError);
    CHECK_NOTHROW(PrAccumulator({0.25, 0.5, 0.75}));
}

TEST_CASE("threshold_grid: 99 thresholds run 0.01 .. 0.99") {
    const auto grid = threshold_grid(99);
    REQUIRE(grid.size() == 99);
    CHECK(grid.front() == doctest::Approx(0.01));
    CHECK(grid.back() == doctest::Approx(0.99));
    CHECK(std::is_sorted(grid.begin(), grid.end()));
}
