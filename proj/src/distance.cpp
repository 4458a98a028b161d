#include "ped/distance.hpp"

#include <algorithm>
#include <cmath>

namespace ped {

namespace {

// Vertical run distances: g[x,y] = distance along the column to the nearest
// set pixel, or kColInf when the column holds none.
constexpr std::int64_t kColInf = INT64_C(1) << 29; // (2*kColInf)^2 fits int64

} // namespace

std::vector<std::int64_t> squared_distance_field(const BoundaryMap& src) {
    const int w = src.width;
    const int h = src.height;
    std::vector<std::int64_t> g(static_cast<std::size_t>(w) * h);
    std::vector<std::int64_t> dist(static_cast<std::size_t>(w) * h, kUnreachable);
    if (w == 0 || h == 0)
        return dist;

    // Phase 1: per-column scans.
    for (int x = 0; x < w; ++x) {
        g[x] = src.bits[x] ? 0 : kColInf;
        for (int y = 1; y < h; ++y) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            g[i] = src.bits[i] ? 0 : std::min(kColInf, g[i - w] + 1);
        }
        for (int y = h - 2; y >= 0; --y) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            g[i] = std::min(g[i], g[i + w] + 1);
        }
    }

    // Phase 2: per-row lower envelope of f(x, i) = (x-i)^2 + g(i)^2.
    std::vector<int> s(static_cast<std::size_t>(w));
    std::vector<int> t(static_cast<std::size_t>(w));
    for (int y = 0; y < h; ++y) {
        const std::int64_t* gy = g.data() + static_cast<std::size_t>(y) * w;
        std::int64_t* dy = dist.data() + static_cast<std::size_t>(y) * w;

        auto f = [&](std::int64_t x, std::int64_t i) {
            const std::int64_t d = x - i;
            return d * d + gy[i] * gy[i];
        };
        // First row position where parabola u beats parabola i (u > i).
        auto sep = [&](std::int64_t i, std::int64_t u) {
            return (u * u - i * i + gy[u] * gy[u] - gy[i] * gy[i]) / (2 * (u - i));
        };

        int q = 0;
        s[0] = 0;
        t[0] = 0;
        for (int u = 1; u < w; ++u) {
            while (q >= 0 && f(t[q], s[q]) > f(t[q], u))
                --q;
            if (q < 0) {
                q = 0;
                s[0] = u;
                t[0] = 0;
            } else {
                const std::int64_t wpos = 1 + sep(s[q], u);
                if (wpos < w) {
                    ++q;
                    s[q] = u;
                    t[q] = static_cast<int>(wpos);
                }
            }
        }
        for (int u = w - 1; u >= 0; --u) {
            const std::int64_t d = f(u, s[q]);
            dy[u] = (gy[s[q]] >= kColInf) ? kUnreachable : d;
            if (u == t[q])
                --q;
        }
    }
    return dist;
}

std::int64_t squared_tolerance_gate(double tol, int width, int height) {
    if (tol < 0.0)
        throw ParamError("tolerance must be nonnegative");
    const double t2 = tol * tol;
    const std::int64_t cap = max_canvas_dist_sq(width, height);
    if (t2 >= static_cast<double>(cap))
        return cap;
    return static_cast<std::int64_t>(std::floor(t2 + 1e-9));
}

} // namespace ped
