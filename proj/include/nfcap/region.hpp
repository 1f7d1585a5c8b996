// SPDX-License-Identifier: Apache-2.0
//
// nfcap: capacity of near-field line-of-sight multiuser channels
// Copyright (C) 2026 The nfcap authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef NFCAP_REGION_HPP
#define NFCAP_REGION_HPP

#include "types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace nfcap
{
    enum class RegionKind
    {
        pentagon,
        rectangle,
        hull
    };

    inline const char *to_string(RegionKind k)
    {
        switch (k)
        {
        case RegionKind::pentagon:
            return "pentagon";
        case RegionKind::rectangle:
            return "rectangle";
        default:
            return "hull";
        }
    }

    // Two-user rate region as a convex polygon.
    // Vertices run counter-clockwise starting at the origin; the closing edge back to (0,0) is implicit.
    struct RateRegion
    {
        std::vector<RatePoint> vertices;
        RegionKind kind = RegionKind::hull;
        std::vector<RatePoint> time_sharing; // points on the sum-rate face (MAC only)

        // Point inside or on the boundary, up to tol.
        bool contains(const RatePoint &p, double tol = 1e-9) const
        {
            if (p.rates.size() != 2)
                return false;
            if (p[0] < -tol || p[1] < -tol)
                return false;
            const std::size_t n = vertices.size();
            if (n < 3)
                return false;
            for (std::size_t i = 0; i < n; ++i)
            {
                const RatePoint &a = vertices[i], &b = vertices[(i + 1) % n];
                const double ex = b[0] - a[0], ey = b[1] - a[1];
                const double len = std::hypot(ex, ey);
                if (len == 0.0)
                    continue;
                const double cross = (ex * (p[1] - a[1]) - ey * (p[0] - a[0])) / len;
                if (cross < -tol)
                    return false;
            }
            return true;
        }

        bool is_convex(double tol = 1e-12) const
        {
            const std::size_t n = vertices.size();
            if (n < 3)
                return false;
            for (std::size_t i = 0; i < n; ++i)
            {
                const RatePoint &a = vertices[i], &b = vertices[(i + 1) % n], &c = vertices[(i + 2) % n];
                const double cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
                if (cross < -tol)
                    return false;
            }
            return true;
        }

        double max_rate(std::size_t user) const
        {
            double m = 0.0;
            for (const auto &v : vertices)
                m = std::max(m, v[user]);
            return m;
        }
    };

    // Counter-clockwise convex hull (monotone chain), collinear points dropped.
    inline std::vector<RatePoint> convex_hull(std::vector<RatePoint> pts, double tol = 1e-12)
    {
        std::sort(pts.begin(), pts.end(), [](const RatePoint &a, const RatePoint &b)
                  { return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]); });
        pts.erase(std::unique(pts.begin(), pts.end(), [](const RatePoint &a, const RatePoint &b)
                              { return a[0] == b[0] && a[1] == b[1]; }),
                  pts.end());
        if (pts.size() < 3)
            return pts;
        auto cross = [](const RatePoint &o, const RatePoint &a, const RatePoint &b)
        { return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]); };
        std::vector<RatePoint> h(2 * pts.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i < pts.size(); ++i)
        {
            while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= tol)
                --k;
            h[k++] = pts[i];
        }
        for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i)
        {
            while (k >= t && cross(h[k - 2], h[k - 1], pts[i - 1]) <= tol)
                --k;
            h[k++] = pts[i - 1];
        }
        h.resize(k - 1);
        return h;
    }

    // Comprehensive convex region spanned by the given achievable points: hull of the points, their
    // axis projections and the origin, rotated so the origin comes first.
    inline std::vector<RatePoint> comprehensive_hull(const std::vector<RatePoint> &pts)
    {
        std::vector<RatePoint> all;
        all.reserve(3 * pts.size() + 1);
        all.push_back({{0.0, 0.0}});
        for (const auto &p : pts)
        {
            all.push_back(p);
            all.push_back({{p[0], 0.0}});
            all.push_back({{0.0, p[1]}});
        }
        auto h = convex_hull(std::move(all));
        auto origin = std::find_if(h.begin(), h.end(), [](const RatePoint &p)
                                   { return p[0] == 0.0 && p[1] == 0.0; });
        if (origin != h.end())
            std::rotate(h.begin(), origin, h.end());
        return h;
    }
}

#endif
