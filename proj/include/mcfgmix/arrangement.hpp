#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "excursions.hpp"
#include "geometry.hpp"

namespace mcfgmix {

// Planar subdivision induced by a set of segments: segments are split at
// every mutual intersection, identical fragments are merged, and faces
// are traced by angular sweep. Face areas are exact. A self-overlapping
// curve therefore contributes every enclosed region once, with no signed
// cancellation.

struct arrangement {
    std::vector<rpoint> verts;
    std::vector<std::pair<int, int>> edges;          // undirected, deduplicated
    std::vector<std::vector<int>> walks;             // faces as closed vertex walks
    std::vector<rat> twice_areas;                    // signed, parallel to walks

    rat bounded_area() const {
        rat total = 0;
        for (const auto& a2 : twice_areas)
            if (a2 > 0) total += a2;
        return total / 2;
    }
};

namespace detail {

// CCW order of direction vectors starting from the positive x axis.
inline bool angle_less(const rpoint& a, const rpoint& b) {
    auto half = [](const rpoint& v) { return (v.y < 0 || (v.y == 0 && v.x < 0)) ? 1 : 0; };
    int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    return cross(a, b) > 0;
}

}  // namespace detail

inline arrangement build_arrangement(const std::vector<std::pair<rpoint, rpoint>>& segments) {
    arrangement arr;
    std::vector<std::pair<rpoint, rpoint>> segs;
    for (const auto& s : segments)
        if (!(s.first == s.second)) segs.push_back(s);
    if (segs.empty()) return arr;

    // split every segment at every point shared with another segment
    std::map<rpoint, int, rpoint_less> vid;
    auto intern = [&](const rpoint& p) {
        auto [it, fresh] = vid.try_emplace(p, static_cast<int>(arr.verts.size()));
        if (fresh) arr.verts.push_back(p);
        return it->second;
    };
    std::set<std::pair<int, int>> edge_set;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const rpoint& p = segs[i].first;
        const rpoint& q = segs[i].second;
        rpoint dir = q - p;
        rat dd = dot(dir, dir);
        std::vector<rat> cuts{rat(0), rat(1)};
        for (std::size_t j = 0; j < segs.size(); ++j) {
            if (i == j) continue;
            auto hits = intersect_segments(p, q, segs[j].first, segs[j].second);
            for (const auto& pt : hits.points) cuts.push_back(dot(pt - p, dir) / dd);
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
            auto at = [&](const rat& t) { return rpoint{p.x + t * dir.x, p.y + t * dir.y}; };
            int u = intern(at(cuts[c]));
            int v = intern(at(cuts[c + 1]));
            if (u == v) continue;
            edge_set.insert({std::min(u, v), std::max(u, v)});
        }
    }
    arr.edges.assign(edge_set.begin(), edge_set.end());

    // half-edge structure; h and h^1 are twins
    const int m = static_cast<int>(arr.edges.size());
    std::vector<std::vector<int>> outgoing(arr.verts.size());
    auto tail = [&](int h) { return h % 2 == 0 ? arr.edges[h / 2].first : arr.edges[h / 2].second; };
    auto head = [&](int h) { return h % 2 == 0 ? arr.edges[h / 2].second : arr.edges[h / 2].first; };
    for (int h = 0; h < 2 * m; ++h) outgoing[tail(h)].push_back(h);
    for (auto& out : outgoing)
        std::sort(out.begin(), out.end(), [&](int ha, int hb) {
            rpoint da = arr.verts[head(ha)] - arr.verts[tail(ha)];
            rpoint db = arr.verts[head(hb)] - arr.verts[tail(hb)];
            return detail::angle_less(da, db);
        });

    std::vector<int> next(2 * m, -1);
    for (int h = 0; h < 2 * m; ++h) {
        int t = h ^ 1;
        const auto& out = outgoing[tail(t)];
        auto it = std::find(out.begin(), out.end(), t);
        next[h] = out[(static_cast<std::size_t>(it - out.begin()) + 1) % out.size()];
    }

    std::vector<char> done(2 * m, 0);
    for (int h0 = 0; h0 < 2 * m; ++h0) {
        if (done[h0]) continue;
        std::vector<int> walk;
        rat a2 = 0;
        int h = h0;
        do {
            done[h] = 1;
            walk.push_back(tail(h));
            a2 += cross(arr.verts[tail(h)], arr.verts[head(h)]);
            h = next[h];
        } while (h != h0);
        arr.walks.push_back(std::move(walk));
        arr.twice_areas.push_back(std::move(a2));
    }
    return arr;
}

/// Winding number of a closed polygonal walk around a point not on it.
inline int winding_number(const std::vector<rpoint>& walk, const rpoint& p) {
    int wn = 0;
    for (std::size_t i = 0; i < walk.size(); ++i) {
        const rpoint& u = walk[i];
        const rpoint& v = walk[(i + 1) % walk.size()];
        if (u.y <= p.y) {
            if (v.y > p.y && cross(v - u, p - u) > 0) ++wn;
        } else {
            if (v.y <= p.y && cross(v - u, p - u) < 0) --wn;
        }
    }
    return wn;
}

inline bool point_on_segment(const rpoint& p, const rpoint& a, const rpoint& b) {
    return cross(b - a, p - a) == 0 && dot(p - a, b - p) >= 0;
}

namespace detail {

inline std::vector<std::pair<rpoint, rpoint>> excursion_curve(const poly_path& p, const excursion& e) {
    poly_path chain = subpath(p, e.d1, e.d2);
    std::vector<std::pair<rpoint, rpoint>> segs;
    for (std::size_t i = 0; i + 1 < chain.vertices.size(); ++i)
        segs.push_back({chain.vertices[i], chain.vertices[i + 1]});
    if (!(e.q2 == e.q1)) segs.push_back({e.q2, e.q1});
    return segs;
}

}  // namespace detail

/// Total area of all regions enclosed between the excursion's subpath and
/// the straight segment closing it, each region counted once.
inline rat excursion_area(const poly_path& p, const excursion& e) {
    auto segs = detail::excursion_curve(p, e);
    if (segs.empty()) return 0;
    return build_arrangement(segs).bounded_area();
}

/// True when some whole multiple of the displacement lies strictly inside
/// one of the excursion's regions; boundary contact does not count.
inline bool is_filled(const poly_path& p, const excursion& e, const displacement_t& d) {
    if (displacement_norm2(d) == 0)
        throw std::invalid_argument("is_filled requires a nonzero displacement");
    auto segs = detail::excursion_curve(p, e);
    if (segs.empty()) return false;
    arrangement arr = build_arrangement(segs);

    rat minx = arr.verts[0].x, maxx = arr.verts[0].x, miny = arr.verts[0].y, maxy = arr.verts[0].y;
    for (const auto& v : arr.verts) {
        minx = std::min(minx, v.x);
        maxx = std::max(maxx, v.x);
        miny = std::min(miny, v.y);
        maxy = std::max(maxy, v.y);
    }
    auto floor_div = [](const rat& r) {
        bigint n = numerator(r), dd = denominator(r);
        bigint q = n / dd;
        if (n % dd != 0 && (n < 0) != (dd < 0)) --q;
        return q;
    };
    // candidate multiples k with k*d inside the bounding box
    bigint klo = 0, khi = -1;
    bool have = false, empty = false;
    auto clamp_axis = [&](std::int64_t step, const rat& lo, const rat& hi) {
        if (step == 0) {
            if (lo > 0 || hi < 0) empty = true;  // box misses the axis value 0
            return;
        }
        rat a = lo / step, b = hi / step;
        if (step < 0) std::swap(a, b);
        bigint l = -floor_div(-a);  // ceil
        bigint h = floor_div(b);
        if (!have) {
            klo = l;
            khi = h;
            have = true;
        } else {
            klo = std::max(klo, l);
            khi = std::min(khi, h);
        }
    };
    clamp_axis(d.i, minx, maxx);
    clamp_axis(d.j, miny, maxy);
    if (empty || !have || klo > khi) return false;

    std::vector<std::vector<rpoint>> pos_faces;
    for (std::size_t f = 0; f < arr.walks.size(); ++f) {
        if (arr.twice_areas[f] <= 0) continue;
        std::vector<rpoint> poly;
        poly.reserve(arr.walks[f].size());
        for (int v : arr.walks[f]) poly.push_back(arr.verts[v]);
        pos_faces.push_back(std::move(poly));
    }
    for (bigint k = klo; k <= khi; ++k) {
        rpoint pk{rat(k * d.i), rat(k * d.j)};
        bool on_edge = false;
        for (const auto& [u, v] : arr.edges)
            if (point_on_segment(pk, arr.verts[u], arr.verts[v])) {
                on_edge = true;
                break;
            }
        if (on_edge) continue;
        for (const auto& poly : pos_faces)
            if (winding_number(poly, pk) != 0) return true;
    }
    return false;
}

}  // namespace mcfgmix
