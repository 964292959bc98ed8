#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "o2.hpp"
#include "rational.hpp"
#include "symbols.hpp"

namespace mcfgmix {

// Paths of strings on the unit grid, and the exact-rational polyline
// machinery everything downstream (lines, crossings, excursions,
// truncation) is built on. Path-distance is arc length in the L1 metric:
// it coincides with the step count on grid paths, and stays rational on
// the diagonal shortcut segments that truncation introduces.

struct ipoint {
    std::int64_t x = 0;
    std::int64_t y = 0;
    friend bool operator==(const ipoint&, const ipoint&) = default;
};

struct rpoint {
    rat x;
    rat y;
    rpoint() = default;
    rpoint(rat xx, rat yy) : x(std::move(xx)), y(std::move(yy)) {}
    rpoint(const ipoint& p) : x(p.x), y(p.y) {}
    friend bool operator==(const rpoint& a, const rpoint& b) { return a.x == b.x && a.y == b.y; }
    rpoint operator+(const rpoint& o) const { return {x + o.x, y + o.y}; }
    rpoint operator-(const rpoint& o) const { return {x - o.x, y - o.y}; }
};

inline rat cross(const rpoint& a, const rpoint& b) { return a.x * b.y - a.y * b.x; }
inline rat dot(const rpoint& a, const rpoint& b) { return a.x * b.x + a.y * b.y; }
inline rat l1_norm(const rpoint& a) { return abs(a.x) + abs(a.y); }

/// Strict lexicographic point order, used for canonical output ordering.
inline bool lex_less(const rpoint& a, const rpoint& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
}

struct lattice_path {
    ipoint start;
    o2_string steps;

    std::vector<ipoint> points() const {
        std::vector<ipoint> out{start};
        ipoint cur = start;
        for (auto s : steps) {
            switch (s) {
                case o2_symbol::a: ++cur.x; break;
                case o2_symbol::abar: --cur.x; break;
                case o2_symbol::b: ++cur.y; break;
                case o2_symbol::bbar: --cur.y; break;
            }
            out.push_back(cur);
        }
        return out;
    }
    ipoint end() const {
        auto d = displacement(steps);
        return {start.x + d.i, start.y + d.j};
    }
};

inline lattice_path path_of(const o2_string& w, ipoint start = {0, 0}) { return {start, w}; }

inline bool is_closed(const lattice_path& p) { return p.start == p.end(); }

// Polyline over exact rational vertices. Consecutive vertices are
// distinct; a single vertex denotes a degenerate (point) path.
struct poly_path {
    std::vector<rpoint> vertices;

    poly_path() = default;
    explicit poly_path(std::vector<rpoint> vs) : vertices(std::move(vs)) {
        if (vertices.empty()) throw std::invalid_argument("poly_path: needs at least one vertex");
        for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
            if (vertices[i] == vertices[i + 1])
                throw std::invalid_argument("poly_path: repeated consecutive vertex");
    }
    poly_path(const lattice_path& lp) {
        for (const auto& p : lp.points()) vertices.emplace_back(p);
        if (vertices.empty()) throw std::invalid_argument("poly_path: empty lattice path");
    }

    std::size_t segment_count() const { return vertices.empty() ? 0 : vertices.size() - 1; }

    rat total_length() const {
        rat len = 0;
        for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
            len += l1_norm(vertices[i + 1] - vertices[i]);
        return len;
    }

    /// Cumulative path-distance of each vertex.
    std::vector<rat> vertex_distances() const {
        std::vector<rat> out(vertices.size());
        for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
            out[i + 1] = out[i] + l1_norm(vertices[i + 1] - vertices[i]);
        return out;
    }

    rpoint point_at(const rat& d) const {
        if (d < 0) throw std::invalid_argument("point_at: negative distance");
        rat acc = 0;
        for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
            rat len = l1_norm(vertices[i + 1] - vertices[i]);
            if (d <= acc + len) {
                rat t = (d - acc) / len;
                rpoint dir = vertices[i + 1] - vertices[i];
                return {vertices[i].x + t * dir.x, vertices[i].y + t * dir.y};
            }
            acc += len;
        }
        if (d == acc) return vertices.back();
        throw std::invalid_argument("point_at: distance beyond path end");
    }

    poly_path translated(const rpoint& by) const {
        poly_path out = *this;
        for (auto& v : out.vertices) v = v + by;
        return out;
    }
};

/// All path-distances at which the path passes through q (empty when q is
/// not on the path; several values when the path revisits it).
inline std::vector<rat> path_distances_at(const poly_path& p, const rpoint& q) {
    std::vector<rat> out;
    rat acc = 0;
    if (p.vertices.size() == 1) {
        if (p.vertices[0] == q) out.push_back(0);
        return out;
    }
    for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
        const rpoint& u = p.vertices[i];
        const rpoint& v = p.vertices[i + 1];
        rat len = l1_norm(v - u);
        if (cross(v - u, q - u) == 0 && dot(q - u, v - q) >= 0) {
            rat d = acc + l1_norm(q - u);
            if (out.empty() || out.back() != d) out.push_back(d);
        }
        acc += len;
    }
    return out;
}

/// Portion of the path between two distances, re-parameterized to start
/// at zero. d1 == d2 yields a single-point path.
inline poly_path subpath(const poly_path& p, const rat& d1, const rat& d2) {
    if (d1 < 0 || d2 < d1 || d2 > p.total_length())
        throw std::invalid_argument("subpath: distances out of range");
    std::vector<rpoint> vs;
    vs.push_back(p.point_at(d1));
    if (d1 != d2) {
        rat acc = 0;
        for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i) {
            rat len = l1_norm(p.vertices[i + 1] - p.vertices[i]);
            rat vd = acc + len;  // distance of vertex i+1
            if (vd > d1 && vd < d2 && !(p.vertices[i + 1] == vs.back()))
                vs.push_back(p.vertices[i + 1]);
            acc = vd;
        }
        rpoint last = p.point_at(d2);
        if (!(last == vs.back())) vs.push_back(last);
    }
    return poly_path(std::move(vs));
}

// ---------------------------------------------------------------------
// Exact segment and path intersection
// ---------------------------------------------------------------------

struct segment_hits {
    // 0, 1 or 2 points; two points describe the endpoints of a collinear
    // overlap.
    std::vector<rpoint> points;
    bool overlap = false;
};

inline segment_hits intersect_segments(const rpoint& p, const rpoint& q, const rpoint& r,
                                       const rpoint& s) {
    segment_hits out;
    rpoint d1 = q - p, d2 = s - r;
    rat den = cross(d1, d2);
    if (den != 0) {
        rat t = cross(r - p, d2) / den;
        rat u = cross(r - p, d1) / den;
        if (t >= 0 && t <= 1 && u >= 0 && u <= 1)
            out.points.push_back({p.x + t * d1.x, p.y + t * d1.y});
        return out;
    }
    if (cross(r - p, d1) != 0) return out;  // parallel, distinct lines
    // collinear: parameterize r, s on (p, q)
    rat dd = dot(d1, d1);
    if (dd == 0) {
        // p == q degenerate segment
        if (dot(r - p, s - p) <= 0) out.points.push_back(p);
        return out;
    }
    rat tr = dot(r - p, d1) / dd;
    rat ts = dot(s - p, d1) / dd;
    rat lo = std::min(tr, ts), hi = std::max(tr, ts);
    lo = std::max(lo, rat(0));
    hi = std::min(hi, rat(1));
    if (lo > hi) return out;
    auto at = [&](const rat& t) { return rpoint{p.x + t * d1.x, p.y + t * d1.y}; };
    out.points.push_back(at(lo));
    if (lo != hi) {
        out.points.push_back(at(hi));
        out.overlap = true;
    }
    return out;
}

struct intersection_point {
    rpoint q;
    std::vector<rat> d_on_first;
    std::vector<rat> d_on_second;
    bool from_overlap = false;
};

struct path_intersections {
    std::vector<intersection_point> points;
    bool collinear_overlap = false;
};

struct rpoint_less {
    bool operator()(const rpoint& a, const rpoint& b) const { return lex_less(a, b); }
};

/// Every common point of the two paths, annotated with all path-distances
/// on each. Collinear overlaps contribute their endpoints and set the
/// overlap flag.
inline path_intersections intersections(const poly_path& a, const poly_path& b) {
    path_intersections out;
    std::map<rpoint, bool, rpoint_less> seen;  // point -> stems from an overlap
    auto segs = [](const poly_path& p) {
        std::vector<std::pair<rpoint, rpoint>> out_;
        if (p.vertices.size() == 1) out_.push_back({p.vertices[0], p.vertices[0]});
        for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i)
            out_.push_back({p.vertices[i], p.vertices[i + 1]});
        return out_;
    };
    for (const auto& [p, q] : segs(a))
        for (const auto& [r, s] : segs(b)) {
            auto hits = intersect_segments(p, q, r, s);
            if (hits.overlap) out.collinear_overlap = true;
            for (const auto& pt : hits.points) {
                auto [it, fresh] = seen.try_emplace(pt, hits.overlap);
                if (!fresh) it->second = it->second || hits.overlap;
            }
        }
    for (const auto& [q, overlap] : seen) {
        intersection_point ip;
        ip.q = q;
        ip.d_on_first = path_distances_at(a, q);
        ip.d_on_second = path_distances_at(b, q);
        ip.from_overlap = overlap;
        out.points.push_back(std::move(ip));
    }
    std::sort(out.points.begin(), out.points.end(),
              [](const intersection_point& l, const intersection_point& r) {
                  if (l.d_on_first.front() != r.d_on_first.front())
                      return l.d_on_first.front() < r.d_on_first.front();
                  return lex_less(l.q, r.q);
              });
    return out;
}

}  // namespace mcfgmix
