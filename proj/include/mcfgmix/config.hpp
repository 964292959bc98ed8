#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "excursions.hpp"
#include "geometry.hpp"
#include "o2.hpp"

namespace mcfgmix {

// A pair of strings whose concatenation is balanced, viewed as two path
// shapes: the first-path shape A runs from the origin to the displacement
// point, the second-path shape B from the origin to its negative. The
// translate A(k) starts at the k-th multiple of the displacement; B(k)
// starts there and ends at the (k-1)-th.

struct configuration {
    o2_string x, y;
    displacement_t d;  // displacement of x

    configuration(o2_string x_, o2_string y_) : x(std::move(x_)), y(std::move(y_)) {
        d = displacement(x);
        if (!(displacement(y) == -d))
            throw std::invalid_argument("configuration: concatenation is not balanced");
    }

    lattice_path A(int k) const { return {{k * d.i, k * d.j}, x}; }
    lattice_path B(int k) const { return {{k * d.i, k * d.j}, y}; }
};

struct poly_config {
    poly_path a;  // shape of the first path, from (0,0) to d
    poly_path b;  // shape of the second path, from (0,0) to -d
    displacement_t d;

    poly_config(poly_path a_, poly_path b_, displacement_t d_)
        : a(std::move(a_)), b(std::move(b_)), d(d_) {}
    explicit poly_config(const configuration& c) : a(c.A(0)), b(c.B(0)), d(c.d) {}

    rpoint p(int k) const { return rpoint{rat(k * d.i), rat(k * d.j)}; }
    poly_path A(int k) const { return a.translated(p(k)); }
    poly_path B(int k) const { return b.translated(p(k)); }
};

// Witness that one of the four splitting conditions holds. The distance
// fields depend on the condition:
//   1: none (the two paths start with complementary steps)
//   2: distances of q on A(0) and on B(1)
//   3: distances of q on A(0) and on A(1), first > second
//   4: distances of q on B(1) and on B(0), first > second
struct split_witness {
    int condition = 0;
    rpoint q;
    rat d_first;
    rat d_second;
};

struct constraint_report {
    std::array<bool, 4> satisfied{true, true, true, true};
    std::array<std::vector<split_witness>, 4> witnesses;
    bool all_satisfied() const {
        return satisfied[0] && satisfied[1] && satisfied[2] && satisfied[3];
    }
};

/// Evaluates the four constraints:
///   (i)   the two paths do not start in exactly opposite directions;
///   (ii)  A(0) and B(1) share only their common endpoints;
///   (iii) no common point of A(0) and A(1) other than their joint is
///         reached later on A(0) than on A(1);
///   (iv)  mirror of (iii) for B(1) and B(0).
/// Witnesses are attached to every violated constraint, least path
/// distances first.
inline constraint_report check_constraints(const poly_config& cfg) {
    if (displacement_norm2(cfg.d) == 0)
        throw std::invalid_argument("check_constraints: displacement must be nonzero");
    if (cfg.a.segment_count() == 0 || cfg.b.segment_count() == 0)
        throw std::invalid_argument("check_constraints: both paths must be nonempty");

    constraint_report rep;
    const rpoint p0 = cfg.p(0), p1 = cfg.p(1);

    // (i)
    rpoint da = cfg.a.vertices[1] - cfg.a.vertices[0];
    rpoint db = cfg.b.vertices[1] - cfg.b.vertices[0];
    if (cross(da, db) == 0 && dot(da, db) < 0) {
        rep.satisfied[0] = false;
        rep.witnesses[0].push_back({1, p0, 0, 0});
    }

    // (ii)
    {
        auto inter = intersections(cfg.A(0), cfg.B(1));
        for (const auto& pt : inter.points) {
            if (pt.q == p0 || pt.q == p1) continue;
            rep.satisfied[1] = false;
            rep.witnesses[1].push_back({2, pt.q, pt.d_on_first.front(), pt.d_on_second.front()});
        }
    }

    // (iii) and (iv): report the least offending distance pair per point
    auto later_than = [](const std::vector<rat>& firsts, const std::vector<rat>& seconds,
                         rat& out_first, rat& out_second) {
        for (const auto& f : firsts)
            for (const auto& s : seconds)
                if (f > s) {
                    out_first = f;
                    out_second = s;
                    return true;
                }
        return false;
    };
    {
        auto inter = intersections(cfg.A(0), cfg.A(1));
        for (const auto& pt : inter.points) {
            if (pt.q == p1) continue;
            rat f, s;
            if (later_than(pt.d_on_first, pt.d_on_second, f, s)) {
                rep.satisfied[2] = false;
                rep.witnesses[2].push_back({3, pt.q, f, s});
            }
        }
    }
    {
        auto inter = intersections(cfg.B(1), cfg.B(0));
        for (const auto& pt : inter.points) {
            if (pt.q == p0) continue;
            rat f, s;
            if (later_than(pt.d_on_first, pt.d_on_second, f, s)) {
                rep.satisfied[3] = false;
                rep.witnesses[3].push_back({4, pt.q, f, s});
            }
        }
    }
    for (auto& ws : rep.witnesses)
        std::sort(ws.begin(), ws.end(), [](const split_witness& l, const split_witness& r) {
            if (l.d_first != r.d_first) return l.d_first < r.d_first;
            if (l.d_second != r.d_second) return l.d_second < r.d_second;
            return lex_less(l.q, r.q);
        });
    return rep;
}

inline constraint_report check_constraints(const configuration& cfg) {
    return check_constraints(poly_config(cfg));
}

/// The violated constraints, one least witness each, in condition order.
/// Empty exactly when all four constraints hold.
inline std::vector<split_witness> four_split_conditions(const poly_config& cfg) {
    auto rep = check_constraints(cfg);
    std::vector<split_witness> out;
    for (int c = 0; c < 4; ++c)
        if (!rep.satisfied[c]) out.push_back(rep.witnesses[c].front());
    return out;
}

inline std::vector<split_witness> four_split_conditions(const configuration& cfg) {
    return four_split_conditions(poly_config(cfg));
}

}  // namespace mcfgmix
