#pragma once

#include <stdexcept>
#include <vector>

#include "geometry.hpp"

namespace mcfgmix {

// Lines perpendicular to the displacement direction, halfway between
// consecutive multiples of the displacement, and the contact structure of
// a path with them. "Right" of a line is the side of the larger multiple.
//
// Everything is decided on the doubled projection proj(Q) = 2 (Q . d):
// line k is { Q : proj(Q) == (2k+1) |d|^2 }, which keeps grid paths in
// integer arithmetic.

inline rat line_projection(const rpoint& q, const displacement_t& d) {
    return 2 * (q.x * d.i + q.y * d.j);
}

inline std::int64_t displacement_norm2(const displacement_t& d) { return d.i * d.i + d.j * d.j; }

inline rat line_constant(int k, const displacement_t& d) {
    return rat((2 * static_cast<std::int64_t>(k) + 1) * displacement_norm2(d));
}

/// Sign of proj(q) minus the line constant: +1 right, -1 left, 0 on line.
inline int line_side(const rpoint& q, int k, const displacement_t& d) {
    rat s = line_projection(q, d) - line_constant(k, d);
    if (s > 0) return 1;
    if (s < 0) return -1;
    return 0;
}

// A maximal stretch of the path lying on a given line: a single point or
// a run of on-line vertices/edges. `before`/`after` are the strict sides
// just before entry and just after exit (0 when the path starts or ends
// inside the contact).
struct line_contact {
    rpoint entry, exit;
    rat d_entry, d_exit;
    int before = 0, after = 0;

    bool is_crossing() const { return before * after < 0; }
    bool is_touch() const { return before * after > 0; }
};

namespace detail {

/// Contacts of a path with the level set { proj == c } for proj as above.
inline std::vector<line_contact> contacts_with_level(const poly_path& p, const displacement_t& d,
                                                     const rat& c) {
    std::vector<line_contact> out;
    if (displacement_norm2(d) == 0)
        throw std::invalid_argument("line geometry requires a nonzero displacement");
    const auto& vs = p.vertices;
    std::vector<rat> vd = p.vertex_distances();

    auto sign_of = [&](const rpoint& q) {
        rat s = line_projection(q, d) - c;
        return s > 0 ? 1 : (s < 0 ? -1 : 0);
    };

    int last_sign = 0;      // most recent strict side
    bool in_run = false;
    line_contact cur;

    auto open_run = [&](const rpoint& q, const rat& dist) {
        cur = line_contact{};
        cur.entry = q;
        cur.d_entry = dist;
        cur.before = last_sign;
        in_run = true;
    };
    auto close_run = [&](const rpoint& q, const rat& dist, int after) {
        cur.exit = q;
        cur.d_exit = dist;
        cur.after = after;
        out.push_back(cur);
        in_run = false;
    };

    int s0 = sign_of(vs[0]);
    if (s0 == 0) open_run(vs[0], vd[0]);
    else last_sign = s0;

    for (std::size_t i = 0; i + 1 < vs.size(); ++i) {
        int su = sign_of(vs[i]);
        int sv = sign_of(vs[i + 1]);
        if (sv == 0) {
            if (!in_run) open_run(vs[i + 1], vd[i + 1]);
            continue;
        }
        if (su == 0) {
            // leaving the line at vertex i
            close_run(vs[i], vd[i], sv);
            last_sign = sv;
            continue;
        }
        if (su * sv < 0) {
            // transversal crossing inside the edge
            rat pu = line_projection(vs[i], d) - c;
            rat pv = line_projection(vs[i + 1], d) - c;
            rat t = pu / (pu - pv);
            rpoint dir = vs[i + 1] - vs[i];
            rpoint q{vs[i].x + t * dir.x, vs[i].y + t * dir.y};
            rat dist = vd[i] + t * l1_norm(dir);
            open_run(q, dist);
            close_run(q, dist, sv);
        }
        last_sign = sv;
    }
    if (in_run) close_run(vs.back(), vd.back(), 0);
    return out;
}

}  // namespace detail

inline std::vector<line_contact> line_contacts(const poly_path& p, int k, const displacement_t& d) {
    return detail::contacts_with_level(p, d, line_constant(k, d));
}

enum class crossing_direction { right_to_left, left_to_right };

struct crossing {
    int k = 0;
    rpoint entry, exit;  // equal unless the path runs along the line
    rat d_entry, d_exit;
    crossing_direction direction = crossing_direction::left_to_right;
    bool on_line_segment = false;
};

/// Contacts whose sides strictly differ, in path order.
inline std::vector<crossing> crossings_of_line(const poly_path& p, int k, const displacement_t& d) {
    std::vector<crossing> out;
    for (const auto& ct : line_contacts(p, k, d)) {
        if (!ct.is_crossing()) continue;
        crossing cr;
        cr.k = k;
        cr.entry = ct.entry;
        cr.exit = ct.exit;
        cr.d_entry = ct.d_entry;
        cr.d_exit = ct.d_exit;
        cr.direction = ct.before > 0 ? crossing_direction::right_to_left
                                     : crossing_direction::left_to_right;
        cr.on_line_segment = !(ct.entry == ct.exit);
        out.push_back(std::move(cr));
    }
    return out;
}

enum class excursion_side { right, left };

// A pair of contact points on one line between which the path leaves
// toward and returns from the same side. `zero_area` marks a single
// touch-without-cross contact.
struct excursion {
    int k = 0;
    excursion_side side = excursion_side::right;
    rpoint q1, q2;
    rat d1, d2;
    bool zero_area = false;
};

/// All excursions of the path at line k: every pair of contacts (including
/// a contact with itself) whose entry comes from and whose exit returns to
/// the same side. Nested and overlapping excursions are all reported.
inline std::vector<excursion> find_excursions(const poly_path& p, int k, const displacement_t& d) {
    auto contacts = line_contacts(p, k, d);
    std::vector<excursion> out;
    for (int side : {+1, -1})
        for (std::size_t i = 0; i < contacts.size(); ++i) {
            if (contacts[i].before != side) continue;
            for (std::size_t j = i; j < contacts.size(); ++j) {
                if (contacts[j].after != side) continue;
                excursion e;
                e.k = k;
                e.side = side > 0 ? excursion_side::right : excursion_side::left;
                e.q1 = contacts[i].entry;
                e.q2 = contacts[j].exit;
                e.d1 = contacts[i].d_entry;
                e.d2 = contacts[j].d_exit;
                e.zero_area = (i == j) && contacts[i].is_touch();
                out.push_back(std::move(e));
            }
        }
    std::sort(out.begin(), out.end(), [](const excursion& a, const excursion& b) {
        if (a.d1 != b.d1) return a.d1 < b.d1;
        if (a.d2 != b.d2) return a.d2 < b.d2;
        return a.side == excursion_side::right && b.side == excursion_side::left;
    });
    return out;
}

}  // namespace mcfgmix
