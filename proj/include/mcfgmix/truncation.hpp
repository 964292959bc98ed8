#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "arrangement.hpp"
#include "config.hpp"
#include "excursions.hpp"

namespace mcfgmix {

// Excursion removal. A truncation replaces the stretch of a path around
// an excursion by a straight segment on a line m parallel to the
// excursion's line, a small offset toward the excursion's side. The cut
// points are the last contact with m before and the first contact after
// the excursion. Changing a shape changes all of its translates at once.
//
// A truncation is rejected when the required contacts with m do not exist
// at the chosen offset, when the modified path would intersect itself, or
// when a previously satisfied constraint would break.

enum class which_path { first, second };

enum class truncate_block {
    none,
    no_contact_at_offset,
    self_intersection,
    constraint_i,
    constraint_ii,
    constraint_iii,
    constraint_iv,
};

inline const char* to_string(truncate_block b) {
    switch (b) {
        case truncate_block::none: return "none";
        case truncate_block::no_contact_at_offset: return "no_contact_at_offset";
        case truncate_block::self_intersection: return "self_intersection";
        case truncate_block::constraint_i: return "constraint_i";
        case truncate_block::constraint_ii: return "constraint_ii";
        case truncate_block::constraint_iii: return "constraint_iii";
        case truncate_block::constraint_iv: return "constraint_iv";
    }
    return "?";
}

struct truncate_result {
    truncate_block block = truncate_block::none;
    std::optional<poly_config> config;
    bool ok() const { return block == truncate_block::none; }
};

/// Consecutive duplicate vertices removed and straight runs merged.
inline poly_path canonical_path(std::vector<rpoint> vs) {
    std::vector<rpoint> out;
    for (auto& v : vs) {
        if (!out.empty() && out.back() == v) continue;
        while (out.size() >= 2) {
            rpoint d1 = out.back() - out[out.size() - 2];
            rpoint d2 = v - out.back();
            if (cross(d1, d2) == 0 && dot(d1, d2) > 0)
                out.pop_back();  // collinear continuation
            else
                break;
        }
        out.push_back(v);
    }
    return poly_path(std::move(out));
}

/// No self-intersection: segments meet only at shared path vertices of
/// consecutive segments.
inline bool is_simple(const poly_path& p) {
    const auto& vs = p.vertices;
    for (std::size_t i = 0; i + 1 < vs.size(); ++i)
        for (std::size_t j = i + 1; j + 1 < vs.size(); ++j) {
            auto hits = intersect_segments(vs[i], vs[i + 1], vs[j], vs[j + 1]);
            if (hits.points.empty()) continue;
            if (j == i + 1) {
                if (hits.overlap || hits.points.size() != 1 || !(hits.points[0] == vs[j]))
                    return false;
            } else {
                return false;
            }
        }
    return true;
}

/// Count of distinct contact events (crossings and touches) of a shape
/// with every line it can reach.
inline std::size_t shape_line_contacts(const poly_path& shape, const displacement_t& d,
                                       bool crossings_only = false) {
    if (displacement_norm2(d) == 0)
        throw std::invalid_argument("line geometry requires a nonzero displacement");
    rat pmin = line_projection(shape.vertices[0], d), pmax = pmin;
    for (const auto& v : shape.vertices) {
        rat pr = line_projection(v, d);
        pmin = std::min(pmin, pr);
        pmax = std::max(pmax, pr);
    }
    std::int64_t n2 = displacement_norm2(d);
    auto floor_div = [](const rat& r) {
        bigint n = numerator(r), dd = denominator(r);
        bigint q = n / dd;
        if (n % dd != 0 && (n < 0) != (dd < 0)) --q;
        return q;
    };
    bigint klo = -floor_div(-((pmin / n2 - 1) / 2));
    bigint khi = floor_div((pmax / n2 - 1) / 2);
    std::size_t total = 0;
    for (bigint k = klo; k <= khi; ++k) {
        for (const auto& ct : line_contacts(shape, static_cast<int>(k), d))
            if (!crossings_only || ct.is_crossing()) ++total;
    }
    return total;
}

inline std::size_t total_line_contacts(const poly_config& cfg, bool crossings_only = false) {
    return shape_line_contacts(cfg.a, cfg.d, crossings_only) +
           shape_line_contacts(cfg.b, cfg.d, crossings_only);
}

/// Replaces the stretch of the chosen path around excursion `e` (found on
/// the shape against line e.k) with a straight segment on the parallel
/// line at `offset` (a fraction in (0, 1/2) of the line spacing, toward
/// the excursion's side).
inline truncate_result truncate(const poly_config& cfg, which_path which, const excursion& e,
                                const rat& offset) {
    if (!(offset > 0) || !(offset < rat(1, 2)))
        throw std::invalid_argument("truncate: offset must lie strictly between 0 and 1/2");
    const poly_path& path = which == which_path::first ? cfg.a : cfg.b;
    if (line_side(e.q1, e.k, cfg.d) != 0 || line_side(e.q2, e.k, cfg.d) != 0 ||
        e.d2 > path.total_length() || !(path.point_at(e.d1) == e.q1) ||
        !(path.point_at(e.d2) == e.q2))
        throw std::invalid_argument("truncate: excursion does not belong to the path");

    int sgn = e.side == excursion_side::right ? 1 : -1;
    rat cm = line_constant(e.k, cfg.d) + sgn * offset * 2 * displacement_norm2(cfg.d);
    auto contacts = detail::contacts_with_level(path, cfg.d, cm);

    std::optional<rpoint> q1p, q2p;
    rat dq1, dq2;
    for (const auto& ct : contacts) {
        if (ct.d_exit < e.d1 && (!q1p || ct.d_exit > dq1)) {
            q1p = ct.exit;
            dq1 = ct.d_exit;
        }
        if (ct.d_entry > e.d2 && (!q2p || ct.d_entry < dq2)) {
            q2p = ct.entry;
            dq2 = ct.d_entry;
        }
    }
    truncate_result res;
    if (!q1p || !q2p) {
        res.block = truncate_block::no_contact_at_offset;
        return res;
    }

    std::vector<rpoint> vs;
    auto prefix = subpath(path, 0, dq1);
    auto suffix = subpath(path, dq2, path.total_length());
    vs.insert(vs.end(), prefix.vertices.begin(), prefix.vertices.end());
    vs.insert(vs.end(), suffix.vertices.begin(), suffix.vertices.end());
    poly_path replaced = canonical_path(std::move(vs));

    if (!is_simple(replaced)) {
        res.block = truncate_block::self_intersection;
        return res;
    }

    poly_config candidate = cfg;
    (which == which_path::first ? candidate.a : candidate.b) = replaced;

    auto before = check_constraints(cfg);
    auto after = check_constraints(candidate);
    for (int c = 0; c < 4; ++c)
        if (before.satisfied[c] && !after.satisfied[c]) {
            res.block = static_cast<truncate_block>(static_cast<int>(truncate_block::constraint_i) + c);
            return res;
        }

    res.config = std::move(candidate);
    return res;
}

struct normalize_options {
    int max_offset_log2 = 8;       // offsets 1/4, 1/8, ..., 1/2^max
};

struct truncation_step {
    which_path path;
    excursion exc;
    rat area;
    rat offset;
    std::size_t contacts_before = 0;
    std::size_t contacts_after = 0;
    std::size_t crossings_before = 0;
    std::size_t crossings_after = 0;
};

struct normalize_result {
    poly_config config;
    std::vector<truncation_step> steps;
    std::size_t blocked_excursions = 0;  // schedule exhausted across all scans
};

namespace detail {

struct excursion_candidate {
    which_path path;
    excursion e;
    rat area;
};

inline std::vector<excursion_candidate> all_excursions(const poly_config& cfg) {
    std::vector<excursion_candidate> out;
    for (which_path wp : {which_path::first, which_path::second}) {
        const poly_path& shape = wp == which_path::first ? cfg.a : cfg.b;
        rat pmin = line_projection(shape.vertices[0], cfg.d), pmax = pmin;
        for (const auto& v : shape.vertices) {
            rat pr = line_projection(v, cfg.d);
            pmin = std::min(pmin, pr);
            pmax = std::max(pmax, pr);
        }
        std::int64_t n2 = displacement_norm2(cfg.d);
        auto floor_div = [](const rat& r) {
            bigint n = numerator(r), dd = denominator(r);
            bigint q = n / dd;
            if (n % dd != 0 && (n < 0) != (dd < 0)) --q;
            return q;
        };
        bigint klo = -floor_div(-((pmin / n2 - 1) / 2));
        bigint khi = floor_div((pmax / n2 - 1) / 2);
        for (bigint k = klo; k <= khi; ++k)
            for (const auto& e : find_excursions(shape, static_cast<int>(k), cfg.d))
                out.push_back({wp, e, excursion_area(shape, e)});
    }
    std::sort(out.begin(), out.end(), [](const excursion_candidate& l, const excursion_candidate& r) {
        if (l.area != r.area) return l.area < r.area;
        if (l.e.k != r.e.k) return l.e.k < r.e.k;
        if (l.e.d1 != r.e.d1) return l.e.d1 < r.e.d1;
        if (l.e.d2 != r.e.d2) return l.e.d2 < r.e.d2;
        if (l.path != r.path) return l.path == which_path::first;
        return l.e.side == excursion_side::right && r.e.side == excursion_side::left;
    });
    return out;
}

}  // namespace detail

/// Truncates excursions, smallest area first, trying offsets 1/4, 1/8,
/// ... per excursion, until no remaining excursion can be truncated.
/// Every applied step strictly decreases the total line-contact count,
/// which bounds the number of steps.
inline normalize_result normalize(const poly_config& cfg, normalize_options opt = {}) {
    normalize_result res{cfg, {}, 0};
    for (;;) {
        bool applied = false;
        auto candidates = detail::all_excursions(res.config);
        for (const auto& cand : candidates) {
            for (int lg = 2; lg <= opt.max_offset_log2 && !applied; ++lg) {
                rat offset(1, std::int64_t(1) << lg);
                auto r = truncate(res.config, cand.path, cand.e, offset);
                if (r.ok()) {
                    truncation_step step{cand.path,
                                         cand.e,
                                         cand.area,
                                         offset,
                                         total_line_contacts(res.config),
                                         0,
                                         total_line_contacts(res.config, true),
                                         0};
                    res.config = std::move(*r.config);
                    step.contacts_after = total_line_contacts(res.config);
                    step.crossings_after = total_line_contacts(res.config, true);
                    if (step.contacts_after >= step.contacts_before)
                        throw std::logic_error("normalize: truncation did not remove a line contact");
                    res.steps.push_back(std::move(step));
                    applied = true;
                }
            }
            if (applied) break;
            ++res.blocked_excursions;
        }
        if (!applied) break;
    }
    return res;
}

}  // namespace mcfgmix
