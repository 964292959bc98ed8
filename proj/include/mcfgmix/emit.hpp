#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "arrangement.hpp"
#include "config.hpp"
#include "excursions.hpp"
#include "grammar.hpp"
#include "splitter.hpp"
#include "truncation.hpp"

namespace mcfgmix {

using nlohmann::json;

// ---------------------------------------------------------------------
// Derivation trees
// ---------------------------------------------------------------------

inline json derivation_to_json(const derivation_node& d) {
    json j;
    j["rule"] = d.rule_id;
    j["children"] = json::array();
    for (const auto& c : d.children) j["children"].push_back(derivation_to_json(c));
    return j;
}

inline json derivation_to_json(const constructive_node& d) {
    json j;
    j["rule"] = d.rule_id;
    j["case"] = to_string(d.provenance);
    if (!d.cuts.empty()) j["cuts"] = d.cuts;
    j["children"] = json::array();
    for (const auto& c : d.children) j["children"].push_back(derivation_to_json(c));
    return j;
}

inline derivation_node derivation_from_json(const json& j) {
    derivation_node d;
    d.rule_id = j.at("rule").get<int>();
    if (j.contains("children"))
        for (const auto& c : j.at("children")) d.children.push_back(derivation_from_json(c));
    return d;
}

inline std::string derivation_to_sexpr(const derivation_node& d) {
    std::string out = "(" + std::to_string(d.rule_id);
    for (const auto& c : d.children) out += " " + derivation_to_sexpr(c);
    out += ")";
    return out;
}

// ---------------------------------------------------------------------
// Geometry dump
// ---------------------------------------------------------------------

inline json point_json(const rpoint& q) {
    return json::array({rat_to_string(q.x), rat_to_string(q.y)});
}

/// Everything about a configuration's geometry for path translates in
/// [k_lo, k_hi]: vertex lists, crossings, excursions with areas and
/// filled flags, and the constraint report. Exact rationals are encoded
/// as strings ("3", "-5/2").
inline json geometry_json(const configuration& cfg, int k_lo, int k_hi) {
    json j;
    j["x"] = to_ascii(cfg.x);
    j["y"] = to_ascii(cfg.y);
    j["displacement"] = {{"i", cfg.d.i}, {"j", cfg.d.j}};
    poly_config pc(cfg);

    json paths = json::object();
    for (const char* name : {"A", "B"}) {
        json per_k = json::object();
        for (int k = k_lo; k <= k_hi; ++k) {
            const poly_path shape = name[0] == 'A' ? pc.A(k) : pc.B(k);
            json verts = json::array();
            for (const auto& v : shape.vertices) verts.push_back(point_json(v));
            per_k[std::to_string(k)] = std::move(verts);
        }
        paths[name] = std::move(per_k);
    }
    j["paths"] = std::move(paths);

    if (displacement_norm2(cfg.d) == 0) {
        j["degenerate"] = true;  // no line geometry without displacement
        return j;
    }

    json crossings = json::array();
    json excursions = json::array();
    for (const char* name : {"A", "B"}) {
        const poly_path& shape = name[0] == 'A' ? pc.a : pc.b;
        for (int k = k_lo; k <= k_hi; ++k) {
            for (const auto& cr : crossings_of_line(shape, k, cfg.d)) {
                json c;
                c["path"] = name;
                c["k"] = k;
                c["entry"] = point_json(cr.entry);
                c["exit"] = point_json(cr.exit);
                c["d_entry"] = rat_to_string(cr.d_entry);
                c["d_exit"] = rat_to_string(cr.d_exit);
                c["direction"] = cr.direction == crossing_direction::right_to_left
                                     ? "right_to_left"
                                     : "left_to_right";
                crossings.push_back(std::move(c));
            }
            for (const auto& e : find_excursions(shape, k, cfg.d)) {
                json x;
                x["path"] = name;
                x["k"] = k;
                x["side"] = e.side == excursion_side::right ? "right" : "left";
                x["q1"] = point_json(e.q1);
                x["q2"] = point_json(e.q2);
                x["d1"] = rat_to_string(e.d1);
                x["d2"] = rat_to_string(e.d2);
                x["area"] = rat_to_string(excursion_area(shape, e));
                x["zero_area"] = e.zero_area;
                x["filled"] = is_filled(shape, e, cfg.d);
                excursions.push_back(std::move(x));
            }
        }
    }
    j["crossings"] = std::move(crossings);
    j["excursions"] = std::move(excursions);

    if (!cfg.x.empty() && !cfg.y.empty()) {
        auto rep = check_constraints(pc);
        json cons;
        const char* names[4] = {"i", "ii", "iii", "iv"};
        json witnesses = json::array();
        for (int c = 0; c < 4; ++c) {
            cons[names[c]] = rep.satisfied[c];
            for (const auto& w : rep.witnesses[c]) {
                json wj;
                wj["condition"] = w.condition;
                wj["q"] = point_json(w.q);
                wj["d_first"] = rat_to_string(w.d_first);
                wj["d_second"] = rat_to_string(w.d_second);
                witnesses.push_back(std::move(wj));
            }
        }
        cons["witnesses"] = std::move(witnesses);
        j["constraints"] = std::move(cons);
    }
    return j;
}

// ---------------------------------------------------------------------
// SVG rendering: solid first path, dashed second path, dotted lines,
// filled dots at the displacement multiples.
// ---------------------------------------------------------------------

namespace detail {

struct svg_canvas {
    rat min_x, max_x, min_y, max_y;
    int scale = 40;

    void grow(const rpoint& p) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    std::string sx(const rat& x) const { return rat_to_decimal(scale * (x - min_x + 1), 6); }
    std::string sy(const rat& y) const { return rat_to_decimal(scale * (max_y - y + 1), 6); }
    std::string pt(const rpoint& p) const { return sx(p.x) + "," + sy(p.y); }
};

inline std::string svg_polyline(const svg_canvas& cv, const poly_path& p, const std::string& style) {
    std::string out = "  <polyline fill=\"none\" " + style + " points=\"";
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        if (i) out += " ";
        out += cv.pt(p.vertices[i]);
    }
    out += "\"/>\n";
    return out;
}

}  // namespace detail

inline std::string geometry_svg(const configuration& cfg, int k_lo, int k_hi) {
    poly_config pc(cfg);
    detail::svg_canvas cv;
    cv.min_x = cv.max_x = pc.a.vertices[0].x;
    cv.min_y = cv.max_y = pc.a.vertices[0].y;
    std::vector<std::pair<poly_path, bool>> shapes;  // path, is_first
    for (int k = k_lo; k <= k_hi; ++k) {
        shapes.push_back({pc.A(k), true});
        shapes.push_back({pc.B(k), false});
    }
    for (const auto& [p, first] : shapes)
        for (const auto& v : p.vertices) cv.grow(v);
    for (int k = k_lo; k <= k_hi + 1; ++k) cv.grow(pc.p(k));

    auto num = [&](const rat& r) { return rat_to_decimal(r, 6); };
    rat w = cv.scale * (cv.max_x - cv.min_x + 2);
    rat h = cv.scale * (cv.max_y - cv.min_y + 2);
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
           "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n";

    // unit grid
    auto floor_i = [](const rat& r) {
        bigint n = numerator(r), d = denominator(r);
        bigint q = n / d;
        if (n % d != 0 && (n < 0) != (d < 0)) --q;
        return q;
    };
    for (bigint gx = floor_i(cv.min_x); gx <= floor_i(cv.max_x) + 1; ++gx) {
        rat x{gx};
        if (x < cv.min_x || x > cv.max_x) continue;
        out += "  <line stroke=\"#dddddd\" stroke-width=\"1\" x1=\"" + cv.sx(x) + "\" y1=\"" +
               cv.sy(cv.max_y) + "\" x2=\"" + cv.sx(x) + "\" y2=\"" + cv.sy(cv.min_y) + "\"/>\n";
    }
    for (bigint gy = floor_i(cv.min_y); gy <= floor_i(cv.max_y) + 1; ++gy) {
        rat y{gy};
        if (y < cv.min_y || y > cv.max_y) continue;
        out += "  <line stroke=\"#dddddd\" stroke-width=\"1\" x1=\"" + cv.sx(cv.min_x) + "\" y1=\"" +
               cv.sy(y) + "\" x2=\"" + cv.sx(cv.max_x) + "\" y2=\"" + cv.sy(y) + "\"/>\n";
    }

    // separator lines between consecutive displacement multiples, dashed
    if (displacement_norm2(cfg.d) != 0) {
        rpoint dvec{rat(cfg.d.i), rat(cfg.d.j)};
        rpoint perp{-dvec.y, dvec.x};
        rat span = (cv.max_x - cv.min_x) + (cv.max_y - cv.min_y) + 2;
        rat pn = l1_norm(perp);
        for (int k = k_lo; k <= k_hi; ++k) {
            rpoint mid{(rat(2 * k + 1) * dvec.x) / 2, (rat(2 * k + 1) * dvec.y) / 2};
            rpoint a{mid.x - perp.x * span / pn, mid.y - perp.y * span / pn};
            rpoint b{mid.x + perp.x * span / pn, mid.y + perp.y * span / pn};
            out += "  <line stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"6,4\" x1=\"" +
                   cv.sx(a.x) + "\" y1=\"" + cv.sy(a.y) + "\" x2=\"" + cv.sx(b.x) + "\" y2=\"" +
                   cv.sy(b.y) + "\"/>\n";
        }
    }

    for (const auto& [p, first] : shapes) {
        bool at_origin = p.vertices[0] == pc.p(first ? 0 : 1);
        std::string style;
        if (first)
            style = at_origin ? "stroke=\"#000000\" stroke-width=\"2\""
                              : "stroke=\"#999999\" stroke-width=\"2\"";
        else
            style = "stroke=\"#555555\" stroke-width=\"2\" stroke-dasharray=\"2,3\"";
        out += detail::svg_polyline(cv, p, style);
    }

    for (int k = k_lo; k <= k_hi + 1; ++k) {
        rpoint pk = pc.p(k);
        out += "  <circle fill=\"#000000\" r=\"4\" cx=\"" + cv.sx(pk.x) + "\" cy=\"" + cv.sy(pk.y) +
               "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace mcfgmix
