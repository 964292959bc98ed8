#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"
#include "grammar.hpp"
#include "o2.hpp"
#include "symbols.hpp"

namespace mcfgmix {

// Constructive derivations for the fixed grammar: given a pair (x, y)
// whose concatenation is balanced, produce a split into two derivable
// child pairs via one of rules 2..5, by case analysis; recursing yields a
// full derivation. The last resort removes balanced substrings, finds one
// of the four geometric conditions on the reduced pair, and lifts the cut
// positions back.

enum class split_case {
    axiom,
    start,             // the fan-out-1 wrapper over the top pair
    wrap,              // one side empty: pair with the empty-pair axiom
    first_balanced,    // x balanced: detach it via rule 4
    second_balanced,   // y balanced: rule 5
    prefix_first,      // balanced proper prefix of x: rule 2
    suffix_first,
    prefix_second,
    suffix_second,
    condition_1,       // opposite starting steps: rule 2
    condition_2,       // extra A(0)/B(1) intersection: rule 3
    condition_3,       // late A(0)/A(1) intersection: rule 4
    condition_4,       // late B(1)/B(0) intersection: rule 5
    brute_force,
};

inline const char* to_string(split_case c) {
    switch (c) {
        case split_case::axiom: return "axiom";
        case split_case::start: return "start";
        case split_case::wrap: return "wrap";
        case split_case::first_balanced: return "first_balanced";
        case split_case::second_balanced: return "second_balanced";
        case split_case::prefix_first: return "prefix_first";
        case split_case::suffix_first: return "suffix_first";
        case split_case::prefix_second: return "prefix_second";
        case split_case::suffix_second: return "suffix_second";
        case split_case::condition_1: return "condition_1";
        case split_case::condition_2: return "condition_2";
        case split_case::condition_3: return "condition_3";
        case split_case::condition_4: return "condition_4";
        case split_case::brute_force: return "brute_force";
    }
    return "?";
}

// Where one rule variable's material sits in the original pair.
struct var_binding {
    o2_string text;
    pair_side side = pair_side::first;
    std::size_t begin = 0, end = 0;
};

struct split_decision {
    int rule_id = 0;  // 2..5
    // Rule variables x, y (first child pair) and p, q (second child pair).
    var_binding vx, vy, vp, vq;
    split_case provenance = split_case::brute_force;
    std::optional<split_witness> witness;
    std::vector<std::size_t> cuts;  // original-coordinate cut positions

    std::pair<o2_string, o2_string> child0() const { return {vx.text, vy.text}; }
    std::pair<o2_string, o2_string> child1() const { return {vp.text, vq.text}; }
};

struct split_failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline o2_string slice(const o2_string& w, std::size_t b, std::size_t e) {
    return o2_string(w.begin() + b, w.begin() + e);
}

inline var_binding make_binding(const o2_string& w, pair_side side, std::size_t b, std::size_t e) {
    return {slice(w, b, e), side, b, e};
}

/// Parent pair reconstructed from the bindings via the rule's
/// composition.
inline std::pair<o2_string, o2_string> replay(const split_decision& d) {
    auto cat = [](std::initializer_list<const o2_string*> parts) {
        o2_string out;
        for (const auto* p : parts) out.insert(out.end(), p->begin(), p->end());
        return out;
    };
    switch (d.rule_id) {
        case 2: return {cat({&d.vx.text, &d.vp.text}), cat({&d.vy.text, &d.vq.text})};
        case 3: return {cat({&d.vx.text, &d.vp.text}), cat({&d.vq.text, &d.vy.text})};
        case 4: return {cat({&d.vx.text, &d.vp.text, &d.vy.text}), d.vq.text};
        case 5: return {d.vp.text, cat({&d.vx.text, &d.vq.text, &d.vy.text})};
        default: throw std::invalid_argument("replay: rule id outside 2..5");
    }
}

inline std::size_t pair_size(const std::pair<o2_string, o2_string>& p) {
    return p.first.size() + p.second.size();
}

}  // namespace detail

/// Independent check of a decision's guarantees: the bindings reconstruct
/// the input, both child pairs are balanced, and the recursion makes
/// progress. On a pair with an empty side, a decision pairing the whole
/// material with the empty-pair axiom is accepted instead of strict
/// progress, provided its nonempty child has two nonempty components.
/// Geometric decisions must leave at least three of the four bindings
/// nonempty.
inline bool validate_decision(const split_decision& d, const o2_string& x, const o2_string& y) {
    if (d.rule_id < 2 || d.rule_id > 5) return false;
    auto rebuilt = detail::replay(d);
    if (rebuilt.first != x || rebuilt.second != y) return false;
    auto c0 = d.child0(), c1 = d.child1();
    o2_string cat0 = c0.first;
    cat0.insert(cat0.end(), c0.second.begin(), c0.second.end());
    o2_string cat1 = c1.first;
    cat1.insert(cat1.end(), c1.second.begin(), c1.second.end());
    if (!is_o2(cat0) || !is_o2(cat1)) return false;
    std::size_t total = x.size() + y.size();
    bool strict = detail::pair_size(c0) < total && detail::pair_size(c1) < total;
    if (!strict) {
        bool parent_has_empty_side = x.empty() || y.empty();
        auto is_wrap_child = [](const std::pair<o2_string, o2_string>& c) {
            return c.first.empty() && c.second.empty();
        };
        bool wrap_shape =
            (is_wrap_child(c1) && !c0.first.empty() && !c0.second.empty()) ||
            (is_wrap_child(c0) && !c1.first.empty() && !c1.second.empty());
        if (!(parent_has_empty_side && wrap_shape)) return false;
    }
    if (d.provenance >= split_case::condition_1 && d.provenance <= split_case::condition_4) {
        int nonempty = !d.vx.text.empty() + !d.vy.text.empty() + !d.vp.text.empty() +
                       !d.vq.text.empty();
        if (nonempty < 3) return false;
    }
    return true;
}

/// First applicable case, in the fixed order: wrap an empty side; detach
/// a balanced side; cut at a balanced proper prefix or suffix; otherwise
/// reduce and apply the first geometric condition. Throws split_failure
/// if no case applies, which the geometry rules out for valid inputs.
inline split_decision find_split(const o2_string& x, const o2_string& y) {
    using detail::make_binding;
    o2_string xy = x;
    xy.insert(xy.end(), y.begin(), y.end());
    if (!is_o2(xy)) throw std::invalid_argument("find_split: concatenation is not balanced");
    if (xy.size() < 2 || (x.size() <= 1 && y.size() <= 1))
        throw std::invalid_argument("find_split: pair below the splitting threshold");

    split_decision d;

    // 1. empty side: pair the rest with the empty-pair axiom
    if (x.empty()) {
        d.rule_id = 5;
        d.vx = make_binding(y, pair_side::second, 0, 1);
        d.vy = make_binding(y, pair_side::second, 1, y.size());
        d.vp = make_binding(x, pair_side::first, 0, 0);
        d.vq = make_binding(y, pair_side::second, 1, 1);
        d.provenance = split_case::wrap;
        d.cuts = {1};
        return d;
    }
    if (y.empty()) {
        d.rule_id = 4;
        d.vx = make_binding(x, pair_side::first, 0, 1);
        d.vy = make_binding(x, pair_side::first, 1, x.size());
        d.vp = make_binding(x, pair_side::first, 1, 1);
        d.vq = make_binding(y, pair_side::second, 0, 0);
        d.provenance = split_case::wrap;
        d.cuts = {1};
        return d;
    }

    // 2. a balanced side detaches against the whole other side
    if (is_o2(x)) {
        d.rule_id = 4;
        d.vx = make_binding(x, pair_side::first, 0, 1);
        d.vy = make_binding(x, pair_side::first, 1, x.size());
        d.vp = make_binding(x, pair_side::first, 1, 1);
        d.vq = make_binding(y, pair_side::second, 0, y.size());
        d.provenance = split_case::first_balanced;
        d.cuts = {1};
        return d;
    }
    if (is_o2(y)) {
        d.rule_id = 5;
        d.vx = make_binding(y, pair_side::second, 0, 1);
        d.vy = make_binding(y, pair_side::second, 1, y.size());
        d.vp = make_binding(x, pair_side::first, 0, x.size());
        d.vq = make_binding(y, pair_side::second, 1, 1);
        d.provenance = split_case::second_balanced;
        d.cuts = {1};
        return d;
    }

    // 3. balanced proper prefix or suffix, shortest first
    auto prefix_cut = [](const o2_string& w) -> std::optional<std::size_t> {
        displacement_t acc;
        for (std::size_t c = 1; c < w.size(); ++c) {
            acc = acc + displacement(o2_string{w[c - 1]});
            if (acc.is_zero()) return c;
        }
        return std::nullopt;
    };
    auto suffix_cut = [](const o2_string& w) -> std::optional<std::size_t> {
        displacement_t acc;
        for (std::size_t len = 1; len < w.size(); ++len) {
            acc = acc + displacement(o2_string{w[w.size() - len]});
            if (acc.is_zero()) return w.size() - len;
        }
        return std::nullopt;
    };
    if (auto c = prefix_cut(x)) {
        d.rule_id = 2;
        d.vx = make_binding(x, pair_side::first, 0, *c);
        d.vp = make_binding(x, pair_side::first, *c, x.size());
        d.vy = make_binding(y, pair_side::second, 0, 0);
        d.vq = make_binding(y, pair_side::second, 0, y.size());
        d.provenance = split_case::prefix_first;
        d.cuts = {*c};
        return d;
    }
    if (auto c = suffix_cut(x)) {
        d.rule_id = 2;
        d.vx = make_binding(x, pair_side::first, 0, *c);
        d.vp = make_binding(x, pair_side::first, *c, x.size());
        d.vy = make_binding(y, pair_side::second, 0, y.size());
        d.vq = make_binding(y, pair_side::second, y.size(), y.size());
        d.provenance = split_case::suffix_first;
        d.cuts = {*c};
        return d;
    }
    if (auto c = prefix_cut(y)) {
        d.rule_id = 5;
        d.vx = make_binding(y, pair_side::second, 0, *c);
        d.vy = make_binding(y, pair_side::second, y.size(), y.size());
        d.vp = make_binding(x, pair_side::first, 0, x.size());
        d.vq = make_binding(y, pair_side::second, *c, y.size());
        d.provenance = split_case::prefix_second;
        d.cuts = {*c};
        return d;
    }
    if (auto c = suffix_cut(y)) {
        d.rule_id = 2;
        d.vx = make_binding(x, pair_side::first, 0, x.size());
        d.vy = make_binding(y, pair_side::second, 0, *c);
        d.vp = make_binding(x, pair_side::first, x.size(), x.size());
        d.vq = make_binding(y, pair_side::second, *c, y.size());
        d.provenance = split_case::suffix_second;
        d.cuts = {*c};
        return d;
    }

    // 4. geometric: reduce, take the first split condition, lift the cuts
    auto [rx, ry, rec] = reduce(x, y);
    if (rx.empty() || ry.empty())
        throw split_failure("find_split: reduction emptied a side that is not balanced");
    configuration cfg(rx, ry);
    auto conditions = four_split_conditions(cfg);
    if (conditions.empty()) {
        throw split_failure(
            "find_split: no geometric condition holds for reduced pair (" + to_ascii(rx) + ", " +
            to_ascii(ry) + ") of (" + to_ascii(x) + ", " + to_ascii(y) + ")");
    }
    const split_witness& w = conditions.front();
    auto as_index = [](const rat& r) {
        if (!is_integer(r) || r < 0)
            throw split_failure("find_split: geometric witness distance is not a valid cut");
        return static_cast<std::size_t>(numerator(r).convert_to<std::uint64_t>());
    };
    switch (w.condition) {
        case 1: {
            std::size_t cx = lift(rec, 1, pair_side::first);
            std::size_t cy = lift(rec, 1, pair_side::second);
            d.rule_id = 2;
            d.vx = make_binding(x, pair_side::first, 0, cx);
            d.vp = make_binding(x, pair_side::first, cx, x.size());
            d.vy = make_binding(y, pair_side::second, 0, cy);
            d.vq = make_binding(y, pair_side::second, cy, y.size());
            d.provenance = split_case::condition_1;
            d.cuts = {cx, cy};
            break;
        }
        case 2: {
            std::size_t cx = lift(rec, as_index(w.d_first), pair_side::first);
            std::size_t cy = lift(rec, as_index(w.d_second), pair_side::second);
            d.rule_id = 3;
            d.vx = make_binding(x, pair_side::first, 0, cx);
            d.vp = make_binding(x, pair_side::first, cx, x.size());
            d.vq = make_binding(y, pair_side::second, 0, cy);
            d.vy = make_binding(y, pair_side::second, cy, y.size());
            d.provenance = split_case::condition_2;
            d.cuts = {cx, cy};
            break;
        }
        case 3: {
            std::size_t c1 = lift(rec, as_index(w.d_second), pair_side::first);
            std::size_t c2 = lift(rec, as_index(w.d_first), pair_side::first);
            d.rule_id = 4;
            d.vx = make_binding(x, pair_side::first, 0, c1);
            d.vp = make_binding(x, pair_side::first, c1, c2);
            d.vy = make_binding(x, pair_side::first, c2, x.size());
            d.vq = make_binding(y, pair_side::second, 0, y.size());
            d.provenance = split_case::condition_3;
            d.cuts = {c1, c2};
            break;
        }
        case 4: {
            std::size_t c1 = lift(rec, as_index(w.d_second), pair_side::second);
            std::size_t c2 = lift(rec, as_index(w.d_first), pair_side::second);
            d.rule_id = 5;
            d.vx = make_binding(y, pair_side::second, 0, c1);
            d.vq = make_binding(y, pair_side::second, c1, c2);
            d.vy = make_binding(y, pair_side::second, c2, y.size());
            d.vp = make_binding(x, pair_side::first, 0, x.size());
            d.provenance = split_case::condition_4;
            d.cuts = {c1, c2};
            break;
        }
        default:
            throw split_failure("find_split: unknown condition index");
    }
    d.witness = w;
    if (!validate_decision(d, x, y))
        throw split_failure("find_split: geometric decision failed validation for (" + to_ascii(x) +
                            ", " + to_ascii(y) + ")");
    return d;
}

/// Exhaustive oracle: tries every instantiation of rules 2..5 over all
/// cut positions in scan order and returns the first that validates.
inline split_decision brute_force_split(const o2_string& x, const o2_string& y) {
    using detail::make_binding;
    o2_string xy = x;
    xy.insert(xy.end(), y.begin(), y.end());
    if (!is_o2(xy)) throw std::invalid_argument("brute_force_split: concatenation is not balanced");
    if (xy.size() < 2 || (x.size() <= 1 && y.size() <= 1))
        throw std::invalid_argument("brute_force_split: pair below the splitting threshold");

    auto try_out = [&](split_decision d) -> std::optional<split_decision> {
        if (validate_decision(d, x, y)) return d;
        return std::nullopt;
    };
    for (int rule = 2; rule <= 3; ++rule)
        for (std::size_t cx = 0; cx <= x.size(); ++cx)
            for (std::size_t cy = 0; cy <= y.size(); ++cy) {
                split_decision d;
                d.rule_id = rule;
                d.provenance = split_case::brute_force;
                d.cuts = {cx, cy};
                d.vx = make_binding(x, pair_side::first, 0, cx);
                d.vp = make_binding(x, pair_side::first, cx, x.size());
                if (rule == 2) {
                    d.vy = make_binding(y, pair_side::second, 0, cy);
                    d.vq = make_binding(y, pair_side::second, cy, y.size());
                } else {
                    d.vq = make_binding(y, pair_side::second, 0, cy);
                    d.vy = make_binding(y, pair_side::second, cy, y.size());
                }
                if (auto r = try_out(std::move(d))) return *r;
            }
    for (int rule = 4; rule <= 5; ++rule) {
        const o2_string& side = rule == 4 ? x : y;
        const o2_string& other = rule == 4 ? y : x;
        for (std::size_t c1 = 0; c1 <= side.size(); ++c1)
            for (std::size_t c2 = c1; c2 <= side.size(); ++c2) {
                split_decision d;
                d.rule_id = rule;
                d.provenance = split_case::brute_force;
                d.cuts = {c1, c2};
                pair_side ps = rule == 4 ? pair_side::first : pair_side::second;
                d.vx = make_binding(side, ps, 0, c1);
                d.vy = make_binding(side, ps, c2, side.size());
                if (rule == 4) {
                    d.vp = make_binding(side, ps, c1, c2);
                    d.vq = make_binding(other, pair_side::second, 0, other.size());
                } else {
                    d.vq = make_binding(side, ps, c1, c2);
                    d.vp = make_binding(other, pair_side::first, 0, other.size());
                }
                if (auto r = try_out(std::move(d))) return *r;
            }
    }
    throw split_failure("brute_force_split: no valid instantiation for (" + to_ascii(x) + ", " +
                        to_ascii(y) + ")");
}

struct derive_stats {
    std::size_t calls = 0;
    std::size_t max_depth = 0;
};

// Derivation annotated with how each node was obtained.
struct constructive_node {
    int rule_id = 0;
    split_case provenance = split_case::axiom;
    std::vector<std::size_t> cuts;
    std::vector<constructive_node> children;

    derivation_node plain() const {
        derivation_node n;
        n.rule_id = rule_id;
        for (const auto& c : children) n.children.push_back(c.plain());
        return n;
    }
};

namespace detail {

inline constructive_node derive_rec(const o2_string& x, const o2_string& y, derive_stats* stats,
                                    std::size_t depth, std::size_t depth_cap) {
    if (stats) {
        ++stats->calls;
        stats->max_depth = std::max(stats->max_depth, depth);
    }
    if (depth > depth_cap)
        throw split_failure("derive_constructive: recursion depth exceeded its bound");
    if (x.size() <= 1 && y.size() <= 1) {
        constructive_node n;
        n.provenance = split_case::axiom;
        if (x.empty() && y.empty()) n.rule_id = 10;
        else if (x.size() == 1 && y.size() == 1 && y[0] == complement(x[0]))
            n.rule_id = x[0] == o2_symbol::a ? 6 : x[0] == o2_symbol::abar ? 7
                        : x[0] == o2_symbol::b ? 8 : 9;
        else
            throw split_failure("derive_constructive: unbalanced base pair");
        return n;
    }
    split_decision d;
    try {
        d = find_split(x, y);
    } catch (const split_failure& e) {
        // isolate geometry bugs from genuine non-splittability
        std::string note;
        try {
            auto bf = brute_force_split(x, y);
            note = "; exhaustive search finds a rule " + std::to_string(bf.rule_id) +
                   " decision, so the geometric search is at fault";
        } catch (const split_failure&) {
            note = "; exhaustive search over rules 2..5 also finds no decision";
        }
        throw split_failure(e.what() + note);
    }
    constructive_node n;
    n.rule_id = d.rule_id;
    n.provenance = d.provenance;
    n.cuts = d.cuts;
    auto c0 = d.child0(), c1 = d.child1();
    n.children.push_back(derive_rec(c0.first, c0.second, stats, depth + 1, depth_cap));
    n.children.push_back(derive_rec(c1.first, c1.second, stats, depth + 1, depth_cap));
    return n;
}

}  // namespace detail

inline constructive_node derive_constructive_annotated(const o2_string& x, const o2_string& y,
                                                       derive_stats* stats = nullptr) {
    o2_string xy = x;
    xy.insert(xy.end(), y.begin(), y.end());
    if (!is_o2(xy))
        throw std::invalid_argument("derive_constructive: concatenation is not balanced");
    return detail::derive_rec(x, y, stats, 1, 2 * (x.size() + y.size()) + 4);
}

/// Derivation of the pair predicate for (x, y); the result replays to
/// exactly (x, y) under yield evaluation.
inline derivation_node derive_constructive(const o2_string& x, const o2_string& y,
                                           derive_stats* stats = nullptr) {
    return derive_constructive_annotated(x, y, stats).plain();
}

}  // namespace mcfgmix
