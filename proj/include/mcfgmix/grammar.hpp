#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "symbols.hpp"

namespace mcfgmix {

// Generic multiple context-free grammars of rank <= 2. Predicates derive
// tuples of strings; a rule's composition says how the parent tuple is
// concatenated from terminals and the children's tuple components.

struct terminal_symbol {
    int id = 0;
    std::string name;
};

struct predicate {
    std::string name;
    int fanout = 1;
};

struct composition_term {
    // Terminal literal when child < 0, else component `arg` of child `child`.
    int terminal = -1;
    int child = -1;
    int arg = -1;

    static composition_term lit(int t) { return {t, -1, -1}; }
    static composition_term var(int child, int arg) { return {-1, child, arg}; }
    bool is_terminal() const { return child < 0; }
    friend bool operator==(const composition_term&, const composition_term&) = default;
};

struct rule {
    int id = 0;
    int lhs = 0;                      // predicate index
    std::vector<int> rhs;             // predicate indices, rank 0..2
    std::vector<std::vector<composition_term>> composition;  // one per lhs component
};

struct grammar {
    std::vector<terminal_symbol> terminals;
    std::vector<predicate> predicates;
    std::vector<rule> rules;
    int start = 0;

    const rule* rule_by_id(int id) const {
        for (const auto& r : rules)
            if (r.id == id) return &r;
        return nullptr;
    }
    int predicate_index(std::string_view name) const {
        for (std::size_t i = 0; i < predicates.size(); ++i)
            if (predicates[i].name == name) return static_cast<int>(i);
        return -1;
    }
    int terminal_index(std::string_view name) const {
        for (std::size_t i = 0; i < terminals.size(); ++i)
            if (terminals[i].name == name) return static_cast<int>(i);
        return -1;
    }
};

struct derivation_node {
    int rule_id = 0;
    std::vector<derivation_node> children;
};

struct validation_report {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Structural checks for the engine: resolvable references, rank <= 2,
/// linear non-deleting compositions, arities, reachability.
inline validation_report validate_grammar(const grammar& g) {
    validation_report rep;
    auto fail = [&](std::string msg) { rep.violations.push_back(std::move(msg)); };

    if (g.predicates.empty()) {
        fail("grammar has no predicates");
        return rep;
    }
    if (g.start < 0 || g.start >= static_cast<int>(g.predicates.size()))
        fail("start predicate unresolved");
    else if (g.predicates[g.start].fanout != 1)
        fail("start predicate must have fan-out 1");
    for (const auto& p : g.predicates)
        if (p.fanout < 1) fail("predicate " + p.name + " has fan-out < 1");

    std::set<int> ids;
    for (const auto& r : g.rules) {
        std::string where = "rule " + std::to_string(r.id) + ": ";
        if (!ids.insert(r.id).second) fail(where + "duplicate rule id");
        if (r.lhs < 0 || r.lhs >= static_cast<int>(g.predicates.size())) {
            fail(where + "unresolved lhs predicate");
            continue;
        }
        if (r.rhs.size() > 2) fail(where + "rank exceeds 2");
        bool resolved = true;
        for (int p : r.rhs)
            if (p < 0 || p >= static_cast<int>(g.predicates.size())) {
                fail(where + "unresolved rhs predicate");
                resolved = false;
            }
        if (!resolved) continue;
        if (static_cast<int>(r.composition.size()) != g.predicates[r.lhs].fanout)
            fail(where + "composition arity differs from lhs fan-out");
        std::map<std::pair<int, int>, int> uses;
        for (const auto& seq : r.composition)
            for (const auto& t : seq) {
                if (t.is_terminal()) {
                    if (t.terminal < 0 || t.terminal >= static_cast<int>(g.terminals.size()))
                        fail(where + "unresolved terminal");
                } else {
                    if (t.child < 0 || t.child >= static_cast<int>(r.rhs.size())) {
                        fail(where + "variable references missing child");
                        continue;
                    }
                    if (t.arg < 0 || t.arg >= g.predicates[r.rhs[t.child]].fanout) {
                        fail(where + "variable references missing component");
                        continue;
                    }
                    ++uses[{t.child, t.arg}];
                }
            }
        for (std::size_t c = 0; c < r.rhs.size(); ++c)
            for (int a = 0; a < g.predicates[r.rhs[c]].fanout; ++a) {
                auto it = uses.find({static_cast<int>(c), a});
                if (it == uses.end())
                    fail(where + "deleted variable (child " + std::to_string(c) + ", component " +
                         std::to_string(a) + ")");
                else if (it->second > 1)
                    fail(where + "duplicated variable (child " + std::to_string(c) + ", component " +
                         std::to_string(a) + ")");
            }
    }

    // Reachability from the start predicate.
    if (g.start >= 0 && g.start < static_cast<int>(g.predicates.size())) {
        std::set<int> reach{g.start};
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& r : g.rules)
                if (reach.count(r.lhs))
                    for (int p : r.rhs)
                        if (p >= 0 && p < static_cast<int>(g.predicates.size()) && reach.insert(p).second)
                            changed = true;
        }
        for (std::size_t i = 0; i < g.predicates.size(); ++i)
            if (!reach.count(static_cast<int>(i)))
                fail("predicate " + g.predicates[i].name + " unreachable from start");
    }
    return rep;
}

/// The fixed grammar over {a, A, b, B}: S(xy) <- R(x,y); four binary
/// recombination rules; four complementary-pair axioms and the empty-pair
/// axiom. Rule ids are 1..10.
inline grammar mix_o2_grammar() {
    grammar g;
    g.terminals = {{0, "a"}, {1, "A"}, {2, "b"}, {3, "B"}};
    g.predicates = {{"S", 1}, {"R", 2}};
    g.start = 0;
    const int S = 0, R = 1;
    auto V = composition_term::var;
    auto L = composition_term::lit;

    g.rules.push_back({1, S, {R}, {{V(0, 0), V(0, 1)}}});
    g.rules.push_back({2, R, {R, R}, {{V(0, 0), V(1, 0)}, {V(0, 1), V(1, 1)}}});
    g.rules.push_back({3, R, {R, R}, {{V(0, 0), V(1, 0)}, {V(1, 1), V(0, 1)}}});
    g.rules.push_back({4, R, {R, R}, {{V(0, 0), V(1, 0), V(0, 1)}, {V(1, 1)}}});
    g.rules.push_back({5, R, {R, R}, {{V(1, 0)}, {V(0, 0), V(1, 1), V(0, 1)}}});
    g.rules.push_back({6, R, {}, {{L(0)}, {L(1)}}});
    g.rules.push_back({7, R, {}, {{L(1)}, {L(0)}}});
    g.rules.push_back({8, R, {}, {{L(2)}, {L(3)}}});
    g.rules.push_back({9, R, {}, {{L(3)}, {L(2)}}});
    g.rules.push_back({10, R, {}, {std::vector<composition_term>{}, std::vector<composition_term>{}}});
    return g;
}

/// Evaluates a derivation bottom-up and returns the root predicate's
/// string tuple (terminal names concatenated). Throws on structural
/// mismatch between the tree and the grammar.
inline std::vector<std::string> yield_of(const grammar& g, const derivation_node& d) {
    const rule* r = g.rule_by_id(d.rule_id);
    if (!r) throw std::invalid_argument("yield_of: unknown rule id " + std::to_string(d.rule_id));
    if (d.children.size() != r->rhs.size())
        throw std::invalid_argument("yield_of: rule " + std::to_string(r->id) + " expects " +
                                    std::to_string(r->rhs.size()) + " children");
    std::vector<std::vector<std::string>> sub;
    sub.reserve(d.children.size());
    for (std::size_t c = 0; c < d.children.size(); ++c) {
        const rule* cr = g.rule_by_id(d.children[c].rule_id);
        if (!cr || cr->lhs != r->rhs[c])
            throw std::invalid_argument("yield_of: child " + std::to_string(c) + " of rule " +
                                        std::to_string(r->id) + " derives the wrong predicate");
        sub.push_back(yield_of(g, d.children[c]));
    }
    std::vector<std::string> out;
    out.reserve(r->composition.size());
    for (const auto& seq : r->composition) {
        std::string s;
        for (const auto& t : seq) {
            if (t.is_terminal())
                s += g.terminals[t.terminal].name;
            else
                s += sub[t.child][t.arg];
        }
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------
// Text format: one rule per line, e.g.
//
//   S(x y) <- R(x, y)
//   R(x p, q y) <- R(x, y) R(p, q)
//   R(a, A) <-
//   R(eps, eps) <-
//
// Tokens in right-hand-side argument lists declare the variables; a token
// in a left-hand-side argument that is not a declared variable is a
// terminal. `eps` is the empty sequence. The first rule's left-hand side
// is the start predicate. Lines starting with '#' are comments.
// ---------------------------------------------------------------------

namespace detail {

struct pred_use {
    std::string name;
    std::vector<std::vector<std::string>> args;  // token lists per component
};

inline std::vector<std::string> tokens_of(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ' ' || c == '\t') {
            if (!cur.empty()) out.push_back(std::move(cur)), cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

inline pred_use parse_pred_use(std::string_view text, int line_no) {
    auto bad = [&](const std::string& why) {
        throw std::invalid_argument("grammar line " + std::to_string(line_no) + ": " + why);
    };
    auto lp = text.find('(');
    auto rp = text.rfind(')');
    if (lp == std::string_view::npos || rp == std::string_view::npos || rp < lp)
        bad("expected pred(...)");
    pred_use u;
    u.name = std::string(text.substr(0, lp));
    if (u.name.empty()) bad("empty predicate name");
    std::string_view inner = text.substr(lp + 1, rp - lp - 1);
    std::size_t pos = 0;
    while (true) {
        auto comma = inner.find(',', pos);
        std::string_view piece = comma == std::string_view::npos ? inner.substr(pos)
                                                                 : inner.substr(pos, comma - pos);
        auto toks = tokens_of(piece);
        if (toks.size() == 1 && toks[0] == "eps") toks.clear();
        for (const auto& t : toks)
            if (t == "eps") bad("'eps' cannot be mixed with other tokens in one component");
        u.args.push_back(std::move(toks));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return u;
}

}  // namespace detail

inline grammar parse_grammar(std::string_view text) {
    grammar g;
    std::map<std::string, int> pred_idx;
    std::map<std::string, int> term_idx;
    int next_rule_id = 1;
    int line_no = 0;

    auto intern_pred = [&](const std::string& name, int fanout, int line) {
        auto it = pred_idx.find(name);
        if (it == pred_idx.end()) {
            pred_idx[name] = static_cast<int>(g.predicates.size());
            g.predicates.push_back({name, fanout});
            return static_cast<int>(g.predicates.size() - 1);
        }
        if (g.predicates[it->second].fanout != fanout)
            throw std::invalid_argument("grammar line " + std::to_string(line) + ": predicate " + name +
                                        " used with fan-out " + std::to_string(fanout) + " and " +
                                        std::to_string(g.predicates[it->second].fanout));
        return it->second;
    };

    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        auto trim = [](std::string& s) {
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
            std::size_t b = s.find_first_not_of(" \t");
            s = b == std::string::npos ? "" : s.substr(b);
        };
        trim(line);
        if (line.empty()) continue;
        auto arrow = line.find("<-");
        if (arrow == std::string::npos)
            throw std::invalid_argument("grammar line " + std::to_string(line_no) + ": missing '<-'");
        std::string lhs_text = line.substr(0, arrow);
        std::string rhs_text = line.substr(arrow + 2);
        trim(lhs_text);
        trim(rhs_text);

        auto lhs = detail::parse_pred_use(lhs_text, line_no);
        std::vector<detail::pred_use> rhs;
        std::size_t pos = 0;
        while (pos < rhs_text.size()) {
            auto close = rhs_text.find(')', pos);
            if (close == std::string::npos)
                throw std::invalid_argument("grammar line " + std::to_string(line_no) +
                                            ": unbalanced parentheses");
            std::string piece = rhs_text.substr(pos, close - pos + 1);
            std::size_t b = piece.find_first_not_of(" \t");
            rhs.push_back(detail::parse_pred_use(piece.substr(b), line_no));
            pos = close + 1;
        }

        rule r;
        r.id = next_rule_id++;
        r.lhs = intern_pred(lhs.name, static_cast<int>(lhs.args.size()), line_no);
        std::map<std::string, std::pair<int, int>> vars;
        for (std::size_t c = 0; c < rhs.size(); ++c) {
            r.rhs.push_back(intern_pred(rhs[c].name, static_cast<int>(rhs[c].args.size()), line_no));
            for (std::size_t a = 0; a < rhs[c].args.size(); ++a) {
                if (rhs[c].args[a].size() != 1)
                    throw std::invalid_argument("grammar line " + std::to_string(line_no) +
                                                ": right-hand-side components must be single variables");
                const std::string& v = rhs[c].args[a][0];
                if (!vars.emplace(v, std::make_pair(static_cast<int>(c), static_cast<int>(a))).second)
                    throw std::invalid_argument("grammar line " + std::to_string(line_no) +
                                                ": variable " + v + " declared twice");
            }
        }
        for (const auto& arg : lhs.args) {
            std::vector<composition_term> seq;
            for (const auto& tok : arg) {
                auto vit = vars.find(tok);
                if (vit != vars.end()) {
                    seq.push_back(composition_term::var(vit->second.first, vit->second.second));
                } else {
                    auto tit = term_idx.find(tok);
                    int t;
                    if (tit == term_idx.end()) {
                        t = static_cast<int>(g.terminals.size());
                        term_idx[tok] = t;
                        g.terminals.push_back({t, tok});
                    } else {
                        t = tit->second;
                    }
                    seq.push_back(composition_term::lit(t));
                }
            }
            r.composition.push_back(std::move(seq));
        }
        g.rules.push_back(std::move(r));
    }
    if (g.rules.empty()) throw std::invalid_argument("grammar text contains no rules");
    g.start = g.rules.front().lhs;
    return g;
}

inline std::string format_grammar(const grammar& g) {
    std::string out;
    for (const auto& r : g.rules) {
        std::string vars = "xypquvwz";
        auto var_name = [&](int child, int arg) {
            int k = arg;
            for (int c = 0; c < child; ++c) k += g.predicates[r.rhs[c]].fanout;
            if (k < static_cast<int>(vars.size())) return std::string(1, vars[k]);
            return "v" + std::to_string(k);
        };
        out += g.predicates[r.lhs].name + "(";
        for (std::size_t a = 0; a < r.composition.size(); ++a) {
            if (a) out += ", ";
            if (r.composition[a].empty()) {
                out += "eps";
                continue;
            }
            for (std::size_t t = 0; t < r.composition[a].size(); ++t) {
                if (t) out += " ";
                const auto& term = r.composition[a][t];
                out += term.is_terminal() ? g.terminals[term.terminal].name
                                          : var_name(term.child, term.arg);
            }
        }
        out += ") <-";
        for (std::size_t c = 0; c < r.rhs.size(); ++c) {
            out += " " + g.predicates[r.rhs[c]].name + "(";
            for (int a = 0; a < g.predicates[r.rhs[c]].fanout; ++a) {
                if (a) out += ", ";
                out += var_name(static_cast<int>(c), a);
            }
            out += ")";
        }
        out += "\n";
    }
    return out;
}

}  // namespace mcfgmix
