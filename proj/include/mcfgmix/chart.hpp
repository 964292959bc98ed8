#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "grammar.hpp"
#include "symbols.hpp"

namespace mcfgmix {

// Bottom-up deductive recognition for rank <= 2 grammars. Items are
// predicates instantiated with one input span per component; rank-0 rules
// seed the agenda, unary and binary rules close it. Binary combination is
// boundary-guided: for every rule, the component boundaries that the two
// children must agree on are precomputed, and proved items are indexed by
// those boundary values, so a popped item only meets span-compatible
// partners.

struct chart_options {
    // Keep only items whose components appear left-to-right in the input.
    // Sound for grammars whose rules preserve that order (the fixed O2
    // grammar does); the generic default is off.
    bool monotone_spans = false;
    // Pop the newest item first instead of the oldest. The accepted
    // language must not depend on this; exposed for tests.
    bool lifo_agenda = false;
};

inline chart_options options_for(const grammar& g) {
    chart_options opt;
    // Heuristic identity check for the shipped grammar; generic grammars
    // get the safe default.
    grammar ref = mix_o2_grammar();
    if (g.predicates.size() == 2 && g.rules.size() == 10 && g.terminals.size() == 4) {
        opt.monotone_spans = true;
        for (const auto& r : g.rules) {
            const rule* rr = ref.rule_by_id(r.id);
            if (!rr || rr->composition != r.composition || rr->rhs.size() != r.rhs.size())
                opt.monotone_spans = false;
        }
    }
    return opt;
}

struct chart_stats_t {
    std::size_t items = 0;
    std::size_t deductions = 0;
};

class chart {
  public:
    chart(const grammar& g, std::vector<int> word, chart_options opt = {})
        : g_(g), w_(std::move(word)), opt_(opt) {
        auto rep = validate_grammar(g_);
        if (!rep.ok())
            throw std::invalid_argument("chart: invalid grammar: " + rep.violations.front());
        for (int t : w_)
            if (t < 0 || t >= static_cast<int>(g_.terminals.size()))
                throw std::invalid_argument("chart: input symbol outside the grammar alphabet");
        precompute_links();
        run();
    }

    /// Convenience: recognition over the O2 alphabet with the grammar's
    /// terminal names "a", "A", "b", "B".
    static std::vector<int> encode(const grammar& g, const o2_string& w) {
        std::vector<int> out;
        out.reserve(w.size());
        for (auto s : w) {
            int t = g.terminal_index(std::string(1, to_ascii(s)));
            if (t < 0) throw std::invalid_argument("chart: grammar lacks terminal for input symbol");
            out.push_back(t);
        }
        return out;
    }

    bool recognized() const { return goal_item_ >= 0; }

    chart_stats_t stats() const { return {items_.size(), deductions_}; }

    /// One derivation for the goal, rebuilt from first-proof
    /// justifications; absent when the input is not in the language.
    std::optional<derivation_node> derivation() const {
        if (goal_item_ < 0) return std::nullopt;
        return build_tree(goal_item_);
    }

    struct item_view {
        int pred;
        std::vector<std::int32_t> bounds;
    };
    std::vector<item_view> all_items() const {
        std::vector<item_view> out;
        out.reserve(items_.size());
        for (const auto& it : items_) out.push_back({it.pred, it.bounds});
        return out;
    }
    /// Justification chain of the idx-th item, as a tree.
    derivation_node item_derivation(std::size_t idx) const {
        return build_tree(static_cast<int>(idx));
    }

  private:
    struct item {
        int pred = 0;
        std::vector<std::int32_t> bounds;  // start0, end0, start1, end1, ...
        int rule_id = 0;
        int prem[2] = {-1, -1};
    };

    struct vec_hash {
        std::size_t operator()(const std::vector<std::int32_t>& v) const {
            std::size_t h = 1469598103934665603ull;
            for (auto x : v) {
                h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
                h *= 1099511628211ull;
            }
            return h;
        }
    };

    // end of (child a, component i) + offset == start of (child b, component j)
    struct link {
        int from_child, from_arg, to_child, to_arg;
        int offset;
        std::vector<int> gap_terminals;  // fixed terminals inside the gap
    };

    const grammar& g_;
    std::vector<int> w_;
    chart_options opt_;

    std::vector<item> items_;
    std::unordered_map<std::vector<std::int32_t>, int, vec_hash> index_;
    // per rule: cross-child links, and per role an index keyed by the
    // canonical link boundary values
    std::vector<std::vector<link>> cross_links_;
    std::vector<std::unordered_map<std::vector<std::int32_t>, std::vector<int>, vec_hash>> join_[2];
    std::deque<int> agenda_;
    std::size_t deductions_ = 0;
    int goal_item_ = -1;

    void precompute_links() {
        cross_links_.resize(g_.rules.size());
        join_[0].resize(g_.rules.size());
        join_[1].resize(g_.rules.size());
        for (std::size_t ri = 0; ri < g_.rules.size(); ++ri) {
            const rule& r = g_.rules[ri];
            if (r.rhs.size() != 2) continue;
            for (const auto& seq : r.composition) {
                const composition_term* prev_var = nullptr;
                std::vector<int> gap;
                for (const auto& t : seq) {
                    if (t.is_terminal()) {
                        gap.push_back(t.terminal);
                        continue;
                    }
                    if (prev_var && prev_var->child != t.child)
                        cross_links_[ri].push_back({prev_var->child, prev_var->arg, t.child, t.arg,
                                                    static_cast<int>(gap.size()), gap});
                    prev_var = &t;
                    gap.clear();
                }
            }
        }
    }

    // Canonical boundary value of a link as seen from one child's item.
    static std::int32_t link_value(const link& l, int child, const item& it) {
        if (l.from_child == child) return it.bounds[2 * l.from_arg + 1] + l.offset;
        return it.bounds[2 * l.to_arg];
    }

    std::vector<std::int32_t> join_key(std::size_t ri, int role, const item& it) const {
        std::vector<std::int32_t> key;
        key.reserve(cross_links_[ri].size());
        for (const auto& l : cross_links_[ri]) key.push_back(link_value(l, role, it));
        return key;
    }

    bool monotone_ok(const std::vector<std::int32_t>& bounds) const {
        if (!opt_.monotone_spans) return true;
        for (std::size_t i = 0; i + 2 < bounds.size(); i += 2)
            if (bounds[i + 1] > bounds[i + 2]) return false;
        return true;
    }

    void push(int pred, std::vector<std::int32_t> bounds, int rule_id, int p0, int p1) {
        ++deductions_;
        std::vector<std::int32_t> key;
        key.reserve(bounds.size() + 1);
        key.push_back(pred);
        key.insert(key.end(), bounds.begin(), bounds.end());
        auto [it, inserted] = index_.try_emplace(std::move(key), static_cast<int>(items_.size()));
        if (!inserted) return;
        item n;
        n.pred = pred;
        n.bounds = std::move(bounds);
        n.rule_id = rule_id;
        n.prem[0] = p0;
        n.prem[1] = p1;
        items_.push_back(std::move(n));
        agenda_.push_back(static_cast<int>(items_.size() - 1));
    }

    // All parent span tuples a rule instance can produce from the given
    // child items (nullptr = unused slot). Sequences without variables are
    // anchored at every matching input position.
    void instantiate(const rule& r, const item* c0, const item* c1, int id0, int id1) {
        const int n = static_cast<int>(w_.size());
        std::vector<std::vector<std::pair<std::int32_t, std::int32_t>>> per_seq;
        per_seq.reserve(r.composition.size());
        for (const auto& seq : r.composition) {
            std::vector<std::pair<std::int32_t, std::int32_t>> cands;
            bool has_var = false;
            for (const auto& t : seq)
                if (!t.is_terminal()) has_var = true;
            if (!has_var) {
                const int len = static_cast<int>(seq.size());
                for (int i = 0; i + len <= n; ++i) {
                    bool ok = true;
                    for (int k = 0; k < len; ++k)
                        if (w_[i + k] != seq[k].terminal) {
                            ok = false;
                            break;
                        }
                    if (ok) cands.emplace_back(i, i + len);
                }
            } else {
                // positions forced by the variables' spans
                std::int32_t pos = -1, start = -1;
                bool ok = true;
                for (const auto& t : seq) {
                    if (t.is_terminal()) {
                        if (pos >= 0) {
                            if (pos >= n || w_[pos] != t.terminal) {
                                ok = false;
                                break;
                            }
                            ++pos;
                        }
                        continue;
                    }
                    const item* c = t.child == 0 ? c0 : c1;
                    std::int32_t s = c->bounds[2 * t.arg];
                    std::int32_t e = c->bounds[2 * t.arg + 1];
                    if (pos >= 0 && s != pos) {
                        ok = false;
                        break;
                    }
                    if (pos < 0) {
                        // leading terminals precede the first variable
                        std::int32_t lead = 0;
                        for (const auto& u : seq) {
                            if (!u.is_terminal()) break;
                            ++lead;
                        }
                        start = s - lead;
                        if (start < 0) {
                            ok = false;
                            break;
                        }
                        for (std::int32_t k = 0; k < lead; ++k)
                            if (w_[start + k] != seq[k].terminal) {
                                ok = false;
                                break;
                            }
                        if (!ok) break;
                    }
                    pos = e;
                }
                if (ok && pos > n) ok = false;
                if (ok) cands.emplace_back(start, pos);
            }
            if (cands.empty()) return;
            per_seq.push_back(std::move(cands));
        }
        // cartesian product over the per-component candidates
        std::vector<std::size_t> pick(per_seq.size(), 0);
        for (;;) {
            std::vector<std::int32_t> bounds;
            bounds.reserve(2 * per_seq.size());
            for (std::size_t i = 0; i < per_seq.size(); ++i) {
                bounds.push_back(per_seq[i][pick[i]].first);
                bounds.push_back(per_seq[i][pick[i]].second);
            }
            if (monotone_ok(bounds)) push(r.lhs, std::move(bounds), r.id, id0, id1);
            std::size_t k = 0;
            while (k < pick.size() && ++pick[k] == per_seq[k].size()) pick[k++] = 0;
            if (k == pick.size()) break;
        }
    }

    void run() {
        for (const auto& r : g_.rules)
            if (r.rhs.empty()) instantiate(r, nullptr, nullptr, -1, -1);

        while (!agenda_.empty()) {
            int id;
            if (opt_.lifo_agenda) {
                id = agenda_.back();
                agenda_.pop_back();
            } else {
                id = agenda_.front();
                agenda_.pop_front();
            }
            // Index first so an item can pair with itself.
            for (std::size_t ri = 0; ri < g_.rules.size(); ++ri) {
                const rule& r = g_.rules[ri];
                if (r.rhs.size() != 2) continue;
                for (int role = 0; role < 2; ++role)
                    if (r.rhs[role] == items_[id].pred)
                        join_[role][ri][join_key(ri, role, items_[id])].push_back(id);
            }
            for (std::size_t ri = 0; ri < g_.rules.size(); ++ri) {
                const rule& r = g_.rules[ri];
                if (r.rhs.size() == 1) {
                    if (r.rhs[0] == items_[id].pred) {
                        item tmp = items_[id];
                        instantiate(r, &tmp, nullptr, id, -1);
                    }
                    continue;
                }
                if (r.rhs.size() != 2) continue;
                if (r.rhs[0] == items_[id].pred) {
                    auto key = join_key(ri, 0, items_[id]);
                    auto hit = join_[1][ri].find(key);
                    if (hit != join_[1][ri].end())
                        for (int pid : hit->second) {
                            item c0 = items_[id], c1 = items_[pid];
                            instantiate(r, &c0, &c1, id, pid);
                        }
                }
                if (r.rhs[1] == items_[id].pred) {
                    auto key = join_key(ri, 1, items_[id]);
                    auto hit = join_[0][ri].find(key);
                    if (hit != join_[0][ri].end())
                        for (int pid : hit->second) {
                            if (pid == id) continue;  // handled as role 0
                            item c0 = items_[pid], c1 = items_[id];
                            instantiate(r, &c0, &c1, pid, id);
                        }
                }
            }
        }

        std::vector<std::int32_t> goal_key{g_.start, 0, static_cast<std::int32_t>(w_.size())};
        auto it = index_.find(goal_key);
        goal_item_ = it == index_.end() ? -1 : it->second;
    }

    derivation_node build_tree(int id) const {
        const item& it = items_[id];
        derivation_node node;
        node.rule_id = it.rule_id;
        for (int k = 0; k < 2; ++k)
            if (it.prem[k] >= 0) node.children.push_back(build_tree(it.prem[k]));
        return node;
    }
};

inline bool recognize(const grammar& g, const o2_string& w) {
    return chart(g, chart::encode(g, w), options_for(g)).recognized();
}

inline bool recognize(const grammar& g, const o2_string& w, chart_options opt) {
    return chart(g, chart::encode(g, w), opt).recognized();
}

inline std::optional<derivation_node> derive(const grammar& g, const o2_string& w) {
    return chart(g, chart::encode(g, w), options_for(g)).derivation();
}

inline chart_stats_t chart_stats(const grammar& g, const o2_string& w) {
    return chart(g, chart::encode(g, w), options_for(g)).stats();
}

}  // namespace mcfgmix
