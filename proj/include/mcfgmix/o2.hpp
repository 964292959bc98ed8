#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "rational.hpp"
#include "symbols.hpp"

namespace mcfgmix {

// Net step count of a string: i = #a - #abar, j = #b - #bbar.
struct displacement_t {
    std::int64_t i = 0;
    std::int64_t j = 0;
    friend bool operator==(const displacement_t&, const displacement_t&) = default;
    bool is_zero() const { return i == 0 && j == 0; }
    displacement_t operator-() const { return {-i, -j}; }
    displacement_t operator+(const displacement_t& o) const { return {i + o.i, j + o.j}; }
};

inline displacement_t displacement(const o2_string& w) {
    displacement_t d;
    for (auto s : w) {
        switch (s) {
            case o2_symbol::a: ++d.i; break;
            case o2_symbol::abar: --d.i; break;
            case o2_symbol::b: ++d.j; break;
            case o2_symbol::bbar: --d.j; break;
        }
    }
    return d;
}

inline bool is_o2(const o2_string& w) { return displacement(w).is_zero(); }

/// Equal counts of 'a', 'b', 'c'.
inline bool is_mix(std::string_view w) {
    std::int64_t na = 0, nb = 0, nc = 0;
    for (char c : w) {
        switch (c) {
            case 'a': ++na; break;
            case 'b': ++nb; break;
            case 'c': ++nc; break;
            default:
                throw std::invalid_argument("mix strings use the alphabet {a,b,c}");
        }
    }
    return na == nb && nb == nc;
}

/// All balanced strings of length <= max_len, shortest first, each length
/// block in lexicographic symbol-id order (a < A < b < B).
inline void enumerate_o2(std::size_t max_len, const std::function<void(const o2_string&)>& visit) {
    o2_string cur;
    // Depth-first with feasibility pruning: remaining steps must cover the
    // current displacement.
    std::function<void(std::size_t, std::int64_t, std::int64_t)> rec =
        [&](std::size_t len, std::int64_t i, std::int64_t j) {
            if (cur.size() == len) {
                if (i == 0 && j == 0) visit(cur);
                return;
            }
            std::int64_t rest = static_cast<std::int64_t>(len - cur.size());
            if (std::abs(i) + std::abs(j) > rest) return;
            for (int s = 0; s < 4; ++s) {
                auto sym = static_cast<o2_symbol>(s);
                cur.push_back(sym);
                auto d = displacement_t{i, j} + displacement(o2_string{sym});
                rec(len, d.i, d.j);
                cur.pop_back();
            }
        };
    for (std::size_t len = 0; len <= max_len; len += 2) rec(len, 0, 0);
}

inline std::vector<o2_string> enumerate_o2(std::size_t max_len) {
    std::vector<o2_string> out;
    enumerate_o2(max_len, [&](const o2_string& w) { out.push_back(w); });
    return out;
}

/// Uniform sample from the balanced strings of the given even length.
/// Exact integer weights: the count of a's is drawn with probability
/// proportional to len!/(k! k! (n-k)! (n-k)!), then the multiset is
/// shuffled. Deterministic for a fixed seed.
inline o2_string sample_o2(std::size_t len, std::uint64_t seed) {
    if (len % 2 != 0) throw std::invalid_argument("sample_o2: length must be even");
    std::mt19937_64 rng(seed);
    if (len == 0) return {};
    std::size_t n = len / 2;

    auto binom = [](std::size_t nn, std::size_t kk) {
        bigint r = 1;
        for (std::size_t t = 1; t <= kk; ++t) {
            r *= static_cast<unsigned long>(nn - kk + t);
            r /= static_cast<unsigned long>(t);
        }
        return r;
    };
    std::vector<bigint> weights(n + 1);
    bigint total = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        // arrangements of a^k abar^k b^(n-k) bbar^(n-k)
        weights[k] = binom(len, k) * binom(len - k, k) * binom(len - 2 * k, n - k);
        total += weights[k];
    }

    auto draw_below = [&](const bigint& bound) {
        std::size_t bits = 0;
        bigint t = bound - 1;
        while (t > 0) {
            ++bits;
            t >>= 1;
        }
        for (;;) {
            bigint v = 0;
            for (std::size_t got = 0; got < bits; got += 64) {
                v <<= 64;
                v |= bigint(rng());
            }
            std::size_t excess = (bits + 63) / 64 * 64 - bits;
            v >>= excess;
            if (v < bound) return v;
        }
    };

    bigint pick = draw_below(total);
    std::size_t k = 0;
    while (pick >= weights[k]) {
        pick -= weights[k];
        ++k;
    }

    o2_string w;
    w.insert(w.end(), k, o2_symbol::a);
    w.insert(w.end(), k, o2_symbol::abar);
    w.insert(w.end(), n - k, o2_symbol::b);
    w.insert(w.end(), n - k, o2_symbol::bbar);
    for (std::size_t i = w.size() - 1; i > 0; --i) {
        std::size_t j = std::uniform_int_distribution<std::size_t>(0, i)(rng);
        std::swap(w[i], w[j]);
    }
    return w;
}

enum class pair_side : std::uint8_t { first = 0, second = 1 };

// One exhaustive-removal bookkeeping record. `removals` lists each deleted
// balanced substring by the span it occupied in the original string (spans
// of later removals may enclose earlier ones; the removed character sets
// are disjoint). `orig_index` maps reduced character positions to original
// positions, strictly increasing, one vector per side.
struct removal_record {
    struct removal {
        std::size_t begin = 0;  // original coordinates, [begin, end)
        std::size_t end = 0;
        pair_side side = pair_side::first;
    };
    std::vector<removal> removals;
    std::vector<std::size_t> orig_index[2];
    std::size_t orig_len[2] = {0, 0};

    bool empty() const { return removals.empty(); }
};

namespace detail {

/// Shortest, then leftmost, nonempty balanced substring; nullopt if none.
inline std::optional<std::pair<std::size_t, std::size_t>> min_balanced_substring(const o2_string& w) {
    std::vector<displacement_t> pre(w.size() + 1);
    for (std::size_t i = 0; i < w.size(); ++i)
        pre[i + 1] = pre[i] + displacement(o2_string{w[i]});
    for (std::size_t len = 2; len <= w.size(); len += 2)
        for (std::size_t i = 0; i + len <= w.size(); ++i) {
            const auto& lo = pre[i];
            const auto& hi = pre[i + len];
            if (lo.i == hi.i && lo.j == hi.j) return std::make_pair(i, i + len);
        }
    return std::nullopt;
}

}  // namespace detail

/// Deletes balanced substrings from x, then from y, shortest-leftmost
/// first, until neither side contains one. Returns the reduced pair and a
/// record sufficient to lift cut positions back to the original strings.
inline std::tuple<o2_string, o2_string, removal_record> reduce(const o2_string& x, const o2_string& y) {
    o2_string cur[2] = {x, y};
    removal_record rec;
    rec.orig_len[0] = x.size();
    rec.orig_len[1] = y.size();
    for (int side = 0; side < 2; ++side) {
        rec.orig_index[side].resize(cur[side].size());
        for (std::size_t i = 0; i < cur[side].size(); ++i) rec.orig_index[side][i] = i;
    }
    for (int side = 0; side < 2; ++side) {
        for (;;) {
            auto hit = detail::min_balanced_substring(cur[side]);
            if (!hit) break;
            auto [b, e] = *hit;
            auto& idx = rec.orig_index[side];
            rec.removals.push_back({idx[b], idx[e - 1] + 1, static_cast<pair_side>(side)});
            cur[side].erase(cur[side].begin() + b, cur[side].begin() + e);
            idx.erase(idx.begin() + b, idx.begin() + e);
        }
    }
    return {cur[0], cur[1], rec};
}

/// Maps a cut position in a reduced string back to the original string.
/// Removed material between two surviving characters goes with the left
/// part; material before the first surviving character stays with the
/// right part of cut 0, so empty reduced parts lift to empty parts.
inline std::size_t lift(const removal_record& rec, std::size_t cut, pair_side side) {
    const auto& idx = rec.orig_index[static_cast<int>(side)];
    if (cut > idx.size()) throw std::invalid_argument("lift: cut beyond reduced length");
    if (cut == 0) return 0;
    if (cut == idx.size()) return rec.orig_len[static_cast<int>(side)];
    return idx[cut];
}

}  // namespace mcfgmix
