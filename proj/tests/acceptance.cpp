// Acceptance suite: one line per criterion, each run at its stated
// tolerance; exits nonzero when any criterion fails.

#include <mcfgmix/chart.hpp>
#include <mcfgmix/cli.hpp>
#include <mcfgmix/emit.hpp>
#include <mcfgmix/splitter.hpp>
#include <mcfgmix/truncation.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

using namespace mcfgmix;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s  %s\n", criterion, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

o2_string decode(std::uint64_t code, int len) {
    o2_string w(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) {
        w[static_cast<std::size_t>(i)] = static_cast<o2_symbol>(code & 3);
        code >>= 2;
    }
    return w;
}

struct corpus {
    std::vector<o2_string> accepted_short;   // criterion 1 accepts
    std::vector<o2_string> accepted_long;    // criterion 2 accepts
};

corpus shared;

// 1. exhaustive equivalence with the counting oracle, lengths 0..8
void criterion1() {
    grammar g = mix_o2_grammar();
    const std::vector<std::uint64_t> expect{1, 0, 4, 0, 36, 0, 400, 0, 4900};
    std::uint64_t checked = 0, mismatches = 0;
    std::vector<std::uint64_t> accepted(9, 0);
    for (int len = 0; len <= 8; ++len) {
        std::uint64_t total = 1;
        for (int i = 0; i < len; ++i) total *= 4;
        for (std::uint64_t code = 0; code < total; ++code) {
            o2_string w = decode(code, len);
            bool got = recognize(g, w);
            if (got != is_o2(w)) ++mismatches;
            if (got) {
                ++accepted[static_cast<std::size_t>(len)];
                shared.accepted_short.push_back(w);
            }
            ++checked;
        }
    }
    bool counts_ok = true;
    for (int len = 0; len <= 8; ++len)
        if (accepted[static_cast<std::size_t>(len)] != expect[static_cast<std::size_t>(len)])
            counts_ok = false;
    std::ostringstream d;
    d << "exhaustive equivalence: " << checked << " strings, " << mismatches
      << " mismatches; accept counts";
    for (int len = 0; len <= 8; len += 2) d << " " << accepted[static_cast<std::size_t>(len)];
    report(1, mismatches == 0 && counts_ok, d.str());
}

// 2. randomized equivalence at lengths 10..16
void criterion2() {
    grammar g = mix_o2_grammar();
    std::uint64_t checked = 0, mismatches = 0;
    for (int len = 10; len <= 16; len += 2) {
        std::mt19937_64 rng(0xC0FFEEull + static_cast<std::uint64_t>(len));
        for (int i = 0; i < 5000; ++i) {
            auto w = sample_o2(static_cast<std::size_t>(len),
                               static_cast<std::uint64_t>(len) * 100000 + static_cast<std::uint64_t>(i));
            bool got = recognize(g, w);
            if (!got) ++mismatches;  // sampler output is balanced by construction
            if (got) shared.accepted_long.push_back(w);
            ++checked;
        }
        for (int i = 0; i < 5000; ++i) {
            o2_string w(static_cast<std::size_t>(len));
            for (auto& s : w) s = static_cast<o2_symbol>(rng() % 4);
            bool got = recognize(g, w);
            if (got != is_o2(w)) ++mismatches;
            if (got) shared.accepted_long.push_back(w);
            ++checked;
        }
    }
    std::ostringstream d;
    d << "randomized equivalence: " << checked << " strings, " << mismatches << " mismatches";
    report(2, mismatches == 0, d.str());
}

// 3. chart derivations replay for every accepted string above
void criterion3() {
    grammar g = mix_o2_grammar();
    std::uint64_t checked = 0, bad = 0;
    auto verify = [&](const o2_string& w) {
        auto t = derive(g, w);
        if (!t) {
            ++bad;
            return;
        }
        auto ys = yield_of(g, *t);
        if (ys.size() != 1 || parse_o2(ys[0]) != w) ++bad;
        ++checked;
    };
    for (const auto& w : shared.accepted_short) verify(w);
    for (const auto& w : shared.accepted_long) verify(w);
    std::ostringstream d;
    d << "derivation soundness: " << checked << " accepted strings replayed, " << bad
      << " failures";
    report(3, bad == 0, d.str());
}

// 4. constructive derivations for every split of every balanced string
// up to length 10
void criterion4() {
    grammar g = mix_o2_grammar();
    std::uint64_t pairs = 0, bad = 0;
    enumerate_o2(10, [&](const o2_string& w) {
        for (std::size_t c = 0; c <= w.size(); ++c) {
            o2_string x(w.begin(), w.begin() + c), y(w.begin() + c, w.end());
            ++pairs;
            try {
                auto t = derive_constructive(x, y);
                auto ys = yield_of(g, t);
                if (parse_o2(ys[0]) != x || parse_o2(ys[1]) != y) ++bad;
            } catch (const std::exception&) {
                ++bad;
            }
        }
    });
    std::ostringstream d;
    d << "constructive totality: " << pairs << " split pairs, " << bad << " hard failures";
    report(4, bad == 0, d.str());
}

// 5. a split condition fires for every admissible pair up to length 12
void criterion5() {
    std::ostringstream out, err;
    int code = cli::cmd_lemma_check(12, 0, 0, 0, 1, out, err);
    std::string text = out.str();
    std::string detail = "central lemma: ";
    for (auto& ch : text)
        if (ch == '\n') ch = ';';
    detail += text;
    report(5, code == 0, detail);
}

// 6. pinned fixtures, exactly as drawn
void criterion6() {
    grammar g = mix_o2_grammar();
    bool ok = true;
    std::ostringstream d;

    // closed pair: endpoint and acceptance
    {
        auto p = path_of(parse_o2("aBABAb"));
        ok = ok && p.end() == ipoint{-1, -1};
        ok = ok && recognize(g, parse_o2("aBABAbba"));
        d << "closed-pair endpoint (-1,-1) ok";
    }
    // opposite starting steps: rule 2 with the complementary pair child
    {
        auto dec = find_split(parse_o2("abaBB"), parse_o2("AAb"));
        ok = ok && dec.rule_id == 2 && dec.provenance == split_case::condition_1 &&
             to_ascii(dec.child0().first) == "a" && to_ascii(dec.child0().second) == "A";
        d << "; condition-1 split ok";
    }
    // interior meeting point (1,1)
    {
        configuration cfg(parse_o2("baaab"), parse_o2("AABBA"));
        auto conds = four_split_conditions(cfg);
        ok = ok && conds.size() == 1 && conds[0].condition == 2 &&
             conds[0].q == rpoint{rat(1), rat(1)};
        d << "; condition-2 witness (1,1) ok";
    }
    // late self-meeting: witness one unit above the first multiple, 6 > 1
    {
        configuration cfg(parse_o2("bbaaBaaBA"), parse_o2("AAA"));
        auto conds = four_split_conditions(cfg);
        rpoint rel{conds[0].q.x - rat(cfg.d.i), conds[0].q.y - rat(cfg.d.j)};
        ok = ok && conds.size() == 1 && conds[0].condition == 3 &&
             rel == rpoint{rat(0), rat(1)} && conds[0].d_first == 6 && conds[0].d_second == 1;
        auto dec = find_split(parse_o2("bbaaBaaBA"), parse_o2("AAA"));
        ok = ok && dec.rule_id == 4 && to_ascii(dec.child0().first) == "b" &&
             to_ascii(dec.child0().second) == "aBA";
        d << "; condition-3 witness (0,1)+P1, 6>1, split b/aBA ok";
    }
    report(6, ok, d.str());
}

// 7. truncation invariants on 1000 seeded configurations
void criterion7() {
    std::mt19937_64 rng(20240917);
    std::size_t made = 0, steps_total = 0;
    std::uint64_t violations = 0;
    std::uint64_t seed = 0;
    while (made < 1000) {
        ++seed;
        std::size_t len = 6 + 2 * (rng() % 6);  // 6..16
        auto w = sample_o2(len, 31000 + seed);
        std::size_t cut = 1 + static_cast<std::size_t>(rng() % (w.size() - 1));
        o2_string x(w.begin(), w.begin() + cut), y(w.begin() + cut, w.end());
        if (is_o2(x)) continue;
        auto [rx, ry, rec] = reduce(x, y);
        if (rx.empty() || ry.empty()) continue;
        poly_config pc{configuration(rx, ry)};
        ++made;

        std::size_t contacts0 = total_line_contacts(pc);
        std::size_t crossings0 = total_line_contacts(pc, true);
        std::size_t touches0 = contacts0 - crossings0;
        auto res = normalize(pc);

        std::size_t prev_contacts = contacts0, prev_crossings = crossings0;
        std::size_t crossing_steps = 0, touch_steps = 0;
        for (const auto& step : res.steps) {
            if (!(step.contacts_before == prev_contacts && step.contacts_after < prev_contacts))
                ++violations;
            if (step.crossings_after > step.crossings_before) ++violations;
            if ((step.crossings_before - step.crossings_after) % 2 != 0) ++violations;
            if (step.crossings_after < step.crossings_before)
                ++crossing_steps;
            else
                ++touch_steps;
            prev_contacts = step.contacts_after;
            prev_crossings = step.crossings_after;
        }
        (void)prev_crossings;
        if (crossing_steps > crossings0 / 2) ++violations;
        if (touch_steps > touches0) ++violations;
        if (res.steps.size() > contacts0) ++violations;

        if (!(res.config.a.vertices.front() == pc.a.vertices.front() &&
              res.config.a.vertices.back() == pc.a.vertices.back() &&
              res.config.b.vertices.front() == pc.b.vertices.front() &&
              res.config.b.vertices.back() == pc.b.vertices.back()))
            ++violations;
        if (!is_simple(res.config.a) || !is_simple(res.config.b)) ++violations;
        steps_total += res.steps.size();
    }
    std::ostringstream d;
    d << "truncation invariants: 1000 configurations, " << steps_total << " truncations, "
      << violations << " violations";
    report(7, violations == 0, d.str());
}

// 8. case analysis and exhaustive oracle both succeed on the criterion-4
// corpus
void criterion8() {
    std::uint64_t pairs = 0, bad = 0;
    enumerate_o2(10, [&](const o2_string& w) {
        for (std::size_t c = 0; c <= w.size(); ++c) {
            o2_string x(w.begin(), w.begin() + c), y(w.begin() + c, w.end());
            if (x.size() <= 1 && y.size() <= 1) continue;  // axiom territory
            ++pairs;
            try {
                auto d1 = find_split(x, y);
                auto d2 = brute_force_split(x, y);
                if (!validate_decision(d1, x, y) || !validate_decision(d2, x, y)) ++bad;
            } catch (const std::exception&) {
                ++bad;
            }
        }
    });
    std::ostringstream d;
    d << "oracle agreement: " << pairs << " pairs, " << bad << " failures";
    report(8, bad == 0, d.str());
}

// 9. performance sanity
void criterion9() {
    grammar g = mix_o2_grammar();
    bool ok = true;
    std::ostringstream d;

    {
        auto w = sample_o2(30, 300);
        auto t0 = std::chrono::steady_clock::now();
        bool r = recognize(g, w);
        auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ok = ok && r;
        char buf[64];
        std::snprintf(buf, sizeof buf, "recognize@30 %s in %.3fs", r ? "ok" : "FAILED", dt);
        d << buf;
    }
    {
        auto w = sample_o2(200, 301);
        o2_string x(w.begin(), w.begin() + 100), y(w.begin() + 100, w.end());
        auto t0 = std::chrono::steady_clock::now();
        auto t = derive_constructive(x, y);
        auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        auto ys = yield_of(g, t);
        bool replay = parse_o2(ys[0]) == x && parse_o2(ys[1]) == y;
        bool fast = dt < 1.0;
        ok = ok && replay && fast;
        char buf[64];
        std::snprintf(buf, sizeof buf, "; constructive@200 %.3fs (< 1s %s)", dt,
                      fast ? "ok" : "FAILED");
        d << buf;
    }
    {
        // mean chart items per length over seeded samples, log-log slope
        std::vector<double> xs, ys;
        for (int len = 8; len <= 24; len += 2) {
            const int K = 30;
            double total = 0;
            for (int s = 0; s < K; ++s)
                total += static_cast<double>(
                    chart_stats(g, sample_o2(static_cast<std::size_t>(len),
                                             static_cast<std::uint64_t>(90000 + 100 * len + s)))
                        .items);
            xs.push_back(std::log(static_cast<double>(len)));
            ys.push_back(std::log(total / K));
        }
        double n = static_cast<double>(xs.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
        }
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        bool in_range = slope >= 3.5 && slope <= 4.5;
        ok = ok && in_range;
        char buf[96];
        std::snprintf(buf, sizeof buf, "; item-growth exponent %.2f in [3.5,4.5] %s", slope,
                      in_range ? "ok" : "FAILED");
        d << buf;
    }
    report(9, ok, d.str());
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    else std::printf("all criteria passed\n");
    return failures == 0 ? 0 : 1;
}
