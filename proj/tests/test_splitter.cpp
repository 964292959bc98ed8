#include <catch2/catch.hpp>

#include <mcfgmix/chart.hpp>
#include <mcfgmix/splitter.hpp>

using namespace mcfgmix;

namespace {

std::pair<o2_string, o2_string> cut_pair(const o2_string& w, std::size_t c) {
    return {o2_string(w.begin(), w.begin() + c), o2_string(w.begin() + c, w.end())};
}

bool replays(const grammar& g, const derivation_node& t, const o2_string& x, const o2_string& y) {
    auto ys = yield_of(g, t);
    return ys.size() == 2 && parse_o2(ys[0]) == x && parse_o2(ys[1]) == y;
}

}  // namespace

TEST_CASE("known split fixtures") {
    SECTION("complementary first steps cut one symbol off each side") {
        auto d = find_split(parse_o2("abaBB"), parse_o2("AAb"));
        CHECK(d.rule_id == 2);
        CHECK(d.provenance == split_case::condition_1);
        CHECK(to_ascii(d.child0().first) == "a");
        CHECK(to_ascii(d.child0().second) == "A");
        CHECK(validate_decision(d, parse_o2("abaBB"), parse_o2("AAb")));
    }
    SECTION("shared interior point swaps the tails") {
        auto d = find_split(parse_o2("baaab"), parse_o2("AABBA"));
        CHECK(d.rule_id == 3);
        CHECK(d.provenance == split_case::condition_2);
        CHECK(d.cuts == std::vector<std::size_t>{2, 3});
        CHECK(to_ascii(d.child0().first) == "ba");
        CHECK(to_ascii(d.child0().second) == "BA");
        CHECK(to_ascii(d.child1().first) == "aab");
        CHECK(to_ascii(d.child1().second) == "AAB");
        CHECK(validate_decision(d, parse_o2("baaab"), parse_o2("AABBA")));
    }
    SECTION("late self-meeting splits out a prefix and suffix") {
        auto d = find_split(parse_o2("bbaaBaaBA"), parse_o2("AAA"));
        CHECK(d.rule_id == 4);
        CHECK(d.provenance == split_case::condition_3);
        CHECK(d.cuts == std::vector<std::size_t>{1, 6});
        CHECK(to_ascii(d.child0().first) == "b");
        CHECK(to_ascii(d.child0().second) == "aBA");
        CHECK(to_ascii(d.child1().first) == "baaBa");
        CHECK(to_ascii(d.child1().second) == "AAA");
        CHECK(validate_decision(d, parse_o2("bbaaBaaBA"), parse_o2("AAA")));
    }
    SECTION("mirror case on the second side") {
        auto d = find_split(parse_o2("aaa"), parse_o2("bAAAB"));
        CHECK(d.rule_id == 5);
        CHECK(d.provenance == split_case::condition_4);
        CHECK(validate_decision(d, parse_o2("aaa"), parse_o2("bAAAB")));
    }
    SECTION("empty second side wraps") {
        auto d = find_split(parse_o2("aA"), {});
        CHECK(d.rule_id == 4);
        CHECK(d.provenance == split_case::wrap);
        CHECK(to_ascii(d.child0().first) == "a");
        CHECK(to_ascii(d.child0().second) == "A");
        CHECK(d.child1().first.empty());
        CHECK(d.child1().second.empty());
        CHECK(validate_decision(d, parse_o2("aA"), {}));
    }
    SECTION("balanced first side detaches") {
        auto d = find_split(parse_o2("aA"), parse_o2("bB"));
        CHECK(d.rule_id == 4);
        CHECK(d.provenance == split_case::first_balanced);
        CHECK(validate_decision(d, parse_o2("aA"), parse_o2("bB")));
    }
    SECTION("balanced proper prefix cuts there") {
        auto d = find_split(parse_o2("aAb"), parse_o2("B"));
        CHECK(d.rule_id == 2);
        CHECK(d.provenance == split_case::prefix_first);
        CHECK(d.cuts == std::vector<std::size_t>{2});
        CHECK(validate_decision(d, parse_o2("aAb"), parse_o2("B")));
    }
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(find_split({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(find_split(parse_o2("a"), parse_o2("A")), std::invalid_argument);
    CHECK_THROWS_AS(find_split(parse_o2("ab"), parse_o2("Ab")), std::invalid_argument);
    CHECK_THROWS_AS(brute_force_split({}, {}), std::invalid_argument);
}

TEST_CASE("decision validation catches corruption") {
    o2_string x = parse_o2("baaab"), y = parse_o2("AABBA");
    auto d = find_split(x, y);
    REQUIRE(validate_decision(d, x, y));

    SECTION("wrong reconstruction") {
        auto bad = d;
        bad.vx.text = parse_o2("ab");
        CHECK_FALSE(validate_decision(bad, x, y));
    }
    SECTION("unbalanced children") {
        auto bad = d;
        std::swap(bad.vy.text, bad.vq.text);  // keeps the parent, breaks the children
        if (detail::replay(bad).first == x && detail::replay(bad).second == y)
            CHECK_FALSE(validate_decision(bad, x, y));
    }
    SECTION("no progress") {
        split_decision lazy;
        lazy.rule_id = 2;
        lazy.vx = {{}, pair_side::first, 0, 0};
        lazy.vp = {x, pair_side::first, 0, x.size()};
        lazy.vy = {{}, pair_side::second, 0, 0};
        lazy.vq = {y, pair_side::second, 0, y.size()};
        CHECK_FALSE(validate_decision(lazy, x, y));
    }
}

TEST_CASE("brute force agrees wherever the case analysis succeeds") {
    grammar g = mix_o2_grammar();
    for (const auto& w : enumerate_o2(8)) {
        if (w.empty()) continue;
        for (std::size_t c = 0; c <= w.size(); ++c) {
            auto [x, y] = cut_pair(w, c);
            if (x.size() <= 1 && y.size() <= 1) continue;
            INFO(to_ascii(x) << "|" << to_ascii(y));
            auto d1 = find_split(x, y);
            auto d2 = brute_force_split(x, y);
            CHECK(validate_decision(d1, x, y));
            CHECK(validate_decision(d2, x, y));
        }
    }
}

TEST_CASE("constructive derivations replay, with progress and bounded depth") {
    grammar g = mix_o2_grammar();
    for (const auto& w : enumerate_o2(8)) {
        for (std::size_t c = 0; c <= w.size(); ++c) {
            auto [x, y] = cut_pair(w, c);
            derive_stats st;
            auto t = derive_constructive(x, y, &st);
            INFO(to_ascii(x) << "|" << to_ascii(y));
            CHECK(replays(g, t, x, y));
            CHECK(st.max_depth <= std::max<std::size_t>(w.size(), 1) + 1);
        }
    }
    CHECK_THROWS_AS(derive_constructive(parse_o2("ab"), parse_o2("Ab")), std::invalid_argument);
}

TEST_CASE("base cases map to the axioms") {
    CHECK(derive_constructive({}, {}).rule_id == 10);
    CHECK(derive_constructive(parse_o2("a"), parse_o2("A")).rule_id == 6);
    CHECK(derive_constructive(parse_o2("A"), parse_o2("a")).rule_id == 7);
    CHECK(derive_constructive(parse_o2("b"), parse_o2("B")).rule_id == 8);
    CHECK(derive_constructive(parse_o2("B"), parse_o2("b")).rule_id == 9);
}

TEST_CASE("every recursive step shrinks the pair or removes an empty side") {
    // instrumented walk: child pairs are strictly smaller, except under a
    // wrap, whose nonempty child must then split strictly
    std::function<void(const o2_string&, const o2_string&)> walk = [&](const o2_string& x,
                                                                       const o2_string& y) {
        if (x.size() <= 1 && y.size() <= 1) return;
        auto d = find_split(x, y);
        std::size_t total = x.size() + y.size();
        auto c0 = d.child0(), c1 = d.child1();
        if (d.provenance == split_case::wrap) {
            CHECK((c1.first.empty() && c1.second.empty()));
            CHECK_FALSE(c0.first.empty());
            CHECK_FALSE(c0.second.empty());
            // the full-size child must not wrap again
            if (!(c0.first.size() <= 1 && c0.second.size() <= 1))
                CHECK(find_split(c0.first, c0.second).provenance != split_case::wrap);
        } else {
            CHECK(c0.first.size() + c0.second.size() < total);
            CHECK(c1.first.size() + c1.second.size() < total);
        }
        walk(c0.first, c0.second);
        walk(c1.first, c1.second);
    };
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto w = sample_o2(12, 7700 + seed);
        for (std::size_t c : {std::size_t(0), w.size() / 2, w.size()}) {
            auto [x, y] = cut_pair(w, c);
            walk(x, y);
        }
    }
}

TEST_CASE("geometric decisions carry at least three nonempty parts") {
    int seen = 0;
    for (const auto& w : enumerate_o2(8)) {
        for (std::size_t c = 1; c < w.size(); ++c) {
            auto [x, y] = cut_pair(w, c);
            if (x.size() <= 1 && y.size() <= 1) continue;
            auto d = find_split(x, y);
            if (d.provenance < split_case::condition_1 || d.provenance > split_case::condition_4)
                continue;
            int nonempty = !d.vx.text.empty() + !d.vy.text.empty() + !d.vp.text.empty() +
                           !d.vq.text.empty();
            CHECK(nonempty >= 3);
            ++seen;
        }
    }
    CHECK(seen > 100);
}

TEST_CASE("splitter and recognizer agree") {
    grammar g = mix_o2_grammar();
    std::mt19937_64 rng(41);
    for (int len = 0; len <= 8; len += 2)
        for (int trial = 0; trial < 30; ++trial) {
            o2_string w(static_cast<std::size_t>(len));
            for (auto& s : w) s = static_cast<o2_symbol>(rng() % 4);
            bool balanced = is_o2(w);
            CHECK(recognize(g, w) == balanced);
            auto [x, y] = cut_pair(w, w.size() / 2);
            if (balanced) {
                CHECK(replays(g, derive_constructive(x, y), x, y));
            } else {
                CHECK_THROWS_AS(derive_constructive(x, y), std::invalid_argument);
            }
        }
}

TEST_CASE("annotated derivations carry case names and cuts") {
    auto t = derive_constructive_annotated(parse_o2("baaab"), parse_o2("AABBA"));
    CHECK(t.rule_id == 3);
    CHECK(t.provenance == split_case::condition_2);
    CHECK(t.cuts == std::vector<std::size_t>{2, 3});
    REQUIRE(t.children.size() == 2);
    CHECK(t.plain().rule_id == 3);
}
