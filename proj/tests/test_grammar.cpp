#include <catch2/catch.hpp>

#include <mcfgmix/grammar.hpp>
#include <mcfgmix/o2.hpp>

#include <random>

using namespace mcfgmix;

namespace {

derivation_node leaf(int rule) { return {rule, {}}; }
derivation_node node(int rule, derivation_node a) { return {rule, {std::move(a)}}; }
derivation_node node(int rule, derivation_node a, derivation_node b) {
    return {rule, {std::move(a), std::move(b)}};
}

// the worked derivation of a B A B A b b a
derivation_node showcase_tree() {
    return node(1, node(4, node(2, leaf(6), leaf(9)), node(3, leaf(7), leaf(9))));
}

}  // namespace

TEST_CASE("built-in grammar shape") {
    grammar g = mix_o2_grammar();
    CHECK(g.rules.size() == 10);
    REQUIRE(g.predicates.size() == 2);
    CHECK(g.predicates[g.start].name == "S");
    CHECK(g.predicates[g.start].fanout == 1);
    CHECK(g.predicates[1].name == "R");
    CHECK(g.predicates[1].fanout == 2);
    CHECK(validate_grammar(g).ok());

    const rule* r4 = g.rule_by_id(4);
    REQUIRE(r4);
    REQUIRE(r4->composition.size() == 2);
    std::vector<composition_term> expect{composition_term::var(0, 0), composition_term::var(1, 0),
                                         composition_term::var(0, 1)};
    CHECK(r4->composition[0] == expect);
    CHECK(r4->composition[1] == std::vector<composition_term>{composition_term::var(1, 1)});
}

TEST_CASE("validation rejects malformed grammars") {
    grammar g = mix_o2_grammar();

    SECTION("duplicated variable") {
        g.rules[1].composition[0] = {composition_term::var(0, 0), composition_term::var(0, 0)};
        auto rep = validate_grammar(g);
        REQUIRE_FALSE(rep.ok());
        bool dup = false, del = false;
        for (const auto& v : rep.violations) {
            if (v.find("duplicated variable") != std::string::npos) dup = true;
            if (v.find("deleted variable") != std::string::npos) del = true;
        }
        CHECK(dup);
        CHECK(del);  // the displaced variable is now unused
    }
    SECTION("rank above two") {
        g.rules[1].rhs.push_back(1);
        auto rep = validate_grammar(g);
        REQUIRE_FALSE(rep.ok());
        CHECK(rep.violations.front().find("rank exceeds 2") != std::string::npos);
    }
    SECTION("unresolved predicate") {
        g.rules[1].rhs[0] = 9;
        CHECK_FALSE(validate_grammar(g).ok());
    }
    SECTION("unreachable predicate") {
        g.predicates.push_back({"T", 1});
        auto rep = validate_grammar(g);
        REQUIRE_FALSE(rep.ok());
        CHECK(rep.violations.front().find("unreachable") != std::string::npos);
    }
    SECTION("start fan-out") {
        g.start = 1;
        CHECK_FALSE(validate_grammar(g).ok());
    }
}

TEST_CASE("yield evaluation") {
    grammar g = mix_o2_grammar();
    CHECK(yield_of(g, showcase_tree()) == std::vector<std::string>{"aBABAbba"});
    CHECK(yield_of(g, leaf(10)) == std::vector<std::string>{"", ""});
    CHECK(yield_of(g, leaf(6)) == std::vector<std::string>{"a", "A"});

    SECTION("structural mismatch") {
        // rule 1 expects one child deriving R
        derivation_node bad{1, {leaf(1)}};
        CHECK_THROWS_AS(yield_of(g, bad), std::invalid_argument);
        derivation_node wrong_arity{4, {leaf(6)}};
        CHECK_THROWS_AS(yield_of(g, wrong_arity), std::invalid_argument);
    }
}

TEST_CASE("random derivations yield balanced pairs") {
    grammar g = mix_o2_grammar();
    std::mt19937_64 rng(11);
    // grow random trees over rules 2..5 with axiom leaves
    std::function<derivation_node(int)> grow = [&](int depth) {
        if (depth <= 0 || rng() % 3 == 0) return leaf(6 + static_cast<int>(rng() % 5));
        int rule = 2 + static_cast<int>(rng() % 4);
        return node(rule, grow(depth - 1), grow(depth - 1));
    };
    for (int i = 0; i < 200; ++i) {
        auto t = grow(5);
        auto ys = yield_of(g, t);
        REQUIRE(ys.size() == 2);
        CHECK(is_o2(parse_o2(ys[0] + ys[1])));
    }
}

TEST_CASE("grammar text format") {
    const char* text =
        "# the shipped grammar\n"
        "S(x y) <- R(x, y)\n"
        "R(x p, y q) <- R(x, y) R(p, q)\n"
        "R(x p, q y) <- R(x, y) R(p, q)\n"
        "R(x p y, q) <- R(x, y) R(p, q)\n"
        "R(p, x q y) <- R(x, y) R(p, q)\n"
        "R(a, A) <-\n"
        "R(A, a) <-\n"
        "R(b, B) <-\n"
        "R(B, b) <-\n"
        "R(eps, eps) <-\n";
    grammar g = parse_grammar(text);
    CHECK(validate_grammar(g).ok());
    REQUIRE(g.rules.size() == 10);
    CHECK(g.predicates[g.start].name == "S");

    grammar ref = mix_o2_grammar();
    // identical rule structure modulo terminal numbering
    for (std::size_t i = 0; i < g.rules.size(); ++i) {
        CHECK(g.rules[i].rhs == ref.rules[i].rhs);
        REQUIRE(g.rules[i].composition.size() == ref.rules[i].composition.size());
        for (std::size_t a = 0; a < g.rules[i].composition.size(); ++a) {
            const auto& seq = g.rules[i].composition[a];
            const auto& rseq = ref.rules[i].composition[a];
            REQUIRE(seq.size() == rseq.size());
            for (std::size_t t = 0; t < seq.size(); ++t) {
                CHECK(seq[t].is_terminal() == rseq[t].is_terminal());
                if (!seq[t].is_terminal()) CHECK(seq[t] == rseq[t]);
                else CHECK(g.terminals[seq[t].terminal].name == ref.terminals[rseq[t].terminal].name);
            }
        }
    }

    SECTION("round trip through the formatter") {
        grammar g2 = parse_grammar(format_grammar(g));
        CHECK(format_grammar(g2) == format_grammar(g));
    }
    SECTION("errors") {
        CHECK_THROWS_AS(parse_grammar("S(x y) R(x, y)\n"), std::invalid_argument);
        CHECK_THROWS_AS(parse_grammar("S(x) <- R(x) R(x)\n"), std::invalid_argument);
        CHECK_THROWS_AS(parse_grammar(""), std::invalid_argument);
        CHECK_THROWS_AS(parse_grammar("S(x, eps y) <- R(x, y)\n"), std::invalid_argument);
    }
}
