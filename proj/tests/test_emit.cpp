#include <catch2/catch.hpp>

#include <mcfgmix/emit.hpp>
#include <mcfgmix/splitter.hpp>

#include <fstream>
#include <sstream>

using namespace mcfgmix;

namespace {
std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
}  // namespace

TEST_CASE("derivation json schema") {
    grammar g = mix_o2_grammar();
    derivation_node t{1, {derivation_node{4, {derivation_node{6}, derivation_node{10}}}}};
    json j = derivation_to_json(t);
    CHECK(j["rule"] == 1);
    REQUIRE(j["children"].size() == 1);
    CHECK(j["children"][0]["rule"] == 4);
    CHECK(j["children"][0]["children"].size() == 2);

    auto back = derivation_from_json(j);
    CHECK(yield_of(g, back) == yield_of(g, t));

    CHECK(derivation_to_sexpr(t) == "(1 (4 (6) (10)))");
}

TEST_CASE("annotated derivation json carries case and cut information") {
    auto t = derive_constructive_annotated(parse_o2("baaab"), parse_o2("AABBA"));
    json j = derivation_to_json(t);
    CHECK(j["rule"] == 3);
    CHECK(j["case"] == "condition_2");
    CHECK(j["cuts"] == json::array({2, 3}));
    // stripping annotations keeps the tree shape
    auto back = derivation_from_json(j);
    CHECK(back.rule_id == 3);
    CHECK(back.children.size() == 2);
}

TEST_CASE("geometry json") {
    SECTION("witness of the late self-meeting appears with its distances") {
        configuration cfg(parse_o2("bbaaBaaBA"), parse_o2("AAA"));
        json j = geometry_json(cfg, -1, 2);
        CHECK(j["x"] == "bbaaBaaBA");
        CHECK(j["displacement"]["i"] == 3);
        CHECK(j["displacement"]["j"] == 0);
        CHECK(j["paths"]["A"].contains("0"));
        CHECK(j["paths"]["A"]["0"][0] == json::array({"0", "0"}));
        CHECK(j["paths"]["B"]["1"][0] == json::array({"3", "0"}));

        REQUIRE(j.contains("constraints"));
        CHECK(j["constraints"]["i"] == true);
        CHECK(j["constraints"]["iii"] == false);
        bool witness_found = false;
        for (const auto& w : j["constraints"]["witnesses"])
            if (w["condition"] == 3 && w["q"] == json::array({"3", "1"})) {
                CHECK(w["d_first"] == "6");
                CHECK(w["d_second"] == "1");
                witness_found = true;
            }
        CHECK(witness_found);

        // exactly one crossing of the first separator line
        int crossings_k0 = 0;
        for (const auto& c : j["crossings"])
            if (c["path"] == "A" && c["k"] == 0) {
                ++crossings_k0;
                CHECK(c["direction"] == "left_to_right");
                CHECK(c["d_entry"] == "7/2");
            }
        CHECK(crossings_k0 == 1);
    }
    SECTION("excursions carry area, zero-area and filled flags") {
        configuration cfg(parse_o2("aabAba"), parse_o2("ABAB"));
        json j = geometry_json(cfg, 0, 1);
        bool found = false;
        for (const auto& e : j["excursions"])
            if (e["path"] == "A" && e["k"] == 0) {
                CHECK(e["side"] == "right");
                CHECK(e["zero_area"] == true);
                CHECK(e["area"] == "0");
                CHECK(e["filled"] == false);
                found = true;
            }
        CHECK(found);
    }
    SECTION("zero displacement marks the dump degenerate") {
        configuration cfg(parse_o2("aA"), parse_o2("bB"));
        json j = geometry_json(cfg, 0, 1);
        CHECK(j["degenerate"] == true);
        CHECK_FALSE(j.contains("crossings"));
    }
}

TEST_CASE("svg output is deterministic and matches the golden file") {
    configuration cfg(parse_o2("aBABAb"), parse_o2("ba"));
    std::string svg1 = geometry_svg(cfg, -1, 1);
    std::string svg2 = geometry_svg(cfg, -1, 1);
    CHECK(svg1 == svg2);
    CHECK(svg1.find("<svg") == 0);
    CHECK(svg1.find("stroke-dasharray") != std::string::npos);
    CHECK(svg1.find("<circle") != std::string::npos);

    std::string golden = read_file(std::string(TEST_DATA_DIR) + "/closed_pair.svg");
    CHECK(svg1 == golden);
}
