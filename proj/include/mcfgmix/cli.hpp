#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "chart.hpp"
#include "emit.hpp"
#include "grammar.hpp"
#include "o2.hpp"
#include "splitter.hpp"

namespace mcfgmix::cli {

// Exit codes: 0 success/accept, 1 reject/counterexample, 2 usage or input
// error. All results go to `out`, diagnostics to `err`.

namespace detail {

inline int default_jobs() {
    if (const char* env = std::getenv("MCFG_MIX_JOBS")) {
        int j = std::atoi(env);
        if (j >= 1) return j;
    }
    return 1;
}

/// Splits [0, total) into `jobs` chunks; fn(chunk_index, begin, end).
/// Chunk results must be merged associatively by chunk index afterwards.
template <typename Fn>
void run_partitioned(std::uint64_t total, int jobs, Fn fn) {
    jobs = std::max(1, std::min<int>(jobs, static_cast<int>(std::max<std::uint64_t>(total, 1))));
    if (jobs == 1) {
        fn(0, 0, total);
        return;
    }
    std::vector<std::thread> workers;
    std::uint64_t chunk = (total + jobs - 1) / jobs;
    for (int j = 0; j < jobs; ++j) {
        std::uint64_t b = j * chunk, e = std::min<std::uint64_t>(total, (j + 1) * chunk);
        if (b >= e) break;
        workers.emplace_back([&, j, b, e] { fn(j, b, e); });
    }
    for (auto& w : workers) w.join();
}

inline o2_string decode_word(std::uint64_t code, int len) {
    o2_string w(static_cast<std::size_t>(len));
    for (int i = 0; i < len; ++i) {
        w[static_cast<std::size_t>(i)] = static_cast<o2_symbol>(code & 3);
        code >>= 2;
    }
    return w;
}

inline grammar load_grammar(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open grammar file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    grammar g = parse_grammar(ss.str());
    auto rep = validate_grammar(g);
    if (!rep.ok()) throw std::invalid_argument("grammar rejected: " + rep.violations.front());
    return g;
}

/// True when the pair has no nonempty balanced substring on either side.
inline bool admissible_pair(const o2_string& w, std::size_t cut,
                            const std::vector<displacement_t>& pre) {
    auto side_clean = [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i)
            for (std::size_t j = i + 2; j <= e; j += 2)
                if (pre[i].i == pre[j].i && pre[i].j == pre[j].j) return false;
        return true;
    };
    return side_clean(0, cut) && side_clean(cut, w.size());
}

struct timing {
    std::vector<double> samples;
    double quantile(double q) const {
        if (samples.empty()) return 0;
        auto s = samples;
        std::sort(s.begin(), s.end());
        std::size_t i = static_cast<std::size_t>(q * (s.size() - 1));
        return s[i];
    }
};

}  // namespace detail

inline int cmd_recognize(const grammar& g, const std::string& text, bool unicode, bool builtin,
                         std::ostream& out, std::ostream& err) {
    try {
        bool ok;
        if (builtin) {
            ok = recognize(g, parse_o2(text, unicode));
        } else {
            // custom grammars: every input character is a terminal name
            std::vector<int> word;
            for (char c : text) {
                int t = g.terminal_index(std::string(1, c));
                if (t < 0)
                    throw std::invalid_argument("symbol '" + std::string(1, c) +
                                                "' is not a terminal of the grammar");
                word.push_back(t);
            }
            ok = chart(g, std::move(word), options_for(g)).recognized();
        }
        out << (ok ? "accept" : "reject") << "\n";
        return ok ? 0 : 1;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

inline int cmd_derive(const grammar& g, const std::string& text, const std::string& method,
                      const std::string& format, bool unicode, std::ostream& out,
                      std::ostream& err) {
    o2_string w;
    try {
        w = parse_o2(text, unicode);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    std::optional<derivation_node> tree;
    std::optional<constructive_node> annotated;
    if (method == "chart") {
        tree = derive(g, w);
    } else {
        if (is_o2(w)) {
            // top rule splits the input after its first symbol
            constructive_node root;
            root.rule_id = 1;
            root.provenance = split_case::start;
            if (w.empty()) {
                constructive_node leaf;
                leaf.rule_id = 10;
                root.children.push_back(std::move(leaf));
            } else {
                o2_string x(w.begin(), w.begin() + 1), y(w.begin() + 1, w.end());
                root.children.push_back(derive_constructive_annotated(x, y));
            }
            annotated = std::move(root);
            tree = annotated->plain();
        }
    }
    if (!tree) {
        err << "error: string is not in the language\n";
        return 1;
    }
    auto ys = yield_of(g, *tree);
    if (ys.size() != 1 || parse_o2(ys[0]) != w) {
        err << "internal error: derivation does not replay to the input\n";
        return 1;
    }
    if (format == "sexpr")
        out << derivation_to_sexpr(*tree) << "\n";
    else if (annotated)
        out << derivation_to_json(*annotated).dump(2) << "\n";
    else
        out << derivation_to_json(*tree).dump(2) << "\n";
    return 0;
}

inline int cmd_check(int max_len, const std::string& method, int jobs, std::ostream& out,
                     std::ostream& err) {
    grammar g = mix_o2_grammar();
    bool all_ok = true;
    for (int len = 0; len <= max_len; ++len) {
        std::uint64_t total = 1;
        for (int i = 0; i < len; ++i) total *= 4;
        std::vector<std::uint64_t> accepted(static_cast<std::size_t>(jobs), 0);
        std::vector<std::uint64_t> mismatches(static_cast<std::size_t>(jobs), 0);
        detail::run_partitioned(total, jobs, [&](int c, std::uint64_t b, std::uint64_t e) {
            for (std::uint64_t code = b; code < e; ++code) {
                o2_string w = detail::decode_word(code, len);
                bool expect = is_o2(w);
                if (expect) ++accepted[static_cast<std::size_t>(c)];
                if (method == "chart" || method == "both") {
                    if (recognize(g, w) != expect) ++mismatches[static_cast<std::size_t>(c)];
                }
                if ((method == "constructive" || method == "both") && expect) {
                    for (std::size_t cut = 0; cut <= w.size(); ++cut) {
                        o2_string x(w.begin(), w.begin() + cut), y(w.begin() + cut, w.end());
                        try {
                            auto t = derive_constructive(x, y);
                            auto ys = yield_of(g, t);
                            if (parse_o2(ys[0]) != x || parse_o2(ys[1]) != y)
                                ++mismatches[static_cast<std::size_t>(c)];
                        } catch (const std::exception&) {
                            ++mismatches[static_cast<std::size_t>(c)];
                        }
                    }
                }
            }
        });
        std::uint64_t acc = 0, mis = 0;
        for (std::size_t c = 0; c < accepted.size(); ++c) {
            acc += accepted[c];
            mis += mismatches[c];
        }
        out << "length " << len << ": strings " << total << ", accepted " << acc;
        if (mis) out << ", MISMATCHES " << mis;
        out << "\n";
        if (mis) all_ok = false;
    }
    if (!all_ok) {
        err << "check failed\n";
        return 1;
    }
    out << "ok\n";
    return 0;
}

inline int cmd_lemma_check(int max_len, int samples, int sample_len, std::uint64_t seed, int jobs,
                           std::ostream& out, std::ostream& err) {
    std::vector<std::uint64_t> hist(5, 0);
    std::uint64_t admissible = 0, counter = 0;
    std::vector<std::string> examples;

    auto consider = [&](const o2_string& w, std::size_t cut, std::vector<std::uint64_t>& h,
                        std::uint64_t& adm, std::uint64_t& bad, std::vector<std::string>& ex) {
        if (w.size() <= 2 || cut == 0 || cut == w.size()) return;
        std::vector<displacement_t> pre(w.size() + 1);
        for (std::size_t i = 0; i < w.size(); ++i)
            pre[i + 1] = pre[i] + displacement(o2_string{w[i]});
        if (!detail::admissible_pair(w, cut, pre)) return;
        ++adm;
        o2_string x(w.begin(), w.begin() + cut), y(w.begin() + cut, w.end());
        configuration cfg(x, y);
        auto conds = four_split_conditions(cfg);
        if (conds.empty()) {
            ++bad;
            if (ex.size() < 10) ex.push_back(to_ascii(x) + "|" + to_ascii(y));
        }
        for (const auto& c : conds) ++h[static_cast<std::size_t>(c.condition)];
    };

    if (samples > 0) {
        std::vector<std::vector<std::uint64_t>> h(static_cast<std::size_t>(jobs),
                                                  std::vector<std::uint64_t>(5, 0));
        std::vector<std::uint64_t> adm(static_cast<std::size_t>(jobs), 0),
            bad(static_cast<std::size_t>(jobs), 0);
        std::vector<std::vector<std::string>> ex(static_cast<std::size_t>(jobs));
        detail::run_partitioned(static_cast<std::uint64_t>(samples), jobs,
                                [&](int c, std::uint64_t b, std::uint64_t e) {
                                    for (std::uint64_t i = b; i < e; ++i) {
                                        auto w = sample_o2(static_cast<std::size_t>(sample_len),
                                                           seed + i);
                                        std::mt19937_64 rng(seed ^ (i * 0x9e3779b97f4a7c15ull));
                                        std::size_t cut =
                                            1 + static_cast<std::size_t>(
                                                    rng() % (static_cast<std::uint64_t>(sample_len) - 1));
                                        consider(w, cut, h[static_cast<std::size_t>(c)],
                                                 adm[static_cast<std::size_t>(c)],
                                                 bad[static_cast<std::size_t>(c)],
                                                 ex[static_cast<std::size_t>(c)]);
                                    }
                                });
        for (std::size_t c = 0; c < h.size(); ++c) {
            for (int k = 1; k <= 4; ++k) hist[static_cast<std::size_t>(k)] += h[c][static_cast<std::size_t>(k)];
            admissible += adm[c];
            counter += bad[c];
            for (auto& s : ex[c])
                if (examples.size() < 10) examples.push_back(std::move(s));
        }
        out << "sampled pairs: " << samples << " (length " << sample_len << ", seed " << seed
            << ")\n";
    } else {
        enumerate_o2(static_cast<std::size_t>(max_len), [&](const o2_string& w) {
            for (std::size_t cut = 1; cut < w.size(); ++cut)
                consider(w, cut, hist, admissible, counter, examples);
        });
        out << "exhaustive pairs up to length " << max_len << "\n";
    }
    out << "admissible pairs: " << admissible << "\n";
    for (int c = 1; c <= 4; ++c)
        out << "condition " << c << " holds: " << hist[static_cast<std::size_t>(c)] << "\n";
    out << "counterexamples: " << counter << "\n";
    for (const auto& s : examples) err << "counterexample: " << s << "\n";
    return counter == 0 ? 0 : 1;
}

inline int cmd_geometry(const std::string& xs, const std::string& ys, bool unicode, int k_lo,
                        int k_hi, const std::string& svg_file, const std::string& json_file,
                        std::ostream& out, std::ostream& err) {
    try {
        o2_string x = parse_o2(xs, unicode), y = parse_o2(ys, unicode);
        if (x.empty() && y.empty()) {
            err << "error: both strings are empty\n";
            return 2;
        }
        configuration cfg(x, y);
        if (svg_file.empty() && json_file.empty()) {
            err << "error: request --svg and/or --json output\n";
            return 2;
        }
        if (!json_file.empty()) {
            std::ofstream f(json_file);
            if (!f) {
                err << "error: cannot write " << json_file << "\n";
                return 2;
            }
            f << geometry_json(cfg, k_lo, k_hi).dump(2) << "\n";
            out << "wrote " << json_file << "\n";
        }
        if (!svg_file.empty()) {
            std::ofstream f(svg_file);
            if (!f) {
                err << "error: cannot write " << svg_file << "\n";
                return 2;
            }
            f << geometry_svg(cfg, k_lo, k_hi);
            out << "wrote " << svg_file << "\n";
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

inline int cmd_bench(const std::vector<int>& lengths, int samples, std::uint64_t seed,
                     std::ostream& out, std::ostream&) {
    grammar g = mix_o2_grammar();
    std::vector<double> log_len, log_items;
    for (int len : lengths) {
        detail::timing rec_t, der_t;
        std::uint64_t items_total = 0;
        for (int s = 0; s < samples; ++s) {
            auto w = sample_o2(static_cast<std::size_t>(len), seed + static_cast<std::uint64_t>(s));
            auto t0 = std::chrono::steady_clock::now();
            chart ch(g, chart::encode(g, w), options_for(g));
            auto t1 = std::chrono::steady_clock::now();
            rec_t.samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
            items_total += ch.stats().items;
            if (!w.empty()) {
                o2_string x(w.begin(), w.begin() + 1), y(w.begin() + 1, w.end());
                auto t2 = std::chrono::steady_clock::now();
                derive_constructive(x, y);
                auto t3 = std::chrono::steady_clock::now();
                der_t.samples.push_back(std::chrono::duration<double, std::milli>(t3 - t2).count());
            }
        }
        // exact mean, rendered deterministically; timings in microseconds
        rat items_mean = rat(static_cast<std::int64_t>(items_total), samples);
        auto us = [](double ms) { return std::to_string(static_cast<long long>(ms * 1000)); };
        out << "length " << len << ": samples " << samples << ", items_mean "
            << rat_to_decimal(items_mean, 2) << ", recognize_us median " << us(rec_t.quantile(0.5))
            << " p95 " << us(rec_t.quantile(0.95)) << ", derive_us median "
            << us(der_t.quantile(0.5)) << " p95 " << us(der_t.quantile(0.95)) << "\n";
        log_len.push_back(std::log(static_cast<double>(len)));
        log_items.push_back(std::log(static_cast<double>(items_total) / samples));
    }
    if (log_len.size() >= 2) {
        double n = static_cast<double>(log_len.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < log_len.size(); ++i) {
            sx += log_len[i];
            sy += log_items[i];
            sxx += log_len[i] * log_len[i];
            sxy += log_len[i] * log_items[i];
        }
        double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3f", slope);
        out << "item growth exponent (log-log fit): " << buf << "\n";
    }
    return 0;
}

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"MCFG engine and path-geometry toolkit for the two-pair balance language"};
    app.require_subcommand(1);

    std::string grammar_file, input, method = "chart", format = "json";
    bool unicode = false;
    int max_len = 6, jobs = detail::default_jobs();
    int samples = 0, sample_len = 12;
    std::uint64_t seed = 1;
    std::string xs, ys, k_range = "0..1", svg_file, json_file;
    std::vector<int> lengths;

    auto* rec = app.add_subcommand("recognize", "decide membership of a string");
    rec->add_option("--grammar", grammar_file, "grammar file (rule-per-line format)");
    rec->add_flag("--mix-o2", "use the built-in grammar (default)");
    rec->add_flag("--unicode", unicode, "accept macron letters in the input");
    rec->add_option("string", input, "input word (a, A, b, B)")->required();

    auto* der = app.add_subcommand("derive", "emit a derivation for a string");
    der->add_option("--method", method, "chart|constructive")
        ->check(CLI::IsMember({"chart", "constructive"}));
    der->add_option("--format", format, "json|sexpr")->check(CLI::IsMember({"json", "sexpr"}));
    der->add_flag("--unicode", unicode, "accept macron letters in the input");
    der->add_option("string", input, "input word")->required();

    auto* chk = app.add_subcommand("check", "compare engine vs. counting oracle exhaustively");
    chk->add_option("--max-len", max_len, "maximum string length")->required();
    std::string chk_method = "both";
    chk->add_option("--method", chk_method, "chart|constructive|both")
        ->check(CLI::IsMember({"chart", "constructive", "both"}));
    chk->add_option("--jobs", jobs, "worker threads");

    auto* lem = app.add_subcommand("lemma-check",
                                   "verify a split condition holds for every admissible pair");
    lem->add_option("--max-len", max_len, "exhaustive mode: maximum length");
    lem->add_option("--samples", samples, "sampled mode: number of pairs");
    lem->add_option("--len", sample_len, "sampled mode: string length");
    lem->add_option("--seed", seed, "sampled mode: base seed");
    lem->add_option("--jobs", jobs, "worker threads");

    auto* geo = app.add_subcommand("geometry", "dump path geometry as JSON and/or SVG");
    geo->add_option("x", xs, "first string")->required();
    geo->add_option("y", ys, "second string")->required();
    geo->add_flag("--unicode", unicode, "accept macron letters in the input");
    geo->add_option("--k-range", k_range, "translate range, e.g. -1..2");
    geo->add_option("--svg", svg_file, "SVG output file");
    geo->add_option("--json", json_file, "JSON output file");

    auto* ben = app.add_subcommand("bench", "timings and chart growth on sampled strings");
    ben->add_option("--lengths", lengths, "comma-separated lengths")
        ->required()
        ->delimiter(',');
    ben->add_option("--samples", samples, "samples per length")->required();
    ben->add_option("--seed", seed, "base seed");

    try {
        std::vector<const char*> argv;
        argv.push_back("mcfg-mix");
        for (auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (rec->parsed()) {
            bool builtin = grammar_file.empty();
            grammar g = builtin ? mix_o2_grammar() : detail::load_grammar(grammar_file);
            return cmd_recognize(g, input, unicode, builtin, out, err);
        }
        if (der->parsed()) {
            return cmd_derive(mix_o2_grammar(), input, method, format, unicode, out, err);
        }
        if (chk->parsed()) return cmd_check(max_len, chk_method, jobs, out, err);
        if (lem->parsed()) return cmd_lemma_check(max_len, samples, sample_len, seed, jobs, out, err);
        if (geo->parsed()) {
            auto dots = k_range.find("..");
            if (dots == std::string::npos) {
                err << "error: --k-range expects lo..hi\n";
                return 2;
            }
            int k_lo = std::stoi(k_range.substr(0, dots));
            int k_hi = std::stoi(k_range.substr(dots + 2));
            return cmd_geometry(xs, ys, unicode, k_lo, k_hi, svg_file, json_file, out, err);
        }
        if (ben->parsed()) return cmd_bench(lengths, samples, seed, out, err);
    } catch (const split_failure& e) {
        err << "hard failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand\n";
    return 2;
}

}  // namespace mcfgmix::cli
