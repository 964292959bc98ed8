#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mcfgmix {

// The four-letter alphabet {a, a-bar, b, b-bar}. ASCII syntax used
// throughout the repo: 'a', 'A', 'b', 'B' (capitals are the barred
// letters). UTF-8 input with macrons is accepted where noted.
enum class o2_symbol : std::uint8_t { a = 0, abar = 1, b = 2, bbar = 3 };

using o2_string = std::vector<o2_symbol>;

inline o2_symbol complement(o2_symbol s) {
    switch (s) {
        case o2_symbol::a: return o2_symbol::abar;
        case o2_symbol::abar: return o2_symbol::a;
        case o2_symbol::b: return o2_symbol::bbar;
        case o2_symbol::bbar: return o2_symbol::b;
    }
    throw std::logic_error("bad symbol");
}

inline char to_ascii(o2_symbol s) {
    switch (s) {
        case o2_symbol::a: return 'a';
        case o2_symbol::abar: return 'A';
        case o2_symbol::b: return 'b';
        case o2_symbol::bbar: return 'B';
    }
    throw std::logic_error("bad symbol");
}

inline std::string to_ascii(const o2_string& w) {
    std::string out;
    out.reserve(w.size());
    for (auto s : w) out.push_back(to_ascii(s));
    return out;
}

/// a-bar as U+0101, b-bar as 'b' + combining macron U+0304.
inline std::string to_unicode(const o2_string& w) {
    std::string out;
    for (auto s : w) {
        switch (s) {
            case o2_symbol::a: out += "a"; break;
            case o2_symbol::abar: out += "\xc4\x81"; break;
            case o2_symbol::b: out += "b"; break;
            case o2_symbol::bbar: out += "b\xcc\x84"; break;
        }
    }
    return out;
}

/// Parses the ASCII syntax. With `unicode` set, also accepts the
/// precomposed U+0101 and letters followed by a combining macron U+0304.
inline o2_string parse_o2(std::string_view text, bool unicode = false) {
    o2_string out;
    for (size_t i = 0; i < text.size();) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        bool macron = false;
        o2_symbol sym;
        if (unicode && c == 0xc4 && i + 1 < text.size() &&
            static_cast<unsigned char>(text[i + 1]) == 0x81) {
            out.push_back(o2_symbol::abar);
            i += 2;
            continue;
        }
        switch (c) {
            case 'a': sym = o2_symbol::a; break;
            case 'A': sym = o2_symbol::abar; break;
            case 'b': sym = o2_symbol::b; break;
            case 'B': sym = o2_symbol::bbar; break;
            default:
                throw std::invalid_argument("unexpected character '" + std::string(1, text[i]) +
                                            "' in string at position " + std::to_string(i));
        }
        ++i;
        if (unicode && i + 1 < text.size() && static_cast<unsigned char>(text[i]) == 0xcc &&
            static_cast<unsigned char>(text[i + 1]) == 0x84) {
            if (c != 'a' && c != 'b')
                throw std::invalid_argument("combining macron after '" + std::string(1, text[i - 1]) + "'");
            macron = true;
            i += 2;
        }
        if (macron) sym = complement(sym);
        out.push_back(sym);
    }
    return out;
}

inline o2_string operator""_o2(const char* s, size_t n) { return parse_o2(std::string_view(s, n)); }

}  // namespace mcfgmix
