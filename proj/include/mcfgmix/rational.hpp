#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace mcfgmix {

// Exact arbitrary-precision rational. All geometric predicates in this
// library are decided over this type; no floating point is involved in
// any computation (decimal rendering below is display-only).
using rat = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

inline rat make_rat(std::int64_t num, std::int64_t den = 1) {
    return rat(num, den);
}

inline bool is_integer(const rat& r) { return denominator(r) == 1; }

/// "7", "-3/2", ...
inline std::string rat_to_string(const rat& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) {
        s += "/";
        s += denominator(r).str();
    }
    return s;
}

/// Fixed-point decimal rendering with round-half-away-from-zero,
/// computed in integer arithmetic. Display only.
inline std::string rat_to_decimal(const rat& r, int digits = 6) {
    bigint scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    bigint num = numerator(r) * scale * 2 + (r >= 0 ? denominator(r) : -denominator(r));
    bigint q = num / (denominator(r) * 2);
    bool neg = q < 0;
    bigint aq = neg ? -q : q;
    std::string ds = bigint(aq / scale).str();
    std::string fs = bigint(aq % scale).str();
    fs.insert(fs.begin(), static_cast<size_t>(digits) - fs.size(), '0');
    std::string out = (neg ? "-" : "") + ds;
    if (digits > 0) out += "." + fs;
    return out;
}

}  // namespace mcfgmix
