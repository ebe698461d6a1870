#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "mckay/error.hpp"

namespace mckay {

using Rational = mpq_class;
using Integer = mpz_class;

/// num / den in lowest terms.
inline Rational ratio(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// Parses "p" or "p/q" (optional sign, surrounding blanks ignored).
inline Rational parse_rational(std::string_view text) {
    std::string s;
    for (char c : text) {
        if (c != ' ' && c != '\t') s.push_back(c);
    }
    if (!s.empty() && s.front() == '+') s.erase(s.begin());
    if (s.empty()) throw input_error("empty rational literal");
    const auto slash = s.find('/');
    auto digits_ok = [](std::string_view part, bool allow_sign) {
        if (allow_sign && !part.empty() && part.front() == '-') part.remove_prefix(1);
        if (part.empty()) return false;
        for (char c : part) {
            if (c < '0' || c > '9') return false;
        }
        return true;
    };
    const std::string num = s.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!digits_ok(num, true) || !digits_ok(den, false)) {
        throw input_error("malformed rational literal '" + std::string(text) + "'");
    }
    Rational r;
    r.get_num() = Integer(num, 10);
    r.get_den() = Integer(den, 10);
    if (r.get_den() == 0) throw input_error("zero denominator in '" + std::string(text) + "'");
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

/// Exact conversion; throws if r is not an integer that fits in 64 bits.
inline std::int64_t to_int64(const Rational& r) {
    if (!is_integer(r) || !r.get_num().fits_slong_p()) {
        throw input_error("rational " + r.get_str() + " is not a machine integer");
    }
    return r.get_num().get_si();
}

inline Rational rational_pow(const Rational& base, std::int64_t e) {
    if (e < 0) {
        if (base == 0) throw division_by_zero();
        return rational_pow(Rational(1) / base, -e);
    }
    Rational result(1);
    Rational b = base;
    while (e > 0) {
        if (e & 1) result *= b;
        b *= b;
        e >>= 1;
    }
    return result;
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        const std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) {
    if (a == 0 || b == 0) return 0;
    return a / gcd64(a, b) * b;
}

}  // namespace mckay
