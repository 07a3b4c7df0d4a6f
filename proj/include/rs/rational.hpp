#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rs {

using Rat = mpq_class;
using Int = mpz_class;

/* Parse "p", "-p/q" etc. into an exact rational.  Throws on malformed input
 * or zero denominator. */
inline Rat parse_rat(const std::string& text) {
    mpq_class q;
    if (q.set_str(text, 10) != 0)
        throw std::invalid_argument("not a rational: '" + text + "'");
    if (q.get_den() == 0)
        throw std::invalid_argument("zero denominator: '" + text + "'");
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rat& q) { return q.get_str(); }

inline Int factorial(unsigned n) {
    Int r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline Int binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline double to_double(const Rat& q) { return q.get_d(); }

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

/* Hash suitable for unordered containers keyed (in part) by rationals. */
inline std::size_t hash_rat(const Rat& q) {
    std::size_t h = 1469598103934665603ull;
    auto mix = [&h](std::size_t v) {
        h ^= v;
        h *= 1099511628211ull;
    };
    mix(mpz_get_ui(q.get_num().get_mpz_t()));
    mix(mpz_get_ui(q.get_den().get_mpz_t()));
    mix(static_cast<std::size_t>(sgn(q) + 1));
    return h;
}

}  // namespace rs
