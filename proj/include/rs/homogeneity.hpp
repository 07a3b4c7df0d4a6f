#pragma once

#include <compare>
#include <stdexcept>
#include <string>

#include "rs/rational.hpp"

namespace rs {

/*
 * Exact homogeneity arithmetic.
 *
 * Homogeneities live in the module Q + Q·s + Q·k where s is the (rational)
 * fractional-Laplacian parameter and k ("kappa") is a formal positive
 * infinitesimal: 0 < k < q for every positive rational q.  Keeping k formal
 * instead of fixing a small numeric value makes every strict inequality
 * decidable without tuning: compare first the real part c0 + cs·s evaluated
 * exactly at the given s, then break ties by the k-coefficient.
 */
struct SKNumber {
    Rat c0;  // constant part
    Rat cs;  // coefficient of s
    Rat ck;  // coefficient of the infinitesimal k

    SKNumber() = default;
    SKNumber(Rat c0_, Rat cs_, Rat ck_)
        : c0(std::move(c0_)), cs(std::move(cs_)), ck(std::move(ck_)) {}

    friend SKNumber operator+(const SKNumber& a, const SKNumber& b) {
        return {a.c0 + b.c0, a.cs + b.cs, a.ck + b.ck};
    }
    friend SKNumber operator-(const SKNumber& a, const SKNumber& b) {
        return {a.c0 - b.c0, a.cs - b.cs, a.ck - b.ck};
    }
    friend SKNumber operator-(const SKNumber& a) { return {-a.c0, -a.cs, -a.ck}; }
    friend SKNumber operator*(const Rat& n, const SKNumber& a) {
        return {n * a.c0, n * a.cs, n * a.ck};
    }
    SKNumber& operator+=(const SKNumber& b) {
        c0 += b.c0, cs += b.cs, ck += b.ck;
        return *this;
    }
    friend bool operator==(const SKNumber& a, const SKNumber& b) {
        return a.c0 == b.c0 && a.cs == b.cs && a.ck == b.ck;
    }

    /* Real part c0 + cs·s at a concrete rational s; the k part is carried
     * separately by the caller (field ck). */
    Rat eval(const Rat& s) const { return c0 + cs * s; }

    std::string str() const;
};

/* The scaling parameter s.  Symbolic work requires s rational in (0,1);
 * rule generation further restricts to (3/4, 1) at the call site. */
struct SParam {
    Rat s;

    explicit SParam(Rat v) : s(std::move(v)) {
        if (!(s > 0 && s < 1))
            throw std::invalid_argument("s must lie in (0,1), got " + to_string(s));
    }
};

/* Total order: lexicographic on (c0 + cs·s, ck).  Infinitesimal semantics of
 * k means the real part always dominates. */
inline std::strong_ordering compare(const SKNumber& a, const SKNumber& b,
                                    const SParam& s) {
    const Rat va = a.eval(s.s), vb = b.eval(s.s);
    if (va < vb) return std::strong_ordering::less;
    if (va > vb) return std::strong_ordering::greater;
    if (a.ck < b.ck) return std::strong_ordering::less;
    if (a.ck > b.ck) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

inline bool less(const SKNumber& a, const SKNumber& b, const SParam& s) {
    return compare(a, b, s) == std::strong_ordering::less;
}

/* An SKNumber is an integer (in the infinitesimal-k semantics) only when the
 * k part vanishes and the real part is integral at the given s. */
inline bool is_integral(const SKNumber& a, const SParam& s) {
    return a.ck == 0 && is_integer(a.eval(s.s));
}

/* Homogeneity of the driving noise: -3/2 - s - k. */
inline SKNumber noise_homogeneity() { return {Rat(-3, 2), Rat(-1), Rat(-1)}; }

}  // namespace rs
