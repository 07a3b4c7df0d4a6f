#pragma once

#include <compare>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "rs/homogeneity.hpp"
#include "rs/rational.hpp"

namespace rs {

/*
 * Multi-index k in N^{1+d}.  Index 0 is the time direction, which carries
 * parabolic weight 2s; spatial indices carry weight 1.
 */
struct Multi {
    std::vector<unsigned> v;  // length d+1

    Multi() = default;
    explicit Multi(std::size_t dim_plus_1) : v(dim_plus_1, 0) {}
    explicit Multi(std::vector<unsigned> w) : v(std::move(w)) {}

    static Multi unit(std::size_t dim_plus_1, std::size_t i) {
        Multi m(dim_plus_1);
        m.v.at(i) = 1;
        return m;
    }

    std::size_t size() const { return v.size(); }
    unsigned operator[](std::size_t i) const { return v[i]; }
    bool is_zero() const {
        for (unsigned x : v)
            if (x) return false;
        return true;
    }
    unsigned total() const {
        unsigned t = 0;
        for (unsigned x : v) t += x;
        return t;
    }

    /* |k|_s = 2s*k0 + sum_{i>=1} k_i */
    SKNumber shomog() const {
        unsigned sp = 0;
        for (std::size_t i = 1; i < v.size(); i++) sp += v[i];
        return {Rat(sp), Rat(2u * v[0]), Rat(0)};
    }

    Int fact() const {
        Int r = 1;
        for (unsigned x : v) r *= factorial(x);
        return r;
    }

    /* Componentwise binomial; zero when j is not <= k componentwise. */
    friend Int binom(const Multi& k, const Multi& j) {
        check_dim(k, j);
        Int r = 1;
        for (std::size_t i = 0; i < k.v.size(); i++) {
            if (j.v[i] > k.v[i]) return 0;
            r *= binomial(k.v[i], j.v[i]);
        }
        return r;
    }

    friend bool leq(const Multi& j, const Multi& k) {
        check_dim(j, k);
        for (std::size_t i = 0; i < j.v.size(); i++)
            if (j.v[i] > k.v[i]) return false;
        return true;
    }

    friend Multi operator+(const Multi& a, const Multi& b) {
        check_dim(a, b);
        Multi r(a.v.size());
        for (std::size_t i = 0; i < a.v.size(); i++) r.v[i] = a.v[i] + b.v[i];
        return r;
    }
    /* Requires b <= a componentwise. */
    friend Multi operator-(const Multi& a, const Multi& b) {
        check_dim(a, b);
        Multi r(a.v.size());
        for (std::size_t i = 0; i < a.v.size(); i++) {
            if (b.v[i] > a.v[i]) throw std::invalid_argument("multi-index subtraction underflow");
            r.v[i] = a.v[i] - b.v[i];
        }
        return r;
    }

    friend auto operator<=>(const Multi& a, const Multi& b) = default;

    std::string str() const {
        std::string out = "(";
        for (std::size_t i = 0; i < v.size(); i++) {
            if (i) out += ",";
            out += std::to_string(v[i]);
        }
        return out + ")";
    }

  private:
    static void check_dim(const Multi& a, const Multi& b) {
        if (a.v.size() != b.v.size())
            throw std::invalid_argument("multi-index dimension mismatch");
    }
};

/* Enumerate all j with j <= k componentwise (inclusive), in lexicographic order. */
template <typename F>
void for_each_sub_multi(const Multi& k, F&& f) {
    Multi j(k.size());
    while (true) {
        f(static_cast<const Multi&>(j));
        std::size_t i = 0;
        for (; i < k.size(); i++) {
            if (j.v[i] < k.v[i]) {
                j.v[i]++;
                for (std::size_t l = 0; l < i; l++) j.v[l] = 0;
                break;
            }
        }
        if (i == k.size()) break;
    }
}

inline std::size_t hash_multi(const Multi& m) {
    std::size_t h = 14695981039346656037ull;
    for (unsigned x : m.v) {
        h ^= x + 1;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace rs
