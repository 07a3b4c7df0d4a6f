#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rs/homogeneity.hpp"
#include "rs/multi.hpp"
#include "rs/rational.hpp"

namespace rs {

/*
 * Canonical decorated non-planar rooted trees.
 *
 * A tree is either the noise atom Xi (a leaf) or a node carrying a polynomial
 * decoration k together with an unordered multiset of planted subtrees: each
 * child enters through an edge decorated by a multi-index m, standing for the
 * kernel derivative I_m.  Every tree thus matches the unique factorization
 *     tau = X^k * prod_i I_{m_i}(tau_i)^{beta_i}.
 *
 * Trees are hash-consed: construction goes through an interner, structural
 * equality is pointer equality, and expensive per-tree quantities
 * (homogeneity, symmetry factor) are memoized on the node.
 */
struct Tree;
using TreePtr = const Tree*;

struct Edge {
    Multi m;       // edge decoration (kernel derivative)
    TreePtr child;

    friend bool operator==(const Edge& a, const Edge& b) {
        return a.m == b.m && a.child == b.child;
    }
};

struct Tree {
    bool noise;               // true for the atom Xi
    Multi k;                  // node decoration at the root (zero Multi for Xi)
    std::vector<Edge> edges;  // canonically sorted

    std::size_t hash;

    // memoized lazily (interned trees are logically immutable)
    mutable std::optional<SKNumber> homog;
    mutable Int symfac = 0;
    mutable int grammar = -1;  // -1 unknown, 0 no, 1 yes

    std::size_t dim_plus_1() const { return k.size(); }
};

struct NoiseProduct : std::invalid_argument {
    NoiseProduct() : std::invalid_argument("product with the noise atom Xi") {}
};
struct NotSubTernary : std::invalid_argument {
    explicit NotSubTernary(const std::string& w)
        : std::invalid_argument("counting function undefined: " + w) {}
};

/* Canonical structural total order: Xi < node; nodes by (k, edge list), edges
 * by (m, child) recursively.  Interned pointers short-circuit equality. */
bool tree_less(TreePtr a, TreePtr b);
inline bool tree_eq(TreePtr a, TreePtr b) { return a == b; }

struct TreeLess {
    bool operator()(TreePtr a, TreePtr b) const { return tree_less(a, b); }
};

/* --- interning constructors ------------------------------------------- */

TreePtr noise(std::size_t d = 3);                       // Xi
TreePtr monomial(const Multi& k);                       // X^k
TreePtr one(std::size_t d = 3);                         // X^0
TreePtr make_tree(const Multi& k, std::vector<Edge> edges);

inline bool is_noise(TreePtr t) { return t->noise; }
inline bool is_monomial(TreePtr t) { return !t->noise && t->edges.empty(); }
inline bool is_one(TreePtr t) { return is_monomial(t) && t->k.is_zero(); }
/* Planted tree I_m(tau): zero root decoration, single edge. */
inline bool is_planted(TreePtr t) {
    return !t->noise && t->k.is_zero() && t->edges.size() == 1;
}

/* --- linear combinations ---------------------------------------------- */

class LinComb {
  public:
    using Map = std::map<TreePtr, Rat, TreeLess>;

    LinComb() = default;
    explicit LinComb(TreePtr t, Rat c = 1) {
        if (c != 0) terms_[t] = std::move(c);
    }

    static LinComb zero() { return LinComb(); }

    void add(TreePtr t, const Rat& c) {
        if (c == 0) return;
        auto it = terms_.find(t);
        if (it == terms_.end()) {
            terms_.emplace(t, c);
        } else {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    LinComb& operator+=(const LinComb& o) {
        for (auto& [t, c] : o.terms_) add(t, c);
        return *this;
    }
    friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }
    friend LinComb operator*(const Rat& c, const LinComb& x) {
        LinComb r;
        if (c == 0) return r;
        for (auto& [t, q] : x.terms_) r.terms_[t] = c * q;
        return r;
    }
    friend LinComb operator-(const LinComb& a, const LinComb& b) {
        LinComb r = a;
        for (auto& [t, c] : b.terms_) r.add(t, -c);
        return r;
    }
    friend bool operator==(const LinComb& a, const LinComb& b) {
        return a.terms_ == b.terms_;
    }

    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    const Map& terms() const { return terms_; }
    Rat coeff(TreePtr t) const {
        auto it = terms_.find(t);
        return it == terms_.end() ? Rat(0) : it->second;
    }

  private:
    Map terms_;
};

/* --- operations -------------------------------------------------------- */

/* Root-joining product; unit is X^0.  Throws NoiseProduct on Xi. */
TreePtr product(TreePtr a, TreePtr b);

/* I_m(t) as a one-term combination; zero when t is a pure monomial
 * (convention I(X^k) := 0). */
LinComb plant(const Multi& m, TreePtr t);
/* The planted tree itself; t must not be a monomial. */
TreePtr plant_tree(const Multi& m, TreePtr t);

/* Symmetry factor tau! (Xi! = 1). */
Int symmetry_factor(TreePtr t);

/* Symmetry factor from an ordered presentation (k; (m_1,tau_1)..(m_n,tau_n)):
 * k! * (n!/delta) * prod tau_i!, where delta is the number of distinct ordered
 * tuples representing the same multiset, counted by explicit permutation
 * enumeration (n <= 10). */
Int symmetry_factor_from_presentation(const Multi& k,
                                      const std::vector<std::pair<Multi, TreePtr>>& factors);

/* Homogeneity |tau|_s as an exact SKNumber (independent of the value of s). */
const SKNumber& homogeneity(TreePtr t);

/* Number of noise leaves. */
unsigned leaf_count(TreePtr t);

/* Membership in the cubic-rule grammar: Xi, X^k, X^k I(tau), X^k I_j(tau)
 * (j spatial), X^k I(tau1)I(tau2), I(tau1)I(tau2)I(tau3), children
 * recursively in the grammar and never bare monomials. */
bool in_grammar(TreePtr t);

/* Counting function m for trees in the grammar (number of missing branches):
 * m(Xi)=0, unary adds 2, binary adds 1, ternary adds 0.  Undefined on
 * monomials and out-of-grammar trees. */
unsigned missing_count(TreePtr t);

struct TreeStats {
    unsigned leaves = 0;      // number of noise leaves
    SKNumber node_total;      // |n(tau)|_s summed over nodes
    SKNumber edge_total;      // |e(tau)|_s summed over edges
    bool is_full = false;     // every non-noise node has exactly 3 children
    bool is_subternary = false;
};
TreeStats stats(TreePtr t);

/* Number of nodes (noise leaves included); pre-order indexing of nodes is the
 * canonical node-handle convention used by grafting. */
unsigned node_count(TreePtr t);

/* Short diagnostic form (the parser module owns the round-trip grammar). */
std::string debug_str(TreePtr t);
std::string debug_str(const LinComb& x);

}  // namespace rs
