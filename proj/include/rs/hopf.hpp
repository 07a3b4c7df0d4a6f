#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rs/tree.hpp"

namespace rs {

/*
 * Grafting calculus and the positive Hopf algebra acting on trees.
 *
 * T is spanned by the decorated trees; the positive algebra T+ is the free
 * commutative algebra on the generators X^{e_j} and the planted symbols
 * I_m(tau) of positive homogeneity.  A Forest is a monomial in T+,
 *     mu = X^k * prod_i I_{m_i}(sigma_i),
 * the coaction Delta maps T to T (x) T+, the coproduct maps T+ to T+ (x) T+,
 * and characters of T+ form a group under convolution whose action on T is
 * the structure group.
 */

struct InvalidNode : std::out_of_range {
    explicit InvalidNode(const std::string& w) : std::out_of_range(w) {}
};
struct GraftIntoNoise : std::invalid_argument {
    GraftIntoNoise() : std::invalid_argument("cannot graft into the bare noise") {}
};
struct StarIntoNoise : std::invalid_argument {
    StarIntoNoise() : std::invalid_argument("star product into the bare noise") {}
};
struct MissingGeneratorValue : std::out_of_range {
    explicit MissingGeneratorValue(const std::string& w) : std::out_of_range(w) {}
};

/* --- forests (monomials of T+) ----------------------------------------- */

struct Forest {
    Multi k;                                         // polynomial part X^k
    std::vector<std::pair<Multi, TreePtr>> factors;  // sorted (m, sigma) pairs

    std::size_t dim_plus_1() const { return k.size(); }
    bool is_unit() const { return k.is_zero() && factors.empty(); }
};

Forest forest_unit(std::size_t d = 3);
Forest forest_monomial(const Multi& k);
Forest forest_planted(const Multi& m, TreePtr sigma);
/* Canonicalizing constructor: sorts the factor list. */
Forest make_forest(const Multi& k, std::vector<std::pair<Multi, TreePtr>> factors);
Forest forest_mul(const Forest& a, const Forest& b);

bool forest_less(const Forest& a, const Forest& b);
bool operator==(const Forest& a, const Forest& b);
struct ForestLess {
    bool operator()(const Forest& a, const Forest& b) const { return forest_less(a, b); }
};

SKNumber forest_homogeneity(const Forest& f);
/* mu! = k! * prod over distinct factors (sigma!)^beta * beta! */
Int forest_factorial(const Forest& f);
/* Every planted factor has positive homogeneity at this s. */
bool forest_in_plus(const Forest& f, const SParam& s);
std::string debug_str(const Forest& f);

/* --- tensor combinations ------------------------------------------------ */

/* Element of T (x) T+ with rational coefficients. */
class TensorComb {
  public:
    struct KeyLess {
        bool operator()(const std::pair<TreePtr, Forest>& a,
                        const std::pair<TreePtr, Forest>& b) const {
            if (a.first != b.first) return tree_less(a.first, b.first);
            return forest_less(a.second, b.second);
        }
    };
    using Map = std::map<std::pair<TreePtr, Forest>, Rat, KeyLess>;

    void add(TreePtr t, const Forest& f, const Rat& c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.try_emplace({t, f}, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    TensorComb& operator+=(const TensorComb& o) {
        for (auto& [k, c] : o.terms_) add(k.first, k.second, c);
        return *this;
    }
    friend bool operator==(const TensorComb& a, const TensorComb& b) {
        return a.terms_ == b.terms_;
    }
    bool is_zero() const { return terms_.empty(); }
    const Map& terms() const { return terms_; }

  private:
    Map terms_;
};

/* Element of T+ (x) T+ with rational coefficients. */
class PlusComb {
  public:
    struct KeyLess {
        bool operator()(const std::pair<Forest, Forest>& a,
                        const std::pair<Forest, Forest>& b) const {
            if (forest_less(a.first, b.first)) return true;
            if (forest_less(b.first, a.first)) return false;
            return forest_less(a.second, b.second);
        }
    };
    using Map = std::map<std::pair<Forest, Forest>, Rat, KeyLess>;

    void add(const Forest& l, const Forest& r, const Rat& c) {
        if (c == 0) return;
        auto [it, fresh] = terms_.try_emplace({l, r}, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }
    PlusComb& operator+=(const PlusComb& o) {
        for (auto& [k, c] : o.terms_) add(k.first, k.second, c);
        return *this;
    }
    friend bool operator==(const PlusComb& a, const PlusComb& b) {
        return a.terms_ == b.terms_;
    }
    const Map& terms() const { return terms_; }

  private:
    Map terms_;
};

/* --- grafting ----------------------------------------------------------- */

/* Node handles are pre-order indices over all nodes (root = 0, children in
 * canonical edge order). */

/* Add k to the polynomial decoration of node v. */
TreePtr up_at(const Multi& k, unsigned v, TreePtr tau);

/* Attach sigma below node v of tau through an edge decorated by m. */
TreePtr graft_at(TreePtr sigma, const Multi& m, unsigned v, TreePtr tau);

/* Deformed grafting: sum over inner nodes v and deformations j <= n(v) of
 * binom(n(v), j) * (sigma grafted at v with edge m - j, decoration lowered by
 * j); terms with m - j outside N^{1+d} are omitted.  Homogeneous of degree
 * |I_m(sigma)| + |tau|. */
LinComb graft(TreePtr sigma, const Multi& m, TreePtr tau);

/* All ways to distribute an extra decoration k over the inner nodes, each
 * split k = sum_v k_v weighted by the multinomial k!/prod_v k_v!. */
LinComb up(const Multi& k, TreePtr tau);

/* mu star tau: the deformed graftings of all planted factors of mu, performed
 * independently but exclusively onto nodes of tau, followed by distributing
 * the polynomial part; homogeneous of degree |mu| + |tau|. */
LinComb star(const Forest& mu, TreePtr tau);

/* --- coaction, coproduct, inner product --------------------------------- */

/* Delta: T -> T (x) T+.  Planted symbols of non-positive homogeneity at this
 * s vanish on the right leg; the k-sum on planted trees is finite because
 * decorations strictly lower homogeneity. */
TensorComb coaction(TreePtr tau, const SParam& s);
TensorComb coaction(const LinComb& x, const SParam& s);

/* Delta on T+, generator-wise, extended as an algebra homomorphism. */
PlusComb coproduct_plus(const Forest& mu, const SParam& s);

/* <tau, sigma> = tau! on the diagonal, bilinear. */
Rat inner(const LinComb& x, const LinComb& y);
/* <mu, nu> = mu! delta_{mu,nu} on T+. */
Rat inner_plus(const Forest& a, const Forest& b);

/* --- characters and the structure group -------------------------------- */

struct Character {
    /* Values on generators: forests that are a single X^{e_j} or a single
     * planted factor.  Extended multiplicatively; gamma(1) = 1.  Missing
     * generators evaluate to zero unless strict, which throws. */
    std::map<Forest, Rat, ForestLess> vals;
    bool strict = false;

    Rat on_generator(const Forest& g) const;
    Rat operator()(const Forest& f) const;
};

/* Gamma_gamma x = (Id (x) gamma) Delta x. */
LinComb act(const Character& g, const LinComb& x, const SParam& s);

/* (g1 * g2)(mu) = (g1 (x) g2) Delta mu, tabulated on the given generators. */
Character convolve(const Character& g1, const Character& g2,
                   const std::vector<Forest>& gens, const SParam& s);

/* Convolution inverse by graded recursion over generators sorted by
 * homogeneity; convolve(g, invert(g)) is the counit on gens. */
Character invert(const Character& g, const std::vector<Forest>& gens, const SParam& s);

}  // namespace rs
