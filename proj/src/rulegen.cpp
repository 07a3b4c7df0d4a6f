#include "rs/rulegen.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace rs {

namespace {

/* All multi-indices with total degree <= cap. */
std::vector<Multi> degree_ball(std::size_t d, unsigned cap) {
    std::vector<Multi> out;
    Multi k(d + 1);
    // odometer over {0..cap}^{d+1} filtered by total degree
    while (true) {
        if (k.total() <= cap) out.push_back(k);
        std::size_t i = 0;
        for (; i <= d; i++) {
            if (k.v[i] < cap) {
                k.v[i]++;
                for (std::size_t l = 0; l < i; l++) k.v[l] = 0;
                break;
            }
        }
        if (i > d) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

constexpr std::size_t kMaxSetSize = 2'000'000;

struct Gen {
    SParam s;
    SKNumber cutoff;
    std::size_t d;
    std::vector<Multi> K;       // node decorations
    std::vector<Multi> edgeK;   // 0 and spatial units
    SKNumber xi_h = noise_homogeneity();
    Rat cutoff_ev;

    std::set<TreePtr, TreeLess> members;

    Gen(const SParam& s_, const SKNumber& cutoff_, std::size_t d_, unsigned cap)
        : s(s_), cutoff(cutoff_), d(d_), K(degree_ball(d_, cap)) {
        edgeK.push_back(Multi(d + 1));
        for (std::size_t j = 1; j <= d; j++) edgeK.push_back(Multi::unit(d + 1, j));
        cutoff_ev = cutoff.eval(s.s);
    }

    bool below_cutoff(TreePtr t) const { return less(homogeneity(t), cutoff, s); }

    /* Insert a constructed (non-seed) candidate; performs the subcriticality
     * check: every noise-bearing tree must sit strictly above the noise. */
    void consider(TreePtr t, std::vector<TreePtr>& fresh) {
        if (!is_monomial(t) &&
            compare(homogeneity(t), xi_h, s) != std::strong_ordering::greater)
            throw NotSubcritical(t);
        if (!below_cutoff(t)) return;
        if (members.insert(t).second) {
            fresh.push_back(t);
            if (members.size() > kMaxSetSize)
                throw std::runtime_error("generated tree set exceeds the size guard");
        }
    }

    std::vector<TreePtr> run() {
        std::vector<TreePtr> frontier;
        // seeds
        if (less(xi_h, cutoff, s)) {
            members.insert(noise(d));
            frontier.push_back(noise(d));
        }
        for (const Multi& k : K) {
            TreePtr m = monomial(k);
            if (below_cutoff(m)) {
                members.insert(m);
                frontier.push_back(m);
            }
        }

        while (!frontier.empty()) {
            std::vector<TreePtr> fresh;

            auto args_of = [](const std::vector<TreePtr>& v) {
                std::vector<TreePtr> r;
                for (TreePtr t : v)
                    if (!is_monomial(t)) r.push_back(t);
                return r;
            };
            std::vector<TreePtr> all_args;
            for (TreePtr t : members)
                if (!is_monomial(t)) all_args.push_back(t);
            std::vector<TreePtr> new_args = args_of(frontier);

            // evaluated |I(tau)| = |tau| + 2s, for pruning
            auto iev = [&](TreePtr t) -> Rat {
                return homogeneity(t).eval(s.s) + 2 * s.s;
            };
            std::sort(all_args.begin(), all_args.end(),
                      [&](TreePtr a, TreePtr b) { return iev(a) < iev(b); });
            const Rat min_iev =
                all_args.empty() ? Rat(0) : iev(all_args.front());

            // unary: X^k I_m(tau), m zero or a spatial unit
            for (TreePtr t : new_args) {
                for (const Multi& m : edgeK) {
                    if (iev(t) - m.shomog().eval(s.s) > cutoff_ev) continue;
                    for (const Multi& k : K) {
                        if (k.shomog().eval(s.s) + iev(t) - m.shomog().eval(s.s) >
                            cutoff_ev)
                            continue;
                        consider(make_tree(k, {Edge{m, t}}), fresh);
                    }
                }
            }
            // binary: X^k I(tau1)I(tau2), at least one factor fresh
            const Multi m0(d + 1);
            for (TreePtr t1 : new_args) {
                for (TreePtr t2 : all_args) {
                    if (iev(t1) + iev(t2) > cutoff_ev) break;
                    for (const Multi& k : K) {
                        if (k.shomog().eval(s.s) + iev(t1) + iev(t2) > cutoff_ev)
                            continue;
                        consider(make_tree(k, {Edge{m0, t1}, Edge{m0, t2}}), fresh);
                    }
                }
            }
            // ternary: I(tau1)I(tau2)I(tau3), at least one factor fresh
            for (TreePtr t1 : new_args) {
                for (std::size_t i = 0; i < all_args.size(); i++) {
                    TreePtr t2 = all_args[i];
                    if (iev(t1) + iev(t2) + min_iev > cutoff_ev) break;
                    for (std::size_t j = i; j < all_args.size(); j++) {
                        TreePtr t3 = all_args[j];
                        if (iev(t1) + iev(t2) + iev(t3) > cutoff_ev) break;
                        consider(
                            make_tree(m0, {Edge{m0, t1}, Edge{m0, t2}, Edge{m0, t3}}),
                            fresh);
                    }
                }
            }

            frontier = std::move(fresh);
        }
        return {members.begin(), members.end()};
    }
};

}  // namespace

bool TreeSet::contains(TreePtr t) const {
    return std::binary_search(trees.begin(), trees.end(), t, TreeLess{});
}

TreeSet generate(const SParam& s, const SKNumber& cutoff, std::size_t d,
                 unsigned max_poly_degree) {
    Gen g(s, cutoff, d, max_poly_degree);
    return TreeSet{s, cutoff, d, max_poly_degree, g.run()};
}

Classification classify(const TreeSet& ts, const SKNumber& gamma) {
    Classification c;
    const SKNumber two_s{0, 2, 0};
    const SKNumber zero{0, 0, 0};
    for (TreePtr t : ts.trees) {
        if (is_monomial(t)) {
            c.P.push_back(t);
            continue;
        }
        SKNumber ih = homogeneity(t) + two_s;  // |I(tau)|
        if (less(ih, zero, ts.s)) {
            c.W.push_back(t);
        } else {
            c.V.push_back(t);
            if (less(ih, gamma, ts.s)) c.V_range.push_back(t);
        }
    }
    // boundary triples of W members that escape W
    const Multi m0(ts.d + 1);
    std::set<TreePtr, TreeLess> seen;
    for (std::size_t i = 0; i < c.W.size(); i++)
        for (std::size_t j = i; j < c.W.size(); j++)
            for (std::size_t l = j; l < c.W.size(); l++) {
                TreePtr t = make_tree(m0, {Edge{m0, c.W[i]}, Edge{m0, c.W[j]},
                                           Edge{m0, c.W[l]}});
                SKNumber ih = homogeneity(t) + two_s;
                if (!less(ih, zero, ts.s)) seen.insert(t);
            }
    c.dW.assign(seen.begin(), seen.end());
    return c;
}

std::vector<TreePtr> v_range(const TreeSet& ts, const SKNumber& alpha,
                             const SKNumber& beta) {
    const SKNumber two_s{0, 2, 0};
    std::vector<TreePtr> out;
    for (TreePtr t : ts.trees) {
        if (is_monomial(t)) continue;
        SKNumber ih = homogeneity(t) + two_s;
        if (!less(ih, alpha, ts.s) && less(ih, beta, ts.s)) out.push_back(t);
    }
    return out;
}

TreeSet oracle_generate(const SParam& s, const SKNumber& cutoff, std::size_t d,
                        unsigned max_edges, unsigned max_poly_degree) {
    /* Pruning by homogeneity at every level is sound for the trees we keep:
     * within the grammar every constructor adds at least 4s-3 > 0 on top of
     * each argument, so subtrees of kept trees are themselves below cutoff. */
    if (!(s.s > Rat(3, 4)))
        throw std::invalid_argument("oracle enumeration requires s > 3/4");
    const std::vector<Multi> K = degree_ball(d, max_poly_degree);
    /* Edge alphabet: zero and spatial units.  Time-direction edges add zero
     * homogeneity, so admitting them would let arbitrarily long chains pile up
     * below any cutoff; the grammar never produces them. */
    std::vector<Multi> M;
    M.push_back(Multi(d + 1));
    for (std::size_t j = 1; j <= d; j++) M.push_back(Multi::unit(d + 1, j));

    /* Keep a candidate level entry only if it is below the cutoff AND accepted
     * by the standalone grammar predicate.  Children of grammar trees are
     * grammar trees, and within the grammar each constructor strictly
     * increases homogeneity (s > 3/4), so filtering at every level yields the
     * same final set as filtering once at the end. */
    auto keep = [&](TreePtr t) {
        return less(homogeneity(t), cutoff, s) && in_grammar(t);
    };

    // byE[n]: grammar trees with exactly n edges below the cutoff
    std::vector<std::vector<TreePtr>> byE(max_edges + 1);
    {
        std::set<TreePtr, TreeLess> base;
        if (keep(noise(d))) base.insert(noise(d));
        for (const Multi& k : K)
            if (keep(monomial(k))) base.insert(monomial(k));
        byE[0].assign(base.begin(), base.end());
    }
    for (unsigned n = 1; n <= max_edges; n++) {
        std::set<TreePtr, TreeLess> out;
        // non-monomial trees with a given edge count, usable as I-arguments
        auto args = [&](unsigned edges_used) {
            std::vector<TreePtr> pool;
            for (TreePtr t : byE[edges_used])
                if (!is_monomial(t)) pool.push_back(t);
            return pool;
        };
        const Multi m0(d + 1);
        for (const Multi& k : K) {
            // one child, edge decoration zero or a spatial unit
            for (TreePtr t : args(n - 1))
                for (const Multi& m : M) {
                    TreePtr cand = make_tree(k, {Edge{m, t}});
                    if (keep(cand)) out.insert(cand);
                }
            // two children with undecorated edges: n = 2 + e1 + e2
            for (unsigned e1 = 0; 2 + 2 * e1 <= n; e1++) {
                unsigned e2 = n - 2 - e1;
                if (e2 < e1) break;
                for (TreePtr t1 : args(e1))
                    for (TreePtr t2 : args(e2)) {
                        TreePtr cand = make_tree(k, {Edge{m0, t1}, Edge{m0, t2}});
                        if (keep(cand)) out.insert(cand);
                    }
            }
        }
        // three children, undecorated root and edges: n = 3 + e1 + e2 + e3
        for (unsigned e1 = 0; 3 + 3 * e1 <= n; e1++)
            for (unsigned e2 = e1; 3 + e1 + 2 * e2 <= n; e2++) {
                unsigned e3 = n - 3 - e1 - e2;
                if (e3 < e2) continue;
                for (TreePtr t1 : args(e1))
                    for (TreePtr t2 : args(e2))
                        for (TreePtr t3 : args(e3)) {
                            TreePtr cand = make_tree(
                                m0, {Edge{m0, t1}, Edge{m0, t2}, Edge{m0, t3}});
                            if (keep(cand)) out.insert(cand);
                        }
            }
        byE[n].assign(out.begin(), out.end());
    }

    std::set<TreePtr, TreeLess> result;
    for (auto& level : byE)
        for (TreePtr t : level) result.insert(t);
    return TreeSet{s, cutoff, d, max_poly_degree,
                   std::vector<TreePtr>(result.begin(), result.end())};
}

}  // namespace rs
