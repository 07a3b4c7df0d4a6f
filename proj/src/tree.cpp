#include "rs/tree.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <numeric>
#include <unordered_map>
#include <vector>

namespace rs {

/* --- canonical order --------------------------------------------------- */

static std::strong_ordering tree_cmp(TreePtr a, TreePtr b) {
    if (a == b) return std::strong_ordering::equal;
    if (a->noise != b->noise)
        return a->noise ? std::strong_ordering::less : std::strong_ordering::greater;
    if (auto c = a->k.v <=> b->k.v; c != 0) return c;
    const std::size_t n = std::min(a->edges.size(), b->edges.size());
    for (std::size_t i = 0; i < n; i++) {
        if (auto c = a->edges[i].m <=> b->edges[i].m; c != 0) return c;
        if (auto c = tree_cmp(a->edges[i].child, b->edges[i].child); c != 0) return c;
    }
    return a->edges.size() <=> b->edges.size();
}

bool tree_less(TreePtr a, TreePtr b) { return tree_cmp(a, b) < 0; }

/* --- interner ----------------------------------------------------------- */

namespace {

std::size_t structural_hash(bool noise, const Multi& k, const std::vector<Edge>& edges) {
    std::size_t h = noise ? 0x9e3779b97f4a7c15ull : 0x2545f4914f6cdd1dull;
    h ^= hash_multi(k) + (h << 6) + (h >> 2);
    for (const Edge& e : edges) {
        h ^= hash_multi(e.m) + 0x165667b19e3779f9ull + (h << 6) + (h >> 2);
        h ^= e.child->hash + (h << 6) + (h >> 2);
    }
    return h;
}

struct Interner {
    std::mutex mu;
    std::vector<std::unique_ptr<Tree>> pool;
    std::unordered_map<std::size_t, std::vector<TreePtr>> buckets;

    TreePtr intern(bool noise, Multi k, std::vector<Edge> edges) {
        const std::size_t h = structural_hash(noise, k, edges);
        std::lock_guard<std::mutex> lock(mu);
        for (TreePtr cand : buckets[h])
            if (cand->noise == noise && cand->k == k && cand->edges == edges)
                return cand;
        auto t = std::make_unique<Tree>();
        t->noise = noise;
        t->k = std::move(k);
        t->edges = std::move(edges);
        t->hash = h;
        TreePtr p = t.get();
        pool.push_back(std::move(t));
        buckets[h].push_back(p);
        return p;
    }
};

Interner& interner() {
    static Interner it;
    return it;
}

}  // namespace

TreePtr make_tree(const Multi& k, std::vector<Edge> edges) {
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        if (auto c = a.m <=> b.m; c != 0) return c < 0;
        return tree_less(a.child, b.child);
    });
    for (const Edge& e : edges)
        if (e.m.size() != k.size() || e.child->dim_plus_1() != k.size())
            throw std::invalid_argument("tree dimension mismatch");
    return interner().intern(false, k, std::move(edges));
}

TreePtr noise(std::size_t d) { return interner().intern(true, Multi(d + 1), {}); }
TreePtr monomial(const Multi& k) { return make_tree(k, {}); }
TreePtr one(std::size_t d) { return monomial(Multi(d + 1)); }

/* --- basic operations --------------------------------------------------- */

TreePtr product(TreePtr a, TreePtr b) {
    if (a->noise || b->noise) throw NoiseProduct();
    std::vector<Edge> edges = a->edges;
    edges.insert(edges.end(), b->edges.begin(), b->edges.end());
    return make_tree(a->k + b->k, std::move(edges));
}

TreePtr plant_tree(const Multi& m, TreePtr t) {
    if (is_monomial(t))
        throw std::invalid_argument("planted monomial is zero, not a tree");
    return make_tree(Multi(m.size()), {Edge{m, t}});
}

LinComb plant(const Multi& m, TreePtr t) {
    if (is_monomial(t)) return LinComb::zero();
    return LinComb(plant_tree(m, t));
}

/* --- symmetry factor ---------------------------------------------------- */

Int symmetry_factor(TreePtr t) {
    if (t->symfac != 0) return t->symfac;
    Int r = 1;
    if (!t->noise) {
        r = t->k.fact();
        for (std::size_t i = 0; i < t->edges.size();) {
            std::size_t j = i;
            while (j < t->edges.size() && t->edges[j] == t->edges[i]) j++;
            const auto beta = static_cast<unsigned>(j - i);
            Int cf = symmetry_factor(t->edges[i].child);
            Int pw;
            mpz_pow_ui(pw.get_mpz_t(), cf.get_mpz_t(), beta);
            r *= pw * factorial(beta);
            i = j;
        }
    }
    t->symfac = r;
    return r;
}

Int symmetry_factor_from_presentation(
    const Multi& k, const std::vector<std::pair<Multi, TreePtr>>& factors) {
    const std::size_t n = factors.size();
    if (n > 10) throw std::invalid_argument("presentation too long for permutation count");
    /* delta: number of distinct ordered tuples equal to this one as multisets,
     * counted by brute force over all permutations. */
    std::vector<unsigned> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    std::vector<std::vector<unsigned>> seen;
    Int delta = 0;
    do {
        bool dup = false;
        for (const auto& p : seen) {
            bool same = true;
            for (std::size_t i = 0; i < n && same; i++)
                same = factors[p[i]] == factors[idx[i]];
            if (same) {
                dup = true;
                break;
            }
        }
        if (!dup) {
            seen.push_back(idx);
            delta += 1;
        }
    } while (std::next_permutation(idx.begin(), idx.end()));
    Int r = k.fact() * factorial(static_cast<unsigned>(n)) / delta;
    for (const auto& [m, tau] : factors) r *= symmetry_factor(tau);
    return r;
}

/* --- homogeneity -------------------------------------------------------- */

const SKNumber& homogeneity(TreePtr t) {
    if (t->homog) return *t->homog;
    SKNumber h;
    if (t->noise) {
        h = noise_homogeneity();
    } else {
        h = t->k.shomog();
        for (const Edge& e : t->edges) {
            /* |I_m(tau)| = |tau| + 2s - |m|_s */
            h += homogeneity(e.child);
            h += SKNumber{0, 2, 0} - e.m.shomog();
        }
    }
    t->homog = h;
    return *t->homog;
}

unsigned leaf_count(TreePtr t) {
    if (t->noise) return 1;
    unsigned n = 0;
    for (const Edge& e : t->edges) n += leaf_count(e.child);
    return n;
}

/* --- grammar membership and counting function --------------------------- */

bool in_grammar(TreePtr t) {
    if (t->grammar >= 0) return t->grammar == 1;
    bool ok = false;
    if (t->noise || is_monomial(t)) {
        ok = true;
    } else {
        const std::size_t n = t->edges.size();
        bool children_ok = true;
        for (const Edge& e : t->edges)
            children_ok = children_ok && in_grammar(e.child) && !is_monomial(e.child);
        if (children_ok) {
            switch (n) {
                case 1: {
                    /* X^k I(tau) or X^k I_j(tau), j spatial */
                    const Multi& m = t->edges[0].m;
                    ok = m.is_zero() || (m.total() == 1 && m[0] == 0);
                    break;
                }
                case 2:
                    ok = t->edges[0].m.is_zero() && t->edges[1].m.is_zero();
                    break;
                case 3:
                    ok = t->k.is_zero() && t->edges[0].m.is_zero() &&
                         t->edges[1].m.is_zero() && t->edges[2].m.is_zero();
                    break;
                default:
                    ok = false;
            }
        }
    }
    t->grammar = ok ? 1 : 0;
    return ok;
}

unsigned missing_count(TreePtr t) {
    if (t->noise) return 0;
    if (is_monomial(t)) throw NotSubTernary("pure monomial " + debug_str(t));
    if (!in_grammar(t)) throw NotSubTernary(debug_str(t));
    unsigned m = 3 - static_cast<unsigned>(t->edges.size());
    for (const Edge& e : t->edges) m += missing_count(e.child);
    return m;
}

/* --- stats -------------------------------------------------------------- */

static void stats_walk(TreePtr t, TreeStats& st) {
    if (t->noise) {
        st.leaves++;
        return;
    }
    st.node_total += t->k.shomog();
    if (t->edges.size() > 3) st.is_subternary = false;
    if (t->edges.size() != 3) st.is_full = false;
    for (const Edge& e : t->edges) {
        st.edge_total += e.m.shomog();
        stats_walk(e.child, st);
    }
}

TreeStats stats(TreePtr t) {
    TreeStats st;
    st.node_total = {0, 0, 0};
    st.edge_total = {0, 0, 0};
    st.is_full = true;
    st.is_subternary = true;
    stats_walk(t, st);
    return st;
}

unsigned node_count(TreePtr t) {
    unsigned n = 1;
    for (const Edge& e : t->edges) n += node_count(e.child);
    return n;
}

/* --- debug rendering ----------------------------------------------------- */

std::string debug_str(TreePtr t) {
    if (t->noise) return "Xi";
    std::string out;
    bool need_sep = false;
    if (!t->k.is_zero() || t->edges.empty()) {
        out += is_one(t) ? "1" : "X^" + t->k.str();
        need_sep = true;
    }
    for (const Edge& e : t->edges) {
        if (need_sep) out += "*";
        out += e.m.is_zero() ? "I(" : "I[" + e.m.str() + "](";
        out += debug_str(e.child);
        out += ")";
        need_sep = true;
    }
    return out;
}

std::string debug_str(const LinComb& x) {
    if (x.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [t, c] : x.terms()) {
        if (!first) out += " + ";
        if (c != 1) out += to_string(c) + " ";
        out += debug_str(t);
        first = false;
    }
    return out;
}

}  // namespace rs
