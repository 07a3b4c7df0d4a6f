#include "rs/hopf.hpp"

#include <algorithm>
#include <functional>

namespace rs {

/* --- forests ------------------------------------------------------------ */

namespace {

bool factor_less(const std::pair<Multi, TreePtr>& a, const std::pair<Multi, TreePtr>& b) {
    if (a.first != b.first) return a.first < b.first;
    return tree_less(a.second, b.second);
}

Forest unit_like(std::size_t dim_plus_1) { return Forest{Multi(dim_plus_1), {}}; }

}  // namespace

Forest forest_unit(std::size_t d) { return unit_like(d + 1); }

Forest forest_monomial(const Multi& k) { return Forest{k, {}}; }

Forest forest_planted(const Multi& m, TreePtr sigma) {
    return Forest{Multi(m.size()), {{m, sigma}}};
}

Forest make_forest(const Multi& k, std::vector<std::pair<Multi, TreePtr>> factors) {
    std::sort(factors.begin(), factors.end(), factor_less);
    return Forest{k, std::move(factors)};
}

Forest forest_mul(const Forest& a, const Forest& b) {
    std::vector<std::pair<Multi, TreePtr>> f = a.factors;
    f.insert(f.end(), b.factors.begin(), b.factors.end());
    return make_forest(a.k + b.k, std::move(f));
}

bool operator==(const Forest& a, const Forest& b) {
    return a.k == b.k && a.factors == b.factors;
}

bool forest_less(const Forest& a, const Forest& b) {
    if (a.k != b.k) return a.k < b.k;
    return std::lexicographical_compare(a.factors.begin(), a.factors.end(),
                                        b.factors.begin(), b.factors.end(), factor_less);
}

SKNumber forest_homogeneity(const Forest& f) {
    SKNumber h = f.k.shomog();
    const SKNumber two_s{0, 2, 0};
    for (const auto& [m, sigma] : f.factors)
        h = h + homogeneity(sigma) + two_s - m.shomog();
    return h;
}

Int forest_factorial(const Forest& f) {
    Int r = f.k.fact();
    for (std::size_t i = 0; i < f.factors.size();) {
        std::size_t j = i;
        while (j < f.factors.size() && f.factors[j] == f.factors[i]) j++;
        const unsigned beta = static_cast<unsigned>(j - i);
        Int sf = symmetry_factor(f.factors[i].second);
        mpz_pow_ui(sf.get_mpz_t(), sf.get_mpz_t(), beta);
        r *= sf * factorial(beta);
        i = j;
    }
    return r;
}

bool forest_in_plus(const Forest& f, const SParam& s) {
    const SKNumber two_s{0, 2, 0};
    const SKNumber zero{0, 0, 0};
    for (const auto& [m, sigma] : f.factors) {
        SKNumber h = homogeneity(sigma) + two_s - m.shomog();
        if (compare(h, zero, s) != std::strong_ordering::greater) return false;
    }
    return true;
}

std::string debug_str(const Forest& f) {
    if (f.is_unit()) return "1";
    std::string out;
    if (!f.k.is_zero()) out = "X^" + f.k.str();
    for (const auto& [m, sigma] : f.factors) {
        if (!out.empty()) out += "*";
        out += "I";
        if (!m.is_zero()) out += "[" + m.str() + "]";
        out += "(" + debug_str(sigma) + ")";
    }
    return out;
}

/* --- node handles and rebuilding ---------------------------------------- */

namespace {

struct NodeEdit {
    std::vector<long> dk;       // signed decoration change
    std::vector<Edge> add;      // extra children
};

TreePtr apply_edits(TreePtr t, const std::map<unsigned, NodeEdit>& edits, unsigned& idx) {
    const unsigned my = idx++;
    auto it = edits.find(my);
    if (t->noise) {
        if (it != edits.end()) throw InvalidNode("node " + std::to_string(my) + " is a noise leaf");
        return t;
    }
    std::vector<Edge> edges;
    edges.reserve(t->edges.size());
    for (const Edge& e : t->edges) edges.push_back({e.m, apply_edits(e.child, edits, idx)});
    Multi k = t->k;
    if (it != edits.end()) {
        const NodeEdit& ed = it->second;
        if (!ed.dk.empty()) {
            for (std::size_t i = 0; i < k.v.size(); i++) {
                long nv = static_cast<long>(k.v[i]) + ed.dk[i];
                if (nv < 0) throw InvalidNode("negative decoration at node " + std::to_string(my));
                k.v[i] = static_cast<unsigned>(nv);
            }
        }
        edges.insert(edges.end(), ed.add.begin(), ed.add.end());
    }
    return make_tree(k, std::move(edges));
}

TreePtr edit_one(TreePtr tau, unsigned v, NodeEdit ed) {
    if (v >= node_count(tau)) throw InvalidNode("node handle out of range");
    std::map<unsigned, NodeEdit> edits;
    edits.emplace(v, std::move(ed));
    unsigned idx = 0;
    return apply_edits(tau, edits, idx);
}

/* Pre-order indices of nodes eligible for grafting and decorating: non-noise
 * nodes that are the root or have children (leaves carry noises in the tree
 * calculus, so decorating or grafting there is excluded). */
void collect_inner(TreePtr t, unsigned& idx, bool is_root,
                   std::vector<std::pair<unsigned, Multi>>& out) {
    const unsigned my = idx++;
    if (!t->noise && (is_root || !t->edges.empty())) out.push_back({my, t->k});
    for (const Edge& e : t->edges) collect_inner(e.child, idx, false, out);
}

std::vector<std::pair<unsigned, Multi>> inner_nodes(TreePtr t) {
    std::vector<std::pair<unsigned, Multi>> out;
    unsigned idx = 0;
    collect_inner(t, idx, true, out);
    return out;
}

Multi componentwise_min(const Multi& a, const Multi& b) {
    Multi r(a.size());
    for (std::size_t i = 0; i < a.size(); i++) r.v[i] = std::min(a.v[i], b.v[i]);
    return r;
}

/* All splits of k into `slots` multi-indices summing to k. */
void for_each_split(const Multi& k, std::size_t slots,
                    std::vector<Multi>& acc, const std::function<void()>& f) {
    if (acc.size() + 1 == slots) {
        acc.push_back(k);
        f();
        acc.pop_back();
        return;
    }
    for_each_sub_multi(k, [&](const Multi& part) {
        acc.push_back(part);
        for_each_split(k - part, slots, acc, f);
        acc.pop_back();
    });
}

}  // namespace

TreePtr up_at(const Multi& k, unsigned v, TreePtr tau) {
    NodeEdit ed;
    ed.dk.assign(k.size(), 0);
    for (std::size_t i = 0; i < k.size(); i++) ed.dk[i] = static_cast<long>(k.v[i]);
    return edit_one(tau, v, std::move(ed));
}

TreePtr graft_at(TreePtr sigma, const Multi& m, unsigned v, TreePtr tau) {
    NodeEdit ed;
    ed.add.push_back(Edge{m, sigma});
    return edit_one(tau, v, std::move(ed));
}

LinComb star(const Forest& mu, TreePtr tau) {
    if (is_noise(tau)) throw StarIntoNoise();
    const auto nodes = inner_nodes(tau);
    const std::size_t P = nodes.size();
    const std::size_t F = mu.factors.size();
    const std::size_t dim = mu.k.size();

    LinComb out;
    std::vector<std::size_t> assign(F, 0);
    std::vector<Multi> deform(F, Multi(dim));
    std::vector<Multi> consumed(P, Multi(dim));

    // one emission for fixed graft targets and deformations
    auto emit = [&](const Rat& coeff) {
        std::vector<Multi> kparts;
        auto build = [&]() {
            // distributing X^k over nodes carries the multinomial k!/prod k_v!
            Rat mult(mu.k.fact());
            std::map<unsigned, NodeEdit> edits;
            for (std::size_t p = 0; p < P; p++) {
                mult /= Rat(kparts[p].fact());
                NodeEdit& ed = edits[nodes[p].first];
                ed.dk.assign(dim, 0);
                for (std::size_t i = 0; i < dim; i++)
                    ed.dk[i] = static_cast<long>(kparts[p].v[i]) -
                               static_cast<long>(consumed[p].v[i]);
            }
            for (std::size_t i = 0; i < F; i++)
                edits[nodes[assign[i]].first].add.push_back(
                    Edge{mu.factors[i].first - deform[i], mu.factors[i].second});
            unsigned idx = 0;
            out.add(apply_edits(tau, edits, idx), coeff * mult);
        };
        for_each_split(mu.k, P, kparts, build);
    };

    // choose deformations for factors i..F-1, then emit
    std::function<void(std::size_t, Rat)> deformations = [&](std::size_t i, Rat coeff) {
        if (i == F) {
            emit(coeff);
            return;
        }
        const std::size_t p = assign[i];
        const Multi budget = nodes[p].second - consumed[p];
        const Multi cap = componentwise_min(budget, mu.factors[i].first);
        for_each_sub_multi(cap, [&](const Multi& j) {
            Int b = binom(budget, j);
            consumed[p] = consumed[p] + j;
            deform[i] = j;
            deformations(i + 1, coeff * Rat(b));
            consumed[p] = consumed[p] - j;
        });
    };

    // odometer over graft-target assignments
    while (true) {
        deformations(0, Rat(1));
        std::size_t i = 0;
        for (; i < F; i++) {
            if (++assign[i] < P) break;
            assign[i] = 0;
        }
        if (i == F) break;
    }
    return out;
}

LinComb graft(TreePtr sigma, const Multi& m, TreePtr tau) {
    if (is_noise(tau)) throw GraftIntoNoise();
    return star(Forest{Multi(m.size()), {{m, sigma}}}, tau);
}

LinComb up(const Multi& k, TreePtr tau) {
    if (is_noise(tau)) {
        if (k.is_zero()) return LinComb(tau);
        return LinComb::zero();
    }
    return star(forest_monomial(k), tau);
}

/* --- coaction ----------------------------------------------------------- */

namespace {

unsigned rat_floor(const Rat& q) {
    if (q < 0) return 0;
    Int z = q.get_num() / q.get_den();
    return static_cast<unsigned>(z.get_ui());
}

TensorComb tensor_mul(const TensorComb& a, const TensorComb& b) {
    TensorComb out;
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms())
            out.add(product(ka.first, kb.first), forest_mul(ka.second, kb.second), ca * cb);
    return out;
}

PlusComb plus_mul(const PlusComb& a, const PlusComb& b) {
    PlusComb out;
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms())
            out.add(forest_mul(ka.first, kb.first), forest_mul(ka.second, kb.second),
                    ca * cb);
    return out;
}

/* Decorations k with |I_{m+k}(child)| > 0, fed to f with weight 1/k!. */
template <typename F>
void positive_shifts(const Multi& m, TreePtr child, const SParam& s, F&& f) {
    if (is_monomial(child)) return;  // planted monomials are identified with zero
    const SKNumber two_s{0, 2, 0};
    const SKNumber zero{0, 0, 0};
    const SKNumber base = homogeneity(child) + two_s - m.shomog();
    const Rat B = base.eval(s.s);
    if (!(B > 0)) return;
    Multi cap(m.size());
    cap.v[0] = rat_floor(B / (2 * s.s));
    for (std::size_t i = 1; i < cap.size(); i++) cap.v[i] = rat_floor(B);
    for_each_sub_multi(cap, [&](const Multi& k) {
        if (compare(base - k.shomog(), zero, s) == std::strong_ordering::greater)
            f(k, Rat(1) / Rat(k.fact()));
    });
}

TensorComb coaction_planted(const Multi& m, TreePtr child, const SParam& s) {
    TensorComb out;
    const TensorComb dc = coaction(child, s);
    for (const auto& [key, c] : dc.terms()) {
        LinComb planted = plant(m, key.first);  // zero on monomials
        for (const auto& [pt, pc] : planted.terms()) out.add(pt, key.second, c * pc);
    }
    positive_shifts(m, child, s, [&](const Multi& k, const Rat& w) {
        out.add(monomial(k), forest_planted(m + k, child), w);
    });
    return out;
}

}  // namespace

namespace {

TensorComb coaction_compute(TreePtr tau, const SParam& s) {
    TensorComb out;
    const std::size_t dim = tau->k.size();
    if (is_noise(tau)) {
        out.add(tau, unit_like(dim), 1);
        return out;
    }
    // polynomial part: X^k splits binomially
    for_each_sub_multi(tau->k, [&](const Multi& m) {
        out.add(monomial(m), forest_monomial(tau->k - m), Rat(binom(tau->k, m)));
    });
    for (const Edge& e : tau->edges) out = tensor_mul(out, coaction_planted(e.m, e.child, s));
    return out;
}

}  // namespace

TensorComb coaction(TreePtr tau, const SParam& s) {
    // pure in (tau, s); memoized because the recursion and the character
    // operations revisit the same trees constantly
    using Key = std::pair<Rat, TreePtr>;
    struct KeyLess {
        bool operator()(const Key& a, const Key& b) const {
            if (a.first != b.first) return a.first < b.first;
            return a.second < b.second;
        }
    };
    static thread_local std::map<Key, TensorComb, KeyLess> cache;
    auto it = cache.find({s.s, tau});
    if (it != cache.end()) return it->second;
    TensorComb out = coaction_compute(tau, s);
    cache.emplace(Key{s.s, tau}, out);
    return out;
}

TensorComb coaction(const LinComb& x, const SParam& s) {
    TensorComb out;
    for (const auto& [t, c] : x.terms()) {
        const TensorComb dt = coaction(t, s);
        for (const auto& [key, w] : dt.terms()) out.add(key.first, key.second, c * w);
    }
    return out;
}

namespace {

PlusComb coproduct_plus_compute(const Forest& mu, const SParam& s) {
    const std::size_t dim = mu.k.size();
    PlusComb out;
    for_each_sub_multi(mu.k, [&](const Multi& m) {
        out.add(forest_monomial(m), forest_monomial(mu.k - m), Rat(binom(mu.k, m)));
    });
    const SKNumber two_s{0, 2, 0};
    const SKNumber zero{0, 0, 0};
    for (const auto& [m, sigma] : mu.factors) {
        PlusComb pf;
        const TensorComb ds = coaction(sigma, s);
        for (const auto& [key, c] : ds.terms()) {
            TreePtr a = key.first;
            if (is_monomial(a)) continue;  // planted monomials vanish
            // the left leg lives in T+, so non-positive planted symbols vanish
            SKNumber h = homogeneity(a) + two_s - m.shomog();
            if (compare(h, zero, s) != std::strong_ordering::greater) continue;
            pf.add(forest_planted(m, a), key.second, c);
        }
        positive_shifts(m, sigma, s, [&](const Multi& k, const Rat& w) {
            pf.add(forest_monomial(k), forest_planted(m + k, sigma), w);
        });
        out = plus_mul(out, pf);
    }
    (void)dim;
    return out;
}

}  // namespace

PlusComb coproduct_plus(const Forest& mu, const SParam& s) {
    using Key = std::pair<Rat, Forest>;
    struct KeyLess {
        bool operator()(const Key& a, const Key& b) const {
            if (a.first != b.first) return a.first < b.first;
            return forest_less(a.second, b.second);
        }
    };
    static thread_local std::map<Key, PlusComb, KeyLess> cache;
    auto it = cache.find({s.s, mu});
    if (it != cache.end()) return it->second;
    PlusComb out = coproduct_plus_compute(mu, s);
    cache.emplace(Key{s.s, mu}, out);
    return out;
}

/* --- inner products ----------------------------------------------------- */

Rat inner(const LinComb& x, const LinComb& y) {
    Rat r = 0;
    for (const auto& [t, c] : x.terms()) {
        Rat cy = y.coeff(t);
        if (cy != 0) r += c * cy * Rat(symmetry_factor(t));
    }
    return r;
}

Rat inner_plus(const Forest& a, const Forest& b) {
    if (!(a == b)) return 0;
    return Rat(forest_factorial(a));
}

/* --- characters --------------------------------------------------------- */

Rat Character::on_generator(const Forest& g) const {
    auto it = vals.find(g);
    if (it != vals.end()) return it->second;
    if (strict) throw MissingGeneratorValue(debug_str(g));
    return 0;
}

Rat Character::operator()(const Forest& f) const {
    Rat r = 1;
    for (std::size_t j = 0; j < f.k.size(); j++)
        for (unsigned c = 0; c < f.k.v[j]; c++)
            r *= on_generator(forest_monomial(Multi::unit(f.k.size(), j)));
    for (const auto& [m, sigma] : f.factors) r *= on_generator(forest_planted(m, sigma));
    return r;
}

LinComb act(const Character& g, const LinComb& x, const SParam& s) {
    LinComb out;
    const TensorComb dx = coaction(x, s);
    for (const auto& [key, c] : dx.terms()) {
        Rat w = g(key.second);
        if (w != 0) out.add(key.first, c * w);
    }
    return out;
}

Character convolve(const Character& g1, const Character& g2,
                   const std::vector<Forest>& gens, const SParam& s) {
    Character out;
    for (const Forest& g : gens) {
        Rat v = 0;
        const PlusComb dg = coproduct_plus(g, s);
        for (const auto& [key, c] : dg.terms()) v += c * g1(key.first) * g2(key.second);
        out.vals[g] = v;
    }
    return out;
}

Character invert(const Character& g, const std::vector<Forest>& gens, const SParam& s) {
    std::vector<Forest> order = gens;
    std::sort(order.begin(), order.end(), [&](const Forest& a, const Forest& b) {
        SKNumber ha = forest_homogeneity(a), hb = forest_homogeneity(b);
        if (less(ha, hb, s)) return true;
        if (less(hb, ha, s)) return false;
        return forest_less(a, b);
    });
    Character inv;
    for (const Forest& gen : order) {
        Rat rest = 0;
        Rat lead = 0;
        const PlusComb dg = coproduct_plus(gen, s);
        for (const auto& [key, c] : dg.terms()) {
            if (key.first.is_unit() && key.second == gen) {
                lead += c;
            } else {
                rest += c * g(key.first) * inv(key.second);
            }
        }
        if (lead == 0)
            throw std::logic_error("coproduct of a generator lacks the 1 (x) g term");
        inv.vals[gen] = -rest / lead;
    }
    return inv;
}

}  // namespace rs
