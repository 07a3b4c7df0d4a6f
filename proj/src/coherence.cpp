#include "rs/coherence.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "rs/rulegen.hpp"
#include "rs/treeparse.hpp"

namespace rs {

/* --- jet polynomials ---------------------------------------------------- */

void JetPolynomial::add(JetMonomial m, const Rat& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.try_emplace(std::move(m), c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

JetPolynomial& JetPolynomial::operator+=(const JetPolynomial& o) {
    for (const auto& [m, c] : o.terms_) add(m, c);
    return *this;
}

JetPolynomial operator-(const JetPolynomial& a, const JetPolynomial& b) {
    JetPolynomial r = a;
    for (const auto& [m, c] : b.terms_) r.add(m, -c);
    return r;
}

JetPolynomial operator*(const Rat& c, const JetPolynomial& p) {
    JetPolynomial r;
    if (c == 0) return r;
    for (const auto& [m, q] : p.terms_) r.add(m, c * q);
    return r;
}

JetPolynomial operator*(const JetPolynomial& a, const JetPolynomial& b) {
    JetPolynomial r;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) {
            JetMonomial m;
            m.reserve(ma.size() + mb.size());
            std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(),
                       std::back_inserter(m));
            r.add(std::move(m), ca * cb);
        }
    return r;
}

std::string JetPolynomial::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
        if (!out.empty()) out += " + ";
        out += to_string(c);
        for (const Multi& k : m) out += "*X" + k.str();
    }
    return out;
}

JetPolynomial jet_derive(const JetPolynomial& f, const Multi& k) {
    JetPolynomial r;
    for (const auto& [m, c] : f.terms()) {
        std::size_t count = 0, pos = 0;
        for (std::size_t i = 0; i < m.size(); i++)
            if (m[i] == k) {
                count++;
                pos = i;
            }
        if (!count) continue;
        JetMonomial n = m;
        n.erase(n.begin() + static_cast<std::ptrdiff_t>(pos));
        r.add(std::move(n), c * Rat(static_cast<unsigned long>(count)));
    }
    return r;
}

JetPolynomial jet_shift(const JetPolynomial& f, std::size_t j) {
    JetPolynomial r;
    for (const auto& [m, c] : f.terms()) {
        for (std::size_t i = 0; i < m.size(); i++) {
            if (i > 0 && m[i] == m[i - 1]) continue;  // one hit per distinct variable
            std::size_t count = 1;
            for (std::size_t l = i + 1; l < m.size() && m[l] == m[i]; l++) count++;
            JetMonomial n = m;
            n[i] = m[i] + Multi::unit(m[i].size(), j);
            std::sort(n.begin(), n.end());
            r.add(std::move(n), c * Rat(static_cast<unsigned long>(count)));
        }
    }
    return r;
}

JetPolynomial jet_shift_multi(const JetPolynomial& f, const Multi& k) {
    JetPolynomial r = f;
    for (std::size_t j = 0; j < k.size(); j++)
        for (unsigned rep = 0; rep < k[j]; rep++) r = jet_shift(r, j);
    return r;
}

/* --- the nonlinearity and the coherence map ----------------------------- */

Nonlinearity Nonlinearity::cubic(std::size_t d, Rat xi_value) {
    Nonlinearity f;
    f.dim_plus_1 = d + 1;
    const Multi zero(d + 1);
    JetPolynomial x0 = JetPolynomial::variable(zero);
    f.F = Rat(-1) * (x0 * x0 * x0);
    f.xi = std::move(xi_value);
    return f;
}

const JetPolynomial& upsilon(const Nonlinearity& f, TreePtr tau) {
    auto it = f.memo.find(tau);
    if (it != f.memo.end()) return it->second;

    JetPolynomial val;
    if (is_noise(tau)) {
        val = JetPolynomial::constant(f.xi);
    } else if (is_monomial(tau)) {
        throw NotInGrammar("bare monomial " + debug_str(tau));
    } else {
        JetPolynomial g = f.F;
        for (const Edge& e : tau->edges) g = jet_derive(g, e.m);
        g = jet_shift_multi(g, tau->k);
        for (const Edge& e : tau->edges) g = upsilon(f, e.child) * g;
        val = std::move(g);
    }
    return f.memo.emplace(tau, std::move(val)).first->second;
}

JetPolynomial upsilon(const Nonlinearity& f, const LinComb& x) {
    JetPolynomial r;
    for (const auto& [t, c] : x.terms()) r += c * upsilon(f, t);
    return r;
}

Shape cubic_shape(const Nonlinearity& f, TreePtr tau) {
    const JetPolynomial& p = upsilon(f, tau);
    if (p.is_zero()) return Shape{Shape::Zero, 0, 0, 0};
    if (p.terms().size() != 1)
        throw ShapeViolation("not a monomial coherence value: " + p.str());
    const auto& [mono, c] = *p.terms().begin();
    if (!is_integer(c))
        throw ShapeViolation("non-integer multiplier: " + p.str());
    const Multi zero(f.dim_plus_1);
    const bool pure_power =
        std::all_of(mono.begin(), mono.end(), [&](const Multi& k) { return k == zero; });
    if (pure_power)
        return Shape{Shape::VPow, c.get_num(), static_cast<unsigned>(mono.size()), 0};
    if (mono.size() == 1 && mono[0].total() == 1 && mono[0][0] == 0) {
        unsigned j = 0;
        for (std::size_t i = 1; i < mono[0].size(); i++)
            if (mono[0][i]) j = static_cast<unsigned>(i);
        return Shape{Shape::VX, c.get_num(), 0, j};
    }
    throw ShapeViolation("unexpected coherence shape: " + p.str());
}

JetPolynomial upsilon_star(const Forest& mu, TreePtr tau, const Nonlinearity& f) {
    JetPolynomial g = upsilon(f, tau);
    for (const auto& [m, sigma] : mu.factors) g = jet_derive(g, m);
    g = jet_shift_multi(g, mu.k);
    for (const auto& [m, sigma] : mu.factors) g = upsilon(f, sigma) * g;
    return g;
}

/* --- homogeneity exponents ---------------------------------------------- */

SKNumber alpha(TreePtr tau, const SParam& s) {
    const Rat l(static_cast<unsigned long>(leaf_count(tau)));
    // l * s^{-1} * (2s - 3/2 - kappa), with the s-part resolved at s
    return SKNumber{l * (2 - Rat(3, 2) / s.s), 0, -l / s.s};
}

SKNumber alpha_closed_form(TreePtr tau, const SParam& s) {
    if (is_noise(tau)) throw ExcludedTree("the noise atom");
    if (is_monomial(tau)) throw ExcludedTree("bare monomial " + debug_str(tau));
    const TreeStats st = stats(tau);
    const SKNumber h = homogeneity(tau) - st.node_total + st.edge_total;
    const Rat m(static_cast<unsigned long>(missing_count(tau)));
    return SKNumber{h.c0 / s.s + h.cs - m + 3, 0, h.ck / s.s};
}

/* --- modelled expressions ----------------------------------------------- */

void ModelledExpr::add(TreePtr t, const JetPolynomial& p) {
    if (p.is_zero()) return;
    auto [it, fresh] = terms.try_emplace(t, p);
    if (!fresh) {
        it->second += p;
        if (it->second.is_zero()) terms.erase(it);
    }
}

JetPolynomial ModelledExpr::coefficient(TreePtr t) const {
    auto it = terms.find(t);
    return it == terms.end() ? JetPolynomial{} : it->second;
}

std::string ModelledExpr::str() const {
    std::string out;
    for (const auto& [t, p] : terms) {
        if (!out.empty()) out += "\n";
        out += "(" + p.str() + ") * " + debug_str(t);
    }
    return out.empty() ? "0" : out;
}

JetPolynomial component(const ModelledExpr& expr, TreePtr t) {
    return Rat(symmetry_factor(t)) * expr.coefficient(t);
}

ModelledExpr expr_mul(const ModelledExpr& a, const ModelledExpr& b) {
    ModelledExpr r;
    for (const auto& [ta, pa] : a.terms)
        for (const auto& [tb, pb] : b.terms) r.add(product(ta, tb), pa * pb);
    return r;
}

ModelledExpr truncate(const ModelledExpr& expr, const SKNumber& beta, const SParam& s) {
    ModelledExpr r;
    for (const auto& [t, p] : expr.terms)
        if (less(homogeneity(t), beta, s)) r.add(t, p);
    return r;
}

namespace {

const SKNumber kZero{0, 0, 0};
const SKNumber kOne{1, 0, 0};
const SKNumber kTwoS{0, 2, 0};

constexpr unsigned kMaxPolyDegree = 2;

/* |I_m(tau)| = |tau| + 2s - |m|_s. */
SKNumber planted_homog(TreePtr tau) { return homogeneity(tau) + kTwoS; }

void require_gamma(const SKNumber& gamma, const SParam& s) {
    const SKNumber lo{3, -2, 0};
    if (!(less(lo, gamma, s) && less(gamma, kTwoS, s)))
        throw GammaOutOfRange("admissible order must lie in (3-2s, 2s), got " +
                              gamma.str());
}

/* Constant value of the coherence map on a tree where it must be constant. */
Rat constant_upsilon(const Nonlinearity& f, TreePtr tau) {
    const JetPolynomial& p = upsilon(f, tau);
    if (p.is_zero()) return Rat(0);
    if (p.terms().size() != 1 || !p.terms().begin()->first.empty())
        throw ShapeViolation("coherence value not constant on " + debug_str(tau) +
                             ": " + p.str());
    return p.terms().begin()->second;
}

void require_equal(const JetPolynomial& lhs, const JetPolynomial& rhs,
                   const std::string& what) {
    if (!(lhs == rhs))
        throw IdentityViolation(what + ": " + lhs.str() + " vs " + rhs.str());
}

}  // namespace

ModelledExpr build_V_upto(const Nonlinearity& f, const SParam& s,
                          const SKNumber& bound) {
    const std::size_t d = f.dim_plus_1 - 1;
    ModelledExpr v;
    if (less(kZero, bound, s))
        v.add(one(d), JetPolynomial::variable(Multi(d + 1)));
    if (less(kOne, bound, s))
        for (std::size_t j = 1; j <= d; j++)
            v.add(monomial(Multi::unit(d + 1, j)),
                  JetPolynomial::variable(Multi::unit(d + 1, j)));
    const TreeSet ts = generate(s, bound - kTwoS, d, kMaxPolyDegree);
    for (TreePtr tau : ts.trees) {
        if (is_monomial(tau)) continue;
        if (!less(kZero, planted_homog(tau), s)) continue;
        const JetPolynomial& u = upsilon(f, tau);
        if (u.is_zero()) continue;
        v.add(plant_tree(Multi(d + 1), tau), Rat(1) / Rat(symmetry_factor(tau)) * u);
    }
    return v;
}

ModelledExpr build_V(const Nonlinearity& f, const SParam& s, const SKNumber& gamma) {
    require_gamma(gamma, s);
    return build_V_upto(f, s, gamma);
}

ModelledExpr square_V(const Nonlinearity& f, const SParam& s, const SKNumber& gamma,
                      const SKNumber& beta) {
    if (!(less(kZero, beta, s) && !less(kOne, beta, s)))
        throw BetaOutOfRange("square truncation must lie in (0, 1], got " +
                             beta.str());
    const std::size_t d = f.dim_plus_1 - 1;
    const ModelledExpr vb = truncate(build_V(f, s, gamma), beta, s);

    // planted keys I(sigma) with their constituents
    std::vector<std::pair<TreePtr, TreePtr>> planted;  // (I(sigma), sigma)
    for (const auto& [t, p] : vb.terms)
        if (is_planted(t)) planted.emplace_back(t, t->edges[0].child);

    ModelledExpr sq;
    {
        JetPolynomial x0 = JetPolynomial::variable(Multi(d + 1));
        sq.add(one(d), x0 * x0);
        for (const auto& [it_, sigma] : planted) {
            const JetPolynomial& u = upsilon(f, sigma);
            sq.add(it_, Rat(2) / Rat(symmetry_factor(sigma)) * (x0 * u));
        }
        for (std::size_t i = 0; i < planted.size(); i++)
            for (std::size_t j = i; j < planted.size(); j++) {
                TreePtr t2 = product(planted[i].first, planted[j].first);
                if (!less(homogeneity(t2), beta, s)) continue;
                const JetPolynomial prod =
                    upsilon(f, planted[i].second) * upsilon(f, planted[j].second);
                sq.add(t2, Rat(2) / Rat(symmetry_factor(t2)) * prod);
            }
    }

    const ModelledExpr raw = truncate(expr_mul(vb, vb), beta, s);
    if (!(sq == raw))
        throw IdentityViolation(
            "square bookkeeping disagrees with the raw truncated product at beta = " +
            beta.str());
    return sq;
}

ModelledExpr gradient_V(const Nonlinearity& f, const SParam& s, unsigned j,
                        const SKNumber& gamma) {
    const std::size_t d = f.dim_plus_1 - 1;
    if (j < 1 || j > d) throw std::invalid_argument("gradient direction must be spatial");
    const Multi ej = Multi::unit(d + 1, j);
    ModelledExpr v;
    v.add(one(d), JetPolynomial::variable(ej));
    const TreeSet ts = generate(s, gamma - kTwoS, d, kMaxPolyDegree);
    for (TreePtr sigma : ts.trees) {
        if (is_monomial(sigma)) continue;
        if (!less(kOne, planted_homog(sigma), s)) continue;
        const JetPolynomial& u = upsilon(f, sigma);
        if (u.is_zero()) continue;
        v.add(plant_tree(ej, sigma), Rat(1) / Rat(symmetry_factor(sigma)) * u);
    }
    return v;
}

ModelledExpr gamma_on_expr(const Character& g, const ModelledExpr& expr,
                           const SParam& s) {
    ModelledExpr out;
    for (const auto& [t, p] : expr.terms) {
        const LinComb img = act(g, LinComb(t), s);
        for (const auto& [sigma, c] : img.terms()) out.add(sigma, c * p);
    }
    return out;
}

/* --- identity checks ----------------------------------------------------- */

DpdReport dpd_check(const Nonlinearity& f, const SParam& s, const SKNumber& gamma,
                    std::optional<Rat> epsilon) {
    require_gamma(gamma, s);
    const std::size_t d = f.dim_plus_1 - 1;
    const Multi m0(d + 1);

    // the negative-planting sector (noise included)
    const TreeSet wset = generate(s, SKNumber{0, -2, 0}, d, kMaxPolyDegree);
    const std::vector<TreePtr>& W = wset.trees;

    std::vector<Rat> uval(W.size());
    std::vector<Rat> wfact(W.size());
    for (std::size_t i = 0; i < W.size(); i++) {
        uval[i] = constant_upsilon(f, W[i]);
        wfact[i] = Rat(symmetry_factor(W[i]));
    }

    // eps: half of min(min over pairs of gamma + |I(t1)I(t2)|,
    //                  min over W of 1 + |I(t)|), infinitesimal dropped
    Rat eps;
    if (epsilon) {
        eps = *epsilon;
    } else {
        bool first = true;
        Rat m1, m2;
        const Rat gval = gamma.eval(s.s);
        for (std::size_t i = 0; i < W.size(); i++) {
            const Rat hi = planted_homog(W[i]).eval(s.s);
            const Rat c2 = 1 + hi;
            if (first || c2 < m2) m2 = c2;
            for (std::size_t j = i; j < W.size(); j++) {
                const Rat c1 = gval + hi + planted_homog(W[j]).eval(s.s);
                if (first || c1 < m1) m1 = c1;
                first = false;
            }
        }
        eps = (m1 < m2 ? m1 : m2) / 2;
    }
    if (!(eps > 0))
        throw IdentityViolation("no admissible truncation exponent: eps = " +
                                to_string(eps));
    const SKNumber epssk{eps, 0, 0};

    const ModelledExpr lhs = build_V(f, s, gamma);

    ModelledExpr rhs;
    rhs.add(one(d), JetPolynomial::variable(m0));
    for (std::size_t j = 1; j <= d; j++)
        rhs.add(monomial(Multi::unit(d + 1, j)),
                JetPolynomial::variable(Multi::unit(d + 1, j)));

    // -3 sum_{tau in W} (Upsilon[tau]/tau!) I(I(tau) V^2_{eps - |I(tau)|})
    for (std::size_t i = 0; i < W.size(); i++) {
        if (uval[i] == 0) continue;
        const SKNumber beta_t = epssk - planted_homog(W[i]);
        const ModelledExpr vsq = square_V(f, s, gamma, beta_t);
        TreePtr it = plant_tree(m0, W[i]);
        const Rat c = Rat(-3) * uval[i] / wfact[i];
        for (const auto& [t, p] : vsq.terms)
            rhs.add(plant_tree(m0, product(it, t)), c * p);
    }

    // -3 sum over ordered pairs of (U1 U2/(t1! t2!)) I(I(t1)I(t2) V_{beta12})
    const ModelledExpr vfull = lhs;
    for (std::size_t i = 0; i < W.size(); i++) {
        if (uval[i] == 0) continue;
        for (std::size_t j = 0; j < W.size(); j++) {
            if (uval[j] == 0) continue;
            TreePtr tij = product(plant_tree(m0, W[i]), plant_tree(m0, W[j]));
            const SKNumber beta12 = epssk - planted_homog(W[i]) - planted_homog(W[j]);
            const ModelledExpr vb = truncate(vfull, beta12, s);
            const Rat c = Rat(-3) * uval[i] * uval[j] / (wfact[i] * wfact[j]);
            for (const auto& [t, p] : vb.terms)
                rhs.add(plant_tree(m0, product(tij, t)), c * p);
        }
    }

    // boundary ternary products with 0 < |I(tau)| < gamma
    std::set<TreePtr> wmember(W.begin(), W.end());
    std::set<TreePtr> seen;
    for (std::size_t i = 0; i < W.size(); i++)
        for (std::size_t j = i; j < W.size(); j++)
            for (std::size_t k = j; k < W.size(); k++) {
                TreePtr t = make_tree(
                    m0, {Edge{m0, W[i]}, Edge{m0, W[j]}, Edge{m0, W[k]}});
                if (wmember.count(t) || !seen.insert(t).second) continue;
                const SKNumber ih = planted_homog(t);
                if (!(less(kZero, ih, s) && less(ih, gamma, s))) continue;
                const JetPolynomial& u = upsilon(f, t);
                if (u.is_zero()) continue;
                rhs.add(plant_tree(m0, t), Rat(1) / Rat(symmetry_factor(t)) * u);
            }

    const ModelledExpr projected = truncate(rhs, gamma, s);
    if (!(lhs == projected)) {
        for (const auto& [t, p] : lhs.terms) {
            const JetPolynomial q = projected.coefficient(t);
            if (!(p == q))
                throw IdentityViolation("remainder identity fails at " + render(t) +
                                        ": " + p.str() + " vs " + q.str());
        }
        for (const auto& [t, p] : projected.terms)
            if (lhs.coefficient(t).is_zero())
                throw IdentityViolation("remainder identity has a spurious key " +
                                        render(t) + ": " + p.str());
        throw IdentityViolation("remainder identity fails");
    }

    // tau! * (distinct orderings) = 3! tau1! tau2! tau3! over ternary products
    std::size_t triples = 0;
    for (std::size_t i = 0; i < W.size(); i++)
        for (std::size_t j = i; j < W.size(); j++)
            for (std::size_t k = j; k < W.size(); k++) {
                TreePtr t = make_tree(
                    m0, {Edge{m0, W[i]}, Edge{m0, W[j]}, Edge{m0, W[k]}});
                unsigned delta = 6;  // distinct orderings of the multiset
                if (i == j && j == k)
                    delta = 1;
                else if (i == j || j == k || i == k)
                    delta = 3;
                const Int want = Int(6) * symmetry_factor(W[i]) *
                                 symmetry_factor(W[j]) * symmetry_factor(W[k]);
                if (symmetry_factor(t) * Int(delta) != want)
                    throw IdentityViolation("symmetry-factor identity fails at " +
                                            render(t));
                triples++;
            }

    return DpdReport{eps, lhs.terms.size(), triples};
}

ComponentReport lemma224_check(const Nonlinearity& f, const Character& g,
                               const SParam& s, const SKNumber& gamma,
                               const SKNumber& beta, TreePtr tau) {
    require_gamma(gamma, s);
    if (!(less(kOne, beta, s) && !less(gamma, beta, s)))
        throw BetaOutOfRange("component order must lie in (1, gamma], got " +
                             beta.str());
    const SKNumber ih = planted_homog(tau);
    if (!(less(kZero, ih, s) && less(ih, beta, s)))
        throw std::invalid_argument("tree outside the admissible window: " +
                                    render(tau));

    const std::size_t d = f.dim_plus_1 - 1;
    const Multi m0(d + 1);
    const ModelledExpr V = build_V(f, s, gamma);
    std::size_t n = 0;

    // the four-case component identity at tau
    {
        const ModelledExpr gv = gamma_on_expr(g, truncate(V, beta, s), s);
        const JetPolynomial lhs = component(gv, plant_tree(m0, tau));
        const Shape sh = cubic_shape(f, tau);
        JetPolynomial rhs;
        const Rat c = Rat(sh.c);
        switch (sh.kind) {
            case Shape::Zero:
                break;
            case Shape::VPow:
                if (sh.power == 0) {
                    rhs = JetPolynomial::constant(c);
                } else if (sh.power == 1) {
                    const ModelledExpr gvp =
                        gamma_on_expr(g, truncate(V, beta - ih, s), s);
                    rhs = c * component(gvp, one(d));
                } else if (sh.power == 2) {
                    const ModelledExpr gsq =
                        gamma_on_expr(g, square_V(f, s, gamma, beta - ih), s);
                    rhs = c * component(gsq, one(d));
                } else {
                    throw ShapeViolation("unexpected power in the component identity");
                }
                break;
            case Shape::VX: {
                const ModelledExpr ggr = gamma_on_expr(
                    g, gradient_V(f, s, sh.j, beta - ih + kOne), s);
                rhs = c * component(ggr, one(d));
                break;
            }
        }
        require_equal(lhs, rhs, "component identity at " + render(tau));
        n++;
    }

    // square components at order one
    {
        const ModelledExpr sq = square_V(f, s, gamma, kOne);
        const ModelledExpr gsq = gamma_on_expr(g, sq, s);
        TreePtr ixi = plant_tree(m0, noise(d));
        const SKNumber shift = kOne + planted_homog(ixi);
        const ModelledExpr gvs =
            gamma_on_expr(g, build_V_upto(f, s, shift), s);

        require_equal(Rat(3) * component(gsq, one(d)),
                      component(gvs, plant_tree(m0, ixi)),
                      "square component at the unit");
        n++;
        for (const auto& [t, p] : sq.terms) {
            if (is_one(t)) continue;
            require_equal(Rat(3) * component(gsq, t),
                          component(gvs, plant_tree(m0, product(t, ixi))),
                          "square component at " + render(t));
            n++;
        }
    }

    // gradient components
    {
        const ModelledExpr gv = gamma_on_expr(g, V, s);
        for (unsigned j = 1; j <= d; j++) {
            const ModelledExpr grad = gradient_V(f, s, j, gamma);
            const ModelledExpr ggr = gamma_on_expr(g, grad, s);
            require_equal(component(ggr, one(d)),
                          component(gv, monomial(Multi::unit(d + 1, j))),
                          "gradient component at the unit");
            n++;
            for (const auto& [t, p] : grad.terms) {
                if (is_one(t)) continue;
                TreePtr sigma = t->edges[0].child;
                require_equal(component(ggr, t),
                              component(gv, plant_tree(m0, sigma)),
                              "gradient component at " + render(t));
                n++;
            }
        }
    }

    return ComponentReport{n};
}

}  // namespace rs
