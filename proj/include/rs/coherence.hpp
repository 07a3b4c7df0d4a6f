#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rs/hopf.hpp"
#include "rs/tree.hpp"

namespace rs {

/*
 * The coherence map for the damped cubic equation and the Da Prato-Debussche
 * remainder calculus built on top of it.
 *
 * A nonlinearity is a polynomial in the jet variables X_k (k in N^{1+d}),
 * where X_k stands for the k-th derivative of the solution; the default is
 * the cubic F = -X_0^3.  The coherence map Upsilon assigns to every grammar
 * tree a jet polynomial by the recursion
 *
 *     Upsilon[Xi]  = (configured unit),
 *     Upsilon[X^k prod_i I_{m_i}(tau_i)] =
 *         (prod_i Upsilon[tau_i]) * (shift^k prod_i D_{m_i} F),
 *
 * with D_k the formal partial derivative in X_k and shift^{e_j} the total
 * derivative F |-> sum_k X_{k+e_j} D_k F.  The remainder V subtracts the
 * negative-planting sector W from the coherent expansion; dpd_check verifies
 * the exact fixed-point identity it satisfies, and the lemma-style component
 * identities relate the structure-group action on V^2 and on the generalised
 * gradient back to the action on V itself.
 */

struct NotInGrammar : std::invalid_argument {
    explicit NotInGrammar(const std::string& w)
        : std::invalid_argument("coherence map undefined: " + w) {}
};
struct ShapeViolation : std::logic_error {
    explicit ShapeViolation(const std::string& w) : std::logic_error(w) {}
};
struct ExcludedTree : std::invalid_argument {
    explicit ExcludedTree(const std::string& w) : std::invalid_argument(w) {}
};
struct GammaOutOfRange : std::invalid_argument {
    explicit GammaOutOfRange(const std::string& w) : std::invalid_argument(w) {}
};
struct BetaOutOfRange : std::invalid_argument {
    explicit BetaOutOfRange(const std::string& w) : std::invalid_argument(w) {}
};
struct IdentityViolation : std::logic_error {
    explicit IdentityViolation(const std::string& w) : std::logic_error(w) {}
};

/* --- jet polynomials ---------------------------------------------------- */

/* Monomial in the jet variables: sorted multiset of indices k, one entry per
 * factor X_k.  The empty vector is the constant monomial. */
using JetMonomial = std::vector<Multi>;

class JetPolynomial {
  public:
    using Map = std::map<JetMonomial, Rat>;

    JetPolynomial() = default;

    static JetPolynomial constant(const Rat& c) {
        JetPolynomial p;
        p.add(JetMonomial{}, c);
        return p;
    }
    static JetPolynomial variable(const Multi& k) {
        JetPolynomial p;
        p.add(JetMonomial{k}, 1);
        return p;
    }

    void add(JetMonomial m, const Rat& c);
    JetPolynomial& operator+=(const JetPolynomial& o);
    friend JetPolynomial operator+(JetPolynomial a, const JetPolynomial& b) {
        return a += b;
    }
    friend JetPolynomial operator-(const JetPolynomial& a, const JetPolynomial& b);
    friend JetPolynomial operator*(const Rat& c, const JetPolynomial& p);
    friend JetPolynomial operator*(const JetPolynomial& a, const JetPolynomial& b);
    friend bool operator==(const JetPolynomial& a, const JetPolynomial& b) {
        return a.terms_ == b.terms_;
    }

    bool is_zero() const { return terms_.empty(); }
    const Map& terms() const { return terms_; }
    std::string str() const;

  private:
    Map terms_;
};

/* Formal partial derivative D_k in the single variable X_k. */
JetPolynomial jet_derive(const JetPolynomial& f, const Multi& k);

/* Total derivative in direction j (0 = time): sum_k X_{k+e_j} D_k f. */
JetPolynomial jet_shift(const JetPolynomial& f, std::size_t j);

/* Iterated total derivative shift^k, composing jet_shift componentwise. */
JetPolynomial jet_shift_multi(const JetPolynomial& f, const Multi& k);

/* --- the nonlinearity and the coherence map ----------------------------- */

struct Nonlinearity {
    JetPolynomial F;
    /* Value assigned to Upsilon[Xi].  The default -1 is the unique choice
     * under which the component identities relating the structure-group
     * action on V^2 to the action on V hold exactly (the remainder
     * fixed-point identity checked by dpd_check is insensitive to it). */
    Rat xi = Rat(-1);
    std::size_t dim_plus_1 = 4;

    /* F = -X_0^3 in dimension 1+d. */
    static Nonlinearity cubic(std::size_t d = 3, Rat xi_value = Rat(-1));

    mutable std::map<TreePtr, JetPolynomial> memo;
};

/* Coherence map; memoized.  Defined by the recursion on every decorated tree
 * (for the cubic nonlinearity, nodes with too many children vanish through
 * the derivative), undefined on bare monomials (NotInGrammar). */
const JetPolynomial& upsilon(const Nonlinearity& f, TreePtr tau);
/* Linear extension. */
JetPolynomial upsilon(const Nonlinearity& f, const LinComb& x);

/* Shape of Upsilon[tau] under the cubic nonlinearity: either zero, or an
 * integer multiple of a pure power X_0^power, or an integer multiple of a
 * single spatial gradient variable X_{e_j}.  Anything else (or a non-integer
 * multiplier) throws ShapeViolation. */
struct Shape {
    enum Kind { Zero, VPow, VX } kind;
    Int c;           // nonzero for VPow / VX
    unsigned power;  // exponent of X_0 for VPow
    unsigned j;      // spatial direction for VX
};
Shape cubic_shape(const Nonlinearity& f, TreePtr tau);

/* Morphism form of the coherence map on mu = X^k prod_i I_{m_i}(sigma_i):
 *     (prod_i Upsilon[sigma_i]) * shift^k D_{m_1} ... D_{m_n} Upsilon[tau].
 * Agrees with the linear extension of upsilon over star(mu, tau). */
JetPolynomial upsilon_star(const Forest& mu, TreePtr tau, const Nonlinearity& f);

/* --- homogeneity exponents ---------------------------------------------- */

/* alpha(tau) = l(tau) * s^{-1} * (3s + |Xi|) with l the number of noise
 * leaves; returned with the s-part resolved at the concrete s and the
 * infinitesimal part tracked in ck. */
SKNumber alpha(TreePtr tau, const SParam& s);

/* Closed form s^{-1}(|tau| - |n(tau)| + |e(tau)|) - m(tau) + 3, defined away
 * from the noise and from bare monomials (ExcludedTree); equals alpha there. */
SKNumber alpha_closed_form(TreePtr tau, const SParam& s);

/* --- modelled expressions ----------------------------------------------- */

/* Finite linear combination of trees with jet-polynomial coefficients. */
struct ModelledExpr {
    using Map = std::map<TreePtr, JetPolynomial, TreeLess>;
    Map terms;

    void add(TreePtr t, const JetPolynomial& p);
    JetPolynomial coefficient(TreePtr t) const;
    friend bool operator==(const ModelledExpr& a, const ModelledExpr& b) {
        return a.terms == b.terms;
    }
    std::string str() const;
};

/* Inner-product component <t, expr> = coefficient(t) * t!. */
JetPolynomial component(const ModelledExpr& expr, TreePtr t);

/* Key-by-key product, joining trees at the root. */
ModelledExpr expr_mul(const ModelledExpr& a, const ModelledExpr& b);

/* Drop keys of homogeneity >= beta (exact, infinitesimal-aware). */
ModelledExpr truncate(const ModelledExpr& expr, const SKNumber& beta, const SParam& s);

/* The remainder V = X_0 * 1 + sum_j X_{e_j} * X^{e_j}
 *                 + sum over trees with 0 < |I(tau)| < gamma of
 *                   (Upsilon[tau]/tau!) * I(tau).
 * Requires gamma in (3 - 2s, 2s); GammaOutOfRange otherwise. */
ModelledExpr build_V(const Nonlinearity& f, const SParam& s, const SKNumber& gamma);

/* Same expansion without the admissible-order window check on the bound
 * (used for the shifted truncations in the component identities). */
ModelledExpr build_V_upto(const Nonlinearity& f, const SParam& s, const SKNumber& bound);

/* The square of the truncated remainder, assembled coefficient-wise:
 *     X_0^2 * 1 + sum (2 X_0 Upsilon[sigma]/sigma!) I(sigma)
 *   + sum over products (2 Upsilon[sigma_1]Upsilon[sigma_2] /
 *                        (I(sigma_1)I(sigma_2))!) I(sigma_1)I(sigma_2),
 * all keys kept below beta.  Requires beta in (0, 1] (BetaOutOfRange); the
 * result is asserted equal to the raw truncated product of V with itself. */
ModelledExpr square_V(const Nonlinearity& f, const SParam& s, const SKNumber& gamma,
                      const SKNumber& beta);

/* The generalised gradient in spatial direction j:
 *     X_{e_j} * 1 + sum over 1 < |I(sigma)| < gamma of
 *     (Upsilon[sigma]/sigma!) I_{e_j}(sigma). */
ModelledExpr gradient_V(const Nonlinearity& f, const SParam& s, unsigned j,
                        const SKNumber& gamma);

/* Apply the structure-group action of the character to every key, keeping
 * jet coefficients along for the ride. */
ModelledExpr gamma_on_expr(const Character& g, const ModelledExpr& expr,
                           const SParam& s);

/* --- identity checks ----------------------------------------------------- */

struct DpdReport {
    Rat epsilon;                // truncation exponent used
    std::size_t keys_compared;  // keys of the projected identity
    std::size_t delta_triples;  // symmetry-factor triples verified
};

/* Verifies the exact remainder fixed-point identity
 *
 *   V = -3 sum_{tau in W} (Upsilon[tau]/tau!) I(I(tau) V^2_{beta_tau})
 *       -3 sum_{tau1,tau2 in W} (Upsilon[tau1]Upsilon[tau2]/(tau1! tau2!))
 *              I(I(tau1) I(tau2) V_{beta_{tau1,tau2}})
 *       + sum over boundary ternary products with 0 < |I(tau)| < gamma of
 *              (Upsilon[tau]/tau!) I(tau)
 *       + X_0 * 1 + sum_j X_{e_j} * X^{e_j},
 *
 * both sides projected below gamma, with beta_tau = eps - |I(tau)| and
 * beta_{tau1,tau2} = eps - |I(tau1)I(tau2)|; eps is half the smaller of
 * min{gamma + |I(tau1)I(tau2)|} and min{1 + |I(tau)|} over W, with the
 * infinitesimal dropped.  Also verifies, for every ternary product tau of
 * members of W, the symmetry-factor identity
 *     tau! * (number of distinct orderings) = 3! tau1! tau2! tau3!.
 * Throws IdentityViolation naming the first differing key. */
DpdReport dpd_check(const Nonlinearity& f, const SParam& s, const SKNumber& gamma,
                    std::optional<Rat> epsilon = std::nullopt);

struct ComponentReport {
    std::size_t identities_checked;
};

/* Component identities for the structure-group action, at one character g:
 *
 *   - at tau (requires beta in (1, gamma], tau with 0 < |I(tau)| < beta),
 *     with c and the shape from cubic_shape:
 *       <I(tau), Gamma V_beta> = c * <1, Gamma V_{beta-|I(tau)|}>   (shape v)
 *       <I(tau), Gamma V_beta> = c * <1, Gamma V^2_{beta-|I(tau)|}> (shape v^2)
 *       <I(tau), Gamma V_beta> = c * <1, Gamma V^(j)_{beta-|I(tau)|+1}>
 *                                                                (shape v_X)
 *       <I(tau), Gamma V_beta> = tau! * coefficient = c             (shape 1)
 *   - the square components at beta' = 1:
 *       3<1, Gamma V^2> = <I(I(Xi)), Gamma V_{1+|I(I(Xi))|}>
 *       3<I(s), Gamma V^2> = <I(I(s)I(Xi)), Gamma V_{1+|I(I(Xi))|}>
 *       3<I(s1)I(s2), Gamma V^2> = <I(I(s1)I(s2)I(Xi)), Gamma V_{1+|I(I(Xi))|}>
 *   - the gradient components:
 *       <1, Gamma V^(j)> = <X_j, Gamma V>
 *       <I_j(s), Gamma V^(j)> = <I(s), Gamma V>  over 1 < |I(s)| < gamma.
 *
 * Throws IdentityViolation on the first failure. */
ComponentReport lemma224_check(const Nonlinearity& f, const Character& g,
                               const SParam& s, const SKNumber& gamma,
                               const SKNumber& beta, TreePtr tau);

}  // namespace rs
