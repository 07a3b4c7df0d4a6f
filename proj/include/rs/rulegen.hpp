#pragma once

#include <stdexcept>
#include <vector>

#include "rs/tree.hpp"

namespace rs {

/*
 * Generation of the subcritical model space: the closure of {Xi} and the
 * admissible monomials under the cubic rule
 *
 *     X^k I(tau1),  X^k I_j(tau1),  X^k I(tau1)I(tau2),  I(tau1)I(tau2)I(tau3)
 *
 * keeping homogeneity below a cutoff, together with the classification of the
 * result into polynomials P, negative-planting trees W, positive-planting
 * trees V and the boundary triples dW.
 */

struct NotSubcritical : std::runtime_error {
    TreePtr witness;
    explicit NotSubcritical(TreePtr w)
        : std::runtime_error("rule closure is not subcritical; witness " + debug_str(w) +
                             " does not exceed the noise homogeneity"),
          witness(w) {}
};

struct TreeSet {
    SParam s;
    SKNumber cutoff;
    std::size_t d;
    unsigned max_poly_degree;
    std::vector<TreePtr> trees;  // canonically sorted, deterministic

    bool contains(TreePtr t) const;
};

/* Least fixed point of the rule below the cutoff.  Throws NotSubcritical as
 * soon as a constructed tree fails to exceed the noise homogeneity (at
 * s <= 3/4 the witness is I(Xi)^3).  max_poly_degree caps the total degree of
 * node decorations, a safety rail on top of the homogeneity filter. */
TreeSet generate(const SParam& s, const SKNumber& cutoff, std::size_t d,
                 unsigned max_poly_degree);

struct Classification {
    std::vector<TreePtr> P;        // monomials X^k
    std::vector<TreePtr> W;        // |I(tau)| < 0, tau not a monomial
    std::vector<TreePtr> V;        // |I(tau)| > 0, tau not a monomial
    std::vector<TreePtr> V_range;  // tau in V with |I(tau)| in [0, gamma)
    std::vector<TreePtr> dW;       // ternary products of W members not in W
};

Classification classify(const TreeSet& ts, const SKNumber& gamma);

/* Members of V with |I(tau)| in [alpha, beta). */
std::vector<TreePtr> v_range(const TreeSet& ts, const SKNumber& alpha,
                             const SKNumber& beta);

/* Independent test oracle: bottom-up enumeration by exact edge count of the
 * decorated sub-ternary trees accepted by the standalone grammar predicate,
 * pruned by homogeneity at every level.  The level pruning is sound because
 * children of grammar trees are grammar trees and, for s > 3/4, every
 * constructor strictly increases homogeneity; shapes the grammar can never
 * accept (decorated edges on multi-child nodes, decorated ternary roots) are
 * skipped up front, which does not change the filtered result. */
TreeSet oracle_generate(const SParam& s, const SKNumber& cutoff, std::size_t d,
                        unsigned max_edges, unsigned max_poly_degree);

}  // namespace rs
