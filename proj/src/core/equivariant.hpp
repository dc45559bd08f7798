#pragma once

#include "core/flows.hpp"

namespace eqtoda {

/** Parameter monomials used by the scaling constraint. */
CoeffSeries t_series(const Rat& c = Rat(1));
CoeffSeries z_series(int k, const Rat& c = Rat(1));

/** Lambda + v + q Lambda^{-1} over the reduced algebra: the tridiagonal
 *  operator generating the scaling constraint.  Exact window [-1, 1]. */
DiffOp big_k(const AlgebraContext& rctx);

/** Derivation with e(v) = 1 and e(u) = e(q) = 0, so that e applied to the
 *  tridiagonal operator gives the identity. */
Derivation e_derivation(const AlgebraContext& rctx);

/** p_{-1}(k) - q p_1(k) - t P p_0(k) over the free Lax algebra: the
 *  combination whose reduced image is the constant z_k. */
DiffPoly z_element(const Lax& lax, int k);

/** Reduced Lax data solved from K = L + t ell - sum_k (z_k / k) L^{-k}. */
struct ConstraintSolution {
    AlgebraContext rctx;       // reduced coefficient algebra
    int k_max = 0;             // a_1 .. a_k_max are solved
    std::vector<DiffPoly> a;   // a[k] = reduced a_k (a[0] unused, a[1] = v)
    GenSubst rho;              // free Lax algebra -> reduced images
    DiffOp l;                  // Lambda + sum_k a_k Lambda^{1-k}, open tail
    DiffOp lbar;               // image under the involution
    DiffOp ell;                // sum_k b_k Lambda^{-k} from the log recursion
    std::vector<DiffPoly> b;   // the b_k above (b[0] = 0)
};

/** Solve the constraint degree by degree: stage m reads off the Lambda^{-m}
 *  coefficient, giving a_{m+1} in terms of a_1..a_m.  `fault` flips the sign
 *  of the third solved coefficient (failure-injection hook for residual
 *  reporting; never set in normal operation). */
ConstraintSolution solve_constraint(int k_max, int eps_order, bool fault = false);

/** Straight (barred = false) or conjugate n-th flow on the reduced
 *  generators:
 *    d_n v = nabla(q p_1(n)) + t d p_0(n),   d_n u = nabla p_0(n),
 *    d_n q = q nabla p_0(n),
 *  and the involuted power coefficients in the barred case (no t d term). */
Derivation reduced_flow(const ConstraintSolution& sol, int n, bool barred);

/** The constant read off the solution for z_k: jet-free, unit coefficient at
 *  z_k, remainder involving only t and z_1..z_{k-1}.  Needs k < sol.k_max. */
IdentityReport z_constant_check(const ConstraintSolution& sol, int k, int n_assert);

/** K = L + t ell - sum (z_k/k) L^{-k} by greedy peeling (each peeled scalar
 *  must be jet-free and equal -z_k/k), the commutator forms
 *  eps^{-1}[K, L] = t dL and eps^{-1}[K, Lbar] = t dLbar, and the z = 0
 *  specialization K = L + t ell. */
IdentityReport theorem_main_check(const ConstraintSolution& sol, int n_assert);

/** (L - t + sum_k z_k L^{-k}) e(L) = L on the determined window. */
IdentityReport puncture_check(const ConstraintSolution& sol, int n_assert);

/** Over the dressing algebra: (K - L - t ell) W = eps (d_1 - dbar_1 - t d) W
 *  with K = L_+ + Lbar_-; on the reduced side the same first-flow difference
 *  kills v, u and q. */
IdentityReport equivariant_w_check(const ConstraintSolution& sol, int depth, int n_assert);

}  // namespace eqtoda
