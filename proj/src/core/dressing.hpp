#pragma once

#include "core/diffop.hpp"
#include "core/opseries.hpp"

namespace eqtoda {

/** Coefficients of the inverse dressing operator, solved degree by degree from
 *  W W^{-1} = 1.  Entry [k] is the coefficient at Lambda^{-k}; entry [0] is 1. */
std::vector<DiffPoly> w_star_upto(const AlgebraContext& ctx, int upto);

/** W = 1 + sum_{k=1}^{max_k} w_k Lambda^{-k}, tail below -max_k undetermined. */
DiffOp dressing_w(const AlgebraContext& ctx);
/** W^{-1} assembled from the triangular recursion (not the generic solver). */
DiffOp dressing_w_inverse(const AlgebraContext& ctx);

/** The dressing package: both factorization operators with their inverses and
 *  the two conjugated shift operators they generate. */
struct Dressing {
    AlgebraContext ctx;
    DiffOp W, Winv, Wbar, Wbarinv;
    DiffOp L;     // W Lambda W^{-1}
    DiffOp Lbar;  // Wbar^{-1} (q Lambda^{-1}) Wbar
};

Dressing make_dressing(const AlgebraContext& ctx);

/** eps (dW/dx) W^{-1}: the correction term between the dressed and undressed
 *  logarithms of the shift. */
DiffOp ell_direct(const Dressing& d);

/** Coefficients of the formal fractional power of the dressed shift,
 *  W Lambda^s W^{-1}: entry [k] holds the coefficient a_k(s) at Lambda^{s-k},
 *  a polynomial in s (entry [0] is 1).  Closed form
 *    a_k(s) = E^{-s/2} w_k
 *           + sum_{j=1}^{k-1} (E^{(k-j-s)/2} w_j)(E^{(s-j)/2} w*_{k-j})
 *           + E^{s/2} w*_k. */
struct FracPower {
    AlgebraContext ctx;
    std::vector<DiffPoly> a;
};

FracPower frac_power(const AlgebraContext& ctx, int upto);

/** Residuals of the defining flow in s,
 *    d a_k(s)/ds = -(1/2) sum_{j=0}^{k-1} [ (E^{(s-j)/2} b_{k-j})(E^{(k-j)/2} a_j(s))
 *                                         + (E^{(j-s)/2} b_{k-j})(E^{(j-k)/2} a_j(s)) ],
 *  where b_m are the coefficients of ell at Lambda^{-m}.  Entry [k-1] is the
 *  residual for a_k; all residuals vanish iff the family solves the flow. */
std::vector<DiffPoly> frac_power_ode_residuals(const FracPower& fp, const DiffOp& ell);

/** Substitution sending the abstract Lax coefficients a_k and their conjugates
 *  to their dressing expressions (q maps to itself).  Requires
 *  free_ctx.max_k <= d.ctx.max_k so every image is determined. */
GenSubst embedding_map(const AlgebraContext& free_ctx, const Dressing& d);

}  // namespace eqtoda
