#pragma once

#include "core/equivariant.hpp"
#include "core/oneform.hpp"

namespace eqtoda {

/** A density considered modulo total x-derivatives.  Equality is decided by a
 *  family of invariants that all vanish on derivatives:
 *    - the variational derivative with respect to every generator present
 *      (over the reduced algebra the u-derivative carries the q = e^u chain),
 *    - the jet-free part (a derivative never has one: d(c q^alpha) carries
 *      q^alpha u_1 and every other image carries a positive-order jet),
 *    - on algebras where q has jets of its own, the coefficient of the
 *      winding monomial q_1 q^{-1}, which d(c q^alpha) = c alpha q^{alpha-1}
 *      q_1 + ... reaches only with alpha = 0, hence never.  */
class Functional {
  public:
    Functional() = default;
    explicit Functional(DiffPoly density) : d_(std::move(density)) {}
    static Functional zero(CtxKind kind) { return Functional(DiffPoly(kind)); }

    CtxKind kind() const { return d_.kind(); }
    const DiffPoly& density() const { return d_; }
    int order() const { return d_.order(); }

    Functional& operator+=(const Functional& o);
    Functional& operator-=(const Functional& o);
    friend Functional operator+(Functional a, const Functional& b) { return a += b; }
    friend Functional operator-(Functional a, const Functional& b) { return a -= b; }
    Functional operator-() const { return Functional(-d_); }

    Functional scaled(const Rat& c) const { return Functional(d_.scaled(c)); }
    Functional scaled(const CoeffSeries& c) const { return Functional(d_.scaled(c)); }
    Functional mul_eps(int d) const { return Functional(d_.mul_eps(d)); }

    Functional subs_t_zero() const { return Functional(d_.subs_t_zero()); }
    Functional subs_z_zero() const { return Functional(d_.subs_z_zero()); }
    Functional t_part(int j) const { return Functional(d_.t_part(j)); }
    int t_min() const { return d_.t_min(); }

    /** Image under the reduced involution (t -> -t, z <-> zbar, v -> v-tPu). */
    Functional involute(int len) const;

    struct Obstruction {
        std::string invariant;  // which invariant failed to vanish
        DiffPoly residual;      // its nonzero value
    };
    /** Every invariant of the density vanishes up to eps order n. */
    bool is_zero_to(int n, Obstruction* why = nullptr) const;
    static bool equal_to(const Functional& a, const Functional& b, int n,
                         Obstruction* why = nullptr);

  private:
    DiffPoly d_;
};

/** Integral of the Lambda^0 coefficient. */
Functional res_functional(const DiffOp& a);

/** Canonical Lambda^0 coefficient of an operator-valued form; the commutator
 *  trace property extends to forms, so this kills commutators, and it matches
 *  the canonical differential of the residue density. */
OneForm res_form(const OperatorForm& a);

/** The Hamiltonian operator applied to a gradient column:
 *  J (g_v, g_u) = (t d g_v + nabla g_u, nabla g_v). */
std::pair<DiffPoly, DiffPoly> apply_j(const DiffPoly& grad_v, const DiffPoly& grad_u,
                                      int len);

/** One member of the Hamiltonian tower over the reduced algebra. */
struct HamiltonianRecord {
    int n = 0;
    Functional h;        // res_functional(L^{n+1}) / (n+1)
    Functional cap;      // H_n = h_n - t h_{n-1} + sum_{k=1}^{n-1} z_k h_{n-k-1}
    Functional barcap;   // image of H_n under the involution
    OneForm d_cap{CtxKind::Reduced};  // canonical differential of the H_n density
    DiffPoly delta_v;    // its dv coefficient
    DiffPoly delta_u;    // its du coefficient
};

/** Assemble h_n, H_n, Hbar_n and the canonical gradient for the reduced Lax
 *  pair; `len` is the series length used by the involution. */
HamiltonianRecord hamiltonian(const Lax& lax, int n, int len);

/** Residue ladder p_0(n+1) = sum_{k=0}^{n} [k+1](a_{k+1} p_k(n)) over the
 *  abstract Lax algebra, the vanishing of its alpha part, and the trace
 *  corollary h_n = sum_k (k+1)/(n+1) int a_{k+1} p_k(n) dx. */
IdentityReport lemma_p0_check(int n, int eps_order);

/** Integer-power differential formula: d(L^n) equals the alternating
 *  binomial sum  sum_{k=0}^{n-1} (-1)^k C(n,k+1) ad(L)^k (L^{n-k-1} dL). */
IdentityReport dls_check(int n, int depth, int eps_order);

/** Logarithm differential: -sum_{k>=0} (1/(k+1)) ad(L)^k (L^{-k-1} dL) equals
 *  d(ell) for the recursion solution ell; the series is truncated after
 *  eps_order + depth terms (each ad either raises the eps degree or lowers
 *  the Lambda degree).  Also pins the scalar s-derivative facts that identify
 *  this series with d/ds of the fractional-power formula at s = 0. */
IdentityReport dlog_check(int depth, int eps_order);

/** dh_n = res_form(L^n dL) and dH_n = res_form(L^n dK) against the canonical
 *  differentials of the assembled densities, over the reduced solution. */
IdentityReport dhn_check(const ConstraintSolution& sol, const Lax& lax, int n,
                         int n_assert);

/** Gradient formulas delta_v H_n = p_0(n), delta_u H_n = q p_1(n) and the
 *  conjugate pair delta_v Hbar_n = pbar_0(n), delta_u Hbar_n = q pbar_1(n)
 *  - t P pbar_0(n). */
IdentityReport var_corollary_check(const Lax& lax, int n, int n_assert);

/** The n-th reduced flow (or its conjugate) equals J applied to the gradient
 *  of H_n (resp. Hbar_n). */
IdentityReport hamiltonian_flow_check(const ConstraintSolution& sol, const Lax& lax,
                                      int n, bool barred, int n_assert);

/** d_m(H_n) = 0 as a Functional (conserved quantities). */
IdentityReport conservation_check(const ConstraintSolution& sol, const Lax& lax,
                                  int m, int n, bool barred, int n_assert);

/** int a^T (J b) dx = -int b^T (J a) dx for the given gradient columns. */
IdentityReport j_antisymmetry_check(const DiffPoly& av, const DiffPoly& au,
                                    const DiffPoly& bv, const DiffPoly& bu,
                                    int len, int n_assert);

/** The t -> 0 limit of the puncture-descendant combination at z = 0: the
 *  operator expansions L = K - t ell_0 + O(t^2) and Lbar = K +
 *  t(bar(ell_0) - Pu) + O(t^2) (with Res(K^m bar(ell_0)) = Res(K^m ell_0)
 *  pinned, so residue statements may use ell_0 for both), the limit
 *  identities
 *    lim t^{-1}(h_{k+1} - hbar_{k+1})  = Res(K^{k+1}(Pu - 2 ell_0)),
 *    lim t^{-1}(H_{k+1} - Hbar_{k+1}) = Res(K^{k+1}(Pu - 2 ell_0))
 *                                        - 2/(k+1) Res(K^{k+1}),
 *  and the assembled descendant Hamiltonian
 *    (k+1)!^{-1} Res(K^{k+1}(Pu - 2(ell_0 + c_{k+1}))),  c_m = 1 + ... + 1/m,
 *  together with the exact size of the gap between the two limit identities.
 *  Throws TPoleDetected when the difference behind a t^{-1} is not O(t). */
IdentityReport descendant_limit_check(const ConstraintSolution& sol, const Lax& lax,
                                      int k, int n_assert);

}  // namespace eqtoda
