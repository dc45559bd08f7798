#pragma once

#include "core/dressing.hpp"

namespace eqtoda {

/** A Lax pair with cached integer powers of both operators. */
class Lax {
  public:
    Lax(DiffOp l, DiffOp lbar);

    const AlgebraContext& ctx() const { return l_.ctx(); }
    const DiffOp& l() const { return l_; }
    const DiffOp& lbar() const { return lbar_; }
    const DiffOp& power(int n) const;      // L^n, n >= 0
    const DiffOp& bar_power(int n) const;  // Lbar^n, n >= 0
    /** Coefficient of Lambda^k in L^n; throws WindowMiss when undetermined. */
    DiffPoly p(int k, int n) const { return power(n).coefficient(k); }

  private:
    DiffOp l_, lbar_;
    mutable std::map<int, DiffOp> pow_, bar_pow_;
};

/** Abstract pair: L = Lambda + sum_{k<=max_k} a_k Lambda^{1-k} with an
 *  undetermined tail, and its image under the involution. */
Lax make_free_lax(const AlgebraContext& ctx);

/** B_n = eps^{-1} L^n_+ and C_n = -eps^{-1} Lbar^n_-. */
DiffOp b_op(const Lax& lax, int n);
DiffOp c_op(const Lax& lax, int n);

/** Evolutionary derivation: order-0 generator images, extended to jets by the
 *  spatial derivative and to operators coefficient-wise.  Applying it to a
 *  polynomial containing a generator without an image throws NotDefined. */
class Derivation {
  public:
    explicit Derivation(AlgebraContext ctx) : ctx_(ctx) {}

    const AlgebraContext& ctx() const { return ctx_; }
    void set_image(const GenKey& g, DiffPoly image);
    bool has_image(const GenKey& g) const { return images_.count(g) != 0; }
    const DiffPoly& image(const GenKey& g) const;
    /** Every generator occurring in p has an image. */
    bool covers(const DiffPoly& p) const;

    DiffPoly apply(const DiffPoly& p) const;
    DiffOp apply(const DiffOp& op) const;
    /** Commutator [this, o] applied to p. */
    DiffPoly commutator_apply(const Derivation& o, const DiffPoly& p) const;

  private:
    const DiffPoly& jet_image(const JetVar& j) const;

    AlgebraContext ctx_;
    std::map<GenKey, DiffPoly> images_;
    mutable std::map<JetVar, DiffPoly> jet_cache_;
};

/** n-th flow (or its conjugate) on the abstract Lax algebra.  Images are set
 *  for every index at which the defining commutators are determined:
 *  d_n a_k = [B_n, L]_{1-k},  d_n q = [B_n, Lbar]_{-1},  and the conjugate
 *  generators through the involution. */
Derivation free_flow(const Lax& lax, int n, bool barred);

/** The same flows acting on the dressing algebra, where the w_k images come
 *  from the factorization equations eps d_n W = -L^n_- W and
 *  eps dbar_n W = -Lbar^n_- W.  `lax` must hold the dressed pair. */
Derivation dressing_flow(const Dressing& d, const Lax& lax, int n, bool barred);

/** Coefficients b_n of the logarithm correction by the triangular recursion
 *  [n] b_n = -( sum_{k=1}^{n-1} [k](b_k p_k(n)) + P p_0(n) ); entry [0] is 0. */
std::vector<DiffPoly> ell_b_upto(const Lax& lax, int upto);
/** sum_{k=1}^{depth} b_k Lambda^{-k} assembled from the recursion. */
DiffOp ell_recursive(const Lax& lax, int depth);

/** Outcome of an identity check with the first offending entry on failure. */
struct IdentityReport {
    bool ok = true;
    std::string note;          // which sub-identity failed
    DiffOp::Mismatch where;    // first offending coefficient entry
};

/** Zero-curvature consistency of the flow generators over the abstract Lax
 *  algebra: d_m B_n - d_n B_m = [B_m, B_n] for a straight pair, and with the
 *  second flow conjugate (n_barred) both the mixed equation
 *  d_m C_n - dbar_n B_m = [B_m, C_n] and the all-conjugate one
 *  dbar_m C_n - dbar_n C_m = [C_m, C_n]. */
IdentityReport zakharov_shabat_check(int m, int n, bool n_barred, int eps_order);

/** [d_m, d_n] = 0 on the generators a_1, a_2 and q (second flow conjugate
 *  when n_barred). */
IdentityReport flow_commute_check(int m, int n, bool n_barred, int eps_order);

}  // namespace eqtoda
