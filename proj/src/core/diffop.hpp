#pragma once

#include <functional>
#include <map>
#include <optional>

#include "diffpoly.hpp"

namespace eqtoda {

/** Knowledge window of a Laurent series in the shift symbol.  Coefficients at
 *  degrees lo..hi are stored explicitly (a missing entry inside the window is
 *  an exact zero).  Outside the window a coefficient is either known to vanish
 *  (flag set) or undetermined; truncated tails of infinite series leave the
 *  corresponding flag cleared. */
struct Window {
    int lo = 0;
    int hi = -1;  // lo > hi: nothing stored explicitly
    bool zero_below = true;
    bool zero_above = true;

    bool empty() const { return lo > hi; }
    friend bool operator==(const Window&, const Window&) = default;
};

/** Difference operator sum_k p_k Lambda^{k + s_offset*s} with coefficients in
 *  the ambient differential algebra.  The product twists coefficients by
 *  half-integer shift-flow exponentials; an s_offset of 1 marks a formal
 *  power Lambda^s riding along with every degree (at most one factor of a
 *  product may carry it). */
class DiffOp {
public:
    explicit DiffOp(AlgebraContext ctx) : ctx_(ctx) {}

    static DiffOp zero(const AlgebraContext& ctx) { return DiffOp(ctx); }
    static DiffOp identity(const AlgebraContext& ctx);
    static DiffOp lambda_power(const AlgebraContext& ctx, int k);
    /** Lambda^{s + j}: degree j with a formal exponent offset s. */
    static DiffOp lambda_power_s(const AlgebraContext& ctx, int j);
    static DiffOp single(const AlgebraContext& ctx, int k, DiffPoly p);

    const AlgebraContext& ctx() const { return ctx_; }
    const Window& window() const { return win_; }
    int s_offset() const { return s_off_; }
    const std::map<int, DiffPoly>& coefficients() const { return c_; }

    /** Known to vanish at every degree (empty window, both flags). */
    bool is_zero_op() const { return win_.empty() && win_.zero_below && win_.zero_above; }

    /** Degrees at which the coefficient is known (window or a zero flag). */
    bool determined(int k) const;
    /** Coefficient at degree k; throws WindowMiss when undetermined. */
    DiffPoly coefficient(int k) const;
    /** Lambda^0 coefficient; throws WindowMiss when degree 0 is undetermined. */
    DiffPoly res() const { return coefficient(0); }

    /** Insert/overwrite a coefficient, growing the window to include k.
     *  Growing past a cleared flag boundary is the caller's responsibility. */
    void set_coefficient(int k, DiffPoly p);
    void add_to_coefficient(int k, const DiffPoly& p);
    /** Mark the tail below/above the window as a truncation (undetermined). */
    void clear_zero_below() { win_.zero_below = false; }
    void clear_zero_above() { win_.zero_above = false; }
    /** Shrink the window to [lo, hi], clearing flags on the trimmed sides. */
    DiffOp restricted(int lo, int hi) const;

    DiffOp& operator+=(const DiffOp& o);
    DiffOp& operator-=(const DiffOp& o);
    DiffOp operator-() const;
    friend DiffOp operator+(DiffOp a, const DiffOp& b) { return a += b; }
    friend DiffOp operator-(DiffOp a, const DiffOp& b) { return a -= b; }
    friend DiffOp operator*(const DiffOp& a, const DiffOp& b);

    DiffOp scaled(const Rat& r) const;
    DiffOp scaled(const CoeffSeries& c) const;
    DiffOp mul_eps(int d) const;
    DiffOp div_eps_checked(int d) const;
    /** Coefficient-wise x-derivative (the shift symbol is x-independent). */
    DiffOp derive_coeffs() const;

    /** Degrees >= 0 resp. <= -1; flags tighten accordingly. */
    DiffOp proj_plus() const;
    DiffOp proj_minus() const;

    /** Anti-isomorphism: p_k Lambda^k -> invol(p_k) q^{[k]} Lambda^{-k}. */
    DiffOp bar() const;

    /** Solve A X = 1 from the closed unit-leading end of the window, keeping
     *  `depth` coefficients of X (defaults to the index budget). */
    DiffOp inverted(int depth = -1) const;
    DiffOp power(int n, int invert_depth = -1) const;

    DiffOp map_coeffs(const std::function<DiffPoly(const DiffPoly&)>& f) const;
    DiffOp conj_coeffs() const;
    DiffOp subs_t_zero() const;
    DiffOp subs_z_zero() const;
    DiffOp truncated(int n) const;
    DiffOp t_part(int j) const;
    /** Coefficient-wise d/ds (the Lambda^s symbol itself is not varied). */
    DiffOp ds_coeffs() const;
    /** Substitute the integer value r for s, folding Lambda^s into degrees. */
    DiffOp subs_s_int(int r) const;
    /** Apply a generator substitution to every coefficient. */
    DiffOp substituted(const GenSubst& s, const AlgebraContext& target,
                       bool conj_coeffs = false) const;

    /** All known coefficients vanish up to eps order n. */
    bool is_zero_to(int n) const;
    /** Lowest eps-validity order over the stored coefficients. */
    int min_coeff_order() const;

    struct Mismatch {
        int degree = 0;
        Monomial mono;
        ParamKey key;
        Rat diff;
    };
    struct Overlap {
        int lo = 0;
        int hi = -1;
        bool empty() const { return lo > hi; }
    };
    /** Region where both operands are determined (possibly via zero flags),
     *  clipped to the union of their stored windows. */
    static Overlap overlap(const DiffOp& a, const DiffOp& b);
    /** Compare on the overlap up to eps order n; throws EmptyWindow when the
     *  overlap is empty.  Fills *where on failure if non-null. */
    static bool equal_on_overlap(const DiffOp& a, const DiffOp& b, int n,
                                 Mismatch* where = nullptr);

private:
    AlgebraContext ctx_;
    std::map<int, DiffPoly> c_;
    Window win_;
    int s_off_ = 0;

    DiffPoly coeff_in_window(int k) const;  // exact zero when absent
    void normalize_entry(int k, DiffPoly p);
};

/** q^{[k]}: multiplicative shift-flow analogue of the difference quotient
 *  bracket, defined so that (q Lambda^{-1})^k = q^{[k]} Lambda^{-k}.
 *  Negative k yields the Laurent inverse of q^{[-k]}. */
DiffPoly q_bracket_power(const AlgebraContext& ctx, int k);

}  // namespace eqtoda
