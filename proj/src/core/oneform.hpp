#pragma once

#include "core/diffop.hpp"
#include "core/opseries.hpp"

namespace eqtoda {

/** Variational one-form: finite sum of coefficients against the basis
 *  d^n(d gen).  Keys are (generator, derivative count).  Like DiffPoly, the
 *  form carries a single eps-validity order: a key with no stored coefficient
 *  is an exact zero when the order is kExact and zero-to-order otherwise. */
class OneForm {
  public:
    using Key = std::pair<GenKey, int>;

    explicit OneForm(CtxKind kind) : kind_(kind) {}
    static OneForm d_gen(CtxKind kind, const GenKey& g);

    CtxKind kind() const { return kind_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_exact_zero() const { return terms_.empty() && order_ == CoeffSeries::kExact; }
    bool is_zero_to(int n) const;
    const std::map<Key, DiffPoly>& terms() const { return terms_; }
    /** Coefficient at (g, n); zero at the form's validity order when absent. */
    DiffPoly coefficient(const GenKey& g, int n) const;

    void add_term(const GenKey& g, int n, const DiffPoly& c);

    /** Validity order / least eps-degree over all coefficients. */
    int order() const;
    int val() const;
    void set_order(int n);

    OneForm& operator+=(const OneForm& o);
    OneForm& operator-=(const OneForm& o);
    friend OneForm operator+(OneForm a, const OneForm& b) { return a += b; }
    friend OneForm operator-(OneForm a, const OneForm& b) { return a -= b; }
    OneForm operator-() const;
    friend OneForm operator*(const DiffPoly& f, const OneForm& w);
    friend OneForm operator*(const OneForm& w, const DiffPoly& f) { return f * w; }

    OneForm scaled(const Rat& r) const;
    OneForm scaled(const CoeffSeries& c) const;
    OneForm mul_eps(int d) const;
    OneForm subs_t_zero() const;
    OneForm t_part(int j) const;

    /** Total x-derivative: Leibniz over the coefficient and the basis index;
     *  in the reduced algebra d(dq) rewrites to u_1 dq + q d(du). */
    OneForm derive() const;

    /** Integrate by parts to coefficients against d(gen) only; over the
     *  reduced algebra the dq column then folds into q times the du column.
     *  This is the normal form modulo total x-derivatives. */
    OneForm canonicalized() const;

    struct Mismatch {
        Key key{};
        DiffPoly::Location loc{};
    };
    /** First differing coefficient of a - b at eps order n (or an order
     *  shortfall), compared key by key. */
    static std::optional<Mismatch> first_mismatch(const OneForm& a, const OneForm& b, int n);
    static bool equal_to(const OneForm& a, const OneForm& b, int n);

  private:
    void put(const Key& k, DiffPoly c);

    CtxKind kind_;
    std::map<Key, DiffPoly> terms_;
    int order_ = CoeffSeries::kExact;
};

/** [w, w', w'', ...] up to n derivatives inclusive. */
std::vector<OneForm> derivative_tower_form(const OneForm& w, int n);

/** E^{m/2} applied to a one-form through its derivative tower, with the same
 *  validity cap as the scalar shift. */
OneForm e_shift_form(const OneForm& w, int m, int len);
OneForm e_shift_form_tower(const std::vector<OneForm>& tower, int m, int len);

/** Exterior differential of a polynomial in the jet variables. */
OneForm differential(const DiffPoly& p);

/** Operator-valued one-form: windowed Laurent coefficients in Lambda, each a
 *  OneForm, multiplied by difference operators through the same coefficient
 *  twist as the operator product.  Formal exponents are not supported here. */
class OperatorForm {
  public:
    explicit OperatorForm(AlgebraContext ctx) : ctx_(std::move(ctx)) {}

    const AlgebraContext& ctx() const { return ctx_; }
    const Window& window() const { return win_; }
    const std::map<int, OneForm>& coefficients() const { return c_; }
    bool is_zero_op() const { return win_.empty() && win_.zero_below && win_.zero_above; }
    bool is_zero_to(int n) const;
    bool determined(int k) const;
    OneForm coefficient(int k) const;  // throws WindowMiss when undetermined
    /** Lambda^0 coefficient. */
    OneForm res() const { return coefficient(0); }

    void set_coefficient(int k, OneForm w);
    void clear_zero_below() { win_.zero_below = false; }
    void clear_zero_above() { win_.zero_above = false; }

    OperatorForm& operator+=(const OperatorForm& o);
    OperatorForm& operator-=(const OperatorForm& o);
    OperatorForm operator-() const;
    friend OperatorForm operator+(OperatorForm a, const OperatorForm& b) { return a += b; }
    friend OperatorForm operator-(OperatorForm a, const OperatorForm& b) { return a -= b; }
    friend OperatorForm operator*(const DiffOp& a, const OperatorForm& b);
    friend OperatorForm operator*(const OperatorForm& a, const DiffOp& b);

    OperatorForm map_forms(const std::function<OneForm(const OneForm&)>& f) const;
    OperatorForm scaled(const Rat& r) const;
    OperatorForm scaled(const CoeffSeries& c) const;
    OperatorForm mul_eps(int d) const;
    OperatorForm div_eps_checked(int d) const;

    struct Mismatch {
        int degree = 0;
        OneForm::Mismatch at{};
    };
    /** Compare on the overlap of determined degrees up to eps order n; throws
     *  EmptyWindow when no degree is determined on both sides. */
    static bool equal_on_overlap(const OperatorForm& a, const OperatorForm& b, int n,
                                 Mismatch* where = nullptr);

  private:
    OneForm form_in_window(int k) const;  // exact zero when absent
    void normalize_entry(int k, OneForm w);

    AlgebraContext ctx_;
    std::map<int, OneForm> c_;
    Window win_;
};

/** Coefficient-wise exterior differential of a difference operator. */
OperatorForm differential_op(const DiffOp& op);

/** ad(A)(X) = A X - X A. */
OperatorForm ad_op(const DiffOp& a, const OperatorForm& x);

}  // namespace eqtoda
