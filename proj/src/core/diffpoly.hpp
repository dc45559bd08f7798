#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/coeff_series.hpp"
#include "core/context.hpp"
#include "core/error.hpp"

namespace eqtoda {

struct GenKey {
    Gen gen = Gen::Q;
    bool barred = false;
    uint8_t index = 0;
    auto operator<=>(const GenKey&) const = default;
};

inline GenKey gen_of(const JetVar& j) { return GenKey{j.gen, j.barred, j.index}; }

/** Differential polynomial: a finite sum  sum_m  c_m(eps,t,s,z) * m  over jet
 *  monomials, tied to an algebra kind (for the derivation rule) and carrying a
 *  single eps-validity order shared by all coefficients. */
class DiffPoly {
  public:
    explicit DiffPoly(CtxKind kind = CtxKind::FreeA) : kind_(kind), order_(CoeffSeries::kExact) {}
    static DiffPoly constant(CtxKind kind, const CoeffSeries& c);
    static DiffPoly constant(CtxKind kind, const Rat& c);
    static DiffPoly generator(CtxKind kind, const JetVar& j, int exponent = 1);
    static DiffPoly monomial(CtxKind kind, const Monomial& m, const CoeffSeries& c);

    CtxKind kind() const { return kind_; }
    int order() const { return order_; }
    int val() const;
    bool is_zero() const { return terms_.empty(); }
    bool is_zero_to(int n) const;
    size_t size() const { return terms_.size(); }
    const std::map<Monomial, CoeffSeries>& terms() const { return terms_; }
    CoeffSeries coefficient_of(const Monomial& m) const;
    /** Parameter-only component: the coefficient of the empty monomial. */
    CoeffSeries jetfree_part() const { return coefficient_of(Monomial{}); }

    DiffPoly& operator+=(const DiffPoly& o);
    DiffPoly& operator-=(const DiffPoly& o);
    friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { return a += b; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { return a -= b; }
    DiffPoly operator-() const;
    DiffPoly operator*(const DiffPoly& o) const;
    DiffPoly scaled(const Rat& c) const;
    DiffPoly scaled(const CoeffSeries& c) const;
    DiffPoly mul_eps(int d) const;
    /** Division by eps^d with a regularity check: throws SingularFlow if some
     *  term would acquire a negative eps-degree. */
    DiffPoly div_eps_checked(int d) const;
    DiffPoly truncated(int n) const;
    DiffPoly pow(int e) const;  // negative exponents via laurent_invert

    /** Spatial derivative; in Reduced, dq rewrites to q*u_1. */
    DiffPoly derive() const;
    DiffPoly derive(int n) const;
    /** Formal partial derivative with respect to one jet variable. */
    DiffPoly partial(const JetVar& j) const;
    /** Highest order among jets of generator x (-1 when absent). */
    int max_jet_order(const GenKey& x) const;
    bool contains_family(Gen g) const;
    int max_index(Gen g) const;  // largest index of family g present, 0 if none

    /** Variational derivative sum_n (-d)^n d/dx_n; for x = u in Reduced the
     *  chain term q * d/dq is included (u is the logarithm of q there). */
    DiffPoly var_derivative(const GenKey& x) const;

    /** Evaluation at the zero jet: every generator (q included) goes to 0.
     *  Throws NotDefined when a negative q-power is present. */
    CoeffSeries alpha() const;

    /** Inverse of p = q^m (c + eps r), c an invertible parameter monomial. */
    DiffPoly laurent_invert() const;

    /** Coefficient-level maps (monomials untouched). */
    DiffPoly map_coeffs(const std::function<CoeffSeries(const CoeffSeries&)>& f) const;
    DiffPoly conj_coeffs() const;     // t -> -t, z <-> zbar on coefficients
    DiffPoly subs_t_zero() const;
    DiffPoly subs_z_zero() const;
    DiffPoly subs_s(const Rat& r) const;
    DiffPoly ds() const;
    DiffPoly t_part(int j) const;
    int t_min() const;
    int t_max() const;
    int s_max_at_eps(int i) const;

    /** Bar involution for FreeA / DressingB: swaps barred partners and
     *  conjugates coefficients.  (Reduced needs a substitution; see
     *  reduced_involute in opseries.hpp which supplies the series for v.) */
    DiffPoly involute_swap() const;

    /** Both sides known to eps-order n and their difference vanishes below it. */
    static bool equal_to(const DiffPoly& a, const DiffPoly& b, int n);

    struct Location {
        Monomial mono;
        ParamKey key;
        Rat coeff;
    };
    /** First offending term (least eps, then monomial order) of a nonzero poly. */
    std::optional<Location> leading_entry() const;

    void add_term(const Monomial& m, const CoeffSeries& c);
    void set_order(int n);  // truncate everything to n

  private:
    void check_kind(const DiffPoly& o) const {
        if (kind_ != o.kind_)
            throw Error(Errc::Internal, "mixing differential algebras");
    }

    CtxKind kind_;
    std::map<Monomial, CoeffSeries> terms_;
    int order_;
};

/** Prolonged substitution homomorphism: order-0 generator images into a target
 *  algebra, extended to jets by the target derivation and to Laurent q-powers
 *  by laurent_invert.  Missing images raise NotDefined. */
class GenSubst {
  public:
    GenSubst(CtxKind source, CtxKind target) : src_(source), tgt_(target) {}

    CtxKind source() const { return src_; }
    CtxKind target() const { return tgt_; }
    void set(const GenKey& g, const DiffPoly& image);
    bool has(const GenKey& g) const { return images_.count(g) != 0; }
    const DiffPoly& image(const JetVar& j) const;  // prolonged, cached
    /** Apply; with conj_coeffs the scalar conjugation t -> -t, z <-> zbar is
     *  applied to the coefficients (used to build involutions). */
    DiffPoly apply(const DiffPoly& p, bool conj_coeffs = false) const;

  private:
    const DiffPoly& power(const JetVar& j, int e) const;

    CtxKind src_, tgt_;
    std::map<GenKey, DiffPoly> images_;
    mutable std::map<JetVar, DiffPoly> jet_cache_;
    mutable std::map<std::pair<uint32_t, int>, DiffPoly> pow_cache_;
};

}  // namespace eqtoda
