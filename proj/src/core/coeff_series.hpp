#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <string>

#include "core/rational.hpp"

namespace eqtoda {

/** Highest z_k / zbar_k parameter index representable in a coefficient. */
constexpr int kMaxZ = 8;

/** Exponent vector of one scalar parameter monomial:
 *  eps^e * t^a * s^b * prod z_k^{c_k} * prod zbar_k^{d_k}.
 *  eps and t may be negative (Laurent); s and the z's are polynomial. */
struct ParamKey {
    int16_t eps = 0;
    int16_t t = 0;
    int16_t s = 0;
    std::array<int16_t, kMaxZ> z{};
    std::array<int16_t, kMaxZ> zb{};

    auto operator<=>(const ParamKey&) const = default;
    bool is_unit() const { return *this == ParamKey{}; }
};

/** Scalar coefficient: an exact finite sum of parameter monomials, valid as an
 *  eps-series only below `order` (the first eps-degree the computation that
 *  produced it no longer determines).  Arithmetic propagates validity: products
 *  take min(a.order + b.val, b.order + a.val), eps-division shifts it down.
 *  Values never influenced by a truncated series carry kExact. */
class CoeffSeries {
  public:
    static constexpr int kExact = 1 << 20;

    CoeffSeries() : order_(kExact) {}
    explicit CoeffSeries(const Rat& c, int order = kExact);
    static CoeffSeries monomial(const ParamKey& k, const Rat& c, int order = kExact);
    static CoeffSeries zero_at(int order);

    bool is_zero() const { return terms_.empty(); }
    /** True when the terms vanish and nothing is known beyond degree `n`. */
    bool is_zero_to(int n) const { return terms_.empty() && order_ >= n; }
    int order() const { return order_; }
    /** Least eps-degree present; `order` when no terms are stored. */
    int val() const;
    size_t size() const { return terms_.size(); }
    const std::map<ParamKey, Rat>& terms() const { return terms_; }

    bool has_param_dependence() const;  // anything besides a bare rational?
    const Rat* single_rational() const; // non-null iff exactly {unit key -> c}
    /** Non-null iff exactly one term; used by unit tests and laurent_invert. */
    const std::pair<const ParamKey, Rat>* single_term() const;

    CoeffSeries& operator+=(const CoeffSeries& o);
    CoeffSeries& operator-=(const CoeffSeries& o);
    friend CoeffSeries operator+(CoeffSeries a, const CoeffSeries& b) { return a += b; }
    friend CoeffSeries operator-(CoeffSeries a, const CoeffSeries& b) { return a -= b; }
    CoeffSeries operator-() const;
    CoeffSeries operator*(const CoeffSeries& o) const;
    CoeffSeries scaled(const Rat& c) const;
    CoeffSeries mul_param(const ParamKey& k) const;  // shift by a parameter monomial
    CoeffSeries mul_eps(int d) const;                // eps^d, d may be negative

    /** Drop degrees >= n and lower the validity order to n. */
    CoeffSeries truncated(int n) const;
    /** Inverse of c + (higher eps), c an invertible parameter monomial. */
    CoeffSeries inverted() const;

    CoeffSeries conj() const;            // t -> -t, z_k <-> zbar_k
    CoeffSeries subs_t_zero() const;     // throws TPoleDetected on t poles
    CoeffSeries subs_z_zero() const;
    CoeffSeries subs_s(const Rat& r) const;
    CoeffSeries ds() const;              // d/ds
    /** Coefficient of t^j as a series with the t-exponent cleared. */
    CoeffSeries t_part(int j) const;
    int t_min() const;                   // least t-exponent (0 when empty)
    int t_max() const;
    int s_max() const;                   // greatest s-exponent (0 when empty)
    /** Greatest s-exponent among terms of eps-degree i. */
    int s_max_at_eps(int i) const;

    /** Identical term data (ignores validity order). */
    bool same_terms(const CoeffSeries& o) const { return terms_ == o.terms_; }
    /** Terms of a - b vanish below eps-degree n and both are valid there. */
    static bool equal_to(const CoeffSeries& a, const CoeffSeries& b, int n);

    /** First offending term of a nonzero series: smallest eps degree, then key order. */
    const std::pair<const ParamKey, Rat>* leading_term() const;

  private:
    void add_term(const ParamKey& k, const Rat& c);
    void drop_unknown();  // erase terms at degrees >= order_

    std::map<ParamKey, Rat> terms_;
    int order_;
};

}  // namespace eqtoda
