#include "doctest.h"

#include "core/coeff_series.hpp"

using namespace eqtoda;

namespace {

ParamKey eps_key(int e) {
    ParamKey k;
    k.eps = static_cast<int16_t>(e);
    return k;
}

ParamKey t_key(int a, int e = 0) {
    ParamKey k;
    k.t = static_cast<int16_t>(a);
    k.eps = static_cast<int16_t>(e);
    return k;
}

}  // namespace

TEST_CASE("validity order propagates through products") {
    // a = 1 + eps, known to order 3; b = eps^2, exact
    CoeffSeries a = CoeffSeries(Rat(1), 3) + CoeffSeries::monomial(eps_key(1), Rat(1), 3);
    CoeffSeries b = CoeffSeries::monomial(eps_key(2), Rat(1));
    CoeffSeries p = a * b;
    CHECK(p.order() == 5);  // min(3 + 2, exact + 1)
    CHECK(p.val() == 2);
    CHECK(p.terms().size() == 2);

    CoeffSeries q = a * a;  // min(3 + 0, 3 + 0)
    CHECK(q.order() == 3);
    // the eps^2 cross term is beyond the validity order and must be dropped
    CHECK(q.terms().rbegin()->first.eps < 3);
}

TEST_CASE("truncation and eps shifts") {
    CoeffSeries a = CoeffSeries(Rat(2)) + CoeffSeries::monomial(eps_key(4), Rat(7));
    CHECK(a.truncated(3).terms().size() == 1);
    CHECK(a.truncated(3).order() == 3);
    CHECK(a.mul_eps(2).val() == 2);
    CHECK(a.mul_eps(-1).val() == -1);
    CHECK(a.mul_eps(3).order() == CoeffSeries::kExact);
}

TEST_CASE("geometric inversion") {
    // (1 - eps)^-1 = 1 + eps + eps^2 + ... up to the working order
    CoeffSeries a = CoeffSeries(Rat(1), 5) - CoeffSeries::monomial(eps_key(1), Rat(1), 5);
    CoeffSeries inv = a.inverted();
    CHECK(inv.order() == 5);
    for (int j = 0; j < 5; ++j)
        CHECK(inv.terms().at(eps_key(j)) == Rat(1));
    CHECK(CoeffSeries::equal_to(a * inv, CoeffSeries(Rat(1)), 5));

    // an exact unit inverts exactly
    CoeffSeries u = CoeffSeries::monomial(eps_key(2), Rat(3, 2));
    CHECK(u.inverted().same_terms(CoeffSeries::monomial(eps_key(-2), Rat(2, 3))));

    // an exact non-monomial would need an infinite series: refuse
    CoeffSeries e = CoeffSeries(Rat(1)) + CoeffSeries::monomial(eps_key(1), Rat(1));
    CHECK_THROWS_AS(e.inverted(), Error);
}

TEST_CASE("conjugation flips t and swaps z with zbar") {
    ParamKey zk;
    zk.z[0] = 1;
    CoeffSeries a = CoeffSeries::monomial(t_key(1), Rat(1)) + CoeffSeries::monomial(zk, Rat(2));
    CoeffSeries c = a.conj();
    CHECK(c.terms().at(t_key(1)) == Rat(-1));
    ParamKey zbk;
    zbk.zb[0] = 1;
    CHECK(c.terms().at(zbk) == Rat(2));
    CHECK(c.conj().same_terms(a));
}

TEST_CASE("t substitution guards against poles") {
    CoeffSeries ok = CoeffSeries(Rat(1)) + CoeffSeries::monomial(t_key(2), Rat(5));
    CHECK(ok.subs_t_zero().single_rational() != nullptr);
    CHECK(*ok.subs_t_zero().single_rational() == Rat(1));

    CoeffSeries pole = CoeffSeries::monomial(t_key(-1), Rat(1));
    CHECK_THROWS_AS(pole.subs_t_zero(), Error);

    CHECK(ok.t_part(2).single_rational() != nullptr);
    CHECK(*ok.t_part(2).single_rational() == Rat(5));
    CHECK(ok.t_min() == 0);
    CHECK(ok.t_max() == 2);
}

TEST_CASE("formal s derivative and substitution") {
    ParamKey s2 = eps_key(1);
    s2.s = 2;
    CoeffSeries a = CoeffSeries::monomial(s2, Rat(3));  // 3 s^2 eps
    CoeffSeries d = a.ds();                             // 6 s eps
    ParamKey s1 = eps_key(1);
    s1.s = 1;
    CHECK(d.terms().at(s1) == Rat(6));
    CHECK(a.subs_s(Rat(1, 2)).terms().at(eps_key(1)) == Rat(3, 4));
    CHECK(a.subs_s(Rat(0)).is_zero());
    CHECK(a.s_max_at_eps(1) == 2);
}

TEST_CASE("zero comparisons respect validity") {
    CoeffSeries z4 = CoeffSeries::zero_at(4);
    CHECK(z4.is_zero());
    CHECK(z4.is_zero_to(4));
    CHECK_FALSE(z4.is_zero_to(5));
    CHECK(CoeffSeries::equal_to(z4, CoeffSeries(), 4));
    CHECK_FALSE(CoeffSeries::equal_to(z4, CoeffSeries(), 5));
}
