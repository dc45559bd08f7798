#include "core/opseries.hpp"

#include <algorithm>

namespace eqtoda {

namespace {

// Polynomial helpers in y = eps d/dx, truncated to fixed length.

std::vector<Rat> poly_mul(const std::vector<Rat>& a, const std::vector<Rat>& b, int len) {
    std::vector<Rat> r(len, Rat(0));
    for (int i = 0; i < static_cast<int>(a.size()) && i < len; ++i) {
        if (a[i].is_zero())
            continue;
        for (int j = 0; j + i < len && j < static_cast<int>(b.size()); ++j)
            r[i + j] += a[i] * b[j];
    }
    return r;
}

std::vector<Rat> poly_inverse(const std::vector<Rat>& a, int len) {
    if (a.empty() || a[0].is_zero())
        throw Error(Errc::NotAUnit, "series with zero constant term");
    std::vector<Rat> r(len, Rat(0));
    Rat c0 = a[0].inverse();
    r[0] = c0;
    for (int n = 1; n < len; ++n) {
        Rat acc(0);
        for (int i = 1; i <= n && i < static_cast<int>(a.size()); ++i)
            acc += a[i] * r[n - i];
        r[n] = -acc * c0;
    }
    return r;
}

/** sinh(k y / 2) / (k y / 2) = sum_m (k/2)^{2m} y^{2m} / (2m+1)!. */
std::vector<Rat> sinh_ratio(int k, int len) {
    std::vector<Rat> r(len, Rat(0));
    Rat half_k(k, 2);
    Rat sq = half_k * half_k;
    Rat term(1);
    for (int m = 0; 2 * m < len; ++m) {
        r[2 * m] = term;
        term = term * sq / Rat((2 * m + 2) * (2 * m + 3));
    }
    return r;
}

}  // namespace

ShiftSeries ShiftSeries::identity(int len) {
    std::vector<Rat> c(len, Rat(0));
    if (len > 0)
        c[0] = Rat(1);
    return ShiftSeries(0, std::move(c));
}

ShiftSeries ShiftSeries::e_shift(int m, int len) {
    std::vector<Rat> c(len, Rat(0));
    Rat term(1);
    Rat step(m, 2);
    for (int j = 0; j < len; ++j) {
        c[j] = term;
        term = term * step / Rat(j + 1);
    }
    return ShiftSeries(0, std::move(c));
}

ShiftSeries ShiftSeries::nabla(int len) {
    return ShiftSeries(1, sinh_ratio(1, len));
}

ShiftSeries ShiftSeries::p_series(int len) {
    return ShiftSeries(0, poly_inverse(sinh_ratio(1, len), len));
}

ShiftSeries ShiftSeries::p_inv_series(int len) {
    return ShiftSeries(0, sinh_ratio(1, len));
}

ShiftSeries ShiftSeries::bracket(int k, int len) {
    // [k] = k * (sinh(ky/2)/(ky/2)) / (sinh(y/2)/(y/2))
    std::vector<Rat> num = sinh_ratio(k, len);
    for (auto& c : num)
        c *= Rat(k);
    return ShiftSeries(0, poly_mul(num, poly_inverse(sinh_ratio(1, len), len), len));
}

ShiftSeries ShiftSeries::bracket_inv(int k, int len) {
    if (k == 0)
        throw Error(Errc::ZeroBracket, "[0] is not invertible");
    std::vector<Rat> den = sinh_ratio(k, len);
    for (auto& c : den)
        c *= Rat(k);
    return ShiftSeries(0, poly_mul(sinh_ratio(1, len), poly_inverse(den, len), len));
}

ShiftSeries ShiftSeries::compose(const ShiftSeries& o) const {
    int len = std::min(this->len(), o.len());
    return ShiftSeries(dx_ + o.dx_, poly_mul(c_, o.c_, len));
}

ShiftSeries ShiftSeries::scaled(const Rat& r) const {
    std::vector<Rat> c = c_;
    for (auto& x : c)
        x *= r;
    return ShiftSeries(dx_, std::move(c));
}

ShiftSeries operator+(const ShiftSeries& a, const ShiftSeries& b) {
    if (a.dx_ != b.dx_)
        throw Error(Errc::Internal, "adding shift series with different d/dx prefactors");
    int len = std::min(a.len(), b.len());
    std::vector<Rat> c(len, Rat(0));
    for (int i = 0; i < len; ++i)
        c[i] = a.c_[i] + b.c_[i];
    return ShiftSeries(a.dx_, std::move(c));
}

DiffPoly ShiftSeries::apply(const DiffPoly& p) const {
    // E^0-like series scale without derivating; their dropped tail is exactly
    // zero, so the result keeps the operand's validity.
    bool diagonal = dx_ == 0;
    for (int j = 1; diagonal && j < len(); ++j)
        diagonal = c_[j].is_zero();
    if (diagonal)
        return p.scaled(c_.empty() ? Rat(0) : c_[0]);

    DiffPoly out(p.kind());
    DiffPoly d = p.derive(dx_);
    bool tail_exact = false;
    for (int j = 0; j < len(); ++j) {
        if (d.is_zero() && d.order() == CoeffSeries::kExact) {
            tail_exact = true;  // the tower died: dropping the tail is exact
            break;
        }
        if (!c_[j].is_zero())
            out += d.scaled(c_[j]).mul_eps(j);
        d = d.derive();
    }
    if (!tail_exact) {
        long cap = std::min<long>(p.order(), static_cast<long>(len()) + p.val());
        out.set_order(static_cast<int>(std::min<long>(out.order(), cap)));
    }
    return out;
}

std::vector<DiffPoly> derivative_tower(const DiffPoly& p, int n) {
    std::vector<DiffPoly> t;
    t.reserve(n + 1);
    t.push_back(p);
    for (int i = 0; i < n; ++i)
        t.push_back(t.back().derive());
    return t;
}

DiffPoly shift_formal_tower(const std::vector<DiffPoly>& tower, int a, int b, int len) {
    if (tower.empty())
        throw Error(Errc::Internal, "empty derivative tower");
    if (a == 0 && b == 0)  // identity shift: exact
        return tower.front();
    const DiffPoly& p = tower.front();
    DiffPoly out(p.kind());
    // c_j(s) = ((a + b s)/2)^j / j!, as an exact scalar polynomial in s
    ParamKey s_key;
    s_key.s = 1;
    CoeffSeries step = CoeffSeries(Rat(a, 2)) + CoeffSeries::monomial(s_key, Rat(b, 2));
    CoeffSeries cj(Rat(1));
    bool tail_exact = false;
    for (int j = 0; j < len; ++j) {
        if (j >= static_cast<int>(tower.size()))
            break;
        const DiffPoly& d = tower[j];
        if (d.is_zero() && d.order() == CoeffSeries::kExact) {
            tail_exact = true;  // the tower died: dropping the tail is exact
            break;
        }
        if (!cj.is_zero())
            out += d.scaled(cj).mul_eps(j);
        cj = (cj * step).scaled(Rat(1, j + 1));
    }
    if (!tail_exact) {
        long terms = std::min<long>(len, static_cast<long>(tower.size()));
        long cap = std::min<long>(p.order(), terms + p.val());
        out.set_order(static_cast<int>(std::min<long>(out.order(), cap)));
    }
    return out;
}

DiffPoly shift_formal(const DiffPoly& p, int a, int b, int len) {
    if (b == 0)
        return ShiftSeries::e_shift(a, len).apply(p);
    return shift_formal_tower(derivative_tower(p, len - 1), a, b, len);
}

DiffPoly reduced_involute(const DiffPoly& p, int len) {
    if (p.kind() != CtxKind::Reduced)
        throw Error(Errc::Internal, "reduced_involute outside the reduced algebra");
    GenSubst s(CtxKind::Reduced, CtxKind::Reduced);
    DiffPoly u = DiffPoly::generator(CtxKind::Reduced, jet_u(0));
    DiffPoly v = DiffPoly::generator(CtxKind::Reduced, jet_v(0));
    ParamKey t_key;
    t_key.t = 1;
    DiffPoly pu = ShiftSeries::p_series(len).apply(u);
    s.set(GenKey{Gen::V, false, 0}, v - pu.scaled(CoeffSeries::monomial(t_key, Rat(1))));
    s.set(GenKey{Gen::U, false, 0}, u);
    s.set(GenKey{Gen::Q, false, 0}, DiffPoly::generator(CtxKind::Reduced, jet_q(0)));
    return s.apply(p, /*conj_coeffs=*/true);
}

}  // namespace eqtoda
