#include "core/diffop.hpp"

#include <algorithm>
#include <limits>
#include <utility>

#include "core/opseries.hpp"

namespace eqtoda {

namespace {

constexpr long kInf = 1L << 40;

// Region where a coefficient of x is *not known to vanish* (window plus any
// undetermined ray).  Callers must handle the all-zero operator themselves.
long not_zero_lo(const DiffOp& x) { return x.window().zero_below ? x.window().lo : -kInf; }
long not_zero_hi(const DiffOp& x) { return x.window().zero_above ? x.window().hi : kInf; }

long det_lo(const DiffOp& x) { return x.window().zero_below ? -kInf : x.window().lo; }
long det_hi(const DiffOp& x) { return x.window().zero_above ? kInf : x.window().hi; }

}  // namespace

DiffOp DiffOp::identity(const AlgebraContext& ctx) {
    DiffOp a(ctx);
    a.set_coefficient(0, DiffPoly::constant(ctx.kind, Rat(1)));
    return a;
}

DiffOp DiffOp::lambda_power(const AlgebraContext& ctx, int k) {
    DiffOp a(ctx);
    a.set_coefficient(k, DiffPoly::constant(ctx.kind, Rat(1)));
    return a;
}

DiffOp DiffOp::lambda_power_s(const AlgebraContext& ctx, int j) {
    DiffOp a = lambda_power(ctx, j);
    a.s_off_ = 1;
    return a;
}

DiffOp DiffOp::single(const AlgebraContext& ctx, int k, DiffPoly p) {
    DiffOp a(ctx);
    a.set_coefficient(k, std::move(p));
    return a;
}

bool DiffOp::determined(int k) const {
    if (!win_.empty() && k >= win_.lo && k <= win_.hi)
        return true;
    if (k < win_.lo && win_.zero_below)
        return true;
    if (k > win_.hi && win_.zero_above)
        return true;
    return false;
}

DiffPoly DiffOp::coeff_in_window(int k) const {
    auto it = c_.find(k);
    return it == c_.end() ? DiffPoly(ctx_.kind) : it->second;
}

DiffPoly DiffOp::coefficient(int k) const {
    if (!determined(k))
        throw Error(Errc::WindowMiss,
                    "coefficient at degree " + std::to_string(k) + " lies outside the window");
    return coeff_in_window(k);
}

void DiffOp::normalize_entry(int k, DiffPoly p) {
    if (p.is_zero() && p.order() == CoeffSeries::kExact)
        c_.erase(k);
    else
        c_[k] = std::move(p);
}

void DiffOp::set_coefficient(int k, DiffPoly p) {
    normalize_entry(k, std::move(p));
    if (win_.empty())
        win_.lo = win_.hi = k;
    else {
        win_.lo = std::min(win_.lo, k);
        win_.hi = std::max(win_.hi, k);
    }
}

void DiffOp::add_to_coefficient(int k, const DiffPoly& p) {
    DiffPoly cur = determined(k) ? coeff_in_window(k) : DiffPoly(ctx_.kind);
    cur += p;
    set_coefficient(k, std::move(cur));
}

DiffOp DiffOp::restricted(int lo, int hi) const {
    DiffOp out(ctx_);
    out.s_off_ = s_off_;
    out.win_.lo = std::max(win_.lo, lo);
    out.win_.hi = std::min(win_.hi, hi);
    out.win_.zero_below = win_.zero_below && win_.lo >= lo;
    out.win_.zero_above = win_.zero_above && win_.hi <= hi;
    for (const auto& [k, p] : c_)
        if (k >= lo && k <= hi)
            out.c_.emplace(k, p);
    return out;
}

DiffOp& DiffOp::operator+=(const DiffOp& o) {
    if (o.is_zero_op())
        return *this;
    if (is_zero_op()) {
        *this = o;
        return *this;
    }
    if (!(ctx_ == o.ctx_))
        throw Error(Errc::Internal, "adding operators from different contexts");
    if (s_off_ != o.s_off_)
        throw Error(Errc::Internal, "adding operators with different formal exponents");
    const Window& a = win_;
    const Window& b = o.win_;
    Window w;
    w.zero_below = a.zero_below && b.zero_below;
    w.zero_above = a.zero_above && b.zero_above;
    w.lo = w.zero_below    ? std::min(a.lo, b.lo)
           : a.zero_below  ? b.lo
           : b.zero_below  ? a.lo
                           : std::max(a.lo, b.lo);
    w.hi = w.zero_above    ? std::max(a.hi, b.hi)
           : a.zero_above  ? b.hi
           : b.zero_above  ? a.hi
                           : std::min(a.hi, b.hi);
    if (w.empty())
        throw Error(Errc::EmptyWindow, "sum window undetermined");
    std::map<int, DiffPoly> out;
    for (int k = w.lo; k <= w.hi; ++k) {
        DiffPoly s = coefficient(k);
        s += o.coefficient(k);
        if (!(s.is_zero() && s.order() == CoeffSeries::kExact))
            out.emplace(k, std::move(s));
    }
    c_ = std::move(out);
    win_ = w;
    return *this;
}

DiffOp& DiffOp::operator-=(const DiffOp& o) { return *this += -o; }

DiffOp DiffOp::operator-() const {
    DiffOp out = *this;
    for (auto& [k, p] : out.c_)
        p = -p;
    return out;
}

DiffOp operator*(const DiffOp& a, const DiffOp& b) {
    if (!(a.ctx() == b.ctx()))
        throw Error(Errc::Internal, "multiplying operators from different contexts");
    const int s_out = a.s_offset() + b.s_offset();
    if (s_out > 1)
        throw Error(Errc::Internal, "product of two formal powers");
    DiffOp out(a.ctx());
    out.s_off_ = s_out;
    if (a.is_zero_op() || b.is_zero_op())
        return out;
    const Window& wa = a.window();
    const Window& wb = b.window();
    if (wa.empty() || wb.empty())
        throw Error(Errc::EmptyWindow, "factor has no stored coefficients");

    // A degree is determined unless some contributing pair combines an
    // undetermined coefficient with one not known to vanish; each such pair
    // poisons a full ray of degrees.
    long bad_up = kInf, bad_down = -kInf;
    if (!wa.zero_above)
        bad_up = std::min(bad_up, wa.hi + 1 + not_zero_lo(b));
    if (!wb.zero_above)
        bad_up = std::min(bad_up, wb.hi + 1 + not_zero_lo(a));
    if (!wa.zero_below)
        bad_down = std::max(bad_down, wa.lo - 1 + not_zero_hi(b));
    if (!wb.zero_below)
        bad_down = std::max(bad_down, wb.lo - 1 + not_zero_hi(a));
    long dlo = bad_down + 1, dhi = bad_up - 1;
    if (wa.zero_below && wb.zero_below)
        dlo = std::max<long>(dlo, wa.lo + wb.lo);
    if (wa.zero_above && wb.zero_above)
        dhi = std::min<long>(dhi, wa.hi + wb.hi);
    if (dlo > dhi)
        throw Error(Errc::EmptyWindow, "product window undetermined");

    const int len = a.ctx().eps_order + 1;
    std::map<int, std::vector<DiffPoly>> ta, tb;
    for (const auto& [i, p] : a.coefficients())
        ta.emplace(i, derivative_tower(p, len - 1));
    for (const auto& [j, p] : b.coefficients())
        tb.emplace(j, derivative_tower(p, len - 1));

    for (long k = dlo; k <= dhi; ++k) {
        DiffPoly acc(a.ctx().kind);
        const long ilo = std::max<long>(wa.lo, k - wb.hi);
        const long ihi = std::min<long>(wa.hi, k - wb.lo);
        for (long i = ilo; i <= ihi; ++i) {
            auto ia = ta.find(static_cast<int>(i));
            auto ib = tb.find(static_cast<int>(k - i));
            if (ia == ta.end() || ib == tb.end())
                continue;  // exact zero factor
            acc += shift_formal_tower(ia->second, static_cast<int>(i - k), -b.s_offset(), len) *
                   shift_formal_tower(ib->second, static_cast<int>(i), a.s_offset(), len);
        }
        out.normalize_entry(static_cast<int>(k), std::move(acc));
    }
    out.win_ = Window{static_cast<int>(dlo), static_cast<int>(dhi),
                      wa.zero_below && wb.zero_below, wa.zero_above && wb.zero_above};
    return out;
}

DiffOp DiffOp::scaled(const Rat& r) const {
    return map_coeffs([&](const DiffPoly& p) { return p.scaled(r); });
}

DiffOp DiffOp::scaled(const CoeffSeries& c) const {
    return map_coeffs([&](const DiffPoly& p) { return p.scaled(c); });
}

DiffOp DiffOp::mul_eps(int d) const {
    return map_coeffs([&](const DiffPoly& p) { return p.mul_eps(d); });
}

DiffOp DiffOp::div_eps_checked(int d) const {
    return map_coeffs([&](const DiffPoly& p) { return p.div_eps_checked(d); });
}

DiffOp DiffOp::derive_coeffs() const {
    return map_coeffs([](const DiffPoly& p) { return p.derive(); });
}

DiffOp DiffOp::proj_plus() const {
    if (s_off_ != 0)
        throw Error(Errc::Internal, "projection with a formal exponent");
    if (is_zero_op())
        return *this;
    DiffOp out(ctx_);
    if (win_.hi < 0) {
        if (win_.zero_above)
            return out;  // all nonnegative degrees vanish
        throw Error(Errc::EmptyWindow, "nonnegative part undetermined");
    }
    for (const auto& [k, p] : c_)
        if (k >= 0)
            out.c_.emplace(k, p);
    out.win_.hi = win_.hi;
    out.win_.zero_above = win_.zero_above;
    if (win_.lo <= 0 || win_.zero_below) {
        out.win_.lo = std::max(win_.lo, 0);
        out.win_.zero_below = true;
    } else {
        out.win_.lo = win_.lo;
        out.win_.zero_below = false;
    }
    return out;
}

DiffOp DiffOp::proj_minus() const {
    if (s_off_ != 0)
        throw Error(Errc::Internal, "projection with a formal exponent");
    if (is_zero_op())
        return *this;
    DiffOp out(ctx_);
    if (win_.lo > -1) {
        if (win_.zero_below)
            return out;  // all negative degrees vanish
        throw Error(Errc::EmptyWindow, "negative part undetermined");
    }
    for (const auto& [k, p] : c_)
        if (k <= -1)
            out.c_.emplace(k, p);
    out.win_.lo = win_.lo;
    out.win_.zero_below = win_.zero_below;
    if (win_.hi >= -1 || win_.zero_above) {
        out.win_.hi = std::min(win_.hi, -1);
        out.win_.zero_above = true;
    } else {
        out.win_.hi = win_.hi;
        out.win_.zero_above = false;
    }
    return out;
}

DiffOp DiffOp::bar() const {
    if (s_off_ != 0)
        throw Error(Errc::Internal, "bar with a formal exponent");
    DiffOp out(ctx_);
    out.win_ = Window{-win_.hi, -win_.lo, win_.zero_above, win_.zero_below};
    if (win_.empty()) {
        out.win_.lo = 0;
        out.win_.hi = -1;
        return out;
    }
    const int len = ctx_.eps_order + 1;
    for (const auto& [k, p] : c_) {
        DiffPoly q = ctx_.kind == CtxKind::Reduced ? reduced_involute(p, len)
                                                   : p.involute_swap();
        out.normalize_entry(-k, q * q_bracket_power(ctx_, k));
    }
    return out;
}

DiffOp DiffOp::inverted(int depth) const {
    if (depth < 0)
        depth = ctx_.max_k;
    if (s_off_ != 0)
        throw Error(Errc::Internal, "inverting a formal power");
    if (is_zero_op() || win_.empty())
        throw Error(Errc::NotInvertible, "operator has no stored coefficients");

    const int len = ctx_.eps_order + 1;
    auto shift = [&](int m, const DiffPoly& p) { return ShiftSeries::e_shift(m, len).apply(p); };
    auto unit_inverse = [&](const DiffPoly& p) -> std::optional<DiffPoly> {
        try {
            return p.laurent_invert();
        } catch (const Error&) {
            return std::nullopt;
        }
    };

    // Work from a closed window end whose coefficient is a unit; the top end
    // (series in Lambda^{-1}) is the common case.
    int dir = 0, m = 0;
    if (win_.zero_above && unit_inverse(coeff_in_window(win_.hi))) {
        dir = -1;
        m = win_.hi;
    } else if (win_.zero_below && unit_inverse(coeff_in_window(win_.lo))) {
        dir = +1;
        m = win_.lo;
    } else {
        throw Error(Errc::NotInvertible, "no unit leading coefficient at a closed window end");
    }

    // E^{m/2} is an algebra automorphism, so the top equation
    // (E^{m/2} a_m)(E^{m/2} x_{-m}) = 1 collapses to x_{-m} = a_m^{-1}.
    const DiffPoly lead = coeff_in_window(m);
    DiffOp x(ctx_);
    x.set_coefficient(-m, lead.laurent_invert());
    for (int k = 1; k <= depth; ++k) {
        // Degree dir*k of (this)*x must vanish; the unknown coefficient of x
        // enters only through the leading term of *this.
        DiffPoly rest(ctx_.kind);
        const int ilo = dir < 0 ? win_.lo : m + 1;
        const int ihi = dir < 0 ? m - 1 : win_.hi;
        for (int i = ilo; i <= ihi; ++i) {
            const int j = dir * k - i;  // companion degree in x
            auto ic = c_.find(i);
            if (ic == c_.end())
                continue;
            auto it = x.c_.find(j);
            if (it == x.c_.end())
                continue;
            rest += shift(-j, ic->second) * shift(i, it->second);
        }
        DiffPoly inv = shift(m - dir * k, lead).laurent_invert();
        x.set_coefficient(-m + dir * k, shift(-m, inv * (-rest)));
    }
    x.win_.zero_below = dir < 0 ? false : true;
    x.win_.zero_above = dir < 0 ? true : false;
    return x;
}

DiffOp DiffOp::power(int n, int invert_depth) const {
    if (n == 0)
        return identity(ctx_);
    if (n < 0)
        return inverted(invert_depth).power(-n);
    DiffOp acc = *this;
    for (int i = 1; i < n; ++i)
        acc = acc * *this;
    return acc;
}

DiffOp DiffOp::map_coeffs(const std::function<DiffPoly(const DiffPoly&)>& f) const {
    DiffOp out(ctx_);
    out.win_ = win_;
    out.s_off_ = s_off_;
    for (const auto& [k, p] : c_)
        out.normalize_entry(k, f(p));
    return out;
}

DiffOp DiffOp::conj_coeffs() const {
    return map_coeffs([](const DiffPoly& p) { return p.conj_coeffs(); });
}

DiffOp DiffOp::subs_t_zero() const {
    return map_coeffs([](const DiffPoly& p) { return p.subs_t_zero(); });
}

DiffOp DiffOp::subs_z_zero() const {
    return map_coeffs([](const DiffPoly& p) { return p.subs_z_zero(); });
}

DiffOp DiffOp::truncated(int n) const {
    return map_coeffs([&](const DiffPoly& p) { return p.truncated(n); });
}

DiffOp DiffOp::t_part(int j) const {
    return map_coeffs([&](const DiffPoly& p) { return p.t_part(j); });
}

DiffOp DiffOp::ds_coeffs() const {
    return map_coeffs([](const DiffPoly& p) { return p.ds(); });
}

DiffOp DiffOp::subs_s_int(int r) const {
    DiffOp out(ctx_);
    const int shift = r * s_off_;
    out.win_ = Window{win_.lo + shift, win_.hi + shift, win_.zero_below, win_.zero_above};
    for (const auto& [k, p] : c_)
        out.normalize_entry(k + shift, p.subs_s(Rat(r)));
    return out;
}

DiffOp DiffOp::substituted(const GenSubst& s, const AlgebraContext& target,
                           bool conj_coeffs) const {
    DiffOp out(target);
    out.win_ = win_;
    out.s_off_ = s_off_;
    for (const auto& [k, p] : c_)
        out.normalize_entry(k, s.apply(p, conj_coeffs));
    return out;
}

bool DiffOp::is_zero_to(int n) const {
    for (const auto& [k, p] : c_)
        if (!p.is_zero_to(n))
            return false;
    return true;
}

int DiffOp::min_coeff_order() const {
    int o = CoeffSeries::kExact;
    for (const auto& [k, p] : c_)
        o = std::min(o, p.order());
    return o;
}

DiffOp::Overlap DiffOp::overlap(const DiffOp& a, const DiffOp& b) {
    long lo = std::max(det_lo(a), det_lo(b));
    long hi = std::min(det_hi(a), det_hi(b));
    long ulo = kInf, uhi = -kInf;
    for (const DiffOp* x : {&a, &b}) {
        if (!x->window().empty()) {
            ulo = std::min<long>(ulo, x->window().lo);
            uhi = std::max<long>(uhi, x->window().hi);
        }
    }
    lo = std::max(lo, ulo);
    hi = std::min(hi, uhi);
    if (lo > hi)
        return Overlap{0, -1};
    return Overlap{static_cast<int>(lo), static_cast<int>(hi)};
}

bool DiffOp::equal_on_overlap(const DiffOp& a, const DiffOp& b, int n, Mismatch* where) {
    if (a.is_zero_op() && b.is_zero_op())
        return true;
    if (a.s_offset() != b.s_offset())
        throw Error(Errc::Internal, "comparing operators with different formal exponents");
    Overlap ov = overlap(a, b);
    if (ov.empty())
        throw Error(Errc::EmptyWindow, "operators have no common determined degrees");
    for (int k = ov.lo; k <= ov.hi; ++k) {
        DiffPoly pa = a.coefficient(k);
        DiffPoly pb = b.coefficient(k);
        if (!DiffPoly::equal_to(pa, pb, n)) {
            if (where) {
                where->degree = k;
                DiffPoly d = (pa - pb).truncated(n);
                if (auto loc = d.leading_entry()) {
                    where->mono = loc->mono;
                    where->key = loc->key;
                    where->diff = loc->coeff;
                }
            }
            return false;
        }
    }
    return true;
}

DiffPoly q_bracket_power(const AlgebraContext& ctx, int k) {
    if (k == 0)
        return DiffPoly::constant(ctx.kind, Rat(1));
    if (k < 0)
        return q_bracket_power(ctx, -k).laurent_invert();
    const int len = ctx.eps_order + 1;
    const DiffPoly q = DiffPoly::generator(ctx.kind, jet_q());
    DiffPoly cur = DiffPoly::constant(ctx.kind, Rat(1));
    // (q Lambda^{-1})^{m+1} = (q Lambda^{-1})(q^{[m]} Lambda^{-m}) twists the
    // factors by E^{m/2} and E^{-1/2} respectively.
    for (int m = 0; m < k; ++m)
        cur = ShiftSeries::e_shift(m, len).apply(q) * ShiftSeries::e_shift(-1, len).apply(cur);
    return cur;
}

}  // namespace eqtoda
