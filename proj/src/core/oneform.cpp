#include "core/oneform.hpp"

#include <algorithm>
#include <set>
#include <utility>

namespace eqtoda {

namespace {

constexpr long kInf = 1L << 40;

int sat_add(int order, int d) {
    if (order >= CoeffSeries::kExact)
        return CoeffSeries::kExact;
    return static_cast<int>(std::min<long>(CoeffSeries::kExact, long(order) + d));
}

long not_zero_lo(const Window& w, bool zero_op) {
    if (zero_op)
        return kInf;  // nothing is nonzero; callers short-circuit earlier
    return w.zero_below ? w.lo : -kInf;
}
long not_zero_hi(const Window& w, bool zero_op) {
    if (zero_op)
        return -kInf;
    return w.zero_above ? w.hi : kInf;
}

long det_lo(const Window& w) { return w.zero_below ? -kInf : w.lo; }
long det_hi(const Window& w) { return w.zero_above ? kInf : w.hi; }

}  // namespace

OneForm OneForm::d_gen(CtxKind kind, const GenKey& g) {
    OneForm w(kind);
    w.add_term(g, 0, DiffPoly::constant(kind, Rat(1)));
    return w;
}

void OneForm::put(const Key& k, DiffPoly c) {
    if (kind_ == CtxKind::Reduced && k.first.gen == Gen::Q && k.second > 0)
        throw Error(Errc::Internal, "derivatives of dq do not exist in the reduced algebra");
    if (c.is_zero() && c.order() == CoeffSeries::kExact)
        terms_.erase(k);
    else
        terms_[k] = std::move(c);
}

void OneForm::add_term(const GenKey& g, int n, const DiffPoly& c) {
    Key k{g, n};
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        put(k, c);
        return;
    }
    DiffPoly s = it->second;
    s += c;
    terms_.erase(it);
    put(k, std::move(s));
}

DiffPoly OneForm::coefficient(const GenKey& g, int n) const {
    auto it = terms_.find(Key{g, n});
    if (it != terms_.end())
        return it->second;
    DiffPoly z(kind_);
    if (order_ != CoeffSeries::kExact)
        z.set_order(order_);
    return z;
}

int OneForm::order() const {
    int o = order_;
    for (const auto& [k, c] : terms_)
        o = std::min(o, c.order());
    return o;
}

int OneForm::val() const {
    if (terms_.empty())
        return order();
    int v = CoeffSeries::kExact;
    for (const auto& [k, c] : terms_)
        v = std::min(v, c.val());
    return v;
}

void OneForm::set_order(int n) {
    order_ = std::min(order_, n);
    std::map<Key, DiffPoly> out;
    for (auto& [k, c] : terms_) {
        DiffPoly d = c;
        d.set_order(std::min(c.order(), n));
        if (!(d.is_zero() && d.order() == CoeffSeries::kExact))
            out.emplace(k, std::move(d));
    }
    terms_ = std::move(out);
}

bool OneForm::is_zero_to(int n) const {
    if (order() < n)
        return false;
    for (const auto& [k, c] : terms_)
        if (!c.is_zero_to(n))
            return false;
    return true;
}

OneForm& OneForm::operator+=(const OneForm& o) {
    if (kind_ != o.kind_)
        throw Error(Errc::Internal, "mixing differential algebras");
    order_ = std::min(order_, o.order_);
    for (const auto& [k, c] : o.terms_)
        add_term(k.first, k.second, c);
    return *this;
}

OneForm& OneForm::operator-=(const OneForm& o) { return *this += -o; }

OneForm OneForm::operator-() const {
    OneForm out = *this;
    for (auto& [k, c] : out.terms_)
        c = -c;
    return out;
}

OneForm operator*(const DiffPoly& f, const OneForm& w) {
    OneForm out(w.kind_);
    out.order_ = sat_add(w.order_, f.val());
    for (const auto& [k, c] : w.terms_)
        out.put(k, f * c);
    return out;
}

OneForm OneForm::scaled(const Rat& r) const {
    OneForm out(kind_);
    out.order_ = order_;
    for (const auto& [k, c] : terms_)
        out.put(k, c.scaled(r));
    return out;
}

OneForm OneForm::scaled(const CoeffSeries& s) const {
    OneForm out(kind_);
    out.order_ = sat_add(order_, s.val());
    for (const auto& [k, c] : terms_)
        out.put(k, c.scaled(s));
    return out;
}

OneForm OneForm::mul_eps(int d) const {
    OneForm out(kind_);
    out.order_ = sat_add(order_, d);
    for (const auto& [k, c] : terms_)
        out.put(k, c.mul_eps(d));
    return out;
}

OneForm OneForm::subs_t_zero() const {
    OneForm out(kind_);
    out.order_ = order_;
    for (const auto& [k, c] : terms_)
        out.put(k, c.subs_t_zero());
    return out;
}

OneForm OneForm::t_part(int j) const {
    OneForm out(kind_);
    out.order_ = order_;
    for (const auto& [k, c] : terms_)
        out.put(k, c.t_part(j));
    return out;
}

OneForm OneForm::derive() const {
    OneForm out(kind_);
    out.order_ = order_;
    for (const auto& [k, c] : terms_) {
        out.add_term(k.first, k.second, c.derive());
        if (kind_ == CtxKind::Reduced && k.first.gen == Gen::Q) {
            // d(dq) = d(d(q)) = d(q u_1) differentiated as a form
            DiffPoly u1 = DiffPoly::generator(kind_, jet_u(1));
            DiffPoly q = DiffPoly::generator(kind_, jet_q(0));
            out.add_term(k.first, 0, c * u1);
            out.add_term(GenKey{Gen::U, false, 0}, 1, c * q);
        } else {
            out.add_term(k.first, k.second + 1, c);
        }
    }
    return out;
}

OneForm OneForm::canonicalized() const {
    OneForm out(kind_);
    out.order_ = order_;
    for (const auto& [k, c] : terms_) {
        DiffPoly r = c;
        for (int i = 0; i < k.second; ++i)
            r = -r.derive();
        out.add_term(k.first, 0, r);
    }
    if (kind_ == CtxKind::Reduced) {
        Key qk{GenKey{Gen::Q, false, 0}, 0};
        auto it = out.terms_.find(qk);
        if (it != out.terms_.end()) {
            DiffPoly cq = it->second * DiffPoly::generator(kind_, jet_q(0));
            out.terms_.erase(it);
            out.add_term(GenKey{Gen::U, false, 0}, 0, cq);
        }
    }
    return out;
}

std::optional<OneForm::Mismatch> OneForm::first_mismatch(const OneForm& a, const OneForm& b,
                                                         int n) {
    std::set<Key> keys;
    for (const auto& [k, c] : a.terms_)
        keys.insert(k);
    for (const auto& [k, c] : b.terms_)
        keys.insert(k);
    if (keys.empty() && (a.order() < n || b.order() < n))
        return Mismatch{};  // an order shortfall with no term to point at
    for (const Key& k : keys) {
        DiffPoly pa = a.coefficient(k.first, k.second);
        DiffPoly pb = b.coefficient(k.first, k.second);
        if (!DiffPoly::equal_to(pa, pb, n)) {
            Mismatch m;
            m.key = k;
            if (auto loc = (pa - pb).truncated(n).leading_entry())
                m.loc = *loc;
            return m;
        }
    }
    return std::nullopt;
}

bool OneForm::equal_to(const OneForm& a, const OneForm& b, int n) {
    return !first_mismatch(a, b, n).has_value();
}

std::vector<OneForm> derivative_tower_form(const OneForm& w, int n) {
    std::vector<OneForm> t;
    t.reserve(n + 1);
    t.push_back(w);
    for (int i = 0; i < n; ++i)
        t.push_back(t.back().derive());
    return t;
}

OneForm e_shift_form_tower(const std::vector<OneForm>& tower, int m, int len) {
    if (tower.empty())
        throw Error(Errc::Internal, "empty derivative tower");
    if (m == 0)  // identity shift: exact
        return tower.front();
    const OneForm& w = tower.front();
    OneForm out(w.kind());
    Rat cj(1);
    Rat step(m, 2);
    bool tail_exact = false;
    for (int j = 0; j < len; ++j) {
        if (j >= static_cast<int>(tower.size()))
            break;
        const OneForm& d = tower[j];
        if (d.is_exact_zero()) {
            tail_exact = true;  // the tower died: dropping the tail is exact
            break;
        }
        if (!cj.is_zero())
            out += d.scaled(cj).mul_eps(j);
        cj = cj * step / Rat(j + 1);
    }
    if (!tail_exact) {
        long terms = std::min<long>(len, static_cast<long>(tower.size()));
        long cap = std::min<long>(w.order(), terms + w.val());
        out.set_order(static_cast<int>(std::min<long>(out.order(), cap)));
    }
    return out;
}

OneForm e_shift_form(const OneForm& w, int m, int len) {
    if (m == 0)
        return w;
    return e_shift_form_tower(derivative_tower_form(w, len - 1), m, len);
}

OneForm differential(const DiffPoly& p) {
    OneForm out(p.kind());
    if (p.order() != CoeffSeries::kExact)
        out.set_order(p.order());
    std::set<JetVar> vars;
    for (const auto& [m, c] : p.terms())
        for (const auto& [j, e] : m.factors)
            vars.insert(j);
    for (const JetVar& j : vars)
        out.add_term(gen_of(j), j.order, p.partial(j));
    return out;
}

bool OperatorForm::determined(int k) const {
    if (!win_.empty() && k >= win_.lo && k <= win_.hi)
        return true;
    if (k < win_.lo && win_.zero_below)
        return true;
    if (k > win_.hi && win_.zero_above)
        return true;
    return false;
}

OneForm OperatorForm::form_in_window(int k) const {
    auto it = c_.find(k);
    return it == c_.end() ? OneForm(ctx_.kind) : it->second;
}

OneForm OperatorForm::coefficient(int k) const {
    if (!determined(k))
        throw Error(Errc::WindowMiss,
                    "coefficient at degree " + std::to_string(k) + " lies outside the window");
    return form_in_window(k);
}

void OperatorForm::normalize_entry(int k, OneForm w) {
    if (w.is_exact_zero())
        c_.erase(k);
    else
        c_.insert_or_assign(k, std::move(w));
}

void OperatorForm::set_coefficient(int k, OneForm w) {
    normalize_entry(k, std::move(w));
    if (win_.empty())
        win_.lo = win_.hi = k;
    else {
        win_.lo = std::min(win_.lo, k);
        win_.hi = std::max(win_.hi, k);
    }
}

bool OperatorForm::is_zero_to(int n) const {
    for (const auto& [k, w] : c_)
        if (!w.is_zero_to(n))
            return false;
    return true;
}

OperatorForm& OperatorForm::operator+=(const OperatorForm& o) {
    if (o.is_zero_op())
        return *this;
    if (is_zero_op()) {
        *this = o;
        return *this;
    }
    if (!(ctx_ == o.ctx_))
        throw Error(Errc::Internal, "adding operators from different contexts");
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
    std::map<int, OneForm> out;
    for (int k = w.lo; k <= w.hi; ++k) {
        OneForm s = coefficient(k);
        s += o.coefficient(k);
        if (!s.is_exact_zero())
            out.emplace(k, std::move(s));
    }
    c_ = std::move(out);
    win_ = w;
    return *this;
}

OperatorForm& OperatorForm::operator-=(const OperatorForm& o) { return *this += -o; }

OperatorForm OperatorForm::operator-() const {
    OperatorForm out = *this;
    for (auto& [k, w] : out.c_)
        w = -w;
    return out;
}

namespace {

/** Shared window/twist skeleton of the mixed products; the factor roles are
 *  identical to the operator-operator product. */
template <class CoeffA, class CoeffB, class TowerA, class TowerB, class ShiftA, class ShiftB>
std::pair<std::map<int, OneForm>, Window> twisted_product(
    const AlgebraContext& ctx, const Window& wa, const Window& wb,
    const std::map<int, CoeffA>& ca, const std::map<int, CoeffB>& cb, const TowerA& make_ta,
    const TowerB& make_tb, const ShiftA& shift_a, const ShiftB& shift_b) {
    if (wa.empty() || wb.empty())
        throw Error(Errc::EmptyWindow, "factor has no stored coefficients");

    // A degree is determined unless some contributing pair combines an
    // undetermined coefficient with one not known to vanish; each such pair
    // poisons a full ray of degrees.
    long bad_up = kInf, bad_down = -kInf;
    if (!wa.zero_above)
        bad_up = std::min(bad_up, wa.hi + 1 + not_zero_lo(wb, false));
    if (!wb.zero_above)
        bad_up = std::min(bad_up, wb.hi + 1 + not_zero_lo(wa, false));
    if (!wa.zero_below)
        bad_down = std::max(bad_down, wa.lo - 1 + not_zero_hi(wb, false));
    if (!wb.zero_below)
        bad_down = std::max(bad_down, wb.lo - 1 + not_zero_hi(wa, false));
    long dlo = bad_down + 1, dhi = bad_up - 1;
    if (wa.zero_below && wb.zero_below)
        dlo = std::max<long>(dlo, wa.lo + wb.lo);
    if (wa.zero_above && wb.zero_above)
        dhi = std::min<long>(dhi, wa.hi + wb.hi);
    if (dlo > dhi)
        throw Error(Errc::EmptyWindow, "product window undetermined");

    const int len = ctx.eps_order + 1;
    std::map<int, decltype(make_ta(ca.begin()->second))> ta;
    std::map<int, decltype(make_tb(cb.begin()->second))> tb;
    for (const auto& [i, p] : ca)
        ta.emplace(i, make_ta(p));
    for (const auto& [j, p] : cb)
        tb.emplace(j, make_tb(p));

    std::map<int, OneForm> out;
    for (long k = dlo; k <= dhi; ++k) {
        OneForm acc(ctx.kind);
        const long ilo = std::max<long>(wa.lo, k - wb.hi);
        const long ihi = std::min<long>(wa.hi, k - wb.lo);
        for (long i = ilo; i <= ihi; ++i) {
            auto ia = ta.find(static_cast<int>(i));
            auto ib = tb.find(static_cast<int>(k - i));
            if (ia == ta.end() || ib == tb.end())
                continue;  // exact zero factor
            acc += shift_a(ia->second, static_cast<int>(i - k), len) *
                   shift_b(ib->second, static_cast<int>(i), len);
        }
        if (!acc.is_exact_zero())
            out.emplace(static_cast<int>(k), std::move(acc));
    }
    Window w{static_cast<int>(dlo), static_cast<int>(dhi), wa.zero_below && wb.zero_below,
             wa.zero_above && wb.zero_above};
    return {std::move(out), w};
}

}  // namespace

OperatorForm operator*(const DiffOp& a, const OperatorForm& b) {
    if (!(a.ctx() == b.ctx()))
        throw Error(Errc::Internal, "multiplying operators from different contexts");
    if (a.s_offset() != 0)
        throw Error(Errc::Internal, "formal power times an operator form");
    OperatorForm out(a.ctx());
    if (a.is_zero_op() || b.is_zero_op())
        return out;
    const int len = a.ctx().eps_order + 1;
    auto [entries, w] = twisted_product(
        a.ctx(), a.window(), b.window(), a.coefficients(), b.coefficients(),
        [&](const DiffPoly& p) { return derivative_tower(p, len - 1); },
        [&](const OneForm& f) { return derivative_tower_form(f, len - 1); },
        [](const std::vector<DiffPoly>& t, int m, int l) { return shift_formal_tower(t, m, 0, l); },
        [](const std::vector<OneForm>& t, int m, int l) { return e_shift_form_tower(t, m, l); });
    out.c_ = std::move(entries);
    out.win_ = w;
    return out;
}

OperatorForm operator*(const OperatorForm& a, const DiffOp& b) {
    if (!(a.ctx() == b.ctx()))
        throw Error(Errc::Internal, "multiplying operators from different contexts");
    if (b.s_offset() != 0)
        throw Error(Errc::Internal, "operator form times a formal power");
    OperatorForm out(a.ctx());
    if (a.is_zero_op() || b.is_zero_op())
        return out;
    const int len = a.ctx().eps_order + 1;
    auto [entries, w] = twisted_product(
        a.ctx(), a.window(), b.window(), a.coefficients(), b.coefficients(),
        [&](const OneForm& f) { return derivative_tower_form(f, len - 1); },
        [&](const DiffPoly& p) { return derivative_tower(p, len - 1); },
        [](const std::vector<OneForm>& t, int m, int l) { return e_shift_form_tower(t, m, l); },
        [](const std::vector<DiffPoly>& t, int m, int l) { return shift_formal_tower(t, m, 0, l); });
    out.c_ = std::move(entries);
    out.win_ = w;
    return out;
}

OperatorForm OperatorForm::map_forms(const std::function<OneForm(const OneForm&)>& f) const {
    OperatorForm out(ctx_);
    out.win_ = win_;
    for (const auto& [k, w] : c_)
        out.normalize_entry(k, f(w));
    return out;
}

OperatorForm OperatorForm::scaled(const Rat& r) const {
    return map_forms([&](const OneForm& w) { return w.scaled(r); });
}

OperatorForm OperatorForm::scaled(const CoeffSeries& c) const {
    return map_forms([&](const OneForm& w) { return w.scaled(c); });
}

OperatorForm OperatorForm::mul_eps(int d) const {
    return map_forms([&](const OneForm& w) { return w.mul_eps(d); });
}

OperatorForm OperatorForm::div_eps_checked(int d) const {
    return map_forms([&](const OneForm& w) {
        OneForm out(w.kind());
        for (const auto& [k, c] : w.terms())
            out.add_term(k.first, k.second, c.div_eps_checked(d));
        out.set_order(sat_add(w.order(), -d));
        return out;
    });
}

bool OperatorForm::equal_on_overlap(const OperatorForm& a, const OperatorForm& b, int n,
                                    Mismatch* where) {
    if (a.is_zero_op() && b.is_zero_op())
        return true;
    long lo = std::max(det_lo(a.win_), det_lo(b.win_));
    long hi = std::min(det_hi(a.win_), det_hi(b.win_));
    long ulo = kInf, uhi = -kInf;
    for (const OperatorForm* x : {&a, &b}) {
        if (!x->win_.empty()) {
            ulo = std::min<long>(ulo, x->win_.lo);
            uhi = std::max<long>(uhi, x->win_.hi);
        }
    }
    lo = std::max(lo, ulo);
    hi = std::min(hi, uhi);
    if (lo > hi)
        throw Error(Errc::EmptyWindow, "operators have no common determined degrees");
    for (long k = lo; k <= hi; ++k) {
        OneForm wa = a.coefficient(static_cast<int>(k));
        OneForm wb = b.coefficient(static_cast<int>(k));
        if (auto m = OneForm::first_mismatch(wa, wb, n)) {
            if (where) {
                where->degree = static_cast<int>(k);
                where->at = *m;
            }
            return false;
        }
    }
    return true;
}

OperatorForm differential_op(const DiffOp& op) {
    if (op.s_offset() != 0)
        throw Error(Errc::Internal, "differential of a formal power");
    OperatorForm out(op.ctx());
    if (op.is_zero_op())
        return out;
    const Window& w = op.window();
    for (int k = w.lo; k <= w.hi; ++k) {
        if (op.determined(k))
            out.set_coefficient(k, differential(op.coefficient(k)));
    }
    if (out.window().empty() && !w.empty()) {
        out.set_coefficient(w.lo, OneForm(op.ctx().kind));
        out.set_coefficient(w.hi, OneForm(op.ctx().kind));
    }
    if (!w.zero_below)
        out.clear_zero_below();
    if (!w.zero_above)
        out.clear_zero_above();
    return out;
}

OperatorForm ad_op(const DiffOp& a, const OperatorForm& x) { return a * x - x * a; }

}  // namespace eqtoda
