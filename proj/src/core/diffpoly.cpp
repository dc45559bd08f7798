#include "core/diffpoly.hpp"

#include <algorithm>

namespace eqtoda {

namespace {

int clamp_order(long n) {
    return static_cast<int>(std::min<long>(n, CoeffSeries::kExact));
}

Monomial merge_monomials(const Monomial& a, const Monomial& b) {
    Monomial m;
    m.factors.reserve(a.factors.size() + b.factors.size());
    size_t i = 0, j = 0;
    while (i < a.factors.size() && j < b.factors.size()) {
        if (a.factors[i].first == b.factors[j].first) {
            int e = a.factors[i].second + b.factors[j].second;
            if (e != 0)
                m.factors.emplace_back(a.factors[i].first, e);
            ++i, ++j;
        } else if (a.factors[i].first < b.factors[j].first) {
            m.factors.push_back(a.factors[i++]);
        } else {
            m.factors.push_back(b.factors[j++]);
        }
    }
    for (; i < a.factors.size(); ++i)
        m.factors.push_back(a.factors[i]);
    for (; j < b.factors.size(); ++j)
        m.factors.push_back(b.factors[j]);
    return m;
}

}  // namespace

DiffPoly DiffPoly::constant(CtxKind kind, const CoeffSeries& c) {
    DiffPoly p(kind);
    p.order_ = c.order();
    if (!c.is_zero())
        p.terms_.emplace(Monomial{}, c);
    return p;
}

DiffPoly DiffPoly::constant(CtxKind kind, const Rat& c) {
    return constant(kind, CoeffSeries(c));
}

DiffPoly DiffPoly::generator(CtxKind kind, const JetVar& j, int exponent) {
    DiffPoly p(kind);
    if (exponent == 0)
        return constant(kind, Rat(1));
    if (exponent < 0 && !j.is_q0())
        throw Error(Errc::NotDefined, "negative exponent on a non-q jet");
    Monomial m;
    m.factors.emplace_back(j, exponent);
    p.terms_.emplace(m, CoeffSeries(Rat(1)));
    return p;
}

DiffPoly DiffPoly::monomial(CtxKind kind, const Monomial& m, const CoeffSeries& c) {
    DiffPoly p(kind);
    p.order_ = c.order();
    if (!c.is_zero())
        p.terms_.emplace(m, c);
    return p;
}

int DiffPoly::val() const {
    int v = order_;
    for (const auto& [m, c] : terms_)
        v = std::min(v, c.val());
    return v;
}

bool DiffPoly::is_zero_to(int n) const {
    if (order_ < n)
        return false;
    for (const auto& [m, c] : terms_)
        if (c.val() < n)
            return false;
    return true;
}

CoeffSeries DiffPoly::coefficient_of(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? CoeffSeries::zero_at(order_) : it->second;
}

void DiffPoly::add_term(const Monomial& m, const CoeffSeries& c) {
    CoeffSeries t = c.truncated(order_);
    if (t.is_zero())
        return;
    auto [it, fresh] = terms_.emplace(m, t);
    if (!fresh) {
        it->second += t;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

void DiffPoly::set_order(int n) {
    order_ = std::min(order_, n);
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second = it->second.truncated(order_);
        it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
    }
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& o) {
    check_kind(o);
    set_order(std::min(order_, o.order_));
    for (const auto& [m, c] : o.terms_)
        add_term(m, c);
    return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& o) {
    check_kind(o);
    set_order(std::min(order_, o.order_));
    for (const auto& [m, c] : o.terms_)
        add_term(m, -c);
    return *this;
}

DiffPoly DiffPoly::operator-() const {
    DiffPoly p(kind_);
    p.order_ = order_;
    for (const auto& [m, c] : terms_)
        p.terms_.emplace(m, -c);
    return p;
}

DiffPoly DiffPoly::operator*(const DiffPoly& o) const {
    check_kind(o);
    DiffPoly p(kind_);
    p.order_ = clamp_order(std::min<long>(static_cast<long>(order_) + o.val(),
                                          static_cast<long>(o.order_) + val()));
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_)
            p.add_term(merge_monomials(ma, mb), ca * cb);
    return p;
}

DiffPoly DiffPoly::scaled(const Rat& c) const {
    DiffPoly p(kind_);
    p.order_ = order_;
    if (c.is_zero())
        return p;
    for (const auto& [m, v] : terms_)
        p.terms_.emplace(m, v.scaled(c));
    return p;
}

DiffPoly DiffPoly::scaled(const CoeffSeries& c) const {
    DiffPoly p(kind_);
    p.order_ = clamp_order(std::min<long>(static_cast<long>(order_) + c.val(),
                                          static_cast<long>(c.order()) + val()));
    for (const auto& [m, v] : terms_)
        p.add_term(m, v * c);
    return p;
}

DiffPoly DiffPoly::mul_eps(int d) const {
    DiffPoly p(kind_);
    p.order_ = clamp_order(static_cast<long>(order_) + d);
    for (const auto& [m, v] : terms_)
        p.terms_.emplace(m, v.mul_eps(d));
    return p;
}

DiffPoly DiffPoly::div_eps_checked(int d) const {
    if (val() < d)
        throw Error(Errc::SingularFlow, "eps pole in an exposed value");
    return mul_eps(-d);
}

DiffPoly DiffPoly::truncated(int n) const {
    DiffPoly p = *this;
    p.set_order(n);
    return p;
}

DiffPoly DiffPoly::pow(int e) const {
    if (e < 0)
        return laurent_invert().pow(-e);
    DiffPoly r = constant(kind_, Rat(1));
    r.set_order(order_ == CoeffSeries::kExact ? CoeffSeries::kExact : order_);
    DiffPoly base = *this;
    for (int i = 0; i < e; ++i)
        r = r * base;
    return r;
}

DiffPoly DiffPoly::derive() const {
    DiffPoly p(kind_);
    p.order_ = order_;
    for (const auto& [m, c] : terms_) {
        for (const auto& [j, e] : m.factors) {
            Monomial rest = m.with(j, -1);
            CoeffSeries coeff = c.scaled(Rat(e));
            if (j.is_q0() && kind_ == CtxKind::Reduced) {
                // dq = q * u_1: the q-power is restored, u_1 joins the monomial
                Monomial m2 = merge_monomials(rest, Monomial{{{jet_q(0), 1}, {jet_u(1), 1}}});
                p.add_term(m2, coeff);
            } else {
                Monomial m2 = merge_monomials(rest, Monomial{{{j.raised(1), 1}}});
                p.add_term(m2, coeff);
            }
        }
    }
    return p;
}

DiffPoly DiffPoly::derive(int n) const {
    DiffPoly p = *this;
    for (int i = 0; i < n; ++i)
        p = p.derive();
    return p;
}

DiffPoly DiffPoly::partial(const JetVar& j) const {
    DiffPoly p(kind_);
    p.order_ = order_;
    for (const auto& [m, c] : terms_) {
        int e = m.exponent_of(j);
        if (e != 0)
            p.add_term(m.with(j, -1), c.scaled(Rat(e)));
    }
    return p;
}

int DiffPoly::max_jet_order(const GenKey& x) const {
    int best = -1;
    for (const auto& [m, c] : terms_)
        for (const auto& [j, e] : m.factors)
            if (gen_of(j) == x)
                best = std::max<int>(best, j.order);
    return best;
}

bool DiffPoly::contains_family(Gen g) const {
    for (const auto& [m, c] : terms_)
        for (const auto& [j, e] : m.factors)
            if (j.gen == g)
                return true;
    return false;
}

int DiffPoly::max_index(Gen g) const {
    int best = 0;
    for (const auto& [m, c] : terms_)
        for (const auto& [j, e] : m.factors)
            if (j.gen == g)
                best = std::max<int>(best, j.index);
    return best;
}

DiffPoly DiffPoly::var_derivative(const GenKey& x) const {
    int top = max_jet_order(x);
    DiffPoly acc(kind_);
    acc.set_order(order_);
    for (int n = top; n >= 0; --n) {
        JetVar j{x.gen, x.barred, x.index, static_cast<uint8_t>(n)};
        acc = partial(j) - acc.derive();  // Horner form of sum (-d)^n d/dx_n
    }
    if (kind_ == CtxKind::Reduced && x.gen == Gen::U && !x.barred) {
        // u = log q: add q * d/dq
        DiffPoly chain(kind_);
        chain.set_order(order_);
        for (const auto& [m, c] : terms_) {
            int e = m.exponent_of(jet_q(0));
            if (e != 0)
                chain.add_term(m, c.scaled(Rat(e)));
        }
        acc += chain;
    }
    return acc;
}

CoeffSeries DiffPoly::alpha() const {
    CoeffSeries r = CoeffSeries::zero_at(order_);
    for (const auto& [m, c] : terms_) {
        if (m.q_exponent() < 0)
            throw Error(Errc::NotDefined, "alpha on a q-pole");
        if (m.empty())
            r += c;
    }
    return r;
}

DiffPoly DiffPoly::laurent_invert() const {
    if (terms_.empty())
        throw Error(Errc::NotAUnit, "inverse of the zero polynomial");
    // Unit part: all terms of least eps-degree; must be a single q^m monomial
    // with an invertible scalar coefficient.
    int v = val();
    const Monomial* lead_m = nullptr;
    const ParamKey* lead_k = nullptr;
    const Rat* lead_c = nullptr;
    for (const auto& [m, c] : terms_) {
        for (const auto& [k, r] : c.terms()) {
            if (k.eps != v)
                continue;
            if (lead_m)
                throw Error(Errc::NotAUnit, "leading eps part is not a single monomial");
            lead_m = &m;
            lead_k = &k;
            lead_c = &r;
        }
    }
    if (!lead_m)
        throw Error(Errc::NotAUnit, "no leading term");
    if (lead_m->has_jets())
        throw Error(Errc::NotAUnit, "leading term contains jet variables");
    if (lead_k->s != 0)
        throw Error(Errc::NotAUnit, "leading coefficient involves s");
    for (int i = 0; i < kMaxZ; ++i)
        if (lead_k->z[i] != 0 || lead_k->zb[i] != 0)
            throw Error(Errc::NotAUnit, "leading coefficient involves z parameters");

    int m_exp = lead_m->q_exponent();
    ParamKey inv_key;
    inv_key.eps = static_cast<int16_t>(-lead_k->eps);
    inv_key.t = static_cast<int16_t>(-lead_k->t);
    DiffPoly unit_inv = generator(kind_, jet_q(0), -m_exp)
                            .scaled(CoeffSeries::monomial(inv_key, lead_c->inverse()));
    if (m_exp == 0)
        unit_inv = constant(kind_, CoeffSeries::monomial(inv_key, lead_c->inverse()));

    DiffPoly n = (*this * unit_inv) - constant(kind_, Rat(1));
    if (!n.is_zero() && n.val() <= 0)
        throw Error(Errc::NotAUnit, "remainder beyond the unit part is not O(eps)");
    if (!n.is_zero() && n.order() == CoeffSeries::kExact)
        throw Error(Errc::NotAUnit, "inverse is an infinite eps-series; truncate first");

    DiffPoly acc = constant(kind_, Rat(1));
    acc.set_order(n.order());
    DiffPoly pw = constant(kind_, Rat(1));
    for (int i = 1; i <= acc.order() && !pw.is_zero(); ++i) {
        pw = pw * n;
        acc += (i % 2 ? -pw : pw);
        if (!pw.is_zero() && pw.val() >= acc.order())
            break;
    }
    return acc * unit_inv;
}

DiffPoly DiffPoly::map_coeffs(const std::function<CoeffSeries(const CoeffSeries&)>& f) const {
    DiffPoly p(kind_);
    p.order_ = order_;
    for (const auto& [m, c] : terms_)
        p.add_term(m, f(c));
    return p;
}

DiffPoly DiffPoly::conj_coeffs() const {
    return map_coeffs([](const CoeffSeries& c) { return c.conj(); });
}

DiffPoly DiffPoly::subs_t_zero() const {
    return map_coeffs([](const CoeffSeries& c) { return c.subs_t_zero(); });
}

DiffPoly DiffPoly::subs_z_zero() const {
    return map_coeffs([](const CoeffSeries& c) { return c.subs_z_zero(); });
}

DiffPoly DiffPoly::subs_s(const Rat& r) const {
    return map_coeffs([&](const CoeffSeries& c) { return c.subs_s(r); });
}

DiffPoly DiffPoly::ds() const {
    return map_coeffs([](const CoeffSeries& c) { return c.ds(); });
}

DiffPoly DiffPoly::t_part(int j) const {
    return map_coeffs([&](const CoeffSeries& c) { return c.t_part(j); });
}

int DiffPoly::t_min() const {
    int m = 0;
    bool first = true;
    for (const auto& [mono, c] : terms_) {
        int tm = c.t_min();
        m = first ? tm : std::min(m, tm);
        first = false;
    }
    return m;
}

int DiffPoly::t_max() const {
    int m = 0;
    bool first = true;
    for (const auto& [mono, c] : terms_) {
        int tm = c.t_max();
        m = first ? tm : std::max(m, tm);
        first = false;
    }
    return m;
}

int DiffPoly::s_max_at_eps(int i) const {
    int m = 0;
    for (const auto& [mono, c] : terms_)
        m = std::max(m, c.s_max_at_eps(i));
    return m;
}

DiffPoly DiffPoly::involute_swap() const {
    if (kind_ == CtxKind::Reduced)
        throw Error(Errc::Internal, "involute_swap on the reduced algebra");
    DiffPoly p(kind_);
    p.order_ = order_;
    for (const auto& [m, c] : terms_) {
        Monomial m2;
        m2.factors.reserve(m.factors.size());
        for (const auto& [j, e] : m.factors) {
            JetVar j2 = j;
            if (j.gen == Gen::A || j.gen == Gen::W)
                j2.barred = !j.barred;
            m2.factors.emplace_back(j2, e);
        }
        std::sort(m2.factors.begin(), m2.factors.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        p.add_term(m2, c.conj());
    }
    return p;
}

bool DiffPoly::equal_to(const DiffPoly& a, const DiffPoly& b, int n) {
    if (a.order_ < n || b.order_ < n)
        return false;
    return (a - b).is_zero_to(n);
}

std::optional<DiffPoly::Location> DiffPoly::leading_entry() const {
    std::optional<Location> best;
    for (const auto& [m, c] : terms_) {
        const auto* lt = c.leading_term();
        if (!lt)
            continue;
        if (!best || lt->first.eps < best->key.eps)
            best = Location{m, lt->first, lt->second};
    }
    return best;
}

void GenSubst::set(const GenKey& g, const DiffPoly& image) {
    if (image.kind() != tgt_)
        throw Error(Errc::Internal, "substitution image in the wrong algebra");
    images_[g] = image;
    jet_cache_.clear();
    pow_cache_.clear();
}

const DiffPoly& GenSubst::image(const JetVar& j) const {
    auto it = jet_cache_.find(j);
    if (it != jet_cache_.end())
        return it->second;
    auto base = images_.find(gen_of(j));
    if (base == images_.end())
        throw Error(Errc::NotDefined, "no substitution image for a generator");
    DiffPoly img = base->second;
    if (j.order > 0) {
        JetVar below = j;
        below.order = static_cast<uint8_t>(j.order - 1);
        img = image(below).derive();
    }
    return jet_cache_.emplace(j, std::move(img)).first->second;
}

const DiffPoly& GenSubst::power(const JetVar& j, int e) const {
    auto key = std::make_pair(j.key(), e);
    auto it = pow_cache_.find(key);
    if (it != pow_cache_.end())
        return it->second;
    DiffPoly p = image(j).pow(e);
    return pow_cache_.emplace(key, std::move(p)).first->second;
}

DiffPoly GenSubst::apply(const DiffPoly& p, bool conj_coeffs) const {
    if (p.kind() != src_)
        throw Error(Errc::Internal, "substitution applied to the wrong algebra");
    DiffPoly out(tgt_);
    out.set_order(p.order());
    for (const auto& [m, c] : p.terms()) {
        DiffPoly term = DiffPoly::constant(tgt_, conj_coeffs ? c.conj() : c);
        for (const auto& [j, e] : m.factors)
            term = term * power(j, e);
        out += term;
    }
    return out;
}

}  // namespace eqtoda
