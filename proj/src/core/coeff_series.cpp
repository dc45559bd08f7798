#include "core/coeff_series.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace eqtoda {

namespace {
int clamp_order(long n) {
    return static_cast<int>(std::min<long>(n, CoeffSeries::kExact));
}
}  // namespace

CoeffSeries::CoeffSeries(const Rat& c, int order) : order_(order) {
    if (!c.is_zero() && order_ > 0)
        terms_.emplace(ParamKey{}, c);
}

CoeffSeries CoeffSeries::monomial(const ParamKey& k, const Rat& c, int order) {
    CoeffSeries r;
    r.order_ = order;
    if (!c.is_zero() && k.eps < order)
        r.terms_.emplace(k, c);
    return r;
}

CoeffSeries CoeffSeries::zero_at(int order) {
    CoeffSeries r;
    r.order_ = order;
    return r;
}

int CoeffSeries::val() const {
    int v = order_;
    for (const auto& [k, c] : terms_)
        v = std::min<int>(v, k.eps);
    return v;
}

bool CoeffSeries::has_param_dependence() const {
    for (const auto& [k, c] : terms_)
        if (!k.is_unit())
            return true;
    return false;
}

const Rat* CoeffSeries::single_rational() const {
    if (terms_.size() != 1)
        return nullptr;
    const auto& [k, c] = *terms_.begin();
    return k.is_unit() ? &c : nullptr;
}

const std::pair<const ParamKey, Rat>* CoeffSeries::single_term() const {
    return terms_.size() == 1 ? &*terms_.begin() : nullptr;
}

void CoeffSeries::add_term(const ParamKey& k, const Rat& c) {
    if (k.eps >= order_ || c.is_zero())
        return;
    auto [it, fresh] = terms_.emplace(k, c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

void CoeffSeries::drop_unknown() {
    for (auto it = terms_.begin(); it != terms_.end();)
        it = it->first.eps >= order_ ? terms_.erase(it) : std::next(it);
}

CoeffSeries& CoeffSeries::operator+=(const CoeffSeries& o) {
    order_ = std::min(order_, o.order_);
    drop_unknown();
    for (const auto& [k, c] : o.terms_)
        add_term(k, c);
    return *this;
}

CoeffSeries& CoeffSeries::operator-=(const CoeffSeries& o) {
    order_ = std::min(order_, o.order_);
    drop_unknown();
    for (const auto& [k, c] : o.terms_)
        add_term(k, -c);
    return *this;
}

CoeffSeries CoeffSeries::operator-() const {
    CoeffSeries r;
    r.order_ = order_;
    for (const auto& [k, c] : terms_)
        r.terms_.emplace(k, -c);
    return r;
}

CoeffSeries CoeffSeries::operator*(const CoeffSeries& o) const {
    CoeffSeries r;
    r.order_ = clamp_order(std::min<long>(static_cast<long>(order_) + o.val(),
                                          static_cast<long>(o.order_) + val()));
    for (const auto& [ka, ca] : terms_) {
        for (const auto& [kb, cb] : o.terms_) {
            ParamKey k;
            k.eps = static_cast<int16_t>(ka.eps + kb.eps);
            k.t = static_cast<int16_t>(ka.t + kb.t);
            k.s = static_cast<int16_t>(ka.s + kb.s);
            for (int i = 0; i < kMaxZ; ++i) {
                k.z[i] = static_cast<int16_t>(ka.z[i] + kb.z[i]);
                k.zb[i] = static_cast<int16_t>(ka.zb[i] + kb.zb[i]);
            }
            r.add_term(k, ca * cb);
        }
    }
    return r;
}

CoeffSeries CoeffSeries::scaled(const Rat& c) const {
    CoeffSeries r;
    r.order_ = order_;
    if (c.is_zero())
        return r;
    for (const auto& [k, v] : terms_)
        r.terms_.emplace(k, v * c);
    return r;
}

CoeffSeries CoeffSeries::mul_param(const ParamKey& m) const {
    CoeffSeries r;
    r.order_ = clamp_order(static_cast<long>(order_) + m.eps);
    for (const auto& [k, v] : terms_) {
        ParamKey k2 = k;
        k2.eps = static_cast<int16_t>(k.eps + m.eps);
        k2.t = static_cast<int16_t>(k.t + m.t);
        k2.s = static_cast<int16_t>(k.s + m.s);
        for (int i = 0; i < kMaxZ; ++i) {
            k2.z[i] = static_cast<int16_t>(k.z[i] + m.z[i]);
            k2.zb[i] = static_cast<int16_t>(k.zb[i] + m.zb[i]);
        }
        r.terms_.emplace(k2, v);
    }
    return r;
}

CoeffSeries CoeffSeries::mul_eps(int d) const {
    ParamKey m;
    m.eps = static_cast<int16_t>(d);
    return mul_param(m);
}

CoeffSeries CoeffSeries::truncated(int n) const {
    CoeffSeries r;
    r.order_ = std::min(order_, n);
    for (const auto& [k, v] : terms_)
        if (k.eps < r.order_)
            r.terms_.emplace(k, v);
    return r;
}

CoeffSeries CoeffSeries::inverted() const {
    // Require the shape c*(1 + n) with c a single invertible parameter monomial
    // of least eps-degree and n of strictly positive eps-valuation above it.
    if (terms_.empty())
        throw Error(Errc::NotAUnit, "inverse of zero coefficient");
    int v = val();
    const ParamKey* lead_key = nullptr;
    const Rat* lead_c = nullptr;
    for (const auto& [k, c] : terms_) {
        if (k.eps == v) {
            if (lead_key)
                throw Error(Errc::NotAUnit, "leading eps part is not a single monomial");
            lead_key = &k;
            lead_c = &c;
        }
    }
    for (int i = 0; i < kMaxZ; ++i)
        if (lead_key->z[i] != 0 || lead_key->zb[i] != 0)
            throw Error(Errc::NotAUnit, "leading coefficient involves z parameters");
    if (lead_key->s != 0)
        throw Error(Errc::NotAUnit, "leading coefficient involves s");

    ParamKey inv_key;
    inv_key.eps = static_cast<int16_t>(-lead_key->eps);
    inv_key.t = static_cast<int16_t>(-lead_key->t);
    CoeffSeries c_inv = monomial(inv_key, lead_c->inverse());
    CoeffSeries n = (*this * c_inv) - CoeffSeries(Rat(1));  // strictly positive val
    if (!n.is_zero() && n.val() <= 0)
        throw Error(Errc::NotAUnit, "remainder beyond the unit part is not O(eps)");
    if (!n.is_zero() && n.order() == kExact)
        throw Error(Errc::NotAUnit, "inverse is an infinite eps-series; truncate first");

    // geometric series: (1+n)^-1 = 1 - n + n^2 - ...
    CoeffSeries acc(Rat(1), n.order());
    CoeffSeries pw(Rat(1));
    for (int i = 1; i <= acc.order() && !pw.is_zero(); ++i) {
        pw = pw * n;
        acc += (i % 2 ? -pw : pw);
        if (!pw.is_zero() && pw.val() >= acc.order())
            break;
    }
    return acc * c_inv;
}

CoeffSeries CoeffSeries::conj() const {
    CoeffSeries r;
    r.order_ = order_;
    for (const auto& [k, c] : terms_) {
        ParamKey k2 = k;
        std::swap(k2.z, k2.zb);
        r.add_term(k2, k.t % 2 ? -c : c);
    }
    return r;
}

CoeffSeries CoeffSeries::subs_t_zero() const {
    CoeffSeries r;
    r.order_ = order_;
    for (const auto& [k, c] : terms_) {
        if (k.t < 0)
            throw Error(Errc::TPoleDetected, "t pole at t = 0");
        if (k.t == 0)
            r.terms_.emplace(k, c);
    }
    return r;
}

CoeffSeries CoeffSeries::subs_z_zero() const {
    CoeffSeries r;
    r.order_ = order_;
    for (const auto& [k, c] : terms_) {
        bool live = true;
        for (int i = 0; i < kMaxZ; ++i)
            if (k.z[i] != 0 || k.zb[i] != 0)
                live = false;
        if (live)
            r.terms_.emplace(k, c);
    }
    return r;
}

CoeffSeries CoeffSeries::subs_s(const Rat& v) const {
    CoeffSeries r;
    r.order_ = order_;
    for (const auto& [k, c] : terms_) {
        ParamKey k2 = k;
        k2.s = 0;
        r.add_term(k2, c * v.pow(k.s));
    }
    return r;
}

CoeffSeries CoeffSeries::ds() const {
    CoeffSeries r;
    r.order_ = order_;
    for (const auto& [k, c] : terms_) {
        if (k.s == 0)
            continue;
        ParamKey k2 = k;
        k2.s = static_cast<int16_t>(k.s - 1);
        r.add_term(k2, c * Rat(k.s));
    }
    return r;
}

CoeffSeries CoeffSeries::t_part(int j) const {
    CoeffSeries r;
    r.order_ = order_;
    for (const auto& [k, c] : terms_) {
        if (k.t != j)
            continue;
        ParamKey k2 = k;
        k2.t = 0;
        r.terms_.emplace(k2, c);
    }
    return r;
}

int CoeffSeries::t_min() const {
    int m = 0;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        m = first ? k.t : std::min<int>(m, k.t);
        first = false;
    }
    return m;
}

int CoeffSeries::t_max() const {
    int m = 0;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        m = first ? k.t : std::max<int>(m, k.t);
        first = false;
    }
    return m;
}

int CoeffSeries::s_max() const {
    int m = 0;
    for (const auto& [k, c] : terms_)
        m = std::max<int>(m, k.s);
    return m;
}

int CoeffSeries::s_max_at_eps(int i) const {
    int m = 0;
    for (const auto& [k, c] : terms_)
        if (k.eps == i)
            m = std::max<int>(m, k.s);
    return m;
}

bool CoeffSeries::equal_to(const CoeffSeries& a, const CoeffSeries& b, int n) {
    if (a.order_ < n || b.order_ < n)
        return false;
    CoeffSeries d = a - b;
    for (const auto& [k, c] : d.terms_)
        if (k.eps < n)
            return false;
    return true;
}

const std::pair<const ParamKey, Rat>* CoeffSeries::leading_term() const {
    const std::pair<const ParamKey, Rat>* best = nullptr;
    for (const auto& kv : terms_)
        if (!best || kv.first.eps < best->first.eps)
            best = &kv;
    return best;
}

}  // namespace eqtoda
