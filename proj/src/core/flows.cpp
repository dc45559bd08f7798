#include "core/flows.hpp"

#include <algorithm>
#include <array>
#include <set>

namespace eqtoda {

Lax::Lax(DiffOp l, DiffOp lbar) : l_(std::move(l)), lbar_(std::move(lbar)) {
    if (!(l_.ctx() == lbar_.ctx()))
        throw Error(Errc::Internal, "Lax pair must share one algebra context");
}

const DiffOp& Lax::power(int n) const {
    if (n < 0)
        throw Error(Errc::Internal, "Lax powers are cached for n >= 0 only");
    auto it = pow_.find(n);
    if (it != pow_.end())
        return it->second;
    DiffOp value = (n == 0) ? DiffOp::identity(ctx()) : power(n - 1) * l_;
    return pow_.emplace(n, std::move(value)).first->second;
}

const DiffOp& Lax::bar_power(int n) const {
    if (n < 0)
        throw Error(Errc::Internal, "Lax powers are cached for n >= 0 only");
    auto it = bar_pow_.find(n);
    if (it != bar_pow_.end())
        return it->second;
    DiffOp value = (n == 0) ? DiffOp::identity(ctx()) : bar_power(n - 1) * lbar_;
    return bar_pow_.emplace(n, std::move(value)).first->second;
}

Lax make_free_lax(const AlgebraContext& ctx) {
    if (ctx.kind != CtxKind::FreeA)
        throw Error(Errc::Internal, "abstract Lax pair lives in the free algebra");
    DiffOp L = DiffOp::lambda_power(ctx, 1);
    for (int k = 1; k <= ctx.max_k; ++k)
        L.set_coefficient(1 - k,
                          DiffPoly::generator(ctx.kind, jet_a(static_cast<uint8_t>(k))));
    L.clear_zero_below();
    return Lax(L, L.bar());
}

DiffOp b_op(const Lax& lax, int n) { return lax.power(n).proj_plus().mul_eps(-1); }

DiffOp c_op(const Lax& lax, int n) {
    return lax.bar_power(n).proj_minus().mul_eps(-1).scaled(Rat(-1));
}

void Derivation::set_image(const GenKey& g, DiffPoly image) {
    if (image.kind() != ctx_.kind)
        throw Error(Errc::Internal, "derivation image from a foreign algebra");
    images_[g] = std::move(image);
    jet_cache_.clear();
}

const DiffPoly& Derivation::image(const GenKey& g) const {
    auto it = images_.find(g);
    if (it == images_.end())
        throw Error(Errc::NotDefined, "derivation has no image for a generator");
    return it->second;
}

const DiffPoly& Derivation::jet_image(const JetVar& j) const {
    auto it = jet_cache_.find(j);
    if (it != jet_cache_.end())
        return it->second;
    DiffPoly im = (j.order == 0) ? image(gen_of(j)) : jet_image(j.raised(-1)).derive();
    return jet_cache_.emplace(j, std::move(im)).first->second;
}

DiffPoly Derivation::apply(const DiffPoly& p) const {
    std::set<JetVar> support;
    for (const auto& [m, c] : p.terms())
        for (const auto& [v, e] : m.factors)
            support.insert(v);
    DiffPoly out(ctx_.kind);
    for (const JetVar& v : support) {
        const DiffPoly& im = jet_image(v);
        if (im.is_zero())
            continue;
        out += p.partial(v) * im;
    }
    // The eps-tail of p beyond its validity order is unknown, so its image is too.
    if (p.order() < out.order())
        out.set_order(p.order());
    return out;
}

bool Derivation::covers(const DiffPoly& p) const {
    for (const auto& [m, c] : p.terms())
        for (const auto& [v, e] : m.factors)
            if (images_.count(gen_of(v)) == 0)
                return false;
    return true;
}

DiffOp Derivation::apply(const DiffOp& op) const {
    // Generators without an image poison their coefficient; those sit at the
    // extreme degrees of a truncated operator, so keep the largest contiguous
    // top segment and mark the rest as undetermined.
    const Window& w = op.window();
    int cut = w.lo;
    for (int k = w.hi; k >= w.lo; --k) {
        if (!op.determined(k) || !covers(op.coefficient(k))) {
            cut = k + 1;
            break;
        }
    }
    DiffOp base = (cut > w.lo) ? op.restricted(cut, w.hi) : op;
    return base.map_coeffs([this](const DiffPoly& p) { return apply(p); });
}

DiffPoly Derivation::commutator_apply(const Derivation& o, const DiffPoly& p) const {
    return apply(o.apply(p)) - o.apply(apply(p));
}

namespace {

/** eps^{-1} [A, X] with the regularity of the commutator checked. */
DiffOp eps_inv_commutator(const DiffOp& a, const DiffOp& x) {
    return (a * x - x * a).div_eps_checked(1);
}

}  // namespace

Derivation free_flow(const Lax& lax, int n, bool barred) {
    const AlgebraContext& ctx = lax.ctx();
    if (ctx.kind != CtxKind::FreeA)
        throw Error(Errc::Internal, "free_flow needs the free Lax algebra");
    // The two Lax equations: d_n L = [B_n, L] with eps B_n = L^n_+, and
    // dbar_n L = [C_n, L] with eps C_n = -Lbar^n_-; the second sign comes from
    // (dbar_n W) W^{-1} = C_n, so the commutator below runs operator-first.
    DiffOp plus = lax.power(n).proj_plus();
    DiffOp minus = lax.bar_power(n).proj_minus();
    DiffOp d_l = eps_inv_commutator(plus, lax.l());
    DiffOp dbar_l = eps_inv_commutator(lax.l(), minus);
    Derivation der(ctx);
    for (int k = 1; k <= ctx.max_k; ++k) {
        const DiffOp& straight = barred ? dbar_l : d_l;
        const DiffOp& swapped = barred ? d_l : dbar_l;
        if (straight.determined(1 - k))
            der.set_image(GenKey{Gen::A, false, static_cast<uint8_t>(k)},
                          straight.coefficient(1 - k));
        if (swapped.determined(1 - k))
            der.set_image(GenKey{Gen::A, true, static_cast<uint8_t>(k)},
                          swapped.coefficient(1 - k).involute_swap());
    }
    DiffOp d_lbar = barred ? eps_inv_commutator(lax.lbar(), minus)
                           : eps_inv_commutator(plus, lax.lbar());
    der.set_image(GenKey{Gen::Q, false, 0}, d_lbar.coefficient(-1));
    return der;
}

Derivation dressing_flow(const Dressing& d, const Lax& lax, int n, bool barred) {
    const AlgebraContext& ctx = d.ctx;
    if (!(lax.ctx() == ctx) || ctx.kind != CtxKind::DressingB)
        throw Error(Errc::Internal, "dressing_flow needs the dressed Lax pair");
    // Images of the opposite-side coefficients keep a genuine eps pole (the
    // conjugate tail starts at order eps^0), so divide without a regularity
    // check; the poles cancel in any combination that lies in the embedded
    // subalgebra.
    DiffOp straight_w =
        ((barred ? lax.bar_power(n) : lax.power(n)).proj_minus() * d.W)
            .mul_eps(-1)
            .scaled(Rat(-1));
    DiffOp swapped_w =
        ((barred ? lax.power(n) : lax.bar_power(n)).proj_minus() * d.W)
            .mul_eps(-1)
            .scaled(Rat(-1));
    Derivation der(ctx);
    for (int k = 1; k <= ctx.max_k; ++k) {
        if (straight_w.determined(-k))
            der.set_image(GenKey{Gen::W, false, static_cast<uint8_t>(k)},
                          straight_w.coefficient(-k));
        if (swapped_w.determined(-k))
            der.set_image(GenKey{Gen::W, true, static_cast<uint8_t>(k)},
                          swapped_w.coefficient(-k).involute_swap());
    }
    DiffOp d_lbar = barred ? eps_inv_commutator(d.Lbar, lax.bar_power(n).proj_minus())
                           : eps_inv_commutator(lax.power(n).proj_plus(), d.Lbar);
    der.set_image(GenKey{Gen::Q, false, 0}, d_lbar.coefficient(-1));
    return der;
}

std::vector<DiffPoly> ell_b_upto(const Lax& lax, int upto) {
    const AlgebraContext& ctx = lax.ctx();
    const int len = ctx.eps_order + 1;
    std::vector<DiffPoly> b;
    b.reserve(upto + 1);
    b.push_back(DiffPoly(ctx.kind));
    for (int n = 1; n <= upto; ++n) {
        DiffPoly rhs = ShiftSeries::p_series(len).apply(lax.p(0, n));
        for (int k = 1; k < n; ++k)
            rhs += ShiftSeries::bracket(k, len).apply(b[k] * lax.p(k, n));
        b.push_back(-ShiftSeries::bracket_inv(n, len).apply(rhs));
    }
    return b;
}

DiffOp ell_recursive(const Lax& lax, int depth) {
    std::vector<DiffPoly> b = ell_b_upto(lax, depth);
    DiffOp ell = DiffOp::zero(lax.ctx());
    for (int k = depth; k >= 1; --k)
        ell.set_coefficient(-k, b[k]);
    ell.clear_zero_below();
    return ell;
}

namespace {

IdentityReport fail_at_entry(std::string note, const DiffPoly& residual) {
    IdentityReport r;
    r.ok = false;
    r.note = std::move(note);
    if (auto loc = residual.leading_entry()) {
        r.where.mono = loc->mono;
        r.where.key = loc->key;
        r.where.diff = loc->coeff;
    }
    return r;
}

bool zc_op_check(IdentityReport& out, std::string note, const DiffOp& a, const DiffOp& b,
                 int eps_order) {
    int na = std::min({a.min_coeff_order(), b.min_coeff_order(), eps_order});
    DiffOp::Mismatch where;
    if (na >= 1 && DiffOp::equal_on_overlap(a, b, na, &where))
        return true;
    out.ok = false;
    out.note = std::move(note) + (na < 1 ? " (insufficient eps order)" : "");
    out.where = where;
    return false;
}

}  // namespace

IdentityReport zakharov_shabat_check(int m, int n, bool n_barred, int eps_order) {
    IdentityReport out;
    Lax lax = make_free_lax(ctx_free_a(m + n + 4, eps_order));
    auto bracket = [](const DiffOp& a, const DiffOp& b) { return a * b - b * a; };
    std::string tag = " (" + std::to_string(m) + "," + std::to_string(n) +
                      (n_barred ? "bar)" : ")");
    if (!n_barred) {
        Derivation dm = free_flow(lax, m, false);
        Derivation dn = free_flow(lax, n, false);
        DiffOp bm = b_op(lax, m), bn = b_op(lax, n);
        zc_op_check(out, "d_m B_n - d_n B_m = [B_m, B_n]" + tag,
                    dm.apply(bn) - dn.apply(bm), bracket(bm, bn), eps_order);
        return out;
    }
    Derivation dm = free_flow(lax, m, false);
    Derivation dbar_m = free_flow(lax, m, true);
    Derivation dbar_n = free_flow(lax, n, true);
    DiffOp bm = b_op(lax, m);
    DiffOp cm = c_op(lax, m), cn = c_op(lax, n);
    if (!zc_op_check(out, "d_m C_n - dbar_n B_m = [B_m, C_n]" + tag,
                     dm.apply(cn) - dbar_n.apply(bm), bracket(bm, cn), eps_order))
        return out;
    zc_op_check(out, "dbar_m C_n - dbar_n C_m = [C_m, C_n]" + tag,
                dbar_m.apply(cn) - dbar_n.apply(cm), bracket(cm, cn), eps_order);
    return out;
}

IdentityReport flow_commute_check(int m, int n, bool n_barred, int eps_order) {
    IdentityReport out;
    const AlgebraContext ctx = ctx_free_a(m + n + 4, eps_order);
    Lax lax = make_free_lax(ctx);
    Derivation dm = free_flow(lax, m, false);
    Derivation dn = free_flow(lax, n, n_barred);
    std::array<JetVar, 3> gens = {jet_a(1), jet_a(2), jet_q()};
    for (const JetVar& g : gens) {
        DiffPoly r = dm.commutator_apply(dn, DiffPoly::generator(ctx.kind, g));
        int na = std::min(r.order(), eps_order);
        std::string note = "[d_" + std::to_string(m) + ", d" + (n_barred ? "bar_" : "_") +
                           std::to_string(n) + "] on a generator";
        if (na < 1) {
            out.ok = false;
            out.note = note + " (insufficient eps order)";
            return out;
        }
        if (r.is_zero_to(na))
            continue;
        out = fail_at_entry(std::move(note), r);
        return out;
    }
    return out;
}

}  // namespace eqtoda
