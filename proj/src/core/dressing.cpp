#include "core/dressing.hpp"

namespace eqtoda {

namespace {

void require_dressing(const AlgebraContext& ctx) {
    if (ctx.kind != CtxKind::DressingB)
        throw Error(Errc::Internal, "dressing operators need the w-extended algebra");
}

DiffPoly wgen(const AlgebraContext& ctx, int k) {
    return DiffPoly::generator(ctx.kind, jet_w(static_cast<uint8_t>(k)));
}

}  // namespace

std::vector<DiffPoly> w_star_upto(const AlgebraContext& ctx, int upto) {
    require_dressing(ctx);
    const int len = ctx.eps_order + 1;
    std::vector<DiffPoly> ws;
    ws.reserve(upto + 1);
    ws.push_back(DiffPoly::constant(ctx.kind, Rat(1)));
    // w*_k = -w_k - sum_{j=1}^{k-1} (E^{(k-j)/2} w_j)(E^{-j/2} w*_{k-j})
    for (int k = 1; k <= upto; ++k) {
        DiffPoly acc = wgen(ctx, k);
        for (int j = 1; j < k; ++j) {
            DiffPoly lhs = ShiftSeries::e_shift(k - j, len).apply(wgen(ctx, j));
            DiffPoly rhs = ShiftSeries::e_shift(-j, len).apply(ws[k - j]);
            acc += lhs * rhs;
        }
        ws.push_back(-acc);
    }
    return ws;
}

DiffOp dressing_w(const AlgebraContext& ctx) {
    require_dressing(ctx);
    DiffOp W = DiffOp::identity(ctx);
    for (int k = 1; k <= ctx.max_k; ++k)
        W.set_coefficient(-k, wgen(ctx, k));
    W.clear_zero_below();
    return W;
}

DiffOp dressing_w_inverse(const AlgebraContext& ctx) {
    require_dressing(ctx);
    std::vector<DiffPoly> ws = w_star_upto(ctx, ctx.max_k);
    DiffOp X = DiffOp::identity(ctx);
    for (int k = 1; k <= ctx.max_k; ++k)
        X.set_coefficient(-k, ws[k]);
    X.clear_zero_below();
    return X;
}

Dressing make_dressing(const AlgebraContext& ctx) {
    require_dressing(ctx);
    DiffOp W = dressing_w(ctx);
    DiffOp Winv = dressing_w_inverse(ctx);
    DiffOp Wbar = W.bar();
    DiffOp Wbarinv = Winv.bar();  // the involution is an anti-isomorphism
    DiffOp L = (W * DiffOp::lambda_power(ctx, 1)) * Winv;
    DiffOp qlam = DiffOp::single(ctx, -1, DiffPoly::generator(ctx.kind, jet_q()));
    DiffOp Lbar = (Wbarinv * qlam) * Wbar;
    return Dressing{ctx, std::move(W), std::move(Winv), std::move(Wbar),
                    std::move(Wbarinv), std::move(L), std::move(Lbar)};
}

DiffOp ell_direct(const Dressing& d) {
    return (d.W.derive_coeffs() * d.Winv).mul_eps(1);
}

FracPower frac_power(const AlgebraContext& ctx, int upto) {
    require_dressing(ctx);
    const int len = ctx.eps_order + 1;
    std::vector<DiffPoly> ws = w_star_upto(ctx, upto);
    FracPower fp{ctx, {}};
    fp.a.push_back(DiffPoly::constant(ctx.kind, Rat(1)));
    for (int k = 1; k <= upto; ++k) {
        DiffPoly acc = shift_formal(wgen(ctx, k), 0, -1, len);
        for (int j = 1; j < k; ++j)
            acc += shift_formal(wgen(ctx, j), k - j, -1, len) *
                   shift_formal(ws[k - j], -j, 1, len);
        acc += shift_formal(ws[k], 0, 1, len);
        fp.a.push_back(std::move(acc));
    }
    return fp;
}

std::vector<DiffPoly> frac_power_ode_residuals(const FracPower& fp, const DiffOp& ell) {
    const int len = fp.ctx.eps_order + 1;
    std::vector<DiffPoly> res;
    for (int k = 1; k < static_cast<int>(fp.a.size()); ++k) {
        DiffPoly acc = fp.a[k].ds();
        for (int j = 0; j < k; ++j) {
            const DiffPoly& b = ell.coefficient(j - k);
            DiffPoly term = shift_formal(b, -j, 1, len) * shift_formal(fp.a[j], k - j, 0, len) +
                            shift_formal(b, j, -1, len) * shift_formal(fp.a[j], j - k, 0, len);
            acc += term.scaled(Rat(1, 2));
        }
        res.push_back(std::move(acc));
    }
    return res;
}

GenSubst embedding_map(const AlgebraContext& free_ctx, const Dressing& d) {
    if (free_ctx.kind != CtxKind::FreeA || free_ctx.max_k > d.ctx.max_k)
        throw Error(Errc::Internal, "embedding needs a free algebra no deeper than the dressing");
    GenSubst subst(CtxKind::FreeA, CtxKind::DressingB);
    subst.set(GenKey{Gen::Q, false, 0}, DiffPoly::generator(CtxKind::DressingB, jet_q()));
    for (int k = 1; k <= free_ctx.max_k; ++k) {
        DiffPoly ak = d.L.coefficient(1 - k);
        subst.set(GenKey{Gen::A, false, static_cast<uint8_t>(k)}, ak);
        subst.set(GenKey{Gen::A, true, static_cast<uint8_t>(k)}, ak.involute_swap());
    }
    return subst;
}

}  // namespace eqtoda
