#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace eqtoda {

/** Generator families.  Indexed families (A, W) carry an index >= 1; Q, U, V
 *  always have index 0.  Q is the only generator whose order-0 jet may appear
 *  with negative exponents. */
enum class Gen : uint8_t { Q, U, V, A, W };

enum class CtxKind : uint8_t {
    FreeA,      // free differential algebra on q and the a_k (localized at q)
    DressingB,  // extension by the dressing coefficients w_k
    Reduced,    // q, u, v with the derivation rule dq = q*u_1
};

struct JetVar {
    Gen gen = Gen::Q;
    bool barred = false;
    uint8_t index = 0;
    uint8_t order = 0;

    uint32_t key() const {
        return (uint32_t(gen) << 24) | (uint32_t(barred) << 16) |
               (uint32_t(index) << 8) | uint32_t(order);
    }
    friend bool operator==(const JetVar& a, const JetVar& b) { return a.key() == b.key(); }
    friend auto operator<=>(const JetVar& a, const JetVar& b) { return a.key() <=> b.key(); }

    JetVar raised(int d) const {
        JetVar j = *this;
        j.order = static_cast<uint8_t>(j.order + d);
        return j;
    }
    bool is_q0() const { return gen == Gen::Q && order == 0; }
};

inline JetVar jet_q(uint8_t order = 0) { return JetVar{Gen::Q, false, 0, order}; }
inline JetVar jet_u(uint8_t order = 0) { return JetVar{Gen::U, false, 0, order}; }
inline JetVar jet_v(uint8_t order = 0) { return JetVar{Gen::V, false, 0, order}; }
inline JetVar jet_a(uint8_t index, bool barred = false, uint8_t order = 0) {
    return JetVar{Gen::A, barred, index, order};
}
inline JetVar jet_w(uint8_t index, bool barred = false, uint8_t order = 0) {
    return JetVar{Gen::W, barred, index, order};
}

/** Read-only description of the ambient differential algebra.  Passed
 *  explicitly; there is no global state.  eps_order is the working truncation
 *  for every operator series built in this context. */
struct AlgebraContext {
    CtxKind kind;
    int max_k;      // highest tracked index for a_k / w_k
    int eps_order;  // working eps truncation

    friend bool operator==(const AlgebraContext& a, const AlgebraContext& b) {
        return a.kind == b.kind && a.max_k == b.max_k && a.eps_order == b.eps_order;
    }

    bool allows(const JetVar& j) const {
        switch (kind) {
            case CtxKind::FreeA:
                return (j.gen == Gen::Q && !j.barred && j.index == 0) ||
                       (j.gen == Gen::A && j.index >= 1);
            case CtxKind::DressingB:
                return (j.gen == Gen::Q && !j.barred && j.index == 0) ||
                       (j.gen == Gen::W && j.index >= 1);
            case CtxKind::Reduced:
                // dq rewrites to q*u_1, so q has no higher jets here
                return (j.gen == Gen::Q && !j.barred && j.index == 0 && j.order == 0) ||
                       (j.gen == Gen::U && !j.barred && j.index == 0) ||
                       (j.gen == Gen::V && !j.barred && j.index == 0);
        }
        return false;
    }
};

inline AlgebraContext ctx_free_a(int max_k, int eps_order) {
    return AlgebraContext{CtxKind::FreeA, max_k, eps_order};
}
inline AlgebraContext ctx_dressing_b(int max_k, int eps_order) {
    return AlgebraContext{CtxKind::DressingB, max_k, eps_order};
}
inline AlgebraContext ctx_reduced(int eps_order) {
    return AlgebraContext{CtxKind::Reduced, 0, eps_order};
}

/** Power product of jet variables, sorted by key.  Exponents are nonzero and
 *  positive except for the order-0 q factor, which may be negative. */
struct Monomial {
    std::vector<std::pair<JetVar, int>> factors;

    friend bool operator==(const Monomial& a, const Monomial& b) {
        return a.factors == b.factors;
    }
    friend bool operator<(const Monomial& a, const Monomial& b) {
        return a.factors < b.factors;
    }

    bool empty() const { return factors.empty(); }
    int exponent_of(const JetVar& j) const;
    int q_exponent() const { return exponent_of(jet_q(0)); }
    /** Total degree in jet variables, q excluded. */
    int jet_weight() const;
    bool has_jets() const;  // any factor besides the order-0 q?
    Monomial with(const JetVar& j, int delta) const;  // adjust one exponent
};

inline int Monomial::exponent_of(const JetVar& j) const {
    for (const auto& [v, e] : factors)
        if (v == j)
            return e;
    return 0;
}

inline int Monomial::jet_weight() const {
    int w = 0;
    for (const auto& [v, e] : factors)
        if (!v.is_q0())
            w += e;
    return w;
}

inline bool Monomial::has_jets() const {
    for (const auto& [v, e] : factors)
        if (!v.is_q0())
            return true;
    return false;
}

inline Monomial Monomial::with(const JetVar& j, int delta) const {
    Monomial m;
    m.factors.reserve(factors.size() + 1);
    bool placed = false;
    for (const auto& [v, e] : factors) {
        if (v == j) {
            int e2 = e + delta;
            if (e2 != 0)
                m.factors.emplace_back(v, e2);
            placed = true;
        } else {
            if (!placed && j < v) {
                if (delta != 0)
                    m.factors.emplace_back(j, delta);
                placed = true;
            }
            m.factors.emplace_back(v, e);
        }
    }
    if (!placed && delta != 0)
        m.factors.emplace_back(j, delta);
    return m;
}

}  // namespace eqtoda
