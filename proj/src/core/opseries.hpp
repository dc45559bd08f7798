#pragma once

#include <vector>

#include "core/diffpoly.hpp"

namespace eqtoda {

/** Truncated series  (d/dx)^dx * sum_{j<len} c_j (eps d/dx)^j  with exact
 *  rational coefficients.  Covers the shift operators E^{m/2} = exp(m eps d/dx / 2),
 *  nabla, P = nabla^{-1} d, its inverse and the bracket series [k]. */
class ShiftSeries {
  public:
    ShiftSeries(int dx, std::vector<Rat> c) : dx_(dx), c_(std::move(c)) {}

    static ShiftSeries identity(int len);
    /** E^{m/2} for integer m (m half-steps of the lattice shift). */
    static ShiftSeries e_shift(int m, int len);
    /** nabla = (E^{1/2} - E^{-1/2})/eps = d/dx * sinh(y/2)/(y/2), y = eps d/dx. */
    static ShiftSeries nabla(int len);
    /** P = nabla^{-1} d/dx = (y/2)/sinh(y/2): 1, 0, -1/24, 0, 7/5760, ... */
    static ShiftSeries p_series(int len);
    /** P^{-1} = sinh(y/2)/(y/2). */
    static ShiftSeries p_inv_series(int len);
    /** [k] = sinh(k y/2)/sinh(y/2); [0] = 0, [-k] = -[k]. */
    static ShiftSeries bracket(int k, int len);
    /** [k]^{-1}; throws ZeroBracket for k = 0. */
    static ShiftSeries bracket_inv(int k, int len);

    int dx() const { return dx_; }
    int len() const { return static_cast<int>(c_.size()); }
    const std::vector<Rat>& coeffs() const { return c_; }

    ShiftSeries compose(const ShiftSeries& o) const;  // this after o
    ShiftSeries scaled(const Rat& r) const;
    friend ShiftSeries operator+(const ShiftSeries& a, const ShiftSeries& b);

    DiffPoly apply(const DiffPoly& p) const;

  private:
    int dx_;
    std::vector<Rat> c_;
};

/** [p, p', p'', ...] up to n derivatives inclusive. */
std::vector<DiffPoly> derivative_tower(const DiffPoly& p, int n);

/** E^{(a + b s)/2} p with formal s in the exponent:
 *  sum_j ((a + b s)/2)^j / j! * eps^j * p^(j), truncated at eps-length len. */
DiffPoly shift_formal(const DiffPoly& p, int a, int b, int len);
DiffPoly shift_formal_tower(const std::vector<DiffPoly>& tower, int a, int b, int len);

/** Bar involution of the reduced algebra: v -> v - t P u, u -> u, q -> q,
 *  t -> -t, z <-> zbar.  An involution exactly at truncation `len`. */
DiffPoly reduced_involute(const DiffPoly& p, int len);

}  // namespace eqtoda
