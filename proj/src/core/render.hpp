#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "core/diffop.hpp"

namespace eqtoda {

/** Canonical text forms.  Jets print as D{n}[{gen}] with a bar suffix ~,
 *  parameters as eps, t, s, z1.., zb1.., rationals as p/q; factors of a term
 *  join with '*', terms with ' + ' / ' - '.  Term order follows the stored
 *  map order, so rendering is deterministic.  parse_poly reads the same
 *  grammar back. */
std::string render_coeff(const CoeffSeries& c);
std::string render_poly(const DiffPoly& p);
/** sum of (poly) * L^k lines, leading degree first, window annotated. */
std::string render_op(const DiffOp& op);
std::string render_functional(const DiffPoly& density);  // int( ... ) dx

std::string render_coeff_latex(const CoeffSeries& c);
std::string render_poly_latex(const DiffPoly& p);
std::string render_op_latex(const DiffOp& op);
std::string render_functional_latex(const DiffPoly& density);

/** Operator split into per-degree rendered coefficients, leading degree
 *  first (the machine-readable form of render_op). */
struct OpEntry {
    int degree = 0;
    std::string poly;
};
std::vector<OpEntry> op_entries(const DiffOp& op, bool latex = false);

/** One-line location of an offending coefficient entry. */
std::string render_mismatch(const DiffOp::Mismatch& mm);

/** Inverse of render_poly on its canonical output; accepts redundant
 *  whitespace and an optional leading sign.  Throws ParseError. */
DiffPoly parse_poly(CtxKind kind, std::string_view text);

}  // namespace eqtoda
