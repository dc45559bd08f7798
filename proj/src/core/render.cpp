#include "core/render.hpp"

#include <cctype>

namespace eqtoda {

namespace {

std::string gen_name(const JetVar& j) {
    std::string s;
    switch (j.gen) {
        case Gen::Q: s = "q"; break;
        case Gen::U: s = "u"; break;
        case Gen::V: s = "v"; break;
        case Gen::A: s = "a" + std::to_string(j.index); break;
        case Gen::W: s = "w" + std::to_string(j.index); break;
    }
    if (j.barred)
        s += "~";
    return s;
}

std::string jet_text(const JetVar& j) {
    return "D" + std::to_string(j.order) + "[" + gen_name(j) + "]";
}

std::string param_text(const ParamKey& k) {
    std::string out;
    auto factor = [&out](const char* name, int e) {
        if (e == 0)
            return;
        if (!out.empty())
            out += "*";
        out += name;
        if (e != 1)
            out += "^" + std::to_string(e);
    };
    factor("eps", k.eps);
    factor("t", k.t);
    factor("s", k.s);
    for (int i = 0; i < kMaxZ; ++i)
        factor(("z" + std::to_string(i + 1)).c_str(), k.z[i]);
    for (int i = 0; i < kMaxZ; ++i)
        factor(("zb" + std::to_string(i + 1)).c_str(), k.zb[i]);
    return out;
}

std::string mono_text(const Monomial& m) {
    std::string out;
    for (const auto& [j, e] : m.factors) {
        if (!out.empty())
            out += "*";
        out += jet_text(j);
        if (e != 1)
            out += "^" + std::to_string(e);
    }
    return out;
}

/** One additive term: magnitude coefficient, parameter and jet factors. */
std::string term_text(const Rat& c, const ParamKey& k, const Monomial& m) {
    Rat mag = c.sign() < 0 ? -c : c;
    std::string rest = param_text(k);
    std::string jets = mono_text(m);
    if (!jets.empty())
        rest += (rest.empty() ? "" : "*") + jets;
    if (rest.empty())
        return mag.str();
    if (mag.is_one())
        return rest;
    return mag.str() + "*" + rest;
}

void join_term(std::string& out, int sign, const std::string& body) {
    if (out.empty())
        out = (sign < 0 ? "-" : "") + body;
    else
        out += (sign < 0 ? " - " : " + ") + body;
}

std::string gen_latex(const JetVar& j) {
    std::string base;
    switch (j.gen) {
        case Gen::Q: base = "q"; break;
        case Gen::U: base = "u"; break;
        case Gen::V: base = "v"; break;
        case Gen::A: base = "a_{" + std::to_string(j.index) + "}"; break;
        case Gen::W: base = "w_{" + std::to_string(j.index) + "}"; break;
    }
    if (j.barred)
        base = "\\bar " + base;
    if (j.order == 0)
        return base;
    if (j.order == 1)
        return "\\partial " + base;
    return "\\partial^{" + std::to_string(j.order) + "} " + base;
}

std::string rat_latex(const Rat& c) {
    if (c.is_integer())
        return c.str();
    Rat mag = c.sign() < 0 ? -c : c;
    std::string f = "\\frac{" + std::to_string(mag.num_long()) + "}{" +
                    std::to_string(mag.den_long()) + "}";
    return c.sign() < 0 ? "-" + f : f;
}

std::string param_latex(const ParamKey& k) {
    std::string out;
    auto factor = [&out](std::string name, int e) {
        if (e == 0)
            return;
        if (!out.empty())
            out += " ";
        out += name;
        if (e != 1)
            out += "^{" + std::to_string(e) + "}";
    };
    factor("\\varepsilon", k.eps);
    factor("t", k.t);
    factor("s", k.s);
    for (int i = 0; i < kMaxZ; ++i)
        factor("z_{" + std::to_string(i + 1) + "}", k.z[i]);
    for (int i = 0; i < kMaxZ; ++i)
        factor("\\bar z_{" + std::to_string(i + 1) + "}", k.zb[i]);
    return out;
}

std::string mono_latex(const Monomial& m) {
    std::string out;
    for (const auto& [j, e] : m.factors) {
        if (!out.empty())
            out += " ";
        std::string f = gen_latex(j);
        if (e != 1) {
            if (j.order > 0)
                f = "(" + f + ")";
            f += "^{" + std::to_string(e) + "}";
        }
        out += f;
    }
    return out;
}

std::string term_latex(const Rat& c, const ParamKey& k, const Monomial& m) {
    Rat mag = c.sign() < 0 ? -c : c;
    std::string rest = param_latex(k);
    std::string jets = mono_latex(m);
    if (!jets.empty())
        rest += (rest.empty() ? "" : " ") + jets;
    if (rest.empty())
        return rat_latex(mag);
    if (mag.is_one())
        return rest;
    return rat_latex(mag) + " " + rest;
}

template <typename TermFn>
std::string poly_string(const DiffPoly& p, TermFn term) {
    std::string out;
    for (const auto& [m, c] : p.terms())
        for (const auto& [k, r] : c.terms())
            join_term(out, r.sign(), term(r, k, m));
    return out.empty() ? "0" : out;
}

template <typename PolyFn>
std::string op_string(const DiffOp& op, PolyFn poly, const char* sym, bool braces) {
    const Window& w = op.window();
    std::string out;
    for (int k = w.hi; k >= w.lo; --k) {
        if (!out.empty())
            out += " + ";
        std::string e = std::to_string(k);
        if (op.s_offset())
            e = k == 0 ? "s" : (k > 0 ? "s+" + e : "s" + e);
        out += "(" + poly(op.coefficient(k)) + ") * " + sym +
               (braces ? "^{" + e + "}" : "^" + e);
    }
    if (out.empty())
        out = "0";
    out += "  [window " + std::to_string(w.lo) + ".." + std::to_string(w.hi);
    if (!w.zero_below)
        out += ", open below";
    if (!w.zero_above)
        out += ", open above";
    return out + "]";
}

}  // namespace

std::string render_coeff(const CoeffSeries& c) {
    std::string out;
    for (const auto& [k, r] : c.terms())
        join_term(out, r.sign(), term_text(r, k, Monomial{}));
    return out.empty() ? "0" : out;
}

std::string render_poly(const DiffPoly& p) { return poly_string(p, term_text); }

std::string render_op(const DiffOp& op) {
    return op_string(op, [](const DiffPoly& p) { return render_poly(p); }, "L", false);
}

std::string render_functional(const DiffPoly& density) {
    return "int( " + render_poly(density) + " ) dx";
}

std::string render_coeff_latex(const CoeffSeries& c) {
    std::string out;
    for (const auto& [k, r] : c.terms())
        join_term(out, r.sign(), term_latex(r, k, Monomial{}));
    return out.empty() ? "0" : out;
}

std::string render_poly_latex(const DiffPoly& p) { return poly_string(p, term_latex); }

std::string render_op_latex(const DiffOp& op) {
    return op_string(op, [](const DiffPoly& p) { return render_poly_latex(p); },
                     "\\Lambda", true);
}

std::string render_functional_latex(const DiffPoly& density) {
    return "\\int " + render_poly_latex(density) + " \\, dx";
}

std::vector<OpEntry> op_entries(const DiffOp& op, bool latex) {
    std::vector<OpEntry> out;
    const Window& w = op.window();
    for (int k = w.hi; k >= w.lo; --k)
        out.push_back({k, latex ? render_poly_latex(op.coefficient(k))
                                : render_poly(op.coefficient(k))});
    return out;
}

std::string render_mismatch(const DiffOp::Mismatch& mm) {
    return "L^" + std::to_string(mm.degree) + " @ " +
           term_text(Rat(1), mm.key, mm.mono) + " -> " + mm.diff.str();
}

namespace {

/** Recursive-descent reader for the canonical polynomial grammar. */
class PolyReader {
  public:
    PolyReader(CtxKind kind, std::string_view text) : kind_(kind), in_(text) {}

    DiffPoly read() {
        DiffPoly out(kind_);
        skip_space();
        if (at_end())
            fail("empty expression");
        int sign = read_sign(true);
        out += term(sign);
        skip_space();
        while (!at_end()) {
            int s = read_sign(false);
            out += term(s);
            skip_space();
        }
        return out;
    }

  private:
    [[noreturn]] void fail(const std::string& what) {
        throw Error(Errc::ParseError,
                    what + " at position " + std::to_string(pos_) + " in '" +
                        std::string(in_) + "'");
    }

    bool at_end() const { return pos_ >= in_.size(); }
    char peek() const { return at_end() ? '\0' : in_[pos_]; }
    void skip_space() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(in_[pos_])))
            ++pos_;
    }

    int read_sign(bool optional) {
        skip_space();
        if (peek() == '+') {
            ++pos_;
            return 1;
        }
        if (peek() == '-') {
            ++pos_;
            return -1;
        }
        if (!optional)
            fail("expected '+' or '-'");
        return 1;
    }

    long read_int() {
        skip_space();
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            ++pos_;
        }
        if (!std::isdigit(static_cast<unsigned char>(peek())))
            fail("expected an integer");
        long v = 0;
        while (std::isdigit(static_cast<unsigned char>(peek())))
            v = v * 10 + (in_[pos_++] - '0');
        return neg ? -v : v;
    }

    int read_exponent() {
        skip_space();
        if (peek() != '^')
            return 1;
        ++pos_;
        return static_cast<int>(read_int());
    }

    std::string read_name() {
        skip_space();
        std::string s;
        while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '~')
            s += in_[pos_++];
        if (s.empty())
            fail("expected a name");
        return s;
    }

    JetVar read_jet() {
        ++pos_;  // consume 'D'
        long order = read_int();
        skip_space();
        if (peek() != '[')
            fail("expected '['");
        ++pos_;
        std::string name = read_name();
        skip_space();
        if (peek() != ']')
            fail("expected ']'");
        ++pos_;
        JetVar j;
        j.order = static_cast<uint8_t>(order);
        if (!name.empty() && name.back() == '~') {
            j.barred = true;
            name.pop_back();
        }
        if (name == "q")
            j.gen = Gen::Q;
        else if (name == "u")
            j.gen = Gen::U;
        else if (name == "v")
            j.gen = Gen::V;
        else if (name.size() >= 2 && (name[0] == 'a' || name[0] == 'w') &&
                 std::isdigit(static_cast<unsigned char>(name[1]))) {
            j.gen = name[0] == 'a' ? Gen::A : Gen::W;
            j.index = static_cast<uint8_t>(std::stoi(name.substr(1)));
        } else {
            fail("unknown generator '" + name + "'");
        }
        return j;
    }

    /** True when the factor was a parameter name; false -> not a parameter. */
    bool read_param(ParamKey& key) {
        size_t save = pos_;
        std::string s = read_name();
        int e = 0;
        int16_t* slot = nullptr;
        if (s == "eps")
            slot = &key.eps;
        else if (s == "t")
            slot = &key.t;
        else if (s == "s")
            slot = &key.s;
        else if (s.size() >= 2 && s[0] == 'z' && std::isdigit(static_cast<unsigned char>(s[1]))) {
            e = std::stoi(s.substr(1)) - 1;
            slot = e >= 0 && e < kMaxZ ? &key.z[e] : nullptr;
        } else if (s.size() >= 3 && s.compare(0, 2, "zb") == 0 &&
                   std::isdigit(static_cast<unsigned char>(s[2]))) {
            e = std::stoi(s.substr(2)) - 1;
            slot = e >= 0 && e < kMaxZ ? &key.zb[e] : nullptr;
        }
        if (!slot) {
            pos_ = save;
            return false;
        }
        *slot = static_cast<int16_t>(*slot + read_exponent());
        return true;
    }

    DiffPoly term(int sign) {
        Rat coeff(sign);
        ParamKey key;
        Monomial mono;
        bool more = true;
        while (more) {
            skip_space();
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                long num = read_int();
                skip_space();
                if (peek() == '/') {
                    ++pos_;
                    long den = read_int();
                    if (den == 0)
                        fail("zero denominator");
                    coeff *= Rat(num, den);
                } else {
                    coeff *= Rat(num);
                }
            } else if (peek() == 'D' && pos_ + 1 < in_.size() &&
                       std::isdigit(static_cast<unsigned char>(in_[pos_ + 1]))) {
                JetVar j = read_jet();
                mono = mono.with(j, read_exponent());
            } else if (std::isalpha(static_cast<unsigned char>(peek()))) {
                if (!read_param(key))
                    fail("unknown factor");
            } else {
                fail("expected a factor");
            }
            skip_space();
            more = peek() == '*';
            if (more)
                ++pos_;
        }
        return DiffPoly::monomial(kind_, mono, CoeffSeries::monomial(key, coeff));
    }

    CtxKind kind_;
    std::string_view in_;
    size_t pos_ = 0;
};

}  // namespace

DiffPoly parse_poly(CtxKind kind, std::string_view text) {
    return PolyReader(kind, text).read();
}

}  // namespace eqtoda
