#include "core/rational.hpp"

#include "core/error.hpp"

namespace eqtoda {

Rat::Rat(long num, long den) : v_(num, den) {
    if (den == 0)
        throw Error(Errc::NotAUnit, "rational with zero denominator");
    v_.canonicalize();
}

Rat& Rat::operator/=(const Rat& o) {
    if (o.is_zero())
        throw Error(Errc::NotAUnit, "division by zero rational");
    v_ /= o.v_;
    return *this;
}

Rat Rat::inverse() const {
    if (is_zero())
        throw Error(Errc::NotAUnit, "inverse of zero rational");
    return Rat(mpq_class(1 / v_));
}

Rat Rat::pow(int e) const {
    if (e == 0)
        return Rat(1);
    Rat base = e > 0 ? *this : inverse();
    Rat r(1);
    for (int i = 0; i < (e > 0 ? e : -e); ++i)
        r *= base;
    return r;
}

Rat Rat::factorial(int n) {
    Rat r(1);
    for (int i = 2; i <= n; ++i)
        r *= Rat(i);
    return r;
}

Rat Rat::binomial(const Rat& x, int k) {
    if (k < 0)
        return Rat(0);
    Rat r(1);
    for (int i = 0; i < k; ++i)
        r *= (x - Rat(i));
    return r / factorial(k);
}

std::string Rat::str() const {
    return v_.get_str();
}

}  // namespace eqtoda
