#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>

#include "core/error.hpp"

namespace eqtoda {

/** Exact rational scalar: a value wrapper over GMP that keeps canonical form
 *  and never leaks expression templates into containers or `auto`. */
class Rat {
  public:
    Rat() : v_(0) {}
    Rat(long n) : v_(n) {}
    Rat(int n) : v_(static_cast<long>(n)) {}
    Rat(long num, long den);
    explicit Rat(const mpq_class& v) : v_(v) {}

    static Rat factorial(int n);
    /** Falling-factorial binomial x(x-1)...(x-k+1)/k! for rational x. */
    static Rat binomial(const Rat& x, int k);

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }
    bool is_integer_value(long n) const { return is_integer() && v_.get_num() == n; }
    long num_long() const { return v_.get_num().get_si(); }
    long den_long() const { return v_.get_den().get_si(); }
    int sign() const { return sgn(v_); }

    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o);

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    Rat inverse() const;
    Rat pow(int e) const;

    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }

    /** "p" or "p/q" with q > 0. */
    std::string str() const;

  private:
    mpq_class v_;
};

}  // namespace eqtoda
