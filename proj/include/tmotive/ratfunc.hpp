#ifndef TMOTIVE_RATFUNC_HPP
#define TMOTIVE_RATFUNC_HPP

#include <string>
#include <utility>

#include "poly.hpp"

namespace tmotive {

/**
 * Element of F(x) kept as num/den with gcd 1 and monic denominator.
 * Used both for F_q(t) entries and, through ExactCoef, for F_{q^m}(w).
 */
class RatFunc {
  public:
    RatFunc() = default;
    explicit RatFunc(const Field& F) : num_(F), den_(Poly::constant(F, 1)) {}
    explicit RatFunc(Poly num) : num_(num), den_(Poly::constant(num.field(), 1)) {}
    RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

    static RatFunc constant(const Field& F, Elem c) { return RatFunc(Poly::constant(F, c)); }
    static RatFunc variable(const Field& F) { return RatFunc(Poly::monomial(F, 1, 1)); }

    const Poly& num() const noexcept { return num_; }
    const Poly& den() const noexcept { return den_; }
    const Field& field() const noexcept { return num_.field() ? num_.field() : den_.field(); }
    bool is_zero() const noexcept { return num_.is_zero(); }
    bool is_polynomial() const noexcept { return den_.degree() == 0; }
    bool is_constant() const noexcept { return den_.degree() == 0 && num_.degree() <= 0; }
    // deg num - deg den; meaningless for zero.
    long degree() const noexcept { return num_.degree() - den_.degree(); }

    friend bool operator==(const RatFunc& a, const RatFunc& b) { return a.num_ == b.num_ && a.den_ == b.den_; }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    RatFunc operator-() const { return RatFunc(-num_, den_, true); }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        if (a.is_zero() || b.is_zero()) return RatFunc(a.field());
        if (a.den_.is_one() && b.den_.is_one()) return RatFunc(a.num_ * b.num_, a.den_, true);
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    RatFunc inverse() const {
        if (is_zero()) throw DivisionByZeroWithinPrecision("inverse of zero rational function");
        return RatFunc(den_, num_);
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) { return a * b.inverse(); }
    RatFunc scale(Elem s) const { return RatFunc(num_.scale(s), den_, s != 0); }

    RatFunc pow(long long e) const {
        if (e < 0) return inverse().pow(-e);
        return RatFunc(num_.pow(static_cast<unsigned long long>(e)), den_.pow(static_cast<unsigned long long>(e)), true);
    }

    Elem eval(Elem x) const {
        Elem d = den_.eval(x);
        if (d == 0) throw DivisionByZeroWithinPrecision("pole at evaluation point");
        return field()->div(num_.eval(x), d);
    }

    /**
     * j-th hyperderivative d^j/dx^j. Uses the product rule on num * (1/den) with
     * d^k(1/f) = sum_{e=1..k} C(k+1, e+1) (-1)^e f^(-e-1) d^k(f^e).
     */
    RatFunc hyperderiv(std::size_t j) const {
        if (j == 0 || is_zero()) return j == 0 ? *this : RatFunc(field());
        if (den_.is_one()) return RatFunc(num_.hyperderiv(j));
        const Field& F = field();
        RatFunc total(F);
        for (std::size_t i = 0; i <= j; ++i) {
            RatFunc dn(num_.hyperderiv(j - i));
            if (dn.is_zero()) continue;
            total = total + dn * inverse_hyperderiv(i);
        }
        return total;
    }

    std::string to_string(const std::string& var) const {
        if (den_.is_one()) return num_.to_string(var);
        return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
    }

  private:
    Poly num_, den_;

    RatFunc(Poly num, Poly den, bool /*already reduced*/) : num_(std::move(num)), den_(std::move(den)) {
        if (num_.is_zero()) den_ = Poly::constant(den_.field(), 1);
    }

    // d^k(1/den).
    RatFunc inverse_hyperderiv(std::size_t k) const {
        const Field& F = den_.field();
        if (k == 0) return RatFunc(Poly::constant(F, 1), den_);
        RatFunc out(F);
        Poly fe = Poly::constant(F, 1);
        for (std::size_t e = 1; e <= k; ++e) {
            fe = fe * den_;
            Elem c = F->from_int(binom_mod_p(k + 1, e + 1, F->p()));
            if (c == 0) continue;
            if (e % 2 == 1) c = F->neg(c);
            Poly d = fe.hyperderiv(k).scale(c);
            if (d.is_zero()) continue;
            out = out + RatFunc(d, fe * den_);
        }
        return out;
    }

    void normalize() {
        if (den_.is_zero()) throw DivisionByZeroWithinPrecision("rational function with zero denominator");
        if (num_.is_zero()) {
            den_ = Poly::constant(den_.field(), 1);
            return;
        }
        if (den_.degree() > 0) {
            Poly g = gcd(num_, den_);
            if (g.degree() > 0) {
                num_ = num_ / g;
                den_ = den_ / g;
            }
        }
        Elem l = den_.lead();
        if (l != 1) {
            Elem li = den_.field()->inv(l);
            num_ = num_.scale(li);
            den_ = den_.scale(li);
        }
    }
};

}  // namespace tmotive

#endif
