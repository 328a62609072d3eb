#ifndef TMOTIVE_POLY_HPP
#define TMOTIVE_POLY_HPP

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "binomial.hpp"
#include "gf.hpp"

namespace tmotive {

/**
 * Dense univariate polynomial over a GaloisField, coefficients lowest degree first.
 * The zero polynomial has an empty coefficient vector.
 */
class Poly {
  public:
    Poly() = default;
    explicit Poly(Field F) : F_(std::move(F)) {}
    Poly(Field F, std::vector<Elem> c) : F_(std::move(F)), c_(std::move(c)) { trim(); }

    static Poly constant(const Field& F, Elem c) { return Poly(F, {c}); }
    static Poly monomial(const Field& F, Elem c, std::size_t deg) {
        std::vector<Elem> v(deg + 1, 0);
        v[deg] = c;
        return Poly(F, std::move(v));
    }

    const Field& field() const noexcept { return F_; }
    const std::vector<Elem>& coeffs() const noexcept { return c_; }
    bool is_zero() const noexcept { return c_.empty(); }
    long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
    Elem coeff(std::size_t i) const noexcept { return i < c_.size() ? c_[i] : 0; }
    Elem lead() const noexcept { return c_.empty() ? 0 : c_.back(); }
    bool is_one() const noexcept { return c_.size() == 1 && c_[0] == 1; }
    // Lowest exponent carrying a nonzero coefficient; -1 for zero.
    long low_degree() const noexcept {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != 0) return static_cast<long>(i);
        return -1;
    }

    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }

    friend Poly operator+(const Poly& a, const Poly& b) {
        const Field& F = a.F_ ? a.F_ : b.F_;
        std::vector<Elem> r(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = F->add(a.coeff(i), b.coeff(i));
        return Poly(F, std::move(r));
    }
    Poly operator-() const {
        std::vector<Elem> r(c_.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = F_->neg(c_[i]);
        return Poly(F_, std::move(r));
    }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const Poly& a, const Poly& b) {
        const Field& F = a.F_ ? a.F_ : b.F_;
        if (a.is_zero() || b.is_zero()) return Poly(F);
        std::vector<Elem> r(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i] == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                if (b.c_[j] != 0) r[i + j] = F->add(r[i + j], F->mul(a.c_[i], b.c_[j]));
        }
        return Poly(F, std::move(r));
    }
    Poly scale(Elem s) const {
        std::vector<Elem> r(c_.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = F_->mul(c_[i], s);
        return Poly(F_, std::move(r));
    }
    Poly shift(std::size_t k) const {
        if (is_zero()) return *this;
        std::vector<Elem> r(k, 0);
        r.insert(r.end(), c_.begin(), c_.end());
        return Poly(F_, std::move(r));
    }

    // Quotient and remainder; b must be nonzero.
    friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
        if (b.is_zero()) throw DivisionByZeroWithinPrecision("polynomial division by zero");
        const Field& F = b.F_;
        if (a.degree() < b.degree()) return {Poly(F), a};
        std::vector<Elem> r = a.c_, q(a.c_.size() - b.c_.size() + 1, 0);
        Elem li = F->inv(b.lead());
        for (long i = a.degree() - b.degree(); i >= 0; --i) {
            Elem c = F->mul(r[i + b.degree()], li);
            q[i] = c;
            if (c == 0) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r[i + j] = F->sub(r[i + j], F->mul(c, b.c_[j]));
        }
        return {Poly(F, std::move(q)), Poly(F, std::move(r))};
    }
    friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }
    friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }

    Poly monic() const {
        if (is_zero()) return *this;
        return scale(F_->inv(lead()));
    }

    friend Poly gcd(Poly a, Poly b) {
        while (!b.is_zero()) {
            Poly r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

    Elem eval(Elem x) const {
        Elem r = 0;
        for (std::size_t i = c_.size(); i-- > 0;) r = F_->add(F_->mul(r, x), c_[i]);
        return r;
    }

    // j-th hyperderivative: x^n -> C(n, j) x^(n-j).
    Poly hyperderiv(std::size_t j) const {
        if (j == 0) return *this;
        if (c_.size() <= j) return Poly(F_);
        std::vector<Elem> r(c_.size() - j, 0);
        for (std::size_t n = j; n < c_.size(); ++n)
            r[n - j] = F_->mul(c_[n], F_->from_int(binom_mod_p(n, j, F_->p())));
        return Poly(F_, std::move(r));
    }

    // Coefficients raised to p^frob_power, exponents multiplied by stretch.
    Poly frobenius_stretch(long long frob_power, std::size_t stretch) const {
        if (is_zero()) return *this;
        std::vector<Elem> r((c_.size() - 1) * stretch + 1, 0);
        for (std::size_t i = 0; i < c_.size(); ++i) r[i * stretch] = F_->frob(c_[i], frob_power);
        return Poly(F_, std::move(r));
    }
    // Inverse of frobenius_stretch; every exponent must be divisible by stretch.
    bool divisible_exponents(std::size_t stretch) const noexcept {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != 0 && i % stretch != 0) return false;
        return true;
    }
    Poly frobenius_shrink(long long frob_power, std::size_t stretch) const {
        if (is_zero()) return *this;
        std::vector<Elem> r((c_.size() - 1) / stretch + 1, 0);
        for (std::size_t i = 0; i < c_.size(); i += stretch) r[i / stretch] = F_->frob(c_[i], frob_power);
        return Poly(F_, std::move(r));
    }

    Poly pow(unsigned long long e) const {
        Poly r = Poly::constant(F_, 1), b = *this;
        while (e) {
            if (e & 1) r = r * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return r;
    }

    std::string to_string(const std::string& var) const {
        if (is_zero()) return "0";
        std::string out;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (c_[i] == 0) continue;
            if (!out.empty()) out += " + ";
            std::string c = F_->to_string(c_[i]);
            if (i == 0) {
                out += c;
                continue;
            }
            if (c_[i] != 1) out += c + "*";
            out += var;
            if (i > 1) out += "^" + std::to_string(i);
        }
        return out;
    }

  private:
    Field F_;
    std::vector<Elem> c_;

    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
};

}  // namespace tmotive

#endif
