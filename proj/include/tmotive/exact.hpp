#ifndef TMOTIVE_EXACT_HPP
#define TMOTIVE_EXACT_HPP

#include <string>
#include <utility>
#include <vector>

#include "ratfunc.hpp"

namespace tmotive {

/**
 * Exact element of F_{q^m}(w) where theta = w^(q^D). Twisting by n >= 0 raises
 * coefficients to the q^n and multiplies exponents by q^n; negative twists
 * need every exponent divisible by q^|n|.
 */
class ExactCoef {
  public:
    ExactCoef() = default;
    ExactCoef(const FieldSpec& spec, RatFunc f) : spec_(spec), f_(std::move(f)) {}

    static ExactCoef zero(const FieldSpec& spec) { return ExactCoef(spec, RatFunc(spec.field())); }
    static ExactCoef constant(const FieldSpec& spec, Elem c) { return ExactCoef(spec, RatFunc::constant(spec.field(), c)); }
    static ExactCoef one(const FieldSpec& spec) { return constant(spec, 1); }
    static ExactCoef w(const FieldSpec& spec) { return ExactCoef(spec, RatFunc::variable(spec.field())); }
    static ExactCoef theta(const FieldSpec& spec) { return theta_pow(spec, 1); }
    // theta^k for any integer k.
    static ExactCoef theta_pow(const FieldSpec& spec, long long k) {
        long long qd = pow_ll(spec.q(), spec.D);
        Field F = spec.field();
        Poly mono = Poly::monomial(F, 1, static_cast<std::size_t>((k < 0 ? -k : k) * qd));
        return ExactCoef(spec, k >= 0 ? RatFunc(mono) : RatFunc(Poly::constant(F, 1), mono));
    }

    const FieldSpec& spec() const noexcept { return spec_; }
    const RatFunc& value() const noexcept { return f_; }
    const Field& field() const noexcept { return f_.field(); }
    bool is_zero() const noexcept { return f_.is_zero(); }
    bool is_constant() const noexcept { return f_.is_constant(); }

    friend bool operator==(const ExactCoef& a, const ExactCoef& b) { return a.f_ == b.f_; }
    friend ExactCoef operator+(const ExactCoef& a, const ExactCoef& b) { return {a.spec_, a.f_ + b.f_}; }
    friend ExactCoef operator-(const ExactCoef& a, const ExactCoef& b) { return {a.spec_, a.f_ - b.f_}; }
    ExactCoef operator-() const { return {spec_, -f_}; }
    friend ExactCoef operator*(const ExactCoef& a, const ExactCoef& b) { return {a.spec_, a.f_ * b.f_}; }
    friend ExactCoef operator/(const ExactCoef& a, const ExactCoef& b) { return {a.spec_, a.f_ / b.f_}; }
    ExactCoef inverse() const { return {spec_, f_.inverse()}; }
    ExactCoef scale(Elem c) const { return {spec_, f_.scale(c)}; }
    ExactCoef pow(long long e) const { return {spec_, f_.pow(e)}; }

    // Degree in theta as the fraction deg_w / q^D (numerator returned, denominator q^D).
    long w_degree() const noexcept { return f_.degree(); }

    ExactCoef twist(long n) const {
        if (n == 0 || is_zero()) return *this;
        long long Q = pow_ll(spec_.q(), static_cast<unsigned>(n < 0 ? -n : n));
        long long fp = static_cast<long long>(spec_.e) * n;
        if (n > 0)
            return {spec_, RatFunc(f_.num().frobenius_stretch(fp, static_cast<std::size_t>(Q)),
                                   f_.den().frobenius_stretch(fp, static_cast<std::size_t>(Q)))};
        if (!f_.num().divisible_exponents(static_cast<std::size_t>(Q)) ||
            !f_.den().divisible_exponents(static_cast<std::size_t>(Q)))
            throw TwistDepthExceeded("coefficient " + to_string() + " is not a q^" + std::to_string(-n) + "-th power");
        return {spec_, RatFunc(f_.num().frobenius_shrink(fp, static_cast<std::size_t>(Q)),
                               f_.den().frobenius_shrink(fp, static_cast<std::size_t>(Q)))};
    }

    // The same element written in w' = theta^(1/q^D) for another depth D.
    ExactCoef with_depth(std::uint32_t D) const {
        FieldSpec to = spec_;
        to.D = D;
        if (D == spec_.D || is_zero()) return {to, f_};
        auto Q = static_cast<std::size_t>(pow_ll(spec_.q(), D > spec_.D ? D - spec_.D : spec_.D - D));
        if (D > spec_.D) return {to, RatFunc(f_.num().frobenius_stretch(0, Q), f_.den().frobenius_stretch(0, Q))};
        if (!f_.num().divisible_exponents(Q) || !f_.den().divisible_exponents(Q))
            throw TwistDepthExceeded("coefficient " + to_string() + " needs depth above " + std::to_string(D));
        return {to, RatFunc(f_.num().frobenius_shrink(0, Q), f_.den().frobenius_shrink(0, Q))};
    }

    std::string to_string() const { return f_.to_string("w"); }

    static long long pow_ll(long long b, unsigned e) {
        long long r = 1;
        for (unsigned i = 0; i < e; ++i) r *= b;
        return r;
    }

  private:
    FieldSpec spec_;
    RatFunc f_;
};

/**
 * Polynomial in t with ExactCoef coefficients, used for exact t-motive data
 * such as Phi and endomorphism matrices. Twisting acts on coefficients only.
 */
class KtPoly {
  public:
    KtPoly() = default;
    explicit KtPoly(const FieldSpec& spec) : spec_(spec) {}
    KtPoly(const FieldSpec& spec, std::vector<ExactCoef> c) : spec_(spec), c_(std::move(c)) { trim(); }
    static KtPoly constant(const ExactCoef& c) { return KtPoly(c.spec(), {c}); }
    static KtPoly t(const FieldSpec& spec) { return KtPoly(spec, {ExactCoef::zero(spec), ExactCoef::one(spec)}); }

    const FieldSpec& spec() const noexcept { return spec_; }
    const std::vector<ExactCoef>& coeffs() const noexcept { return c_; }
    bool is_zero() const noexcept { return c_.empty(); }
    long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
    ExactCoef coeff(std::size_t i) const { return i < c_.size() ? c_[i] : ExactCoef::zero(spec_); }

    friend bool operator==(const KtPoly& a, const KtPoly& b) { return a.c_ == b.c_; }
    friend KtPoly operator+(const KtPoly& a, const KtPoly& b) {
        std::vector<ExactCoef> r;
        for (std::size_t i = 0; i < std::max(a.c_.size(), b.c_.size()); ++i) r.push_back(a.coeff(i) + b.coeff(i));
        return KtPoly(a.spec_, std::move(r));
    }
    KtPoly operator-() const {
        std::vector<ExactCoef> r;
        for (const auto& c : c_) r.push_back(-c);
        return KtPoly(spec_, std::move(r));
    }
    friend KtPoly operator-(const KtPoly& a, const KtPoly& b) { return a + (-b); }
    friend KtPoly operator*(const KtPoly& a, const KtPoly& b) {
        if (a.is_zero() || b.is_zero()) return KtPoly(a.spec_);
        std::vector<ExactCoef> r(a.c_.size() + b.c_.size() - 1, ExactCoef::zero(a.spec_));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                if (!a.c_[i].is_zero() && !b.c_[j].is_zero()) r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
        return KtPoly(a.spec_, std::move(r));
    }
    KtPoly twist(long n) const {
        std::vector<ExactCoef> r;
        for (const auto& c : c_) r.push_back(c.twist(n));
        return KtPoly(spec_, std::move(r));
    }
    KtPoly with_depth(std::uint32_t D) const {
        FieldSpec to = spec_;
        to.D = D;
        std::vector<ExactCoef> r;
        for (const auto& c : c_) r.push_back(c.with_depth(D));
        return KtPoly(to, std::move(r));
    }
    // j-th hyperderivative in t.
    KtPoly hyperderiv(std::size_t j) const {
        if (j == 0) return *this;
        std::vector<ExactCoef> r;
        Field F = spec_.field();
        for (std::size_t m = j; m < c_.size(); ++m)
            r.push_back(c_[m].scale(F->from_int(binom_mod_p(m, j, F->p()))));
        return KtPoly(spec_, std::move(r));
    }
    // True when no coefficient depends on w.
    bool theta_free() const {
        for (const auto& c : c_)
            if (!c.is_constant()) return false;
        return true;
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string out;
        for (std::size_t i = c_.size(); i-- > 0;) {
            if (c_[i].is_zero()) continue;
            if (!out.empty()) out += " + ";
            out += "(" + c_[i].to_string() + ")";
            if (i > 0) out += "*t" + (i > 1 ? "^" + std::to_string(i) : std::string());
        }
        return out;
    }

  private:
    FieldSpec spec_;
    std::vector<ExactCoef> c_;
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
};

}  // namespace tmotive

#endif
