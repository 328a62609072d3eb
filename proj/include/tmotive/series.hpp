#ifndef TMOTIVE_SERIES_HPP
#define TMOTIVE_SERIES_HPP

#include <algorithm>
#include <climits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "exact.hpp"

namespace tmotive {

namespace prec {
// Sentinel for exact values; large enough that sums of two stay representable.
inline constexpr long kInf = LONG_MAX / 4;
inline constexpr long kNegInf = -(LONG_MAX / 4);
inline long add(long a, long b) {
    if (a >= kInf || b >= kInf) return kInf;
    if (a <= kNegInf || b <= kNegInf) return kNegInf;
    return a + b;
}
inline long mul(long a, long b) {
    if (a >= kInf) return kInf;
    __int128 r = static_cast<__int128>(a) * b;
    if (r >= kInf) return kInf;
    if (r <= kNegInf) return kNegInf;
    return static_cast<long>(r);
}
inline long ceil_div(long a, long b) { return a >= 0 ? (a + b - 1) / b : -((-a) / b); }
inline long floor_div(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
}  // namespace prec

/**
 * Laurent series in vartheta^(-1) over F_{q^m}, where vartheta^e = theta.
 *
 * prec() == N means the value is known modulo terms of vartheta-degree <= -N;
 * prec::kInf marks an exact value. Coefficients are stored densely from the
 * leading exponent downward.
 */
class RamSeries {
  public:
    RamSeries() = default;
    RamSeries(Field F, int e, long precision = prec::kInf) : F_(std::move(F)), e_(e), prec_(precision) {
        if (e_ < 1) throw PreconditionViolated("ramification index must be positive");
    }

    static RamSeries monomial(const Field& F, int e, Elem c, long exp, long precision = prec::kInf) {
        RamSeries s(F, e, precision);
        s.lead_ = exp;
        s.c_ = {c};
        s.normalize();
        return s;
    }
    static RamSeries constant(const Field& F, int e, Elem c) { return monomial(F, e, c, 0); }
    static RamSeries from_terms(const Field& F, int e, const std::vector<std::pair<long, Elem>>& terms,
                                long precision = prec::kInf) {
        RamSeries s(F, e, precision);
        if (terms.empty()) return s;
        long hi = terms.front().first, lo = hi;
        for (const auto& t : terms) {
            hi = std::max(hi, t.first);
            lo = std::min(lo, t.first);
        }
        s.lead_ = hi;
        s.c_.assign(static_cast<std::size_t>(hi - lo + 1), 0);
        for (const auto& t : terms) s.c_[static_cast<std::size_t>(hi - t.first)] = F->add(s.c_[hi - t.first], t.second);
        s.normalize();
        return s;
    }

    const Field& field() const noexcept { return F_; }
    int ram() const noexcept { return e_; }
    long prec() const noexcept { return prec_; }
    bool exact() const noexcept { return prec_ >= prec::kInf; }
    // Zero within the certified precision.
    bool is_zero() const noexcept { return c_.empty(); }
    std::optional<long> degree() const noexcept {
        if (c_.empty()) return std::nullopt;
        return lead_;
    }
    // Upper bound on the degree of the true value; kNegInf for an exact zero.
    long degree_bound() const noexcept {
        if (!c_.empty()) return lead_;
        return exact() ? prec::kNegInf : -prec_;
    }
    Elem lead_coeff() const noexcept { return c_.empty() ? 0 : c_.front(); }
    // Lowest stored exponent; only meaningful when nonzero.
    long low() const noexcept { return lead_ - static_cast<long>(c_.size()) + 1; }
    Elem coeff(long k) const noexcept {
        if (c_.empty() || k > lead_ || k < low()) return 0;
        return c_[static_cast<std::size_t>(lead_ - k)];
    }
    std::vector<std::pair<long, Elem>> terms() const {
        std::vector<std::pair<long, Elem>> out;
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != 0) out.emplace_back(lead_ - static_cast<long>(i), c_[i]);
        return out;
    }
    std::size_t length() const noexcept { return c_.size(); }

    RamSeries truncate(long precision) const {
        RamSeries s = *this;
        s.prec_ = std::min(prec_, precision);
        s.normalize();
        return s;
    }

    friend RamSeries operator+(const RamSeries& a, const RamSeries& b) { return a.add_scaled(b, 1); }
    friend RamSeries operator-(const RamSeries& a, const RamSeries& b) {
        const Field& F = a.F_ ? a.F_ : b.F_;
        return a.add_scaled(b, F->neg(1));
    }
    RamSeries operator-() const { return scale(F_->neg(1)); }
    RamSeries scale(Elem s) const {
        RamSeries r = *this;
        for (auto& c : r.c_) c = F_->mul(c, s);
        r.normalize();
        return r;
    }
    // Multiplication by vartheta^k.
    RamSeries shift(long k) const {
        RamSeries r = *this;
        r.lead_ += k;
        if (!r.exact()) r.prec_ -= k;
        return r;
    }

    friend RamSeries operator*(const RamSeries& a, const RamSeries& b) {
        const Field& F = a.F_;
        check_compatible(a, b);
        // a = A + ea with deg ea <= -Pa, likewise b; bound every cross term.
        long err = prec::kNegInf;
        if (!b.exact() && !a.c_.empty()) err = std::max(err, a.lead_ - b.prec_);
        if (!a.exact() && !b.c_.empty()) err = std::max(err, b.lead_ - a.prec_);
        if (!a.exact() && !b.exact()) err = std::max(err, -a.prec_ - b.prec_);
        RamSeries r(F, a.e_, err <= prec::kNegInf ? prec::kInf : -err);
        if (a.c_.empty() || b.c_.empty()) {
            r.normalize();
            return r;
        }
        long top = a.lead_ + b.lead_;
        long bottom = a.low() + b.low();
        if (!r.exact()) bottom = std::max(bottom, -r.prec_ + 1);
        if (bottom > top) {
            r.normalize();
            return r;
        }
        std::size_t n = static_cast<std::size_t>(top - bottom + 1);
        r.lead_ = top;
        r.c_.assign(n, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            Elem x = a.c_[i];
            if (x == 0) continue;
            for (std::size_t j = 0; j < b.c_.size() && i + j < n; ++j) {
                Elem y = b.c_[j];
                if (y != 0) r.c_[i + j] = F->add(r.c_[i + j], F->mul(x, y));
            }
        }
        r.normalize();
        return r;
    }

    /**
     * Multiplicative inverse. Precision becomes prec + 2*deg; for an exact
     * non-monomial the expansion is cut at the absolute precision cap.
     */
    RamSeries inv(long cap = prec::kInf) const {
        if (c_.empty()) throw DivisionByZeroWithinPrecision("inverse of a series that is zero within precision");
        long L = lead_;
        Elem ci = F_->inv(c_.front());
        bool monomial = true;
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) monomial = false;
        if (monomial && exact()) return RamSeries::monomial(F_, e_, ci, -L);
        long p = exact() ? cap : std::min(prec::add(prec_, 2 * L), cap);
        if (p >= prec::kInf) throw PreconditionViolated("inverse of an exact non-monomial needs a finite precision cap");
        RamSeries r(F_, e_, p);
        long count = p - L;
        if (count <= 0) {
            r.normalize();
            return r;
        }
        std::size_t K = static_cast<std::size_t>(count);
        r.lead_ = -L;
        r.c_.assign(K, 0);
        r.c_[0] = ci;
        Elem nci = F_->neg(ci);
        for (std::size_t k = 1; k < K; ++k) {
            Elem s = 0;
            std::size_t lim = std::min(k, c_.size() - 1);
            for (std::size_t i = 1; i <= lim; ++i)
                if (c_[i] != 0 && r.c_[k - i] != 0) s = F_->add(s, F_->mul(c_[i], r.c_[k - i]));
            r.c_[k] = F_->mul(nci, s);
        }
        r.normalize();
        return r;
    }

    /**
     * Frobenius twist by q^n (q = p^f_e). Negative n requires every certified
     * exponent divisible by q^|n| and returns precision ceil(P / q^|n|).
     */
    RamSeries twist(long n, long long q, unsigned f_e) const {
        if (n == 0) return *this;
        long Q = 1;
        for (long i = 0; i < (n < 0 ? -n : n); ++i) Q *= static_cast<long>(q);
        long long fp = static_cast<long long>(f_e) * n;
        RamSeries r(F_, e_, prec_);
        if (n > 0) {
            r.prec_ = prec::mul(prec_, Q);
            if (c_.empty()) return r;
            r.lead_ = lead_ * Q;
            r.c_.assign((c_.size() - 1) * static_cast<std::size_t>(Q) + 1, 0);
            for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i * Q] = F_->frob(c_[i], fp);
            r.normalize();
            return r;
        }
        for (std::size_t i = 0; i < c_.size(); ++i) {
            long k = lead_ - static_cast<long>(i);
            if (c_[i] != 0 && (k % Q) != 0)
                throw NonTwistable("series has a term vartheta^" + std::to_string(k) + " that is not a q^" +
                                   std::to_string(-n) + "-th power");
        }
        r.prec_ = exact() ? prec::kInf : prec::ceil_div(prec_, Q);
        if (c_.empty()) return r;
        std::vector<std::pair<long, Elem>> t;
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (c_[i] != 0) t.emplace_back((lead_ - static_cast<long>(i)) / Q, F_->frob(c_[i], fp));
        RamSeries out = from_terms(F_, e_, t, r.prec_);
        return out;
    }

    // j-th hyperderivative in theta: vartheta^k -> C(k/e, j) vartheta^(k - e j).
    RamSeries hyperderiv_theta(std::size_t j) const {
        if (F_->p() != 0 && e_ % static_cast<int>(F_->p()) == 0)
            throw InseparableRamification("p divides the ramification index");
        if (j == 0) return *this;
        long shiftv = static_cast<long>(e_) * static_cast<long>(j);
        RamSeries r(F_, e_, exact() ? prec::kInf : prec_ + shiftv);
        if (c_.empty()) return r;
        r.lead_ = lead_ - shiftv;
        r.c_.assign(c_.size(), 0);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            long k = lead_ - static_cast<long>(i);
            Elem b = F_->from_int(binom_rational_mod_p(k, e_, j, F_->p()));
            r.c_[i] = F_->mul(c_[i], b);
        }
        r.normalize();
        return r;
    }

    // Text form: e=<e>; m=<deg F/F_p>; terms=[(exp,coeff),...]; prec=<N|inf>.
    std::string to_text() const {
        std::ostringstream os;
        os << "e=" << e_ << "; m=" << F_->k() << "; terms=[";
        bool first = true;
        for (const auto& [k, c] : terms()) {
            if (!first) os << ",";
            first = false;
            os << "(" << k << "," << c << ")";
        }
        os << "]; prec=";
        if (exact())
            os << "inf";
        else
            os << prec_;
        return os.str();
    }

    static RamSeries from_text(const Field& F, const std::string& s) {
        std::size_t pos = 0;
        auto fail = [&](const std::string& msg) -> void {
            throw ParseError(1, static_cast<int>(pos) + 1, msg);
        };
        auto skip_ws = [&] {
            while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
        };
        auto expect = [&](const std::string& tok) {
            skip_ws();
            if (s.compare(pos, tok.size(), tok) != 0) fail("expected '" + tok + "'");
            pos += tok.size();
        };
        auto integer = [&]() -> long {
            skip_ws();
            std::size_t start = pos;
            if (pos < s.size() && s[pos] == '-') ++pos;
            if (pos >= s.size() || !isdigit(static_cast<unsigned char>(s[pos]))) fail("expected integer");
            while (pos < s.size() && isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
            try {
                return std::stol(s.substr(start, pos - start));
            } catch (const std::exception&) {
                pos = start;
                fail("integer out of range");
            }
            return 0;
        };
        expect("e=");
        long e = integer();
        if (e < 1) fail("ramification index must be positive");
        expect(";");
        expect("m=");
        std::size_t mpos = pos;
        long m = integer();
        if (m != static_cast<long>(F->k())) {
            pos = mpos;
            fail("field degree mismatch");
        }
        expect(";");
        expect("terms=[");
        std::vector<std::pair<long, Elem>> t;
        skip_ws();
        if (pos < s.size() && s[pos] != ']') {
            while (true) {
                expect("(");
                long k = integer();
                expect(",");
                std::size_t cpos = pos;
                long c = integer();
                if (c < 0 || c >= static_cast<long>(F->size())) {
                    pos = cpos;
                    fail("coefficient outside the field");
                }
                expect(")");
                if (!t.empty() && k >= t.back().first) fail("exponents must strictly decrease");
                t.emplace_back(k, static_cast<Elem>(c));
                skip_ws();
                if (pos < s.size() && s[pos] == ',') {
                    ++pos;
                    continue;
                }
                break;
            }
        }
        expect("]");
        expect(";");
        expect("prec=");
        skip_ws();
        long p = prec::kInf;
        if (s.compare(pos, 3, "inf") == 0)
            pos += 3;
        else
            p = integer();
        skip_ws();
        if (pos != s.size()) fail("trailing characters");
        for (const auto& [k, c] : t)
            if (p < prec::kInf && k <= -p) fail("term below the stated precision");
        return from_terms(F, static_cast<int>(e), t, p);
    }

    friend bool operator==(const RamSeries& a, const RamSeries& b) {
        return a.e_ == b.e_ && a.prec_ == b.prec_ && a.terms() == b.terms();
    }

  private:
    Field F_;
    int e_ = 1;
    long prec_ = prec::kInf;
    long lead_ = 0;
    std::vector<Elem> c_;

    static void check_compatible(const RamSeries& a, const RamSeries& b) {
        if (a.e_ != b.e_) throw PreconditionViolated("ramification index mismatch");
    }

    RamSeries add_scaled(const RamSeries& b, Elem s) const {
        check_compatible(*this, b);
        const Field& F = F_ ? F_ : b.F_;
        RamSeries r(F, e_, std::min(prec_, b.prec_));
        if (c_.empty() && b.c_.empty()) return r;
        long top = c_.empty() ? b.lead_ : (b.c_.empty() ? lead_ : std::max(lead_, b.lead_));
        long bottom = c_.empty() ? b.low() : (b.c_.empty() ? low() : std::min(low(), b.low()));
        if (!r.exact()) bottom = std::max(bottom, -r.prec_ + 1);
        if (bottom > top) return r;
        r.lead_ = top;
        r.c_.assign(static_cast<std::size_t>(top - bottom + 1), 0);
        for (long k = top; k >= bottom; --k) {
            Elem x = coeff(k), y = b.coeff(k);
            r.c_[static_cast<std::size_t>(top - k)] = F->add(x, y == 0 ? 0 : F->mul(y, s));
        }
        r.normalize();
        return r;
    }

    void normalize() {
        if (!exact()) {
            // Drop digits at or below the precision floor.
            if (!c_.empty()) {
                long lowest_ok = -prec_ + 1;
                if (lead_ < lowest_ok) {
                    c_.clear();
                } else {
                    std::size_t keep = static_cast<std::size_t>(lead_ - lowest_ok + 1);
                    if (c_.size() > keep) c_.resize(keep);
                }
            }
        }
        std::size_t z = 0;
        while (z < c_.size() && c_[z] == 0) ++z;
        if (z == c_.size()) {
            c_.clear();
            lead_ = 0;
            return;
        }
        if (z > 0) {
            c_.erase(c_.begin(), c_.begin() + static_cast<long>(z));
            lead_ -= static_cast<long>(z);
        }
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
};

/**
 * Expansion of an exact coefficient in vartheta, where w = vartheta^(e / q^D).
 * Every w-exponent k must make k e / q^D integral. The result is certified
 * modulo vartheta^(-abs_prec) (exact when the denominator is a monomial).
 */
inline RamSeries to_series(const ExactCoef& c, int e, long abs_prec) {
    const FieldSpec& spec = c.spec();
    const Field& F = c.field();
    long long qd = ExactCoef::pow_ll(spec.q(), spec.D);
    auto convert = [&](const Poly& p) {
        std::vector<std::pair<long, Elem>> t;
        for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
            if (p.coeffs()[k] == 0) continue;
            long long num = static_cast<long long>(k) * e;
            if (num % qd != 0)
                throw NonTwistable("w^" + std::to_string(k) + " has no integral vartheta-exponent for e=" + std::to_string(e));
            t.emplace_back(static_cast<long>(num / qd), p.coeffs()[k]);
        }
        return RamSeries::from_terms(F, e, t);
    };
    RamSeries num = convert(c.value().num());
    if (c.value().den().is_one()) return num;
    RamSeries den = convert(c.value().den());
    long nd = num.is_zero() ? 0 : *num.degree();
    RamSeries r = num * den.inv(prec::add(abs_prec, nd));
    return r.exact() ? r : r.truncate(abs_prec);
}

// theta-degree of an exact coefficient, scaled to vartheta units.
inline long series_degree(const ExactCoef& c, int e) {
    long long qd = ExactCoef::pow_ll(c.spec().q(), c.spec().D);
    long long num = static_cast<long long>(c.w_degree()) * e;
    return static_cast<long>(prec::floor_div(static_cast<long>(num), static_cast<long>(qd)));
}

}  // namespace tmotive

#endif
