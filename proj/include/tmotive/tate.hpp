#ifndef TMOTIVE_TATE_HPP
#define TMOTIVE_TATE_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "series.hpp"

namespace tmotive {

/**
 * What is known about the coefficients a_m with m beyond the stored range.
 * Zero: the value is a polynomial. Affine: deg a_m <= offset - slope * m.
 * Unknown: nothing; evaluations that need the tail fail.
 */
struct TailBound {
    enum class Kind { Zero, Affine, Unknown };
    Kind kind = Kind::Zero;
    long offset = 0;
    long slope = 0;

    static TailBound zero() { return {}; }
    static TailBound affine(long offset, long slope) { return {Kind::Affine, offset, slope}; }
    static TailBound unknown() { return {Kind::Unknown, 0, 0}; }
};

/**
 * Power series in t over the vartheta-Laurent field. A polynomial carries a
 * zero tail; otherwise coefficients are known up to t^(t_deg()) and the tail
 * bound limits the rest.
 */
class TatePoly {
  public:
    TatePoly() = default;
    TatePoly(Field F, int e) : F_(std::move(F)), e_(e) {}
    TatePoly(Field F, int e, std::vector<RamSeries> c, TailBound tail)
        : F_(std::move(F)), e_(e), c_(std::move(c)), tail_(tail) {
        trim();
    }

    static TatePoly constant(const RamSeries& a) { return TatePoly(a.field(), a.ram(), {a}, TailBound::zero()); }
    static TatePoly t(const Field& F, int e) {
        return TatePoly(F, e, {RamSeries(F, e), RamSeries::constant(F, e, 1)}, TailBound::zero());
    }
    static TatePoly from_exact(const KtPoly& p, int e, long abs_prec) {
        Field F = p.spec().field();
        std::vector<RamSeries> c;
        for (const auto& x : p.coeffs()) c.push_back(to_series(x, e, abs_prec));
        return TatePoly(F, e, std::move(c), TailBound::zero());
    }

    const Field& field() const noexcept { return F_; }
    int ram() const noexcept { return e_; }
    const TailBound& tail() const noexcept { return tail_; }
    bool is_polynomial() const noexcept { return tail_.kind == TailBound::Kind::Zero; }
    // Highest stored t-exponent; for a truncated series this is N_t.
    long t_deg() const noexcept { return static_cast<long>(c_.size()) - 1; }
    const std::vector<RamSeries>& coeffs() const noexcept { return c_; }
    RamSeries coeff(std::size_t m) const {
        if (m < c_.size()) return c_[m];
        if (!is_polynomial()) throw PrecisionExhausted("t-coefficient " + std::to_string(m) + " beyond truncation");
        return RamSeries(F_, e_);
    }

    // All stored coefficients vanish within their precision.
    bool is_zero() const noexcept {
        for (const auto& c : c_)
            if (!c.is_zero()) return false;
        return true;
    }
    long min_prec() const noexcept {
        long p = prec::kInf;
        for (const auto& c : c_) p = std::min(p, c.prec());
        return p;
    }

    friend TatePoly operator+(const TatePoly& a, const TatePoly& b) { return combine(a, b, false); }
    friend TatePoly operator-(const TatePoly& a, const TatePoly& b) { return combine(a, b, true); }
    TatePoly operator-() const {
        TatePoly r = *this;
        for (auto& c : r.c_) c = -c;
        return r;
    }
    TatePoly scale(const RamSeries& s) const {
        if (s.is_zero() && s.exact()) return TatePoly(F_, e_);
        TatePoly r = *this;
        for (auto& c : r.c_) c = c * s;
        if (tail_.kind == TailBound::Kind::Affine) r.tail_.offset = prec::add(tail_.offset, s.degree_bound());
        r.trim();
        return r;
    }
    TatePoly scale(Elem s) const {
        TatePoly r = *this;
        for (auto& c : r.c_) c = c.scale(s);
        r.trim();
        return r;
    }

    friend TatePoly operator*(const TatePoly& a, const TatePoly& b) {
        const Field& F = a.F_ ? a.F_ : b.F_;
        int e = a.F_ ? a.e_ : b.e_;
        long n = result_length(a, b, true);
        TailBound tail = result_tail(a, b, true);
        if (n < 0) return TatePoly(F, e, {}, tail);
        std::vector<RamSeries> c(static_cast<std::size_t>(n + 1), RamSeries(F, e));
        for (long m = 0; m <= n; ++m) {
            RamSeries s(F, e);
            long ilo = std::max(0L, m - b.t_deg()), ihi = std::min(m, a.t_deg());
            for (long i = ilo; i <= ihi; ++i) {
                const RamSeries& x = a.c_[static_cast<std::size_t>(i)];
                const RamSeries& y = b.c_[static_cast<std::size_t>(m - i)];
                if ((x.is_zero() && x.exact()) || (y.is_zero() && y.exact())) continue;
                s = s + x * y;
            }
            c[static_cast<std::size_t>(m)] = std::move(s);
        }
        return TatePoly(F, e, std::move(c), tail);
    }

    // Inverse in the t-power-series ring, computed to t-degree t_cap.
    TatePoly inverse(long t_cap, long series_cap) const {
        if (c_.empty() || c_[0].is_zero())
            throw DivisionByZeroWithinPrecision("constant t-coefficient is not a unit");
        long n = is_polynomial() ? t_cap : std::min(t_cap, t_deg());
        if (is_polynomial() && t_deg() == 0) return TatePoly(F_, e_, {c_[0].inv(series_cap)}, TailBound::zero());
        std::vector<RamSeries> r;
        RamSeries b0 = c_[0].inv(series_cap);
        r.push_back(b0);
        RamSeries nb0 = -b0;
        for (long m = 1; m <= n; ++m) {
            RamSeries s(F_, e_);
            for (long i = 1; i <= std::min(m, t_deg()); ++i) {
                const RamSeries& x = c_[static_cast<std::size_t>(i)];
                if (x.is_zero() && x.exact()) continue;
                s = s + x * r[static_cast<std::size_t>(m - i)];
            }
            r.push_back(s * nb0);
        }
        return TatePoly(F_, e_, std::move(r), TailBound::unknown());
    }

    // Frobenius twist of every coefficient; the tail bound scales accordingly.
    TatePoly twist(long n, const FieldSpec& spec) const {
        TatePoly r = *this;
        for (auto& c : r.c_) c = c.twist(n, spec.q(), spec.e);
        if (tail_.kind == TailBound::Kind::Affine && n != 0) {
            long Q = static_cast<long>(ExactCoef::pow_ll(spec.q(), static_cast<unsigned>(n < 0 ? -n : n)));
            if (n > 0) {
                r.tail_.offset = prec::mul(tail_.offset, Q);
                r.tail_.slope = tail_.slope * Q;
            } else {
                r.tail_.offset = tail_.offset <= prec::kNegInf ? tail_.offset : prec::ceil_div(tail_.offset, Q);
                r.tail_.slope = prec::floor_div(tail_.slope, Q);
            }
        }
        return r;
    }

    // j-th hyperderivative in t: coefficient m becomes C(m+j, j) a_{m+j}.
    TatePoly hyperderiv_t(std::size_t j) const {
        if (j == 0) return *this;
        long jj = static_cast<long>(j);
        if (!is_polynomial() && t_deg() < jj)
            throw PrecisionExhausted("t-truncation too short for the requested derivative");
        std::vector<RamSeries> r;
        for (long m = 0; m + jj <= t_deg(); ++m) {
            Elem b = F_->from_int(binom_mod_p(static_cast<std::uint64_t>(m + jj), j, F_->p()));
            r.push_back(c_[static_cast<std::size_t>(m + jj)].scale(b));
        }
        TailBound tail = tail_;
        if (tail.kind == TailBound::Kind::Affine) tail.offset = prec::add(tail.offset, -tail.slope * jj);
        if (!is_polynomial() && r.empty()) r.push_back(RamSeries(F_, e_));
        return TatePoly(F_, e_, std::move(r), tail);
    }

    // Value at t = theta; needs a tail decaying faster than vartheta^(e m).
    RamSeries eval_at_theta() const {
        RamSeries s(F_, e_);
        for (long m = 0; m <= t_deg(); ++m) s = s + c_[static_cast<std::size_t>(m)].shift(static_cast<long>(e_) * m);
        if (is_polynomial()) return s;
        if (tail_.kind == TailBound::Kind::Unknown)
            throw PrecisionExhausted("no tail bound available for evaluation at theta");
        if (tail_.offset <= prec::kNegInf) return s;
        if (tail_.slope <= e_)
            throw PrecisionExhausted("tail decays too slowly to evaluate at theta (slope " + std::to_string(tail_.slope) +
                                     " <= e)");
        long bound = tail_.offset - (tail_.slope - e_) * (t_deg() + 1);
        return s.truncate(-bound);
    }

    // Value at t = zeta for a constant zeta; needs a decaying tail.
    RamSeries eval_at(Elem zeta) const {
        RamSeries s(F_, e_);
        Elem z = 1;
        for (long m = 0; m <= t_deg(); ++m) {
            s = s + c_[static_cast<std::size_t>(m)].scale(z);
            z = F_->mul(z, zeta);
        }
        if (is_polynomial()) return s;
        if (tail_.kind == TailBound::Kind::Unknown)
            throw PrecisionExhausted("no tail bound available for evaluation");
        if (tail_.offset <= prec::kNegInf) return s;
        if (tail_.slope <= 0) throw PrecisionExhausted("tail does not decay");
        return s.truncate(-(tail_.offset - tail_.slope * (t_deg() + 1)));
    }

    // D_zeta truncated to N terms: entry m is (d_t^m g)(zeta), the coefficient of X^m.
    std::vector<RamSeries> dzeta(Elem zeta, std::size_t N) const {
        std::vector<RamSeries> out;
        for (std::size_t m = 0; m < N; ++m) out.push_back(hyperderiv_t(m).eval_at(zeta));
        return out;
    }

    // Smallest A with deg a_m <= A - slope*m for every m, or nullopt.
    std::optional<long> uniform_bound(long slope) const {
        long A = prec::kNegInf;
        for (long m = 0; m <= t_deg(); ++m) {
            long d = c_[static_cast<std::size_t>(m)].degree_bound();
            if (d <= prec::kNegInf) continue;
            A = std::max(A, d + slope * m);
        }
        switch (tail_.kind) {
            case TailBound::Kind::Zero:
                break;
            case TailBound::Kind::Unknown:
                return std::nullopt;
            case TailBound::Kind::Affine:
                if (tail_.offset <= prec::kNegInf) break;
                if (tail_.slope < slope) return std::nullopt;
                A = std::max(A, tail_.offset - (tail_.slope - slope) * (t_deg() + 1));
                break;
        }
        return A;
    }

    // Keep coefficients up to t^n; the dropped part is folded into the tail bound.
    TatePoly truncate_t(long n, long slope) const {
        if (n >= t_deg()) return *this;
        std::vector<RamSeries> head(c_.begin(), c_.begin() + (n + 1));
        auto A = uniform_bound(slope);
        TailBound tail = A ? TailBound::affine(*A, slope) : TailBound::unknown();
        TatePoly r(F_, e_, std::move(head), tail);
        r.pad(n);
        return r;
    }

  private:
    Field F_;
    int e_ = 1;
    std::vector<RamSeries> c_;
    TailBound tail_;

    void trim() {
        if (tail_.kind != TailBound::Kind::Zero) return;
        while (!c_.empty() && c_.back().is_zero() && c_.back().exact()) c_.pop_back();
    }
    void pad(long n) {
        while (t_deg() < n) c_.push_back(RamSeries(F_, e_));
    }

    // Length of a sum or product: limited by every truncated operand.
    static long result_length(const TatePoly& a, const TatePoly& b, bool product) {
        bool ta = !a.is_polynomial(), tb = !b.is_polynomial();
        if (ta && tb) return std::min(a.t_deg(), b.t_deg());
        if (ta) return a.t_deg();
        if (tb) return b.t_deg();
        if (product) return (a.c_.empty() || b.c_.empty()) ? -1 : a.t_deg() + b.t_deg();
        return std::max(a.t_deg(), b.t_deg());
    }

    static TailBound result_tail(const TatePoly& a, const TatePoly& b, bool product) {
        if (a.is_polynomial() && b.is_polynomial()) return TailBound::zero();
        if (a.tail_.kind == TailBound::Kind::Unknown || b.tail_.kind == TailBound::Kind::Unknown)
            return TailBound::unknown();
        long slope = prec::kInf;
        if (a.tail_.kind == TailBound::Kind::Affine) slope = std::min(slope, a.tail_.slope);
        if (b.tail_.kind == TailBound::Kind::Affine) slope = std::min(slope, b.tail_.slope);
        auto A = a.uniform_bound(slope), B = b.uniform_bound(slope);
        if (!A || !B) return TailBound::unknown();
        if (product) {
            if (*A <= prec::kNegInf || *B <= prec::kNegInf) return TailBound::affine(prec::kNegInf, slope);
            return TailBound::affine(*A + *B, slope);
        }
        return TailBound::affine(std::max(*A, *B), slope);
    }

    static TatePoly combine(const TatePoly& a, const TatePoly& b, bool subtract) {
        const Field& F = a.F_ ? a.F_ : b.F_;
        int e = a.F_ ? a.e_ : b.e_;
        long n = result_length(a, b, false);
        std::vector<RamSeries> c;
        for (long m = 0; m <= n; ++m) {
            RamSeries x = m <= a.t_deg() ? a.c_[static_cast<std::size_t>(m)] : RamSeries(F, e);
            RamSeries y = m <= b.t_deg() ? b.c_[static_cast<std::size_t>(m)] : RamSeries(F, e);
            c.push_back(subtract ? x - y : x + y);
        }
        TatePoly r(F, e, std::move(c), result_tail(a, b, false));
        r.pad(n);
        return r;
    }
};

}  // namespace tmotive

#endif
