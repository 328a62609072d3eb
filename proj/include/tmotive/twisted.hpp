#ifndef TMOTIVE_TWISTED_HPP
#define TMOTIVE_TWISTED_HPP

#include <string>
#include <utility>
#include <vector>

#include "matrix.hpp"

namespace tmotive {

inline ExactCoef twist_coef(const ExactCoef& c, long n, const FieldSpec&) { return c.twist(n); }
inline RamSeries twist_coef(const RamSeries& c, long n, const FieldSpec& s) { return c.twist(n, s.q(), s.e); }
inline ExactCoef zero_coef(const ExactCoef& like) { return ExactCoef::zero(like.spec()); }
inline RamSeries zero_coef(const RamSeries& like) { return RamSeries(like.field(), like.ram()); }

enum class TwistVar { Tau, Sigma };

/**
 * Twisted polynomial sum c_i X^i with X c = c^(q) X for tau and
 * X c = c^(1/q) X for sigma.
 */
template <class C>
class TwistedPoly {
  public:
    TwistedPoly() = default;
    TwistedPoly(FieldSpec spec, TwistVar var, std::vector<C> c, C zero)
        : spec_(spec), var_(var), c_(std::move(c)), zero_(std::move(zero)) {
        trim();
    }

    const FieldSpec& spec() const noexcept { return spec_; }
    TwistVar var() const noexcept { return var_; }
    const std::vector<C>& coeffs() const noexcept { return c_; }
    long degree() const noexcept { return static_cast<long>(c_.size()) - 1; }
    C coeff(std::size_t i) const { return i < c_.size() ? c_[i] : zero_; }
    const C& zero() const noexcept { return zero_; }
    bool is_zero() const { return c_.empty(); }

    friend bool operator==(const TwistedPoly& a, const TwistedPoly& b) { return a.var_ == b.var_ && a.c_ == b.c_; }

    friend TwistedPoly operator+(const TwistedPoly& a, const TwistedPoly& b) {
        std::vector<C> r;
        for (std::size_t i = 0; i < std::max(a.c_.size(), b.c_.size()); ++i) r.push_back(a.coeff(i) + b.coeff(i));
        return TwistedPoly(a.spec_, a.var_, std::move(r), a.zero_);
    }
    friend TwistedPoly operator-(const TwistedPoly& a, const TwistedPoly& b) {
        std::vector<C> r;
        for (std::size_t i = 0; i < std::max(a.c_.size(), b.c_.size()); ++i) r.push_back(a.coeff(i) - b.coeff(i));
        return TwistedPoly(a.spec_, a.var_, std::move(r), a.zero_);
    }
    friend TwistedPoly operator*(const TwistedPoly& a, const TwistedPoly& b) {
        if (a.var_ != b.var_) throw PreconditionViolated("mixing tau and sigma polynomials");
        if (a.is_zero() || b.is_zero()) return TwistedPoly(a.spec_, a.var_, {}, a.zero_);
        std::vector<C> r(a.c_.size() + b.c_.size() - 1, a.zero_);
        long sign = a.var_ == TwistVar::Tau ? 1 : -1;
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (structurally_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                if (structurally_zero(b.c_[j])) continue;
                r[i + j] = r[i + j] + a.c_[i] * twist_coef(b.c_[j], sign * static_cast<long>(i), a.spec_);
            }
        }
        return TwistedPoly(a.spec_, a.var_, std::move(r), a.zero_);
    }

    // b* = sum c_i^(-i) sigma^i for b = sum c_i tau^i.
    TwistedPoly star() const {
        if (var_ != TwistVar::Tau) throw PreconditionViolated("star is defined on tau-polynomials");
        std::vector<C> r;
        for (std::size_t i = 0; i < c_.size(); ++i) r.push_back(twist_coef(c_[i], -static_cast<long>(i), spec_));
        return TwistedPoly(spec_, TwistVar::Sigma, std::move(r), zero_);
    }

  private:
    FieldSpec spec_;
    TwistVar var_ = TwistVar::Tau;
    std::vector<C> c_;
    C zero_{};

    void trim() {
        while (!c_.empty() && structurally_zero(c_.back())) c_.pop_back();
    }
};

template <class C>
bool structurally_zero(const TwistedPoly<C>& x) {
    return x.is_zero();
}

using KTau = TwistedPoly<ExactCoef>;

inline KTau make_tau_poly(const FieldSpec& spec, std::vector<ExactCoef> c) {
    return KTau(spec, TwistVar::Tau, std::move(c), ExactCoef::zero(spec));
}

// Entrywise star with transpose: (B*)_{ij} = (b_{ji})*.
inline Matrix<KTau> star(const Matrix<KTau>& B) {
    Matrix<KTau> r(B.cols(), B.rows(), B.zero().star());
    for (std::size_t i = 0; i < B.rows(); ++i)
        for (std::size_t j = 0; j < B.cols(); ++j) r(j, i) = B(i, j).star();
    return r;
}

/**
 * b(x) = sum c_i x^(q^i) for a tau-polynomial b and a series x, certified to
 * absolute precision target (or better if x is less precise).
 */
inline RamSeries apply(const KTau& b, const RamSeries& x, long target) {
    if (b.var() != TwistVar::Tau) throw PreconditionViolated("apply needs a tau-polynomial");
    RamSeries s(x.field(), x.ram());
    long deg = x.degree_bound();
    for (std::size_t i = 0; i < b.coeffs().size(); ++i) {
        const ExactCoef& c = b.coeffs()[i];
        if (c.is_zero()) continue;
        RamSeries xi = twist_coef(x, static_cast<long>(i), b.spec());
        long qi = static_cast<long>(ExactCoef::pow_ll(b.spec().q(), static_cast<unsigned>(i)));
        long need = deg <= prec::kNegInf ? target : prec::add(target, prec::mul(std::max(deg, 0L), qi));
        s = s + to_series(c, x.ram(), need) * xi;
    }
    return s;
}

}  // namespace tmotive

#endif
