#ifndef TMOTIVE_DRINFELD_HPP
#define TMOTIVE_DRINFELD_HPP

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "twisted.hpp"

namespace tmotive {

/**
 * Drinfeld module rho_t = theta + kappa_1 tau + ... + kappa_r tau^r with
 * exact coefficients; kappa[i-1] holds kappa_i.
 */
struct DrinfeldModule {
    FieldSpec spec;
    std::vector<ExactCoef> kappa;

    DrinfeldModule() = default;
    DrinfeldModule(FieldSpec s, std::vector<ExactCoef> k) : spec(s), kappa(std::move(k)) {
        if (kappa.empty() || kappa.back().is_zero()) throw PreconditionViolated("kappa_r must be nonzero");
    }
    static DrinfeldModule carlitz(const FieldSpec& s) { return DrinfeldModule(s, {ExactCoef::one(s)}); }

    int rank() const noexcept { return static_cast<int>(kappa.size()); }
    const ExactCoef& k(int i) const { return kappa.at(static_cast<std::size_t>(i - 1)); }
    KTau rho_t() const {
        std::vector<ExactCoef> c{ExactCoef::theta(spec)};
        c.insert(c.end(), kappa.begin(), kappa.end());
        return make_tau_poly(spec, std::move(c));
    }
};

enum class SeriesKind { Exp, Log, Quasi };

// Coefficients c_h of sum c_h z^(q^h), h = 0..H.
struct EntireSeries {
    SeriesKind kind = SeriesKind::Exp;
    int j = 0;
    FieldSpec spec;
    std::vector<ExactCoef> coeffs;
    // Optional upper bounds on deg_w of each coefficient (kNegInf for zero).
    std::vector<long> bounds;
};

inline ExactCoef theta_q_minus_theta(const FieldSpec& s, int h) {
    return ExactCoef::theta(s).twist(h) - ExactCoef::theta(s);
}

// alpha_0 = 1, alpha_h (theta^(q^h) - theta) = sum_{i=1}^{min(h,r)} kappa_i alpha_{h-i}^(i).
inline EntireSeries exp_coeffs(const DrinfeldModule& rho, int H) {
    EntireSeries s{SeriesKind::Exp, 0, rho.spec, {ExactCoef::one(rho.spec)}, {}};
    for (int h = 1; h <= H; ++h) {
        ExactCoef acc = ExactCoef::zero(rho.spec);
        for (int i = 1; i <= std::min(h, rho.rank()); ++i) {
            if (rho.k(i).is_zero() || s.coeffs[static_cast<std::size_t>(h - i)].is_zero()) continue;
            acc = acc + rho.k(i) * s.coeffs[static_cast<std::size_t>(h - i)].twist(i);
        }
        s.coeffs.push_back(acc.is_zero() ? acc : acc / theta_q_minus_theta(rho.spec, h));
    }
    return s;
}

// beta_0 = 1, beta_h = -sum_{i<h} beta_i alpha_{h-i}^(i).
inline EntireSeries log_coeffs(const DrinfeldModule& rho, int H) {
    EntireSeries a = exp_coeffs(rho, H);
    EntireSeries s{SeriesKind::Log, 0, rho.spec, {ExactCoef::one(rho.spec)}, {}};
    for (int h = 1; h <= H; ++h) {
        ExactCoef acc = ExactCoef::zero(rho.spec);
        for (int i = 0; i < h; ++i) {
            const ExactCoef& b = s.coeffs[static_cast<std::size_t>(i)];
            const ExactCoef& al = a.coeffs[static_cast<std::size_t>(h - i)];
            if (b.is_zero() || al.is_zero()) continue;
            acc = acc + b * al.twist(i);
        }
        s.coeffs.push_back(-acc);
    }
    return s;
}

// Quasi-periodic function of tau^j: c_i = alpha_{i-j}^(j) / (theta^(q^i) - theta) for i >= j.
inline EntireSeries quasi_coeffs(const DrinfeldModule& rho, int j, int H) {
    if (j < 1) throw PreconditionViolated("quasi-periodic index must be positive");
    EntireSeries a = exp_coeffs(rho, std::max(0, H - j));
    EntireSeries s{SeriesKind::Quasi, j, rho.spec, {}, {}};
    for (int i = 0; i <= H; ++i) {
        if (i < j || a.coeffs[static_cast<std::size_t>(i - j)].is_zero()) {
            s.coeffs.push_back(ExactCoef::zero(rho.spec));
            continue;
        }
        s.coeffs.push_back(a.coeffs[static_cast<std::size_t>(i - j)].twist(j) / theta_q_minus_theta(rho.spec, i));
    }
    return s;
}

struct EvalResult {
    RamSeries value;
    int terms = 0;
    // Bound on the degree of every term with h >= 1, tail included.
    long nonlinear_degree = prec::kNegInf;
};

/**
 * sum c_h u^(q^h) to absolute precision target. Convergence is certified when
 * the degrees of the last three nonzero terms strictly decrease; the tail is
 * then bounded by the last term. Term degrees come from s.bounds when present.
 * Otherwise ConvergenceNotCertified.
 */
inline EvalResult eval_entire(const EntireSeries& s, const RamSeries& u, long target) {
    const Field& F = u.field();
    int e = u.ram();
    EvalResult out{RamSeries(F, e), 0, prec::kNegInf};
    if (structurally_zero(u)) return out;
    long U = u.degree_bound();
    std::vector<long> window;
    RamSeries sum(F, e);
    long qh = 1;
    bool certified = false;
    const long qd = static_cast<long>(ExactCoef::pow_ll(s.spec.q(), s.spec.D));
    for (std::size_t h = 0; h < s.coeffs.size(); ++h, qh *= s.spec.q()) {
        const ExactCoef& c = s.coeffs[h];
        bool bounded = h < s.bounds.size();
        if (bounded ? s.bounds[h] <= prec::kNegInf : c.is_zero()) continue;
        long du = prec::mul(U, qh);
        // Degree of the term from the coefficient bound, or exactly: no cancellation inside a single product.
        long cd = bounded ? prec::ceil_div(s.bounds[h] * e, qd) : series_degree(c, e);
        long d = prec::add(cd, du);
        if (!c.is_zero()) {
            RamSeries uq = u.twist(static_cast<long>(h), s.spec.q(), s.spec.e);
            sum = sum + to_series(c, e, prec::add(target, std::max(du, -target))) * uq;
        }
        out.terms = static_cast<int>(h) + 1;
        if (h >= 1) out.nonlinear_degree = std::max(out.nonlinear_degree, d);
        window.push_back(d);
        if (window.size() > 3) window.erase(window.begin());
        bool decreasing = window.size() == 3 && window[0] > window[1] && window[1] > window[2];
        if (decreasing && d < -target) {
            certified = true;
            break;
        }
    }
    bool decreasing = window.size() == 3 && window[0] > window[1] && window[1] > window[2];
    if (!certified && !decreasing)
        throw ConvergenceNotCertified("no strict degree decrease within " + std::to_string(s.coeffs.size()) + " terms");
    long tail = window.back() - 1;
    out.nonlinear_degree = std::max(out.nonlinear_degree, tail);
    out.value = sum.truncate(-tail);
    return out;
}

// Largest q^h used by series_for; beyond it coefficient sizes are out of reach.
inline constexpr long long kMaxSeriesPower = 1LL << 16;

/**
 * Upper bounds on deg_w of the series coefficients c_0..c_H, from the
 * recursions alone (no coefficient is computed). kNegInf marks a zero.
 */
inline std::vector<long> coeff_degree_bounds(const DrinfeldModule& rho, SeriesKind kind, int j, int H) {
    const long long q = rho.spec.q(), qd = ExactCoef::pow_ll(q, rho.spec.D);
    const long NI = prec::kNegInf;
    auto qpow = [&](int h) { return ExactCoef::pow_ll(q, static_cast<unsigned>(h)); };
    int need = kind == SeriesKind::Quasi ? std::max(0, H - j) : H;
    std::vector<long> a{0};
    for (int h = 1; h <= need; ++h) {
        long best = NI;
        for (int i = 1; i <= std::min(h, rho.rank()); ++i) {
            if (rho.k(i).is_zero() || a[static_cast<std::size_t>(h - i)] == NI) continue;
            best = std::max(best, rho.k(i).w_degree() + static_cast<long>(qpow(i)) * a[static_cast<std::size_t>(h - i)]);
        }
        a.push_back(best == NI ? NI : best - static_cast<long>(qpow(h) * qd));
    }
    if (kind == SeriesKind::Exp) return a;
    std::vector<long> out;
    if (kind == SeriesKind::Log) {
        out.push_back(0);
        for (int h = 1; h <= H; ++h) {
            long best = NI;
            for (int i = 0; i < h; ++i) {
                long b = out[static_cast<std::size_t>(i)], al = a[static_cast<std::size_t>(h - i)];
                if (b == NI || al == NI) continue;
                best = std::max(best, b + static_cast<long>(qpow(i)) * al);
            }
            out.push_back(best);
        }
        return out;
    }
    for (int i = 0; i <= H; ++i) {
        long al = i < j ? NI : a[static_cast<std::size_t>(i - j)];
        out.push_back(al == NI ? NI : static_cast<long>(qpow(j)) * al - static_cast<long>(qpow(i) * qd));
    }
    return out;
}

/**
 * Enough coefficients of the chosen series to evaluate at arguments of degree
 * at most U to the target: three consecutive nonzero term degree bounds
 * decrease and the last is below -target. The length is chosen from degree
 * bounds before any coefficient is computed; throws ConvergenceNotCertified
 * if that needs more than max_h terms or q^h beyond kMaxSeriesPower.
 */
inline EntireSeries series_for(const DrinfeldModule& rho, SeriesKind kind, int j, long U, int e, long target,
                               int max_h = 24) {
    const long long q = rho.spec.q(), qd = ExactCoef::pow_ll(q, rho.spec.D);
    int limit = 0;
    for (long long p = q; limit < max_h && p <= kMaxSeriesPower; p *= q) ++limit;
    std::vector<long> bounds = coeff_degree_bounds(rho, kind, j, limit);
    std::vector<long> w;
    long long qh = 1;
    int H = -1;
    for (int h = 0; h <= limit; ++h, qh *= q) {
        long b = bounds[static_cast<std::size_t>(h)];
        if (b == prec::kNegInf) continue;
        long d = static_cast<long>(prec::floor_div(static_cast<long>(b * e), static_cast<long>(qd))) +
                 static_cast<long>(qh) * U;
        w.push_back(d);
        std::size_t n = w.size();
        if (n >= 3 && w[n - 3] > w[n - 2] && w[n - 2] > w[n - 1] && w[n - 1] < -target) {
            H = h;
            break;
        }
    }
    if (H < 0)
        throw ConvergenceNotCertified("series terms do not fall below -" + std::to_string(target) + " within " +
                                      std::to_string(limit + 1) + " terms at argument degree " + std::to_string(U));
    EntireSeries out = kind == SeriesKind::Exp   ? exp_coeffs(rho, H)
                       : kind == SeriesKind::Log ? log_coeffs(rho, H)
                                                 : quasi_coeffs(rho, j, H);
    out.bounds.assign(bounds.begin(), bounds.begin() + H + 1);
    return out;
}

// Exp evaluation with automatically chosen length.
inline EvalResult exp_eval(const DrinfeldModule& rho, const RamSeries& u, long target) {
    long U = std::max(u.degree_bound(), -target);
    return eval_entire(series_for(rho, SeriesKind::Exp, 0, U, u.ram(), target), u, target);
}
inline EvalResult log_eval(const DrinfeldModule& rho, const RamSeries& z, long target) {
    long U = std::max(z.degree_bound(), -target);
    return eval_entire(series_for(rho, SeriesKind::Log, 0, U, z.ram(), target), z, target);
}

// b rho_t == rho_t b in K{tau}.
inline bool verify_endo(const KTau& b, const DrinfeldModule& rho) {
    KTau rt = rho.rho_t();
    return b * rt == rt * b;
}

/**
 * Carlitz period for the Carlitz module over F_qc[theta]:
 *   (-theta)^(qc/(qc-1)) prod_{i>=1} (1 - theta^(1-qc^i))^(-1),
 * with vartheta^e = theta and (qc-1) | e. The root of -1 is the smallest
 * element xi with xi^(qc-1) = -1.
 */
inline RamSeries carlitz_period(const Field& F, long qc, int e, long precision) {
    if (qc < 2 || e % (qc - 1) != 0) throw PreconditionViolated("ramification must be a multiple of qc - 1");
    if (e % static_cast<int>(F->p()) == 0) throw InseparableRamification("p divides the ramification index");
    Elem minus_one = F->neg(1), xi = 0;
    for (Elem x = 1; x < F->size(); ++x)
        if (F->pow(x, qc - 1) == minus_one) {
            xi = x;
            break;
        }
    if (xi == 0) throw PreconditionViolated("constant field lacks a (qc-1)-th root of -1");
    long s = e / (qc - 1);
    long lead = e + s;
    long rel = precision + lead;
    RamSeries prod = RamSeries::constant(F, e, 1);
    long qi = qc;
    for (int i = 1;; ++i, qi *= qc) {
        long a = static_cast<long>(e) * (qi - 1);
        if (a >= rel) break;
        std::vector<std::pair<long, Elem>> t;
        for (long k = 0; k * a < rel; ++k) t.emplace_back(-k * a, 1);
        prod = prod * RamSeries::from_terms(F, e, t, rel);
    }
    prod = prod.truncate(rel);
    return prod.shift(lead).scale(F->neg(xi));
}

}  // namespace tmotive

#endif
