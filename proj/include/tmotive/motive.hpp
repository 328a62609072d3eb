#ifndef TMOTIVE_MOTIVE_HPP
#define TMOTIVE_MOTIVE_HPP

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "drinfeld.hpp"

namespace tmotive {

// t-truncation and absolute vartheta-precision used for AGF coefficients.
struct Precision {
    long t_deg = 12;
    long prec = 40;
};

struct Check {
    std::string name;
    bool pass = false;
    std::string detail;
};

/**
 * Summary of a residual matrix that should vanish. certified_prec is the
 * smallest coefficient precision; max_valuation is the valuation guaranteed
 * for every entry (certified_prec when everything vanishes).
 */
struct ResidualSummary {
    bool vanishes = true;
    long certified_prec = prec::kInf;
    long max_valuation = prec::kInf;
    long t_deg = prec::kInf;
};

inline ResidualSummary summarize(const Matrix<TatePoly>& R) {
    ResidualSummary s;
    long worst_deg = prec::kNegInf;
    for (std::size_t i = 0; i < R.rows(); ++i)
        for (std::size_t j = 0; j < R.cols(); ++j) {
            const TatePoly& x = R(i, j);
            if (!x.is_polynomial()) s.t_deg = std::min(s.t_deg, x.t_deg());
            for (const auto& c : x.coeffs()) {
                s.certified_prec = std::min(s.certified_prec, c.prec());
                if (!c.is_zero()) {
                    s.vanishes = false;
                    worst_deg = std::max(worst_deg, *c.degree());
                }
            }
        }
    s.max_valuation = s.vanishes ? s.certified_prec : -worst_deg;
    return s;
}

inline RamSeries one_series(const Field& F, int e) { return RamSeries::constant(F, e, 1); }
inline TatePoly tate_zero(const Field& F, int e) { return TatePoly(F, e); }
inline TatePoly tate_one(const Field& F, int e) { return TatePoly::constant(one_series(F, e)); }

inline Matrix<TatePoly> twist(const Matrix<TatePoly>& M, long n, const FieldSpec& spec) {
    return M.map([&](const TatePoly& x) { return x.twist(n, spec); });
}
inline Matrix<TatePoly> prolong(const Matrix<TatePoly>& M, std::size_t n) {
    return dmatrix(M, n, [](const TatePoly& x, std::size_t k) { return x.hyperderiv_t(k); });
}
inline Matrix<KtPoly> prolong(const Matrix<KtPoly>& M, std::size_t n) {
    return dmatrix(M, n, [](const KtPoly& x, std::size_t k) { return x.hyperderiv(k); });
}
inline Matrix<TatePoly> to_tate(const Matrix<KtPoly>& M, int e, long cap) {
    return M.map([&](const KtPoly& x) { return TatePoly::from_exact(x, e, cap); });
}

// Companion matrix of rho: superdiagonal ones, last row from the kappa_i.
inline Matrix<KtPoly> phi_rho(const DrinfeldModule& rho) {
    const FieldSpec& s = rho.spec;
    int r = rho.rank();
    Matrix<KtPoly> P(static_cast<std::size_t>(r), static_cast<std::size_t>(r), KtPoly(s));
    for (int i = 0; i + 1 < r; ++i) P(static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1)) = KtPoly::constant(ExactCoef::one(s));
    ExactCoef kr = rho.k(r).twist(-r).inverse();
    std::size_t last = static_cast<std::size_t>(r - 1);
    P(last, 0) = (KtPoly::t(s) - KtPoly::constant(ExactCoef::theta(s))) * KtPoly::constant(kr);
    for (int j = 1; j < r; ++j)
        P(last, static_cast<std::size_t>(j)) = KtPoly::constant(-(rho.k(j).twist(-j) * kr));
    return P;
}

// V_{ij} = kappa_{i+j-1}^(-(j-1)) (1-based) when i + j - 1 <= r.
inline Matrix<ExactCoef> v_matrix(const DrinfeldModule& rho) {
    int r = rho.rank();
    Matrix<ExactCoef> V(static_cast<std::size_t>(r), static_cast<std::size_t>(r), ExactCoef::zero(rho.spec));
    for (int i = 1; i <= r; ++i)
        for (int j = 1; i + j - 1 <= r; ++j)
            V(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = rho.k(i + j - 1).twist(-(j - 1));
    return V;
}

/**
 * Anderson generating function f_u = sum_m Exp(u / theta^(m+1)) t^m up to
 * t^(t_deg). The tail bound deg chi_m = deg u - e(m+1) is attached once Exp is
 * certified isometric at the last stored coefficient.
 */
inline TatePoly agf(const DrinfeldModule& rho, const RamSeries& u, const Precision& p) {
    const Field& F = u.field();
    int e = u.ram();
    if (u.is_zero()) {
        if (u.exact()) return TatePoly(F, e);
        throw PrecisionExhausted("AGF of a value that is zero within precision");
    }
    long du = *u.degree();
    EntireSeries ex = series_for(rho, SeriesKind::Exp, 0, du - e, e, p.prec);
    std::vector<RamSeries> chi;
    bool isometric = false;
    for (long m = 0; m <= p.t_deg; ++m) {
        RamSeries z = u.shift(-static_cast<long>(e) * (m + 1));
        EvalResult r = eval_entire(ex, z, p.prec);
        if (m == p.t_deg) {
            long dz = du - static_cast<long>(e) * (m + 1);
            isometric = r.nonlinear_degree < dz && r.value.degree() && *r.value.degree() == dz;
        }
        chi.push_back(std::move(r.value));
    }
    TailBound tail = isometric ? TailBound::affine(du - e, e) : TailBound::unknown();
    return TatePoly(F, e, std::move(chi), tail);
}

/**
 * Frobenius data for rho and one A-basis of its period lattice at level n:
 * Phi = d[Phi_rho], Psi = d[Psi_rho] and PsiInv = d[Upsilon^(1) V].
 */
struct MotiveMatrices {
    DrinfeldModule rho;
    int e = 1;
    std::size_t n = 0;
    Precision precision;
    Matrix<KtPoly> Phi;
    Matrix<ExactCoef> V;
    Matrix<TatePoly> Upsilon;
    Matrix<TatePoly> Psi;
    Matrix<TatePoly> PsiInv;
    std::vector<TatePoly> agfs;
    ResidualSummary residual;
    std::vector<Check> checks;
};

inline long working_cap(const Precision& p) { return 4 * p.prec + 64; }

// Psi^(-1) - Phi Psi for the matrices stored in mm.
inline Matrix<TatePoly> frobenius_residual(const MotiveMatrices& mm) {
    Matrix<TatePoly> PhiT = to_tate(mm.Phi, mm.e, working_cap(mm.precision));
    return twist(mm.Psi, -1, mm.rho.spec) - PhiT * mm.Psi;
}

inline bool is_identity(const Matrix<TatePoly>& M) {
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) {
            TatePoly x = M(i, j);
            if (i == j) x = x - tate_one(x.field(), x.ram());
            if (!x.is_zero()) return false;
        }
    return true;
}

inline void finish_checks(MotiveMatrices& mm) {
    mm.residual = summarize(frobenius_residual(mm));
    mm.checks.push_back({"frobenius_residual_level_" + std::to_string(mm.n), mm.residual.vanishes,
                         "certified_prec=" + std::to_string(mm.residual.certified_prec) +
                             " t_deg=" + std::to_string(mm.residual.t_deg)});
    bool inv_ok = is_identity(mm.PsiInv * mm.Psi);
    mm.checks.push_back({"psi_inverse_level_" + std::to_string(mm.n), inv_ok, "PsiInv * Psi = I within precision"});
}

/**
 * Rigid analytic trivialization Psi = V^(-1) (Upsilon^(1))^(-1) for the given
 * periods. Checks the difference equation Psi^(-1) = Phi Psi by a true
 * inverse twist of Psi.
 */
inline MotiveMatrices psi_rho(const DrinfeldModule& rho, const std::vector<RamSeries>& periods, const Precision& p) {
    int r = rho.rank();
    if (static_cast<int>(periods.size()) != r) throw PreconditionViolated("need one period per rank");
    const Field& F = periods[0].field();
    int e = periods[0].ram();
    long cap = working_cap(p);
    MotiveMatrices mm;
    mm.rho = rho;
    mm.e = e;
    mm.precision = p;
    mm.Phi = phi_rho(rho);
    mm.V = v_matrix(rho);
    std::size_t R = static_cast<std::size_t>(r);
    mm.Upsilon = Matrix<TatePoly>(R, R, tate_zero(F, e));
    Matrix<TatePoly> U1(R, R, tate_zero(F, e));
    for (std::size_t i = 0; i < R; ++i) {
        mm.agfs.push_back(agf(rho, periods[i], p));
        for (std::size_t j = 0; j < R; ++j) {
            mm.Upsilon(i, j) = mm.agfs[i].twist(static_cast<long>(j), rho.spec);
            U1(i, j) = mm.agfs[i].twist(static_cast<long>(j + 1), rho.spec);
        }
    }
    Matrix<ExactCoef> Vinv = inverse_field(mm.V, ExactCoef::one(rho.spec));
    auto exact_to_tate = [&](const ExactCoef& c) { return TatePoly::constant(to_series(c, e, cap)); };
    Matrix<TatePoly> VinvT = Vinv.map(exact_to_tate), VT = mm.V.map(exact_to_tate);
    mm.Psi = VinvT * inverse_tate(U1, p.t_deg, cap);
    mm.PsiInv = U1 * VT;
    finish_checks(mm);
    return mm;
}

// Level-n data: Phi, Psi and PsiInv replaced by their d-matrices.
inline MotiveMatrices prolong(const MotiveMatrices& base, std::size_t n) {
    MotiveMatrices mm = base;
    mm.n = n;
    mm.checks.clear();
    mm.Phi = prolong(base.Phi, n);
    mm.Psi = prolong(base.Psi, n);
    mm.PsiInv = prolong(base.PsiInv, n);
    finish_checks(mm);
    return mm;
}

// Quotient P_{n-l-1}: the upper-left (n - l) r square of a level-n matrix.
template <class T>
Matrix<T> prolong_projection(const Matrix<T>& M, std::size_t r, std::size_t ell) {
    std::size_t blocks = M.rows() / r;
    if (ell + 1 > blocks) throw PreconditionViolated("projection index beyond prolongation level");
    std::size_t k = (blocks - ell - 1) * r;
    return M.block(0, 0, k, k);
}

/**
 * Prolongation t-module P_n rho: d[Phi_t] = theta I with -1 on the
 * subdiagonal, and the tau^i coefficient diag(kappa_i).
 */
struct ProlongedTModule {
    std::size_t n = 0;
    Matrix<ExactCoef> dphi;
    std::vector<Matrix<ExactCoef>> tau_coeffs;  // index i-1 for tau^i
};

inline ProlongedTModule prolong_tmodule(const DrinfeldModule& rho, std::size_t n) {
    const FieldSpec& s = rho.spec;
    ProlongedTModule P;
    P.n = n;
    P.dphi = Matrix<ExactCoef>(n + 1, n + 1, ExactCoef::zero(s));
    for (std::size_t i = 0; i <= n; ++i) {
        P.dphi(i, i) = ExactCoef::theta(s);
        if (i > 0) P.dphi(i, i - 1) = -ExactCoef::one(s);
    }
    for (int i = 1; i <= rho.rank(); ++i) {
        Matrix<ExactCoef> D(n + 1, n + 1, ExactCoef::zero(s));
        for (std::size_t a = 0; a <= n; ++a) D(a, a) = rho.k(i);
        P.tau_coeffs.push_back(D);
    }
    return P;
}

// (P_n rho)_t applied to a vector of series.
inline std::vector<RamSeries> apply_prolonged(const ProlongedTModule& P, const DrinfeldModule& rho,
                                              const std::vector<RamSeries>& x, long target) {
    std::size_t n1 = P.n + 1;
    int e = x[0].ram();
    std::vector<RamSeries> out(n1, RamSeries(x[0].field(), e));
    long cap = target + 64;
    for (std::size_t a = 0; a < n1; ++a) {
        for (std::size_t b = 0; b < n1; ++b)
            if (!P.dphi(a, b).is_zero()) out[a] = out[a] + to_series(P.dphi(a, b), e, cap) * x[b];
        for (std::size_t i = 0; i < P.tau_coeffs.size(); ++i) {
            const ExactCoef& c = P.tau_coeffs[i](a, a);
            if (c.is_zero()) continue;
            out[a] = out[a] + to_series(c, e, cap) * x[a].twist(static_cast<long>(i + 1), rho.spec.q(), rho.spec.e);
        }
    }
    return out;
}

// Exp of P_n rho, coordinate-wise.
inline std::vector<RamSeries> exp_prolong(const DrinfeldModule& rho, const std::vector<RamSeries>& z, long target) {
    std::vector<RamSeries> out;
    for (const auto& x : z) out.push_back(exp_eval(rho, x, target).value);
    return out;
}

inline bool series_agree(const RamSeries& a, const RamSeries& b) { return (a - b).is_zero(); }
inline bool tate_agree(const TatePoly& a, const TatePoly& b) { return (a - b).is_zero(); }

/**
 * AGF of P_n rho at the vector with u in position j (1-based), computed from
 * the definition with the exact powers of d[Phi_t]^(-1) and compared against
 * (0,..,0, f_u, d f_u, .., d^(n+1-j) f_u). Returns the closed form.
 */
inline std::vector<TatePoly> agf_prolong(const DrinfeldModule& rho, const RamSeries& u, std::size_t j, std::size_t n,
                                         const Precision& p) {
    if (j < 1 || j > n + 1) throw PreconditionViolated("position must lie in 1..n+1");
    const Field& F = u.field();
    int e = u.ram();
    long cap = working_cap(p);
    ProlongedTModule P = prolong_tmodule(rho, n);
    Matrix<ExactCoef> Minv = inverse_field(P.dphi, ExactCoef::one(rho.spec));
    long du = u.degree_bound();
    EntireSeries ex = series_for(rho, SeriesKind::Exp, 0, du - e, e, p.prec);

    // Route (i): coefficient of t^m is Exp(d[Phi_t]^(-m-1) (u)_j), entry by entry.
    std::vector<std::vector<RamSeries>> coeffs(n + 1);
    Matrix<ExactCoef> power = Minv;
    for (long m = 0; m <= p.t_deg; ++m) {
        for (std::size_t a = 0; a <= n; ++a) {
            const ExactCoef& c = power(a, j - 1);
            RamSeries arg = c.is_zero() ? RamSeries(F, e) : to_series(c, e, cap) * u;
            coeffs[a].push_back(arg.is_zero() && arg.exact() ? arg : eval_entire(ex, arg, p.prec).value);
        }
        power = power * Minv;
    }
    std::vector<TatePoly> route1;
    for (std::size_t a = 0; a <= n; ++a) route1.emplace_back(F, e, coeffs[a], TailBound::unknown());

    // Route (ii): hyperderivatives of the rank-one AGF.
    Precision longer = p;
    longer.t_deg = p.t_deg + static_cast<long>(n);
    TatePoly f = agf(rho, u, longer);
    std::vector<TatePoly> route2;
    for (std::size_t a = 0; a <= n; ++a) {
        if (a + 1 < j) {
            route2.push_back(TatePoly(F, e));
            continue;
        }
        TatePoly d = f.hyperderiv_t(a + 1 - j);
        route2.push_back(d.truncate_t(p.t_deg, e));
    }
    for (std::size_t a = 0; a <= n; ++a) {
        TatePoly diff = route1[a] - route2[a];
        if (!diff.is_zero())
            throw MismatchBeyondPrecision("prolonged AGF routes disagree in coordinate " + std::to_string(a + 1));
    }
    return route2;
}

struct QuasiLogResult {
    RamSeries value;         // sum kappa_i f_u^(i)(theta)
    RamSeries series_value;  // F_delta(u) from the quasi-periodic series
    RamSeries expected;      // alpha - u
    long certified_prec = 0;
};

/**
 * F_delta(u) for delta_t = rho_t - theta along two routes: the twisted AGFs at
 * t = theta and the quasi-periodic series. Both must equal alpha - u, where
 * alpha = Exp(u) is also verified.
 */
inline QuasiLogResult quasi_log(const DrinfeldModule& rho, const RamSeries& u, const RamSeries& alpha,
                                const Precision& p) {
    const Field& F = u.field();
    int e = u.ram();
    long cap = working_cap(p);
    RamSeries ex = exp_eval(rho, u, p.prec).value;
    if (!series_agree(ex, alpha)) throw MismatchBeyondPrecision("Exp(u) differs from alpha within precision");
    TatePoly f = agf(rho, u, p);
    QuasiLogResult out{RamSeries(F, e), RamSeries(F, e), alpha - u, 0};
    long du = u.degree_bound();
    for (int i = 1; i <= rho.rank(); ++i) {
        const ExactCoef& k = rho.k(i);
        if (k.is_zero()) continue;
        RamSeries ks = to_series(k, e, cap);
        out.value = out.value + ks * f.twist(i, rho.spec).eval_at_theta();
        EntireSeries qs = series_for(rho, SeriesKind::Quasi, i, du, e, p.prec);
        out.series_value = out.series_value + ks * eval_entire(qs, u, p.prec).value;
    }
    if (!series_agree(out.value, out.series_value))
        throw MismatchBeyondPrecision("quasi-logarithm routes disagree within precision");
    if (!series_agree(out.value, out.expected))
        throw MismatchBeyondPrecision("quasi-logarithm differs from alpha - u within precision");
    out.certified_prec = std::min({out.value.prec(), out.series_value.prec(), out.expected.prec()});
    return out;
}

/**
 * Extension t-motive Y_{alpha,n}: Phi = [[d[Phi_rho], 0], [h, 1]] and
 * Psi = [[d[Psi_rho], 0], [g d[Psi_rho], 1]] with g = (s, d s, .., d^n s).
 */
struct ExtensionMotive {
    std::size_t n = 0;
    std::vector<TatePoly> s;  // s_alpha
    std::vector<TatePoly> g;
    std::vector<TatePoly> h;
    Matrix<TatePoly> Phi;
    Matrix<TatePoly> Psi;
    ResidualSummary residual;
    std::vector<Check> checks;
};

inline std::vector<TatePoly> s_alpha(const DrinfeldModule& rho, const TatePoly& f, int e, long cap) {
    int r = rho.rank();
    std::vector<TatePoly> s;
    for (int k = 1; k <= r; ++k) {
        TatePoly acc(f.field(), e);
        for (int i = k; i <= r; ++i) {
            const ExactCoef& ki = rho.k(i);
            if (ki.is_zero()) continue;
            acc = acc + f.twist(i - k + 1, rho.spec).scale(to_series(ki.twist(-(k - 1)), e, cap));
        }
        s.push_back(-acc);
    }
    return s;
}

inline std::vector<TatePoly> row_times(const std::vector<TatePoly>& row, const Matrix<TatePoly>& M) {
    Matrix<TatePoly> R(1, row.size(), M.zero());
    for (std::size_t j = 0; j < row.size(); ++j) R(0, j) = row[j];
    Matrix<TatePoly> P = R * M;
    std::vector<TatePoly> out;
    for (std::size_t j = 0; j < P.cols(); ++j) out.push_back(P(0, j));
    return out;
}

inline ExtensionMotive y_alpha(const MotiveMatrices& base, const RamSeries& u, const RamSeries& alpha, std::size_t n) {
    const DrinfeldModule& rho = base.rho;
    const FieldSpec& spec = rho.spec;
    int e = base.e;
    const Field& F = u.field();
    long cap = working_cap(base.precision);
    std::size_t r = static_cast<std::size_t>(rho.rank());
    ExtensionMotive Y;
    Y.n = n;
    TatePoly f = agf(rho, u, base.precision);
    Y.s = s_alpha(rho, f, e, cap);
    for (std::size_t b = 0; b <= n; ++b)
        for (std::size_t k = 0; k < r; ++k) Y.g.push_back(Y.s[k].hyperderiv_t(b));
    Y.h.assign((n + 1) * r, tate_zero(F, e));
    Y.h[0] = TatePoly::constant(alpha);

    Matrix<TatePoly> PhiP = to_tate(prolong(base.Phi, n), e, cap);
    Matrix<TatePoly> PsiP = prolong(base.Psi, n);
    std::size_t N = (n + 1) * r;

    // g^(-1) Phi_P = g + h
    std::vector<TatePoly> gm1;
    for (const auto& x : Y.g) gm1.push_back(x.twist(-1, spec));
    std::vector<TatePoly> lhs = row_times(gm1, PhiP);
    bool diff_ok = true;
    for (std::size_t j = 0; j < N; ++j) diff_ok = diff_ok && (lhs[j] - Y.g[j] - Y.h[j]).is_zero();
    Y.checks.push_back({"g_difference_equation", diff_ok, "g^(-1) Phi_P = g + h"});

    Y.Phi = Matrix<TatePoly>(N + 1, N + 1, tate_zero(F, e));
    Y.Psi = Matrix<TatePoly>(N + 1, N + 1, tate_zero(F, e));
    Y.Phi.set_block(0, 0, PhiP);
    Y.Psi.set_block(0, 0, PsiP);
    std::vector<TatePoly> gpsi = row_times(Y.g, PsiP);
    for (std::size_t j = 0; j < N; ++j) {
        Y.Phi(N, j) = Y.h[j];
        Y.Psi(N, j) = gpsi[j];
    }
    Y.Phi(N, N) = tate_one(F, e);
    Y.Psi(N, N) = tate_one(F, e);
    Y.residual = summarize(twist(Y.Psi, -1, spec) - Y.Phi * Y.Psi);
    Y.checks.push_back({"extension_residual", Y.residual.vanishes,
                        "certified_prec=" + std::to_string(Y.residual.certified_prec)});
    RamSeries s1 = Y.s[0].eval_at_theta();
    bool special = series_agree(s1, u - alpha);
    Y.checks.push_back({"s_alpha_at_theta", special, "first entry of s_alpha(theta) equals u - alpha"});
    return Y;
}

/**
 * N_n for w logarithm pairs: block-diagonal copies of d[Phi_rho] closed by the
 * row (h_1, .., h_w, 1); Psi likewise with the rows g_i d[Psi_rho].
 */
inline ExtensionMotive n_motive(const MotiveMatrices& base, const std::vector<std::pair<RamSeries, RamSeries>>& pairs,
                                std::size_t n) {
    const FieldSpec& spec = base.rho.spec;
    int e = base.e;
    const Field& F = pairs.at(0).first.field();
    std::size_t r = static_cast<std::size_t>(base.rho.rank());
    std::size_t N = (n + 1) * r, w = pairs.size();
    ExtensionMotive out;
    out.n = n;
    out.Phi = Matrix<TatePoly>(N * w + 1, N * w + 1, tate_zero(F, e));
    out.Psi = out.Phi;
    bool all = true;
    for (std::size_t i = 0; i < w; ++i) {
        ExtensionMotive Y = y_alpha(base, pairs[i].first, pairs[i].second, n);
        for (const auto& c : Y.checks) all = all && c.pass;
        out.Phi.set_block(i * N, i * N, Y.Phi.block(0, 0, N, N));
        out.Psi.set_block(i * N, i * N, Y.Psi.block(0, 0, N, N));
        out.Phi.set_block(N * w, i * N, Y.Phi.block(N, 0, 1, N));
        out.Psi.set_block(N * w, i * N, Y.Psi.block(N, 0, 1, N));
    }
    out.Phi(N * w, N * w) = tate_one(F, e);
    out.Psi(N * w, N * w) = tate_one(F, e);
    out.checks.push_back({"component_extensions", all, std::to_string(w) + " pairs"});
    out.residual = summarize(twist(out.Psi, -1, spec) - out.Phi * out.Psi);
    out.checks.push_back({"n_motive_residual", out.residual.vanishes,
                          "certified_prec=" + std::to_string(out.residual.certified_prec)});
    return out;
}

}  // namespace tmotive

#endif
