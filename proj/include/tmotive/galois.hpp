#ifndef TMOTIVE_GALOIS_HPP
#define TMOTIVE_GALOIS_HPP

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "motive.hpp"

namespace tmotive {

/**
 * Matrix of an endomorphism b of rho on the t-motive basis {1, sigma, ..,
 * sigma^(r-1)}: row i holds the coordinates of sigma^(i-1) b*. Intermediate
 * coordinates involve q-th roots of theta, so they are computed at a larger
 * depth D and descended at the end. Throws IntertwineFailed unless
 * Phi H = H^(-1) Phi.
 */
inline Matrix<KtPoly> endo_matrix(const KTau& b, const DrinfeldModule& rho) {
    if (!verify_endo(b, rho)) throw IntertwineFailed("b does not commute with rho_t");
    std::size_t r = static_cast<std::size_t>(rho.rank());
    std::size_t top = r + static_cast<std::size_t>(std::max(0L, b.degree()));
    FieldSpec s = rho.spec;
    s.D = rho.spec.D + static_cast<std::uint32_t>(top + r);
    std::vector<ExactCoef> kappa, bc;
    for (const auto& k : rho.kappa) kappa.push_back(k.with_depth(s.D));
    for (const auto& c : b.coeffs()) bc.push_back(c.with_depth(s.D));
    DrinfeldModule lifted(s, kappa);
    Matrix<KtPoly> Phi = phi_rho(lifted);
    KTau bs = make_tau_poly(s, bc).star();
    // v[j] = coordinates of sigma^j, v[j+1] = v[j]^(-1) Phi.
    std::vector<std::vector<KtPoly>> v;
    std::vector<KtPoly> v0(r, KtPoly(s));
    v0[0] = KtPoly::constant(ExactCoef::one(s));
    v.push_back(v0);
    for (std::size_t j = 1; j < top; ++j) {
        std::vector<KtPoly> next(r, KtPoly(s));
        for (std::size_t a = 0; a < r; ++a) {
            KtPoly tw = v[j - 1][a].twist(-1);
            if (tw.is_zero()) continue;
            for (std::size_t c = 0; c < r; ++c) next[c] = next[c] + tw * Phi(a, c);
        }
        v.push_back(next);
    }
    Matrix<KtPoly> Hs(r, r, KtPoly(s));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < bs.coeffs().size(); ++k) {
            const ExactCoef& c = bs.coeffs()[k];
            if (c.is_zero()) continue;
            KtPoly ck = KtPoly::constant(c.twist(-static_cast<long>(i)));
            for (std::size_t a = 0; a < r; ++a) Hs(i, a) = Hs(i, a) + ck * v[k + i][a];
        }
    Matrix<KtPoly> H = Hs.map([&](const KtPoly& x) { return x.with_depth(rho.spec.D); });
    Matrix<KtPoly> PhiR = phi_rho(rho);
    Matrix<KtPoly> Hm1 = H.map([](const KtPoly& x) { return x.twist(-1); });
    Matrix<KtPoly> diff = PhiR * H - Hm1 * PhiR;
    if (!diff.all_of([](const KtPoly& x) { return x.is_zero(); }))
        throw IntertwineFailed("Phi H != H^(-1) Phi");
    return H;
}

// Field embedding F_{p^k} -> F_{p^K} for k | K, sending g to the smallest root of its modulus.
class FieldEmbedding {
  public:
    FieldEmbedding(Field small, Field big) : small_(std::move(small)), big_(std::move(big)) {
        if (small_->p() != big_->p() || big_->k() % small_->k() != 0)
            throw PreconditionViolated("no embedding between these fields");
        const auto& mod = small_->modulus();
        for (Elem x = 0; x < big_->size(); ++x) {
            Elem acc = 0;
            for (std::size_t i = mod.size(); i-- > 0;) acc = big_->add(big_->mul(acc, x), big_->from_int(mod[i]));
            if (acc == 0 && (small_->k() > 1 || x == 0)) {
                root_ = x;
                if (small_->k() > 1) break;
            }
        }
    }
    Elem operator()(Elem a) const {
        if (small_->k() == 1) return big_->from_int(a);
        auto d = small_->digits(a);
        Elem acc = 0;
        for (std::size_t i = d.size(); i-- > 0;) acc = big_->add(big_->mul(acc, root_), big_->from_int(d[i]));
        return acc;
    }
    const Field& big() const noexcept { return big_; }

  private:
    Field small_, big_;
    Elem root_ = 0;
};

/**
 * P/Q with deg P, deg Q <= floor(N/2) and Q(0) != 0 matching the series
 * sum s_m t^m modulo t^(N+1), or nullopt.
 */
inline std::optional<RatFunc> rational_reconstruct(const Field& F, const std::vector<Elem>& s) {
    long N = static_cast<long>(s.size()) - 1;
    long bound = N / 2;
    Poly S(F, s);
    if (S.is_zero()) return RatFunc(F);
    Poly r0 = Poly::monomial(F, 1, static_cast<std::size_t>(N + 1)), r1 = S;
    Poly v0(F), v1 = Poly::constant(F, 1);
    while (r1.degree() > bound) {
        auto [q, rem] = divmod(r0, r1);
        Poly v2 = v0 - q * v1;
        r0 = std::move(r1);
        r1 = std::move(rem);
        v0 = std::move(v1);
        v1 = std::move(v2);
        if (r1.is_zero()) break;
    }
    if (v1.degree() > bound || v1.coeff(0) == 0) return std::nullopt;
    RatFunc cand(r1, v1);
    // Q S == P mod t^(N+1)
    Poly check = v1 * S - r1;
    for (long m = 0; m <= N; ++m)
        if (check.coeff(static_cast<std::size_t>(m)) != 0) return std::nullopt;
    return cand;
}

struct BettiResult {
    Matrix<RatFunc> hB;
    bool constant_ok = true;
    bool reconstruction_ok = true;
    bool resubstitution_ok = true;
    std::vector<Check> checks;
};

// det(M) over a field via Gaussian elimination.
template <class T>
T det_field(Matrix<T> a, const T& one) {
    std::size_t n = a.rows();
    T det = one;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = n;
        for (std::size_t i = c; i < n; ++i)
            if (!a(i, c).is_zero()) {
                piv = i;
                break;
            }
        if (piv == n) return a.zero();
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
            det = a.zero() - det;
        }
        det = det * a(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a(i, c).is_zero()) continue;
            T f = a(i, c) / a(c, c);
            for (std::size_t j = c; j < n; ++j) a(i, j) = a(i, j) - f * a(c, j);
        }
    }
    return det;
}

/**
 * Betti matrix d[Psi]^(-1) H d[Psi] of an endomorphism matrix at the level of
 * mm. Each entry must have t-coefficients in F_q and is reconstructed in
 * F_q(t) by half-degree Pade, then verified against the series, by
 * resubstitution into d[Psi] hB = H d[Psi], and by comparing characteristic
 * polynomials at three random points of F_{q^8} when H is theta-free.
 */
inline BettiResult betti(const Matrix<KtPoly>& H, const MotiveMatrices& mm, std::uint64_t seed = 1) {
    const FieldSpec& spec = mm.rho.spec;
    const Field F = spec.field();
    int e = mm.e;
    long cap = working_cap(mm.precision);
    Matrix<TatePoly> HT = to_tate(H, e, cap);
    Matrix<TatePoly> hBs = mm.PsiInv * HT * mm.Psi;
    BettiResult out;
    out.hB = Matrix<RatFunc>(H.rows(), H.cols(), RatFunc(F));
    std::string detail;
    for (std::size_t i = 0; i < H.rows(); ++i)
        for (std::size_t j = 0; j < H.cols(); ++j) {
            const TatePoly& x = hBs(i, j);
            std::vector<Elem> s;
            for (const auto& c : x.coeffs()) {
                bool ok = c.prec() >= 1;
                for (const auto& [k, v] : c.terms()) ok = ok && k == 0 && F->in_subfield(v, spec.e);
                if (!ok) {
                    out.constant_ok = false;
                    detail = "entry (" + std::to_string(i) + "," + std::to_string(j) + ") is not constant in F_q";
                }
                s.push_back(c.coeff(0));
            }
            if (x.is_polynomial()) {
                out.hB(i, j) = RatFunc(Poly(F, s));
                continue;
            }
            auto rf = rational_reconstruct(F, s);
            if (!rf) {
                out.reconstruction_ok = false;
                continue;
            }
            out.hB(i, j) = *rf;
        }
    out.checks.push_back({"betti_constant", out.constant_ok, detail.empty() ? "coefficients lie in F_q" : detail});
    out.checks.push_back({"betti_pade", out.reconstruction_ok, "half-degree Pade reconstruction"});
    if (!out.constant_ok || !out.reconstruction_ok) {
        out.resubstitution_ok = false;
        return out;
    }

    // Resubstitution: d[Psi] hB == H d[Psi] as power series.
    Matrix<TatePoly> hBt = out.hB.map([&](const RatFunc& f) {
        TatePoly num = TatePoly(F, e, {}, TailBound::zero());
        std::vector<RamSeries> nc, dc;
        for (Elem c : f.num().coeffs()) nc.push_back(RamSeries::constant(F, e, c));
        for (Elem c : f.den().coeffs()) dc.push_back(RamSeries::constant(F, e, c));
        TatePoly n(F, e, nc, TailBound::zero()), d(F, e, dc, TailBound::zero());
        return f.is_polynomial() ? n : n * d.inverse(mm.precision.t_deg, cap);
    });
    Matrix<TatePoly> lhs = mm.Psi * hBt, rhs = HT * mm.Psi;
    bool resub = true;
    for (std::size_t i = 0; i < lhs.rows(); ++i)
        for (std::size_t j = 0; j < lhs.cols(); ++j) resub = resub && tate_agree(lhs(i, j), rhs(i, j));
    out.checks.push_back({"betti_resubstitution", resub, "d[Psi] hB = H d[Psi]"});

    // Characteristic polynomials at random points of F_{q^8}.
    bool theta_free = H.all_of([](const KtPoly& x) { return x.theta_free(); });
    std::uint32_t big_k = spec.e * 8;
    bool charpoly_ok = true;
    std::string cdetail;
    if (!theta_free) {
        cdetail = "skipped: H depends on theta";
    } else if (big_k % F->k() != 0 || static_cast<double>(big_k) * std::log2(static_cast<double>(spec.p)) > 22) {
        cdetail = "skipped: F_{q^8} does not fit the table arithmetic";
    } else {
        FieldEmbedding emb(F, galois_field(spec.p, big_k));
        const Field& G = emb.big();
        std::mt19937_64 rng(seed);
        for (int pt = 0; pt < 3; ++pt) {
            Elem x0 = static_cast<Elem>(rng() % G->size()), t0 = static_cast<Elem>(rng() % G->size());
            std::size_t n = H.rows();
            Matrix<Fq> A(n, n, Fq{G.get(), 0}), B(n, n, Fq{G.get(), 0});
            bool pole = false;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    Elem hv = 0, tp = 1;
                    for (const auto& c : H(i, j).coeffs()) {
                        Elem cv = c.is_zero() ? 0 : emb(c.value().num().coeff(0));
                        hv = G->add(hv, G->mul(cv, tp));
                        tp = G->mul(tp, t0);
                    }
                    auto ev = [&](const Poly& p) {
                        Elem acc = 0;
                        for (std::size_t k = p.coeffs().size(); k-- > 0;) acc = G->add(G->mul(acc, t0), emb(p.coeffs()[k]));
                        return acc;
                    };
                    Elem den = ev(out.hB(i, j).den());
                    if (den == 0) {
                        pole = true;
                        continue;
                    }
                    Elem bv = G->div(ev(out.hB(i, j).num()), den);
                    Elem diag = i == j ? x0 : 0;
                    A(i, j) = Fq{G.get(), G->sub(diag, hv)};
                    B(i, j) = Fq{G.get(), G->sub(diag, bv)};
                }
            if (pole) {
                --pt;
                continue;
            }
            Fq one{G.get(), 1};
            if (!(det_field(A, one) == det_field(B, one))) charpoly_ok = false;
        }
        cdetail = "characteristic polynomials agree at 3 random points of F_{q^8}";
    }
    out.resubstitution_ok = resub && charpoly_ok;
    out.checks.push_back({"betti_charpoly", charpoly_ok, cdetail});
    return out;
}

// Reduced row echelon form over a field-like type; returns nonzero rows and pivot columns.
template <class T>
std::pair<Matrix<T>, std::vector<std::size_t>> row_reduce(const Matrix<T>& M, const T& one) {
    Matrix<T> a = M;
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < a.cols() && row < a.rows(); ++c) {
        std::size_t piv = a.rows();
        for (std::size_t i = row; i < a.rows(); ++i)
            if (!a(i, c).is_zero()) {
                piv = i;
                break;
            }
        if (piv == a.rows()) continue;
        for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(row, j));
        T inv = one / a(row, c);
        for (std::size_t j = c; j < a.cols(); ++j) a(row, j) = a(row, j) * inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == row || a(i, c).is_zero()) continue;
            T f = a(i, c);
            for (std::size_t j = c; j < a.cols(); ++j)
                if (!a(row, j).is_zero()) a(i, j) = a(i, j) - f * a(row, j);
        }
        pivots.push_back(c);
        ++row;
    }
    return {a.block(0, 0, row, a.cols()), pivots};
}

/**
 * Rank over F(t) by fraction-free (Bareiss) elimination over F[t]. Rows are
 * first cleared of denominators.
 */
inline std::size_t bareiss_rank(const Matrix<RatFunc>& M) {
    if (M.rows() == 0 || M.cols() == 0) return 0;
    const Field F = M.zero().field();
    std::vector<std::vector<Poly>> a(M.rows(), std::vector<Poly>(M.cols(), Poly(F)));
    for (std::size_t i = 0; i < M.rows(); ++i) {
        Poly l = Poly::constant(F, 1);
        for (std::size_t j = 0; j < M.cols(); ++j) {
            const Poly& d = M(i, j).den();
            l = l * (d / gcd(l, d));
        }
        for (std::size_t j = 0; j < M.cols(); ++j) a[i][j] = M(i, j).num() * (l / M(i, j).den());
    }
    std::size_t rank = 0;
    Poly prev = Poly::constant(F, 1);
    for (std::size_t c = 0; c < M.cols() && rank < M.rows(); ++c) {
        std::size_t piv = M.rows();
        for (std::size_t i = rank; i < M.rows(); ++i)
            if (!a[i][c].is_zero()) {
                piv = i;
                break;
            }
        if (piv == M.rows()) continue;
        std::swap(a[piv], a[rank]);
        for (std::size_t i = rank + 1; i < M.rows(); ++i) {
            for (std::size_t j = c + 1; j < M.cols(); ++j) {
                Poly x = a[rank][c] * a[i][j] - a[i][c] * a[rank][j];
                auto [q, rem] = divmod(x, prev);
                if (!rem.is_zero()) throw PreconditionViolated("Bareiss division not exact");
                a[i][j] = q;
            }
            a[i][c] = Poly(F);
        }
        prev = a[rank][c];
        ++rank;
    }
    return rank;
}

inline bool same_row_space(const Matrix<RatFunc>& A, const Matrix<RatFunc>& B) {
    if (A.cols() != B.cols()) return false;
    Matrix<RatFunc> S(A.rows() + B.rows(), A.cols(), A.zero());
    S.set_block(0, 0, A);
    S.set_block(A.rows(), 0, B);
    std::size_t ra = bareiss_rank(A), rb = bareiss_rank(B);
    return ra == rb && bareiss_rank(S) == ra;
}

/**
 * Linear conditions X g - g X = 0 on vec(X) (column-major, index (j-1) r + i)
 * for every generator, reduced to independent rows.
 */
struct GaloisSystem {
    std::size_t r = 0;
    std::size_t n = 0;
    Matrix<RatFunc> B;
    std::size_t rankB = 0;
    std::size_t dim = 0;
    double s = 1.0;
    bool integral_s = true;
    bool reconstruction_ok = true;
};

inline GaloisSystem centralizer_system(const std::vector<Matrix<RatFunc>>& gens, std::size_t r, const Field& F) {
    std::size_t rr = r * r;
    std::vector<std::vector<RatFunc>> rows;
    for (const auto& g : gens)
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < r; ++b) {
                std::vector<RatFunc> row(rr, RatFunc(F));
                for (std::size_t i = 0; i < r; ++i)
                    for (std::size_t j = 0; j < r; ++j) {
                        RatFunc c(F);
                        if (i == a) c = c + g(j, b);
                        if (j == b) c = c - g(a, i);
                        row[j * r + i] = c;
                    }
                rows.push_back(row);
            }
    GaloisSystem sys;
    sys.r = r;
    Matrix<RatFunc> M(rows.size(), rr, RatFunc(F));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rr; ++j) M(i, j) = rows[i][j];
    auto [rref, piv] = row_reduce(M, RatFunc::constant(F, 1));
    sys.B = rref;
    sys.rankB = piv.size();
    std::size_t free = rr - sys.rankB;
    sys.dim = free;
    sys.s = free == 0 ? 0.0 : static_cast<double>(rr) / static_cast<double>(free);
    sys.integral_s = free != 0 && rr % free == 0;
    return sys;
}

/**
 * The prolonged system d_{t,n+1}[B] acting on vec([X_n, .., X_0]). Throws
 * RankDefect unless its rank is (n+1) rank B.
 */
inline Matrix<RatFunc> prolong_system(const GaloisSystem& sys, std::size_t n) {
    Matrix<RatFunc> dB = dmatrix(sys.B, n, [](const RatFunc& x, std::size_t k) { return x.hyperderiv(k); });
    std::size_t rk = bareiss_rank(dB);
    if (rk != (n + 1) * sys.rankB)
        throw RankDefect("rank d[B] = " + std::to_string(rk) + ", expected " + std::to_string((n + 1) * sys.rankB));
    return dB;
}

inline GaloisSystem galois_dimension(const GaloisSystem& base, std::size_t n) {
    GaloisSystem out = base;
    out.n = n;
    prolong_system(base, n);
    out.dim = (n + 1) * (base.r * base.r - base.rankB);
    return out;
}

/**
 * Whether M has the block shape of an element of the level-n group:
 * block upper triangular, constant along block diagonals, invertible diagonal block.
 */
template <class T>
bool check_group_shape(const Matrix<T>& M, std::size_t r, std::size_t n, const T& one) {
    if (M.rows() != r * (n + 1) || M.cols() != r * (n + 1)) return false;
    auto eq = [](const T& a, const T& b) { return (a - b).is_zero(); };
    for (std::size_t bi = 0; bi <= n; ++bi)
        for (std::size_t bj = 0; bj <= n; ++bj)
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < r; ++j) {
                    const T& x = M(bi * r + i, bj * r + j);
                    if (bj < bi) {
                        if (!x.is_zero()) return false;
                    } else if (!eq(x, M(i, (bj - bi) * r + j))) {
                        return false;
                    }
                }
    return !det_field(M.block(0, 0, r, r), one).is_zero();
}

}  // namespace tmotive

#endif
