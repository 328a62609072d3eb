#ifndef TMOTIVE_DIFFALG_HPP
#define TMOTIVE_DIFFALG_HPP

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "galois.hpp"

namespace tmotive {

// d_t^l of the entry (i, j) of X_h; i, j are 1-based.
struct DiffVar {
    std::size_t h = 0, i = 1, j = 1, l = 0;

    auto key() const { return std::tie(h, l, j, i); }
    friend bool operator==(const DiffVar& a, const DiffVar& b) { return a.key() == b.key(); }
    friend bool operator<(const DiffVar& a, const DiffVar& b) { return a.key() < b.key(); }
    std::string to_string() const {
        return "d" + std::to_string(l) + "X" + std::to_string(h) + "(" + std::to_string(i) + "," + std::to_string(j) + ")";
    }
};

// Lexicographic order on (h, l, j, i): entries column by column, then derivative order, then block.
inline int var_cmp(const DiffVar& a, const DiffVar& b) {
    if (a < b) return -1;
    return b < a ? 1 : 0;
}

// Degree one differential polynomial sum c_v v + constant over F_q(t).
class LinDiffPoly {
  public:
    LinDiffPoly() = default;
    explicit LinDiffPoly(Field F) : constant_(F) {}
    static LinDiffPoly var(const Field& F, const DiffVar& v, RatFunc c) {
        LinDiffPoly p(F);
        p.add(v, std::move(c));
        return p;
    }

    const std::map<DiffVar, RatFunc>& terms() const noexcept { return terms_; }
    const RatFunc& constant() const noexcept { return constant_; }
    const Field& field() const noexcept { return constant_.field(); }
    bool is_zero() const noexcept { return terms_.empty() && constant_.is_zero(); }
    bool homogeneous() const noexcept { return constant_.is_zero(); }
    RatFunc coeff(const DiffVar& v) const {
        auto it = terms_.find(v);
        return it == terms_.end() ? RatFunc(field()) : it->second;
    }
    std::size_t order() const {
        std::size_t o = 0;
        for (const auto& [v, c] : terms_) o = std::max(o, v.l);
        return o;
    }

    void add(const DiffVar& v, const RatFunc& c) {
        if (c.is_zero()) return;
        auto [it, fresh] = terms_.emplace(v, c);
        if (fresh) return;
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }
    void add_constant(const RatFunc& c) { constant_ = constant_ + c; }

    friend LinDiffPoly operator+(LinDiffPoly a, const LinDiffPoly& b) {
        for (const auto& [v, c] : b.terms_) a.add(v, c);
        a.constant_ = a.constant_ + b.constant_;
        return a;
    }
    friend LinDiffPoly operator-(LinDiffPoly a, const LinDiffPoly& b) {
        for (const auto& [v, c] : b.terms_) a.add(v, -c);
        a.constant_ = a.constant_ - b.constant_;
        return a;
    }
    LinDiffPoly scale(const RatFunc& f) const {
        LinDiffPoly r(field());
        if (f.is_zero()) return r;
        for (const auto& [v, c] : terms_) r.terms_.emplace(v, c * f);
        r.constant_ = constant_ * f;
        return r;
    }
    friend bool operator==(const LinDiffPoly& a, const LinDiffPoly& b) {
        return a.terms_ == b.terms_ && a.constant_ == b.constant_;
    }

    std::string to_string() const {
        std::string s;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            if (!s.empty()) s += " + ";
            s += it->second.to_string("t") + "*" + it->first.to_string();
        }
        if (!constant_.is_zero() || s.empty()) s += (s.empty() ? "" : " + ") + constant_.to_string("t");
        return s;
    }

  private:
    std::map<DiffVar, RatFunc> terms_;
    RatFunc constant_;
};

// d_t^a P by the product rule: d^a(c d^l X) = sum_k d^k(c) C(l+a-k, l) d^(l+a-k) X.
inline LinDiffPoly apply_partial(std::size_t a, const LinDiffPoly& P) {
    if (a == 0) return P;
    const Field& F = P.field();
    LinDiffPoly r(F);
    r.add_constant(P.constant().hyperderiv(a));
    for (const auto& [v, c] : P.terms())
        for (std::size_t k = 0; k <= a; ++k) {
            Elem b = F->from_int(binom_mod_p(v.l + a - k, v.l, F->p()));
            if (b == 0) continue;
            RatFunc dc = c.hyperderiv(k);
            if (dc.is_zero()) continue;
            DiffVar w = v;
            w.l = v.l + a - k;
            r.add(w, dc.scale(b));
        }
    return r;
}

// Monomial order used to pick leading variables; returns true when a < b.
using VarOrder = bool (*)(const DiffVar&, const DiffVar&);
inline bool claim_order(const DiffVar& a, const DiffVar& b) { return a < b; }
// Every variable with l >= 1 above every variable with l = 0.
inline bool elimination_order(const DiffVar& a, const DiffVar& b) {
    bool da = a.l >= 1, db = b.l >= 1;
    if (da != db) return db;
    return a < b;
}

inline std::optional<DiffVar> leading_var(const LinDiffPoly& P, VarOrder less = claim_order) {
    std::optional<DiffVar> best;
    for (const auto& [v, c] : P.terms())
        if (!best || less(*best, v)) best = v;
    return best;
}

/**
 * Division by a set with distinct leading variables: repeatedly cancels the
 * largest variable of P that leads some g in G.
 */
inline LinDiffPoly reduce(const LinDiffPoly& P, const std::vector<LinDiffPoly>& G, VarOrder less = claim_order) {
    std::vector<std::pair<DiffVar, const LinDiffPoly*>> lead;
    for (const auto& g : G)
        if (auto v = leading_var(g, less)) lead.emplace_back(*v, &g);
    LinDiffPoly r = P;
    while (true) {
        std::optional<std::pair<DiffVar, const LinDiffPoly*>> pick;
        for (const auto& [v, g] : lead) {
            if (r.coeff(v).is_zero()) continue;
            if (!pick || less(pick->first, v)) pick = std::make_pair(v, g);
        }
        if (!pick) return r;
        const LinDiffPoly& g = *pick->second;
        r = r - g.scale(r.coeff(pick->first) / g.coeff(pick->first));
    }
}

/**
 * Reduced basis of the F_q(t)-span of G: monic in the leading variable and
 * with no leading variable occurring in another element.
 */
inline std::vector<LinDiffPoly> interreduce(const std::vector<LinDiffPoly>& G, VarOrder less = claim_order) {
    std::vector<LinDiffPoly> basis;
    for (const auto& g : G) {
        if (!g.homogeneous()) throw PreconditionViolated("interreduce expects homogeneous generators");
        LinDiffPoly r = reduce(g, basis, less);
        if (r.is_zero()) continue;
        DiffVar v = *leading_var(r, less);
        r = r.scale(RatFunc::constant(r.field(), 1) / r.coeff(v));
        for (auto& b : basis) {
            RatFunc c = b.coeff(v);
            if (!c.is_zero()) b = b - r.scale(c);
        }
        basis.push_back(std::move(r));
    }
    return basis;
}

// sum_i,j M(row, (j-1) r + i - 1) X_h(i, j) for a row of a matrix over F_q(t).
inline LinDiffPoly row_poly(const Matrix<RatFunc>& M, std::size_t row, std::size_t r, std::size_t h) {
    LinDiffPoly p(M.zero().field());
    for (std::size_t j = 1; j <= r; ++j)
        for (std::size_t i = 1; i <= r; ++i) p.add({h, i, j, 0}, M(row, (j - 1) * r + i - 1));
    return p;
}

/**
 * Generators of T: d^l of every row of B vec(X_0) and of every entry of
 * d^h X_0 - X_h, for h = 1..n and l = 0..L.
 */
inline std::vector<LinDiffPoly> generate_T(const Matrix<RatFunc>& B, const Field& F, std::size_t r, std::size_t n,
                                           std::size_t L) {
    if (L < n) throw PreconditionViolated("order bound must be at least n");
    std::vector<LinDiffPoly> base;
    for (std::size_t row = 0; row < B.rows(); ++row) base.push_back(row_poly(B, row, r, 0));
    RatFunc one = RatFunc::constant(F, 1);
    for (std::size_t h = 1; h <= n; ++h)
        for (std::size_t j = 1; j <= r; ++j)
            for (std::size_t i = 1; i <= r; ++i) {
                LinDiffPoly p(F);
                p.add({0, i, j, h}, one);
                p.add({h, i, j, 0}, -one);
                base.push_back(p);
            }
    std::vector<LinDiffPoly> out;
    for (const auto& g : base)
        for (std::size_t l = 0; l <= L; ++l) out.push_back(apply_partial(l, g));
    return out;
}

/**
 * Eliminates every variable with l >= 1 and returns the remaining system as
 * rows acting on vec([X_n, .., X_0]).
 */
inline Matrix<RatFunc> eliminate(const std::vector<LinDiffPoly>& gens, const Field& F, std::size_t r, std::size_t n) {
    std::vector<LinDiffPoly> basis = interreduce(gens, elimination_order);
    std::vector<const LinDiffPoly*> keep;
    for (const auto& b : basis)
        if (leading_var(b, elimination_order)->l == 0) keep.push_back(&b);
    std::size_t rr = r * r;
    Matrix<RatFunc> S(keep.size(), (n + 1) * rr, RatFunc(F));
    for (std::size_t k = 0; k < keep.size(); ++k)
        for (const auto& [v, c] : keep[k]->terms()) {
            if (v.h > n) throw PreconditionViolated("block index beyond n");
            S(k, (n - v.h) * rr + (v.j - 1) * r + (v.i - 1)) = c;
        }
    return S;
}

/**
 * Eliminated system of T for B, asserted equal in row space to d_{t,n+1}[B].
 * Starts at order bound L = n and retries once with L + 2.
 */
inline Matrix<RatFunc> eliminate_checked(const Matrix<RatFunc>& B, const Field& F, std::size_t r, std::size_t n) {
    Matrix<RatFunc> dB = dmatrix(B, n, [](const RatFunc& x, std::size_t k) { return x.hyperderiv(k); });
    if (B.rows() == 0) dB = Matrix<RatFunc>(0, (n + 1) * r * r, RatFunc(F));
    for (std::size_t L : {n, n + 2}) {
        Matrix<RatFunc> S = eliminate(generate_T(B, F, r, n, L), F, r, n);
        if (S.rows() == 0 && dB.rows() == 0) return S;
        if (S.rows() > 0 && same_row_space(S, dB)) return S;
        if (S.rows() == 0 && bareiss_rank(dB) == 0) return S;
    }
    throw EliminationMismatch("eliminated system and d[B] have different row spaces");
}

// Membership of P in the linear d-ideal generated by S, using prolongations up to order L.
inline bool linear_ideal_contains(const LinDiffPoly& P, const std::vector<LinDiffPoly>& S, std::size_t L) {
    std::vector<LinDiffPoly> prolonged;
    for (const auto& g : S)
        for (std::size_t l = 0; l <= L; ++l) prolonged.push_back(apply_partial(l, g));
    return reduce(P, interreduce(prolonged)).is_zero();
}

}  // namespace tmotive

#endif
