#ifndef TMOTIVE_TEST_UTIL_HPP
#define TMOTIVE_TEST_UTIL_HPP

#include <random>
#include <vector>

#include "tmotive/ratfunc.hpp"
#include "tmotive/series.hpp"

namespace test {

using namespace tmotive;

inline std::vector<std::vector<unsigned>> pascal_mod(unsigned n, unsigned p) {
    std::vector<std::vector<unsigned>> t(n, std::vector<unsigned>(n, 0));
    for (unsigned i = 0; i < n; ++i) {
        t[i][0] = 1;
        for (unsigned k = 1; k <= i; ++k) t[i][k] = (t[i - 1][k - 1] + (k < i ? t[i - 1][k] : 0)) % p;
    }
    return t;
}

inline Elem random_elem(const Field& F, std::mt19937_64& rng) {
    return static_cast<Elem>(rng() % F->size());
}

inline Poly random_poly(const Field& F, std::mt19937_64& rng, int max_deg) {
    int d = static_cast<int>(rng() % static_cast<unsigned>(max_deg + 1));
    std::vector<Elem> c(static_cast<std::size_t>(d + 1));
    for (auto& x : c) x = random_elem(F, rng);
    return Poly(F, c);
}

inline RatFunc random_ratfunc(const Field& F, std::mt19937_64& rng, int num_deg, int den_deg) {
    Poly n = random_poly(F, rng, num_deg);
    Poly d = random_poly(F, rng, den_deg);
    if (d.is_zero()) d = Poly::constant(F, 1);
    return RatFunc(n, d);
}

// Coefficients of f(x + eps) in eps up to eps^J, computed by Horner expansion and series division.
inline std::vector<RatFunc> taylor_coefficients(const RatFunc& f, std::size_t J) {
    const Field& F = f.field();
    auto shifted = [&](const Poly& p) {
        std::vector<Poly> acc(J + 1, Poly(F));
        Poly x = Poly::monomial(F, 1, 1);
        for (std::size_t i = p.coeffs().size(); i-- > 0;) {
            std::vector<Poly> next(J + 1, Poly(F));
            for (std::size_t k = 0; k <= J; ++k) {
                next[k] = acc[k] * x;
                if (k > 0) next[k] = next[k] + acc[k - 1];
            }
            next[0] = next[0] + Poly::constant(F, p.coeffs()[i]);
            acc = next;
        }
        return acc;
    };
    auto N = shifted(f.num()), D = shifted(f.den());
    std::vector<RatFunc> q;
    for (std::size_t i = 0; i <= J; ++i) {
        RatFunc s(N[i]);
        for (std::size_t k = 1; k <= i; ++k) s = s - RatFunc(D[k]) * q[i - k];
        q.push_back(s / RatFunc(D[0]));
    }
    return q;
}

inline RamSeries random_series(const Field& F, int e, std::mt19937_64& rng, long hi, long lo, long precision) {
    std::vector<std::pair<long, Elem>> t;
    for (long k = hi; k >= lo; --k)
        if (rng() % 2) t.emplace_back(k, random_elem(F, rng));
    return RamSeries::from_terms(F, e, t, precision);
}

}  // namespace test

#endif
