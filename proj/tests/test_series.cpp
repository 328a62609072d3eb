#include <gtest/gtest.h>

#include <map>
#include <random>

#include "test_util.hpp"
#include "tmotive/matrix.hpp"
#include "tmotive/tate.hpp"

using namespace tmotive;

namespace {

using Terms = std::map<long, Elem>;

Terms terms_of(const RamSeries& s) {
    Terms t;
    for (const auto& [k, c] : s.terms()) t[k] = c;
    return t;
}

// Schoolbook product of exact term lists.
Terms naive_product(const Field& F, const Terms& a, const Terms& b) {
    Terms r;
    for (const auto& [i, x] : a)
        for (const auto& [j, y] : b) r[i + j] = F->add(r[i + j], F->mul(x, y));
    for (auto it = r.begin(); it != r.end();) it = it->second == 0 ? r.erase(it) : std::next(it);
    return r;
}

Terms above(const Terms& t, long precision) {
    Terms r;
    for (const auto& [k, c] : t)
        if (k > -precision) r[k] = c;
    return r;
}

TatePoly random_tate(const Field& F, int e, std::mt19937_64& rng, int tdeg, long precision) {
    std::vector<RamSeries> c;
    for (int m = 0; m <= tdeg; ++m) c.push_back(test::random_series(F, e, rng, 4, -6, precision));
    return TatePoly(F, e, c, TailBound::zero());
}

}  // namespace

TEST(RamSeries, ProductMatchesSchoolbook) {
    std::mt19937_64 rng(11);
    for (auto [p, k] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}}) {
        Field F = galois_field(p, k);
        for (int it = 0; it < 50; ++it) {
            RamSeries a = test::random_series(F, 2, rng, 5, -8, prec::kInf);
            RamSeries b = test::random_series(F, 2, rng, 3, -9, prec::kInf);
            EXPECT_EQ(terms_of(a * b), naive_product(F, terms_of(a), terms_of(b)));
        }
    }
}

TEST(RamSeries, TruncatedProductAgreesOnCertifiedDigits) {
    std::mt19937_64 rng(12);
    Field F = galois_field(3, 2);
    for (int it = 0; it < 100; ++it) {
        RamSeries a = test::random_series(F, 1, rng, 4, -20, prec::kInf);
        RamSeries b = test::random_series(F, 1, rng, 2, -20, prec::kInf);
        long pa = 5 + static_cast<long>(rng() % 10), pb = 5 + static_cast<long>(rng() % 10);
        RamSeries c = a.truncate(pa) * b.truncate(pb);
        Terms exact = naive_product(F, terms_of(a), terms_of(b));
        EXPECT_EQ(terms_of(c), above(exact, c.prec()));
        // Lower precision never contradicts higher precision.
        RamSeries c2 = a.truncate(pa + 3) * b.truncate(pb + 3);
        EXPECT_GE(c2.prec(), c.prec());
        EXPECT_TRUE((c2.truncate(c.prec()) - c).is_zero());
    }
}

TEST(RamSeries, InverseTimesSelfIsOne) {
    std::mt19937_64 rng(13);
    Field F = galois_field(2, 2);
    for (int it = 0; it < 50; ++it) {
        RamSeries a = test::random_series(F, 3, rng, 3, -10, prec::kInf);
        if (a.is_zero()) continue;
        RamSeries one = a * a.inv(40);
        EXPECT_TRUE((one - RamSeries::constant(F, 3, 1)).is_zero()) << a.to_text();
        EXPECT_GE(one.prec(), 40 - *a.degree());
    }
    EXPECT_THROW(RamSeries(F, 1, 5).inv(), DivisionByZeroWithinPrecision);
}

TEST(RamSeries, TwistIsMultiplicativeAndInvertible) {
    std::mt19937_64 rng(14);
    Field F = galois_field(3, 2);
    for (int it = 0; it < 50; ++it) {
        RamSeries a = test::random_series(F, 2, rng, 3, -6, 30);
        RamSeries b = test::random_series(F, 2, rng, 2, -6, 30);
        EXPECT_TRUE(((a * b).twist(1, 3, 1) - a.twist(1, 3, 1) * b.twist(1, 3, 1)).is_zero());
        RamSeries back = a.twist(2, 3, 1).twist(-2, 3, 1);
        EXPECT_TRUE((back - a).is_zero());
        EXPECT_EQ(back.prec(), a.prec());
    }
    RamSeries x = RamSeries::monomial(F, 1, 1, 1);
    EXPECT_THROW(x.twist(-1, 3, 1), NonTwistable);
    // prec of a negative twist is ceil(P / q)
    EXPECT_EQ(RamSeries::monomial(F, 1, 1, 3, 10).twist(-1, 3, 1).prec(), 4);
}

TEST(RamSeries, ThetaHyperderivativeMatchesRationalFunctions) {
    std::mt19937_64 rng(15);
    for (unsigned p : {2u, 3u, 5u}) {
        FieldSpec spec{p, 1, 1, 0};
        Field F = spec.field();
        int e = p == 2 ? 3 : 2;
        for (int it = 0; it < 30; ++it) {
            RatFunc f = test::random_ratfunc(F, rng, 5, 3);
            if (f.is_zero()) continue;
            std::size_t j = rng() % 5;
            RamSeries lhs = to_series(ExactCoef(spec, f), e, 60).hyperderiv_theta(j);
            RamSeries rhs = to_series(ExactCoef(spec, f.hyperderiv(j)), e, 60);
            EXPECT_TRUE((lhs - rhs).is_zero()) << f.to_string("w") << " j=" << j;
        }
    }
    EXPECT_THROW(RamSeries::monomial(galois_field(2, 1), 2, 1, 1).hyperderiv_theta(1), InseparableRamification);
}

TEST(RamSeries, TextRoundTrip) {
    std::mt19937_64 rng(16);
    Field F = galois_field(2, 2);
    for (int it = 0; it < 20; ++it) {
        RamSeries a = test::random_series(F, 3, rng, 5, -5, it % 2 ? prec::kInf : 12);
        RamSeries b = RamSeries::from_text(F, a.to_text());
        EXPECT_EQ(a, b);
        EXPECT_EQ(a.prec(), b.prec());
    }
    EXPECT_THROW(RamSeries::from_text(F, "e=3; m=2; terms=[(1,1)]"), ParseError);
    EXPECT_THROW(RamSeries::from_text(F, "e=3; m=5; terms=[]; prec=inf"), ParseError);
}

TEST(TatePoly, TwistCommutesWithTDerivative) {
    std::mt19937_64 rng(17);
    FieldSpec spec{3, 1, 2, 0};
    Field F = spec.field();
    for (int it = 0; it < 30; ++it) {
        TatePoly f = random_tate(F, 2, rng, 6, 25);
        for (std::size_t j = 0; j <= 4; ++j)
            EXPECT_TRUE((f.hyperderiv_t(j).twist(1, spec) - f.twist(1, spec).hyperderiv_t(j)).is_zero());
    }
}

TEST(TatePoly, EvaluationAtTheta) {
    Field F = galois_field(3, 1);
    int e = 2;
    long N = 10;
    RamSeries one = RamSeries::constant(F, e, 1).truncate(N);
    TatePoly f(F, e, {one, one}, TailBound::zero());
    RamSeries v = f.eval_at_theta();
    EXPECT_EQ(v.prec(), N - e);
    EXPECT_EQ(v.coeff(e), 1u);
    EXPECT_EQ(v.coeff(0), 1u);
}

TEST(TatePoly, DzetaExamples) {
    Field F = galois_field(2, 2);
    TatePoly one = TatePoly::constant(RamSeries::constant(F, 1, 1));
    auto d1 = one.dzeta(3, 4);
    EXPECT_EQ(d1[0], RamSeries::constant(F, 1, 1));
    for (std::size_t m = 1; m < 4; ++m) EXPECT_TRUE(d1[m].is_zero());
    auto dt = TatePoly::t(F, 1).dzeta(2, 3);
    EXPECT_EQ(dt[0], RamSeries::constant(F, 1, 2));
    EXPECT_EQ(dt[1], RamSeries::constant(F, 1, 1));
    EXPECT_TRUE(dt[2].is_zero());
}

TEST(TatePoly, DzetaIsMultiplicative) {
    std::mt19937_64 rng(18);
    Field F = galois_field(3, 2);
    for (int it = 0; it < 30; ++it) {
        TatePoly g = random_tate(F, 1, rng, 5, 30), h = random_tate(F, 1, rng, 5, 30);
        Elem z = test::random_elem(F, rng);
        auto dg = g.dzeta(z, 12), dh = h.dzeta(z, 12), dgh = (g * h).dzeta(z, 12);
        for (std::size_t m = 0; m < 12; ++m) {
            RamSeries s(F, 1);
            for (std::size_t i = 0; i <= m; ++i) s = s + dg[i] * dh[m - i];
            EXPECT_TRUE((s - dgh[m]).is_zero());
        }
    }
}

TEST(DMatrix, HomomorphismOverTatePolys) {
    std::mt19937_64 rng(19);
    Field F = galois_field(2, 2);
    auto d = [](const TatePoly& x, std::size_t k) { return x.hyperderiv_t(k); };
    for (int it = 0; it < 10; ++it) {
        std::size_t n = rng() % 4;
        Matrix<TatePoly> A(2, 2, TatePoly(F, 1)), B(2, 2, TatePoly(F, 1));
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                A(i, j) = random_tate(F, 1, rng, 4, prec::kInf);
                B(i, j) = random_tate(F, 1, rng, 4, prec::kInf);
            }
        Matrix<TatePoly> lhs = dmatrix(A, n, d) * dmatrix(B, n, d), rhs = dmatrix(A * B, n, d);
        EXPECT_TRUE((lhs - rhs).all_of([](const TatePoly& x) { return x.is_zero(); }));
    }
}
