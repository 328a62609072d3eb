#include <gtest/gtest.h>

#include <random>

#include "tmotive/exact.hpp"
#include "test_util.hpp"

using namespace tmotive;

TEST(GaloisField, AxiomsOnSmallFields) {
    for (auto [p, k] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {2, 2}, {3, 1}, {3, 2}, {2, 4}, {5, 2}}) {
        Field F = galois_field(p, k);
        std::uint32_t n = F->size();
        for (Elem a = 0; a < n; ++a) {
            EXPECT_EQ(F->add(a, F->neg(a)), 0u);
            if (a != 0) {
                EXPECT_EQ(F->mul(a, F->inv(a)), 1u);
            }
            EXPECT_EQ(F->frob(F->frob(a, 1), -1), a);
            EXPECT_EQ(F->frob(a, static_cast<long long>(k)), a);
            for (Elem b = 0; b < n; b += 1 + n / 7) {
                // digit-wise addition oracle
                Elem s = 0, scale = 1, x = a, y = b;
                for (unsigned i = 0; i < k; ++i) {
                    s += ((x % p + y % p) % p) * scale;
                    x /= p;
                    y /= p;
                    scale *= p;
                }
                EXPECT_EQ(F->add(a, b), s);
                EXPECT_EQ(F->frob(F->mul(a, b), 1), F->mul(F->frob(a, 1), F->frob(b, 1)));
            }
        }
    }
}

TEST(GaloisField, SameFieldFromDifferentSpecs) {
    FieldSpec a{2, 2, 1, 0}, b{2, 1, 2, 0};
    EXPECT_EQ(a.field().get(), b.field().get());
    EXPECT_EQ(a.field()->modulus(), (std::vector<std::uint32_t>{1, 1, 1}));
}

TEST(GaloisField, SubfieldMembership) {
    Field F = galois_field(3, 2);
    int count = 0;
    for (Elem a = 0; a < F->size(); ++a) count += F->in_subfield(a, 1);
    EXPECT_EQ(count, 3);
    EXPECT_TRUE(F->in_subfield(2, 1));
}

TEST(Binomial, LucasAgreesWithPascal) {
    for (unsigned p : {2u, 3u, 5u, 7u}) {
        auto pascal = test::pascal_mod(200, p);
        for (unsigned n = 0; n < 200; ++n)
            for (unsigned k = 0; k <= n; ++k) ASSERT_EQ(binom_mod_p(n, k, p), pascal[n][k]) << n << " " << k;
    }
}

TEST(Binomial, NegativeUpperArgument) {
    // C(-1, k) = (-1)^k, C(-2, k) = (-1)^k (k+1)
    for (unsigned k = 0; k < 20; ++k) {
        EXPECT_EQ(binom_mod_p_signed(-1, k, 3), k % 2 == 0 ? 1u : 2u);
        EXPECT_EQ(binom_mod_p_signed(-2, k, 5), ((k % 2 == 0 ? 1 : 4) * ((k + 1) % 5)) % 5);
    }
}

TEST(Binomial, RationalUpperArgument) {
    // C(1/2, 1) = 1/2 = 2 mod 3; C(1/2, 2) = -1/8 = 1 mod 3.
    EXPECT_EQ(binom_rational_mod_p(1, 2, 1, 3), 2u);
    EXPECT_EQ(binom_rational_mod_p(1, 2, 2, 3), 1u);
    EXPECT_THROW(binom_rational_mod_p(1, 3, 1, 3), InseparableRamification);
}

TEST(Poly, DivisionAndGcd) {
    Field F = galois_field(3, 2);
    std::mt19937_64 rng(7);
    for (int it = 0; it < 200; ++it) {
        Poly a = test::random_poly(F, rng, 6), b = test::random_poly(F, rng, 4);
        if (b.is_zero()) continue;
        auto [q, r] = divmod(a, b);
        EXPECT_EQ(q * b + r, a);
        EXPECT_LT(r.degree(), b.degree());
        Poly g = gcd(a * b, b);
        EXPECT_EQ(g, b.monic());
    }
}

TEST(RatFunc, HyperderivativeMatchesTaylorExpansion) {
    for (auto [p, k] : std::vector<std::pair<unsigned, unsigned>>{{2, 1}, {3, 1}, {2, 2}}) {
        Field F = galois_field(p, k);
        std::mt19937_64 rng(11 + p + k);
        for (int it = 0; it < 40; ++it) {
            RatFunc f = test::random_ratfunc(F, rng, 4, 3);
            auto taylor = test::taylor_coefficients(f, 6);
            for (std::size_t j = 0; j <= 6; ++j) EXPECT_EQ(f.hyperderiv(j), taylor[j]) << "j=" << j;
        }
    }
}

TEST(RatFunc, ArithmeticIsReduced) {
    Field F = galois_field(2, 2);
    RatFunc x = RatFunc::variable(F), one = RatFunc::constant(F, 1);
    RatFunc a = (x * x + one) / (x + one);
    EXPECT_EQ(a, x + one);
    EXPECT_TRUE(a.is_polynomial());
    RatFunc b = one / (x.scale(F->generator()) + one);
    EXPECT_EQ(b.den().lead(), 1u);
}

TEST(ExactCoef, TwistRoundTrip) {
    FieldSpec spec{2, 1, 2, 2};
    ExactCoef th = ExactCoef::theta(spec);
    ExactCoef c = (th + ExactCoef::constant(spec, spec.field()->generator())) / (th * th + ExactCoef::one(spec));
    EXPECT_EQ(c.twist(2).twist(-2), c);
    EXPECT_EQ(c.twist(-1).twist(1), c);
    EXPECT_EQ(c.twist(-2).twist(2), c);
    EXPECT_THROW(c.twist(-3), TwistDepthExceeded);
    ExactCoef w = ExactCoef::w(spec);
    EXPECT_THROW(w.twist(-1), TwistDepthExceeded);
    EXPECT_EQ(ExactCoef::theta(spec).twist(1), ExactCoef::theta_pow(spec, 2));
}

TEST(ExactCoef, TwistIsRingHomomorphism) {
    FieldSpec spec{3, 1, 2, 1};
    std::mt19937_64 rng(3);
    for (int it = 0; it < 30; ++it) {
        ExactCoef a(spec, test::random_ratfunc(spec.field(), rng, 3, 2));
        ExactCoef b(spec, test::random_ratfunc(spec.field(), rng, 3, 2));
        EXPECT_EQ((a * b).twist(1), a.twist(1) * b.twist(1));
        EXPECT_EQ((a + b).twist(2), a.twist(2) + b.twist(2));
    }
}
