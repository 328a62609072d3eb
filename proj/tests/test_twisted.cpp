#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"
#include "tmotive/twisted.hpp"

using namespace tmotive;

namespace {

// Coefficient c_i = a_i + b_i theta^(q^i), so that twisting by -i stays in F_{q^m}[theta].
KTau random_tau(const FieldSpec& s, std::mt19937_64& rng, int deg) {
    Field F = s.field();
    std::vector<ExactCoef> c;
    for (int i = 0; i <= deg; ++i) {
        ExactCoef a = ExactCoef::constant(s, test::random_elem(F, rng));
        ExactCoef b = ExactCoef::constant(s, test::random_elem(F, rng));
        c.push_back(a + b * ExactCoef::theta(s).twist(i));
    }
    return make_tau_poly(s, c);
}

// x^(q^i) by repeated multiplication.
RamSeries power_q(const RamSeries& x, long long q, int i) {
    RamSeries r = x;
    for (int k = 0; k < i; ++k) {
        RamSeries acc = RamSeries::constant(x.field(), x.ram(), 1);
        for (long long j = 0; j < q; ++j) acc = acc * r;
        r = acc;
    }
    return r;
}

}  // namespace

TEST(TwistedPoly, MultiplicationIsAssociative) {
    std::mt19937_64 rng(21);
    FieldSpec s{2, 1, 2, 0};
    for (int it = 0; it < 20; ++it) {
        KTau a = random_tau(s, rng, 2), b = random_tau(s, rng, 2), c = random_tau(s, rng, 1);
        EXPECT_EQ((a * b) * c, a * (b * c));
        EXPECT_EQ(a * (b + c), a * b + a * c);
    }
}

TEST(TwistedPoly, TauCommutationRule) {
    FieldSpec s{3, 1, 1, 0};
    KTau tau = make_tau_poly(s, {ExactCoef::zero(s), ExactCoef::one(s)});
    KTau theta = make_tau_poly(s, {ExactCoef::theta(s)});
    // tau theta = theta^q tau
    EXPECT_EQ(tau * theta, make_tau_poly(s, {ExactCoef::zero(s), ExactCoef::theta_pow(s, 3)}));
}

TEST(TwistedPoly, StarReversesProducts) {
    std::mt19937_64 rng(22);
    FieldSpec s{2, 1, 2, 0};
    Field F = s.field();
    auto constant_tau = [&](int deg) {
        std::vector<ExactCoef> c;
        for (int i = 0; i <= deg; ++i) c.push_back(ExactCoef::constant(s, test::random_elem(F, rng)));
        return make_tau_poly(s, c);
    };
    for (int it = 0; it < 30; ++it) {
        KTau a = constant_tau(3), b = constant_tau(2);
        EXPECT_EQ((a * b).star(), b.star() * a.star());
    }
}

TEST(TwistedPoly, ApplyComposes) {
    std::mt19937_64 rng(23);
    FieldSpec s{2, 1, 2, 0};
    Field F = s.field();
    for (int it = 0; it < 20; ++it) {
        KTau a = random_tau(s, rng, 1), b = random_tau(s, rng, 1);
        RamSeries x = test::random_series(F, 1, rng, -1, -8, 40);
        RamSeries lhs = apply(a * b, x, 30), rhs = apply(a, apply(b, x, 60), 30);
        EXPECT_TRUE((lhs - rhs).truncate(30).is_zero());
    }
}

TEST(TwistedPoly, ApplyMatchesPowerOracle) {
    std::mt19937_64 rng(24);
    FieldSpec s{3, 1, 1, 0};
    Field F = s.field();
    for (int it = 0; it < 20; ++it) {
        KTau a = random_tau(s, rng, 2);
        RamSeries x = test::random_series(F, 1, rng, 0, -5, prec::kInf);
        RamSeries oracle(F, 1);
        for (std::size_t i = 0; i < a.coeffs().size(); ++i)
            oracle = oracle + to_series(a.coeffs()[i], 1, 200) * power_q(x, 3, static_cast<int>(i));
        EXPECT_TRUE((apply(a, x, 50) - oracle).truncate(50).is_zero());
    }
}

TEST(TwistedPoly, MatrixStarTransposes) {
    FieldSpec s{2, 1, 2, 0};
    KTau tau = make_tau_poly(s, {ExactCoef::zero(s), ExactCoef::one(s)});
    KTau g = make_tau_poly(s, {ExactCoef::constant(s, 2)});
    Matrix<KTau> B(1, 2, make_tau_poly(s, {}));
    B(0, 0) = g * tau;
    B(0, 1) = tau;
    Matrix<KTau> Bs = star(B);
    ASSERT_EQ(Bs.rows(), 2u);
    // (g tau)* = g^(1/q) sigma
    EXPECT_EQ(Bs(0, 0).coeff(1), ExactCoef::constant(s, s.field()->frob(2, -1)));
    EXPECT_EQ(Bs(1, 0).var(), TwistVar::Sigma);
}
