#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"
#include "tmotive/drinfeld.hpp"

using namespace tmotive;

namespace {

// Carlitz exponential coefficients 1/D_h, D_h = prod_{i<h} (theta^(q^h) - theta^(q^i)).
ExactCoef carlitz_exp_closed(const FieldSpec& s, int h) {
    ExactCoef d = ExactCoef::one(s);
    long long qh = ExactCoef::pow_ll(s.q(), static_cast<unsigned>(h));
    for (int i = 0; i < h; ++i)
        d = d * (ExactCoef::theta_pow(s, qh) - ExactCoef::theta_pow(s, ExactCoef::pow_ll(s.q(), static_cast<unsigned>(i))));
    return d.inverse();
}

// Carlitz logarithm coefficients 1/L_h, L_h = prod_{1<=i<=h} (theta - theta^(q^i)).
ExactCoef carlitz_log_closed(const FieldSpec& s, int h) {
    ExactCoef l = ExactCoef::one(s);
    for (int i = 1; i <= h; ++i)
        l = l * (ExactCoef::theta(s) - ExactCoef::theta_pow(s, ExactCoef::pow_ll(s.q(), static_cast<unsigned>(i))));
    return l.inverse();
}

}  // namespace

TEST(Drinfeld, CarlitzCoefficientsMatchClosedForms) {
    for (unsigned p : {2u, 3u}) {
        FieldSpec s{p, 1, 1, 0};
        DrinfeldModule C = DrinfeldModule::carlitz(s);
        EntireSeries ex = exp_coeffs(C, 5), lg = log_coeffs(C, 5);
        for (int h = 0; h <= 5; ++h) {
            EXPECT_EQ(ex.coeffs[static_cast<std::size_t>(h)], carlitz_exp_closed(s, h)) << "p=" << p << " h=" << h;
            EXPECT_EQ(lg.coeffs[static_cast<std::size_t>(h)], carlitz_log_closed(s, h)) << "p=" << p << " h=" << h;
        }
    }
}

TEST(Drinfeld, ExponentialFunctionalEquation) {
    std::mt19937_64 rng(31);
    FieldSpec s{2, 1, 2, 0};
    Field F = s.field();
    DrinfeldModule rho(s, {ExactCoef::constant(s, 2), ExactCoef::one(s)});
    int e = 3;
    for (int it = 0; it < 10; ++it) {
        RamSeries z = test::random_series(F, e, rng, 2, -10, prec::kInf);
        if (z.is_zero()) continue;
        // Exp(theta z) = rho_t(Exp(z))
        RamSeries thz = z.shift(e);
        RamSeries lhs = exp_eval(rho, thz, 30).value;
        RamSeries rhs = apply(rho.rho_t(), exp_eval(rho, z, 60).value, 30);
        EXPECT_TRUE((lhs - rhs).truncate(30).is_zero()) << z.to_text();
    }
}

TEST(Drinfeld, LogInvertsExpNearZero) {
    std::mt19937_64 rng(32);
    FieldSpec s{3, 1, 2, 0};
    Field F = s.field();
    DrinfeldModule C = DrinfeldModule::carlitz(s);
    for (int it = 0; it < 10; ++it) {
        RamSeries z = test::random_series(F, 2, rng, 1, -12, prec::kInf);
        if (z.is_zero()) continue;
        RamSeries back = log_eval(C, exp_eval(C, z, 50).value, 40).value;
        EXPECT_TRUE((back - z).truncate(40).is_zero());
    }
}

TEST(Drinfeld, CarlitzPeriodIsAZeroOfExp) {
    FieldSpec s{3, 1, 2, 0};
    DrinfeldModule C = DrinfeldModule::carlitz(s);
    RamSeries pi = carlitz_period(s.field(), 3, 2, 48);
    EXPECT_EQ(*pi.degree(), 3);  // deg pi = q/(q-1) in theta
    EXPECT_TRUE(exp_eval(C, pi, 40).value.is_zero());
    EXPECT_TRUE(exp_eval(C, pi.scale(2), 40).value.is_zero());
    EXPECT_FALSE(exp_eval(C, RamSeries::monomial(s.field(), 2, 1, 1), 40).value.is_zero());
}

TEST(Drinfeld, CmExamplePeriods) {
    FieldSpec s{2, 1, 2, 0};
    DrinfeldModule rho(s, {ExactCoef::zero(s), ExactCoef::one(s)});
    RamSeries l1 = carlitz_period(s.field(), 4, 3, 48);
    EXPECT_TRUE(exp_eval(rho, l1, 40).value.is_zero());
    EXPECT_TRUE(exp_eval(rho, l1.scale(2), 40).value.is_zero());
    EXPECT_FALSE(exp_eval(rho, RamSeries::monomial(s.field(), 3, 1, -1), 40).value.is_zero());
}

TEST(Drinfeld, QuasiCoefficientsFollowDefinition) {
    FieldSpec s{3, 1, 1, 0};
    DrinfeldModule C = DrinfeldModule::carlitz(s);
    EntireSeries a = exp_coeffs(C, 5), f = quasi_coeffs(C, 1, 5);
    EXPECT_TRUE(f.coeffs[0].is_zero());
    for (int i = 1; i <= 5; ++i) {
        ExactCoef den = ExactCoef::theta(s).twist(i) - ExactCoef::theta(s);
        EXPECT_EQ(f.coeffs[static_cast<std::size_t>(i)] * den, a.coeffs[static_cast<std::size_t>(i - 1)].twist(1));
    }
}

TEST(Drinfeld, EndomorphismCheck) {
    FieldSpec s{2, 1, 2, 0};
    DrinfeldModule cm(s, {ExactCoef::zero(s), ExactCoef::one(s)});
    DrinfeldModule c(s, {ExactCoef::one(s)});
    KTau g = make_tau_poly(s, {ExactCoef::constant(s, 2)});
    EXPECT_TRUE(verify_endo(g, cm));
    EXPECT_FALSE(verify_endo(g, c));
    EXPECT_TRUE(verify_endo(cm.rho_t() * cm.rho_t(), cm));
}

TEST(Drinfeld, DivergentLogIsNotCertified) {
    FieldSpec s{3, 1, 2, 0};
    DrinfeldModule C = DrinfeldModule::carlitz(s);
    RamSeries big = RamSeries::monomial(s.field(), 2, 1, 4);
    EXPECT_THROW(log_eval(C, big, 40), ConvergenceNotCertified);
}
