#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"
#include "tmotive/motive.hpp"

using namespace tmotive;

namespace {

struct Example {
    DrinfeldModule rho;
    std::vector<RamSeries> periods;
};

Example carlitz3(long precision) {
    FieldSpec s{3, 1, 2, 0};
    return {DrinfeldModule::carlitz(s), {carlitz_period(s.field(), 3, 2, precision)}};
}

Example cm4(long precision) {
    FieldSpec s{2, 1, 2, 0};
    RamSeries l = carlitz_period(s.field(), 4, 3, precision);
    return {DrinfeldModule(s, {ExactCoef::zero(s), ExactCoef::one(s)}), {l, l.scale(2)}};
}

}  // namespace

TEST(Motive, CarlitzPhiIsTMinusTheta) {
    FieldSpec s{3, 1, 1, 0};
    Matrix<KtPoly> Phi = phi_rho(DrinfeldModule::carlitz(s));
    ASSERT_EQ(Phi.rows(), 1u);
    EXPECT_EQ(Phi(0, 0), KtPoly::t(s) - KtPoly::constant(ExactCoef::theta(s)));
}

TEST(Motive, ProlongedPhiIsBlockToeplitz) {
    FieldSpec s{2, 1, 2, 0};
    Matrix<KtPoly> P = prolong(phi_rho(cm4(20).rho), 2);
    ASSERT_EQ(P.rows(), 6u);
    // d_t(t - theta) = 1 sits one block to the right of the diagonal.
    EXPECT_EQ(P(1, 2), KtPoly::constant(ExactCoef::one(s)));
    EXPECT_TRUE(P(2, 0).is_zero());
    EXPECT_EQ(P(3, 2), P(1, 0));
}

TEST(Motive, RigidTrivializationVanishes) {
    Precision p{12, 40};
    for (const Example& ex : {carlitz3(48), cm4(48)}) {
        MotiveMatrices base = psi_rho(ex.rho, ex.periods, p);
        for (std::size_t n = 0; n <= 3; ++n) {
            MotiveMatrices mm = n == 0 ? base : prolong(base, n);
            EXPECT_TRUE(mm.residual.vanishes) << "n=" << n;
            EXPECT_GE(mm.residual.certified_prec, p.prec);
            for (const auto& c : mm.checks) EXPECT_TRUE(c.pass) << c.name << " " << c.detail;
        }
    }
}

TEST(Motive, WrongPeriodLeavesResidual) {
    Example ex = carlitz3(48);
    RamSeries fake = ex.periods[0] + RamSeries::constant(ex.periods[0].field(), 2, 1);
    MotiveMatrices mm = psi_rho(ex.rho, {fake}, Precision{12, 40});
    EXPECT_FALSE(mm.residual.vanishes);
}

TEST(Motive, AgfAtThetaGivesMinusPeriod) {
    // The t-tail after one twist decays like theta^(-4m), so t_deg 20 covers 60 places.
    Example ex = carlitz3(100);
    Precision p{20, 80};
    TatePoly f = agf(ex.rho, ex.periods[0], p);
    RamSeries v = f.twist(1, ex.rho.spec).eval_at_theta();
    EXPECT_TRUE(series_agree(v, -ex.periods[0]));
    // 30 digits in theta, the period has ramification 2.
    EXPECT_EQ(v.ram(), 2);
    EXPECT_GE(v.prec(), 60);
}

TEST(Motive, ProlongedAgfRoutesAgree) {
    std::mt19937_64 rng(41);
    Example ex = cm4(40);
    Field F = ex.rho.spec.field();
    Precision p{8, 24};
    for (int it = 0; it < 3; ++it) {
        RamSeries u = test::random_series(F, 3, rng, 2, -6, prec::kInf);
        if (u.is_zero()) continue;
        for (std::size_t n = 0; n <= 2; ++n)
            for (std::size_t j = 1; j <= n + 1; ++j) EXPECT_NO_THROW(agf_prolong(ex.rho, u, j, n, p));
    }
}

TEST(Motive, QuasiLogarithmOfLogOne) {
    Example ex = carlitz3(48);
    Precision p{12, 40};
    Field F = ex.rho.spec.field();
    RamSeries one = RamSeries::constant(F, 2, 1);
    RamSeries u = log_eval(ex.rho, one, 48).value;
    QuasiLogResult q = quasi_log(ex.rho, u, one, p);
    EXPECT_TRUE(series_agree(q.value, one - u));
    EXPECT_GE(q.certified_prec, 30);
    // A wrong alpha is caught.
    EXPECT_THROW(quasi_log(ex.rho, u, one.scale(2), p), MismatchBeyondPrecision);
}

TEST(Motive, ExtensionMotivesTrivialize) {
    Example ex = carlitz3(48);
    Precision p{12, 40};
    MotiveMatrices base = psi_rho(ex.rho, ex.periods, p);
    Field F = ex.rho.spec.field();
    std::vector<std::pair<RamSeries, RamSeries>> pairs;
    for (Elem a : {1u, 2u}) {
        RamSeries alpha = RamSeries::constant(F, 2, a).shift(a == 2 ? 2 : 0);
        pairs.emplace_back(log_eval(ex.rho, alpha, 48).value, alpha);
    }
    for (std::size_t n = 0; n <= 2; ++n) {
        for (const auto& [u, alpha] : pairs) {
            ExtensionMotive Y = y_alpha(base, u, alpha, n);
            for (const auto& c : Y.checks) EXPECT_TRUE(c.pass) << c.name << " n=" << n;
        }
        ExtensionMotive N = n_motive(base, pairs, n);
        EXPECT_TRUE(N.residual.vanishes);
    }
}

TEST(Motive, ProjectionDropsTopBlocks) {
    Example ex = cm4(40);
    MotiveMatrices base = psi_rho(ex.rho, ex.periods, Precision{6, 20});
    MotiveMatrices m2 = prolong(base, 2);
    Matrix<TatePoly> proj = prolong_projection(m2.Psi, 2, 0);
    Matrix<TatePoly> m1 = prolong(base, 1).Psi;
    ASSERT_EQ(proj.rows(), m1.rows());
    for (std::size_t i = 0; i < proj.rows(); ++i)
        for (std::size_t j = 0; j < proj.cols(); ++j) EXPECT_TRUE(tate_agree(proj(i, j), m1(i, j)));
}

TEST(Motive, ProjectionsCompose) {
    Matrix<int> M(8, 8, 0);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) M(i, j) = static_cast<int>(8 * i + j);
    Matrix<int> a = prolong_projection(prolong_projection(M, 2, 1), 2, 0), b = prolong_projection(M, 2, 2);
    ASSERT_EQ(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) EXPECT_EQ(a(i, j), b(i, j));
}
