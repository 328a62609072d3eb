#include <gtest/gtest.h>

#include <random>

#include "test_util.hpp"
#include "tmotive/galois.hpp"

using namespace tmotive;

namespace {

// Power series of num/den in t to order N by long division.
std::vector<Elem> expand(const Field& F, const Poly& num, const Poly& den, std::size_t N) {
    std::vector<Elem> s(N + 1, 0);
    Elem d0inv = F->inv(den.coeff(0));
    for (std::size_t m = 0; m <= N; ++m) {
        Elem acc = num.coeff(m);
        for (std::size_t k = 1; k <= m; ++k) acc = F->sub(acc, F->mul(den.coeff(k), s[m - k]));
        s[m] = F->mul(acc, d0inv);
    }
    return s;
}

Matrix<RatFunc> random_matrix(const Field& F, std::mt19937_64& rng, std::size_t rows, std::size_t cols, int deg) {
    Matrix<RatFunc> M(rows, cols, RatFunc(F));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) M(i, j) = test::random_ratfunc(F, rng, deg, 1);
    return M;
}

Matrix<RatFunc> constant_matrix(const Field& F, std::size_t r, const std::vector<Elem>& v) {
    Matrix<RatFunc> M(r, r, RatFunc(F));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) M(i, j) = RatFunc::constant(F, v[i * r + j]);
    return M;
}

// Number of X in M_r(F_q) commuting with every generator, by enumeration.
std::size_t centralizer_size(const Field& F, std::size_t r, const std::vector<std::vector<Elem>>& gens) {
    std::size_t rr = r * r, total = 1, count = 0;
    for (std::size_t i = 0; i < rr; ++i) total *= F->size();
    std::vector<Elem> X(rr);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (auto& x : X) {
            x = static_cast<Elem>(c % F->size());
            c /= F->size();
        }
        bool ok = true;
        for (const auto& g : gens)
            for (std::size_t i = 0; i < r && ok; ++i)
                for (std::size_t j = 0; j < r && ok; ++j) {
                    Elem a = 0;
                    for (std::size_t k = 0; k < r; ++k)
                        a = F->add(a, F->sub(F->mul(X[i * r + k], g[k * r + j]), F->mul(g[i * r + k], X[k * r + j])));
                    ok = a == 0;
                }
        count += ok;
    }
    return count;
}

MotiveMatrices cm_motive(const Precision& p) {
    FieldSpec s{2, 1, 2, 0};
    RamSeries l = carlitz_period(s.field(), 4, 3, p.prec + 8);
    return psi_rho(DrinfeldModule(s, {ExactCoef::zero(s), ExactCoef::one(s)}), {l, l.scale(2)}, p);
}

}  // namespace

TEST(Galois, MultiplicationByTIsScalar) {
    FieldSpec s{2, 1, 2, 0};
    DrinfeldModule cm(s, {ExactCoef::zero(s), ExactCoef::one(s)});
    Matrix<KtPoly> H = endo_matrix(cm.rho_t(), cm);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(H(i, j), i == j ? KtPoly::t(s) : KtPoly(s));
    FieldSpec c{3, 1, 2, 0};
    DrinfeldModule C = DrinfeldModule::carlitz(c);
    EXPECT_EQ(endo_matrix(C.rho_t(), C)(0, 0), KtPoly::t(c));
}

TEST(Galois, NonEndomorphismIsRejected) {
    FieldSpec s{3, 1, 2, 0};
    DrinfeldModule C = DrinfeldModule::carlitz(s);
    KTau tau = make_tau_poly(s, {ExactCoef::zero(s), ExactCoef::one(s)});
    EXPECT_THROW(endo_matrix(tau, C), IntertwineFailed);
}

TEST(Galois, BettiMatrixOfCmGenerator) {
    MotiveMatrices mm = cm_motive(Precision{16, 40});
    const FieldSpec& s = mm.rho.spec;
    Field F = s.field();
    KTau g = make_tau_poly(s, {ExactCoef::constant(s, F->primitive())});
    BettiResult br = betti(endo_matrix(g, mm.rho), mm, 3);
    for (const auto& c : br.checks) EXPECT_TRUE(c.pass) << c.name << " " << c.detail;
    // The primitive element of F_4 satisfies x^2 + x + 1 = 0.
    RatFunc one = RatFunc::constant(F, 1);
    Matrix<RatFunc> I(2, 2, RatFunc(F));
    I(0, 0) = one;
    I(1, 1) = one;
    Matrix<RatFunc> z = br.hB * br.hB + br.hB + I;
    EXPECT_TRUE(z.all_of([](const RatFunc& x) { return x.is_zero(); }));
}

TEST(Galois, BettiMatrixOfTIsT) {
    FieldSpec s{3, 1, 2, 0};
    DrinfeldModule C = DrinfeldModule::carlitz(s);
    MotiveMatrices mm = psi_rho(C, {carlitz_period(s.field(), 3, 2, 48)}, Precision{12, 40});
    BettiResult br = betti(endo_matrix(C.rho_t(), C), mm);
    EXPECT_TRUE(br.reconstruction_ok && br.constant_ok && br.resubstitution_ok);
    EXPECT_EQ(br.hB(0, 0), RatFunc::variable(s.field()));
}

TEST(Galois, PadeRecoversRandomFractions) {
    std::mt19937_64 rng(51);
    Field F = galois_field(3, 1);
    for (int it = 0; it < 50; ++it) {
        Poly num = test::random_poly(F, rng, 4), den = test::random_poly(F, rng, 4);
        if (den.coeff(0) == 0) den = den + Poly::constant(F, 1);
        RatFunc f(num, den);
        auto got = rational_reconstruct(F, expand(F, f.num(), f.den(), 10));
        ASSERT_TRUE(got.has_value());
        EXPECT_EQ(*got, f);
    }
    // 1/(1 - t)^6 needs a denominator of degree 6 > 10/2.
    Poly den = Poly::constant(F, 1);
    for (int i = 0; i < 6; ++i) den = den * Poly(F, {1, 2});
    EXPECT_FALSE(rational_reconstruct(F, expand(F, Poly::constant(F, 1), den, 10)).has_value());
}

TEST(Galois, CentralizerRankMatchesEnumeration) {
    std::mt19937_64 rng(52);
    for (unsigned p : {2u, 3u}) {
        Field F = galois_field(p, 1);
        for (std::size_t r : {1u, 2u}) {
            for (int it = 0; it < 10; ++it) {
                std::size_t ng = rng() % 3;
                std::vector<std::vector<Elem>> raw;
                std::vector<Matrix<RatFunc>> gens;
                for (std::size_t k = 0; k < ng; ++k) {
                    std::vector<Elem> v(r * r);
                    for (auto& x : v) x = test::random_elem(F, rng);
                    raw.push_back(v);
                    gens.push_back(constant_matrix(F, r, v));
                }
                GaloisSystem sys = centralizer_system(gens, r, F);
                std::size_t size = centralizer_size(F, r, raw), expect = 1;
                for (std::size_t k = 0; k < r * r - sys.rankB; ++k) expect *= F->size();
                EXPECT_EQ(size, expect);
            }
        }
    }
}

TEST(Galois, CmGroupHasHalfDimension) {
    Field F = galois_field(2, 1);
    // Companion matrix of x^2 + x + 1.
    GaloisSystem sys = centralizer_system({constant_matrix(F, 2, {0, 1, 1, 1})}, 2, F);
    EXPECT_EQ(sys.rankB, 2u);
    EXPECT_EQ(sys.s, 2.0);
    EXPECT_TRUE(sys.integral_s);
    for (std::size_t n = 0; n <= 3; ++n) EXPECT_EQ(galois_dimension(sys, n).dim, 2 * (n + 1));
    GaloisSystem none = centralizer_system({}, 1, F);
    EXPECT_EQ(none.rankB, 0u);
    for (std::size_t n = 0; n <= 4; ++n) EXPECT_EQ(galois_dimension(none, n).dim, n + 1);
}

TEST(Galois, BareissRankAgreesWithRowReduction) {
    std::mt19937_64 rng(53);
    Field F = galois_field(2, 2);
    for (int it = 0; it < 30; ++it) {
        std::size_t k = 1 + rng() % 3;
        Matrix<RatFunc> M = random_matrix(F, rng, 4, k, 2) * random_matrix(F, rng, k, 5, 2);
        std::size_t rr = row_reduce(M, RatFunc::constant(F, 1)).second.size();
        EXPECT_EQ(bareiss_rank(M), rr);
        EXPECT_LE(rr, k);
    }
}

TEST(Galois, RowSpaceComparison) {
    std::mt19937_64 rng(54);
    Field F = galois_field(3, 1);
    for (int it = 0; it < 20; ++it) {
        Matrix<RatFunc> A = random_matrix(F, rng, 3, 5, 2);
        Matrix<RatFunc> G = random_matrix(F, rng, 3, 3, 1);
        if (bareiss_rank(G) < 3) continue;
        EXPECT_TRUE(same_row_space(A, G * A));
        if (bareiss_rank(A) == 3) {
            EXPECT_FALSE(same_row_space(A, A.block(0, 0, 2, 5)));
        }
    }
}

TEST(Galois, ProlongedRankIsLevelTimesBaseRank) {
    std::mt19937_64 rng(55);
    Field F = galois_field(2, 1);
    for (int it = 0; it < 10; ++it) {
        GaloisSystem sys;
        sys.r = 2;
        Matrix<RatFunc> B = random_matrix(F, rng, 2, 4, 2);
        auto [rref, piv] = row_reduce(B, RatFunc::constant(F, 1));
        sys.B = rref;
        sys.rankB = piv.size();
        for (std::size_t n = 0; n <= 3; ++n) EXPECT_EQ(bareiss_rank(prolong_system(sys, n)), (n + 1) * sys.rankB);
    }
}

TEST(Galois, GroupShape) {
    std::mt19937_64 rng(56);
    Field F = galois_field(3, 1);
    auto d = [](const RatFunc& x, std::size_t k) { return x.hyperderiv(k); };
    RatFunc one = RatFunc::constant(F, 1);
    for (int it = 0; it < 10; ++it) {
        Matrix<RatFunc> X = random_matrix(F, rng, 2, 2, 2);
        if (bareiss_rank(X) < 2) continue;
        Matrix<RatFunc> dX = dmatrix(X, 2, d);
        EXPECT_TRUE(check_group_shape(dX, 2, 2, one));
        dX(4, 0) = one;
        EXPECT_FALSE(check_group_shape(dX, 2, 2, one));
    }
    Matrix<RatFunc> Z(2, 2, RatFunc(F));
    EXPECT_FALSE(check_group_shape(dmatrix(Z, 1, d), 2, 1, one));
}

TEST(Galois, FieldEmbeddingIsAHomomorphism) {
    for (auto [p, k, K] : std::vector<std::tuple<unsigned, unsigned, unsigned>>{{2, 2, 8}, {3, 2, 4}, {2, 1, 3}}) {
        Field small = galois_field(p, k), big = galois_field(p, K);
        FieldEmbedding emb(small, big);
        std::vector<Elem> seen;
        for (Elem a = 0; a < small->size(); ++a) {
            seen.push_back(emb(a));
            for (Elem b = 0; b < small->size(); ++b) {
                EXPECT_EQ(emb(small->add(a, b)), big->add(emb(a), emb(b)));
                EXPECT_EQ(emb(small->mul(a, b)), big->mul(emb(a), emb(b)));
            }
        }
        std::sort(seen.begin(), seen.end());
        EXPECT_EQ(std::unique(seen.begin(), seen.end()), seen.end());
    }
    EXPECT_THROW(FieldEmbedding(galois_field(2, 3), galois_field(2, 4)), PreconditionViolated);
}
