#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "lnagell/elementary.hpp"
#include "lnagell/errors.hpp"
#include "lnagell/thue.hpp"

using namespace lnagell;

namespace {

std::vector<mpz_class> as_mpz(std::initializer_list<long> v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(ThueCoeffs, Examples) {
    EXPECT_EQ(thue_coeffs(3, 1).coeffs, as_mpz({1, 3, 6, 2}));
    EXPECT_EQ(thue_coeffs(5, 1).coeffs, as_mpz({1, 5, 20, 20, 20, 4}));
    EXPECT_THROW(thue_coeffs(5, 10), PreconditionError);
}

TEST(ThueCoeffs, UnitTwistMatchesBinomialForm) {
    for (unsigned long p : {3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 31ul, 101ul}) {
        const auto f = thue_coeffs(p, 1);
        ASSERT_EQ(f.coeffs.size(), p + 1);
        for (unsigned long k = 0; k <= p; ++k) {
            mpz_class expected = binomial(p, k);
            mpz_mul_2exp(expected.get_mpz_t(), expected.get_mpz_t(), k / 2);
            EXPECT_EQ(f.coeffs[k], expected) << "p = " << p << ", k = " << k;
        }
        EXPECT_EQ(thue_eval(f, 1, 0), 1);
    }
}

TEST(ThueEval, Examples) {
    EXPECT_EQ(thue_eval(thue_coeffs(3, 1), 1, 1), 12);
    EXPECT_EQ(thue_eval(thue_coeffs(13, 1), 1, 0), 1);
}

TEST(ThueEval, MatchesRingArithmetic) {
    std::mt19937_64 rng(21);
    const unsigned long primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
    const long twists[] = {1, -1, 2, -2};
    for (int i = 0; i < 500; ++i) {
        const long a = static_cast<long>(rng() % 2001) - 1000, b = static_cast<long>(rng() % 2001) - 1000;
        const unsigned long p = primes[rng() % 10];
        const long r = twists[rng() % 4];
        ASSERT_EQ(thue_eval(thue_coeffs(p, r), a, b), unit_power_pair(a, b, p, r).Y);
    }
}

TEST(RealRoot, Location) {
    EXPECT_NEAR(real_root_theta(3, 1, 128).to_double(), -0.403928, 1e-6);
    EXPECT_NEAR(real_root_theta(17, 1, 128).to_double(), -0.0732550, 1e-6);
    for (unsigned long p : {17ul, 19ul, 101ul, 911ul}) EXPECT_LT(std::fabs(real_root_theta(p, 1, 128).to_double()), 0.08);
}

TEST(AllRoots, ExactlyOneRealRootInEachSignClass) {
    for (long r : {1L, -1L, 2L, -2L}) {
        for (unsigned long p : {3ul, 5ul, 7ul, 11ul, 13ul}) {
            const RootSet rs = all_roots(p, r, 256);
            ASSERT_EQ(rs.roots.size(), p);
            int real = 0;
            for (const auto& z : rs.roots) real += std::fabs(z.im.to_double()) < 1e-30;
            EXPECT_EQ(real, 1);
            EXPECT_EQ(rs.real_index, 0u);
            const double theta = rs.roots[0].re.to_double();
            if (r == 1) EXPECT_TRUE(theta < 0 && theta > -std::sqrt(2.0));
            if (r == -1) EXPECT_TRUE(theta > 0 && theta < std::sqrt(2.0));
            if (r == 2) EXPECT_LT(theta, -std::sqrt(2.0));
            if (r == -2) EXPECT_GT(theta, std::sqrt(2.0));
            EXPECT_GT(rs.min_separation.to_double(), 0.0);
            EXPECT_LT(rs.max_residual.to_double(), 1e-30);
        }
    }
}

TEST(AllRoots, CubicRootsMatchVieta) {
    const RootSet rs = all_roots(3, 1, 256);
    double sum = 0;
    for (const auto& z : rs.roots) sum += z.re.to_double();
    EXPECT_NEAR(sum, -3.0, 1e-12);
    for (std::size_t i = 1; i < 3; ++i) EXPECT_NEAR(std::fabs(rs.roots[i].im.to_double()), 1.807339, 1e-6);
}

TEST(Discriminant, Examples) {
    EXPECT_EQ(discriminant_formula(3), -216);
    EXPECT_EQ(discriminant_formula(5), 819200000);
    EXPECT_LT(discriminant_formula(7), 0);
    EXPECT_EQ(discriminant_resultant(3, 1), -216);
    EXPECT_EQ(discriminant_resultant(3, 2), -216);
    EXPECT_EQ(discriminant_resultant(5, 1), 819200000);
    EXPECT_THROW(discriminant_resultant(17, 1), PreconditionError);
}

TEST(Discriminant, FormulaEqualsResultant) {
    for (unsigned long p : {3ul, 5ul, 7ul, 11ul, 13ul}) {
        for (long r : {1L, 2L, -1L}) EXPECT_EQ(discriminant_formula(p), discriminant_resultant(p, r)) << p << " " << r;
    }
}

TEST(ImProduct, ClosedFormMatchesRootsAndBound) {
    const ImProduct c3 = im_product(3, 256);
    EXPECT_NEAR(c3.closed_form.to_double(), 3.26648, 1e-5);
    EXPECT_NEAR(c3.lower_bound.to_double(), 3.0, 1e-12);
    for (unsigned long p : {3ul, 5ul, 7ul, 11ul, 13ul}) {
        const RootSet rs = all_roots(p, 1, 256);
        BigReal prod(1.0, 256);
        for (std::size_t i = 0; i < rs.roots.size(); ++i) {
            if (i != rs.real_index) prod = prod * abs(rs.roots[i].im);
        }
        const ImProduct ip = im_product(p, 256);
        EXPECT_NEAR(prod.to_double() / ip.closed_form.to_double(), 1.0, 1e-10);
        EXPECT_GE(ip.closed_form.to_double(), ip.lower_bound.to_double());
    }
}

TEST(GaloisAction, ImageFormulaHolds) {
    EXPECT_TRUE(galois_action_check(5, 1, 0, 0, 1));
    EXPECT_TRUE(galois_action_check(5, 1, 1, 0, 1));
    EXPECT_TRUE(galois_action_check(5, 1, 0, 1, 1));
    for (unsigned long p : {5ul, 7ul, 11ul}) {
        for (long r : {1L, -1L, 2L}) {
            for (int s : {0, 1}) {
                for (long j : {0L, 1L, 2L}) {
                    for (long k : {1L, 2L, static_cast<long>(p) - 1}) EXPECT_TRUE(galois_action_check(p, r, s, j, k));
                }
            }
        }
    }
}
