#include <random>

#include <gtest/gtest.h>

#include "lnagell/elementary.hpp"
#include "lnagell/errors.hpp"
#include "lnagell/thue.hpp"

using namespace lnagell;

namespace {

mpz_class ipow(const mpz_class& b, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

mpz_class gcd(const mpz_class& a, const mpz_class& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

}  // namespace

TEST(CoprimeQuotient, Examples) {
    auto r = coprime_quotient_properties(4, 1, 3);
    EXPECT_EQ(r.quotient, 21);
    EXPECT_EQ(r.gcd_value, 3);
    r = coprime_quotient_properties(2, 1, 5);
    EXPECT_EQ(r.quotient, 31);
    EXPECT_EQ(r.gcd_value, 1);
    EXPECT_TRUE(r.prime_factor_congruences_ok);
    r = coprime_quotient_properties(1, -1, 3);
    EXPECT_EQ(r.quotient, 1);
    EXPECT_EQ(r.gcd_value, 1);
    EXPECT_THROW(coprime_quotient_properties(6, 4, 3), PreconditionError);
    EXPECT_THROW(coprime_quotient_properties(5, 5, 3), PreconditionError);
}

TEST(CoprimeQuotient, AgreesWithNaiveArithmetic) {
    for (unsigned long p : {3ul, 5ul, 7ul}) {
        for (long y = 2; y <= 60; ++y) {
            for (long a = 1; a < y; ++a) {
                if (gcd(y, a) != 1) continue;
                const mpz_class q = (ipow(y, p) - ipow(a, p)) / (y - a);
                const auto r = coprime_quotient_properties(y, a, p);
                ASSERT_EQ(r.quotient, q);
                ASSERT_EQ(r.gcd_value, gcd(y - a, q));
                EXPECT_TRUE(r.gcd_value == 1 || r.gcd_value == static_cast<long>(p));
                EXPECT_TRUE(r.p_divides_equivalence);
                EXPECT_EQ((y - a) % static_cast<long>(p) == 0, q % p == 0);
                EXPECT_TRUE(r.quotient_class_ok);
                EXPECT_TRUE(r.prime_factor_congruences_ok) << y << " " << a << " " << p;
            }
        }
    }
}

TEST(Sieve, RejectsWrongResidueClass) {
    const auto c = CandidateSolution::unchecked(5, 11, 3);
    const auto rep = sieve_check(c);
    ASSERT_NE(rep.find("odd_and_y_7_mod_8"), nullptr);
    EXPECT_FALSE(rep.find("odd_and_y_7_mod_8")->passed);
    EXPECT_FALSE(rep.passed());
}

TEST(Sieve, TrivialSolutionRejected) {
    for (unsigned long p : {3ul, 5ul, 7ul}) {
        EXPECT_THROW(sieve_check(CandidateSolution::make(1, -1, p)), PreconditionError);
        EXPECT_THROW(sieve_check(CandidateSolution::make(-1, -1, p)), PreconditionError);
    }
}

TEST(Sieve, ConstructorRefusesNonSolutions) {
    EXPECT_THROW(CandidateSolution::make(110, 23, 3), PreconditionError);
    EXPECT_TRUE(CandidateSolution::make(1, -1, 5).trivial());
}

TEST(Sieve, OverallVerdictIsConjunction) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const long x = 2 * static_cast<long>(rng() % 1000) + 1, y = 8 * static_cast<long>(rng() % 1000) + 7;
        const auto rep = sieve_check(CandidateSolution::unchecked(x, y, 5), 10000);
        bool all = true;
        for (const auto& v : rep.conditions) all = all && v.passed;
        EXPECT_EQ(rep.passed(), all);
    }
}

TEST(UnitPowerPair, Examples) {
    auto u = unit_power_pair(1, 1, 3, 1);
    EXPECT_EQ(u.X, 17);
    EXPECT_EQ(u.Y, 12);
    u = unit_power_pair(1, 0, 7, 1);
    EXPECT_EQ(u.X, 1);
    EXPECT_EQ(u.Y, 1);
    u = unit_power_pair(1, 0, 3, -1);
    EXPECT_EQ(u.X, -1);
    EXPECT_EQ(u.Y, 1);
}

TEST(UnitPowerPair, NormIsMultiplicative) {
    std::mt19937_64 rng(12);
    const unsigned long primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
    for (int i = 0; i < 500; ++i) {
        const long a = static_cast<long>(rng() % 201) - 100, b = static_cast<long>(rng() % 201) - 100;
        const unsigned long p = primes[rng() % 10];
        const long r = static_cast<long>(rng() % 9) - 4;
        const auto u = unit_power_pair(a, b, p, r);
        const mpz_class lhs = u.X * u.X - 2 * u.Y * u.Y;
        const mpz_class rhs = ipow(mpz_class(a * a - 2 * b * b), p) * (r % 2 == 0 ? 1 : -1);
        ASSERT_EQ(lhs, rhs);
    }
}

TEST(Observation, Examples) {
    const auto o = observation_identities(1, 1, 3);
    EXPECT_TRUE(o.identities_hold());
    EXPECT_EQ(o.X - o.Y, 5);
    EXPECT_EQ(o.T, 5);
    const auto t = observation_identities(1, 0, 7);
    EXPECT_TRUE(t.battery_ran);
    EXPECT_TRUE(t.passed());
}

TEST(Observation, IdentitiesHoldForRandomInputs) {
    std::mt19937_64 rng(13);
    const unsigned long primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31};
    for (int i = 0; i < 500; ++i) {
        const long a = static_cast<long>(rng() % 401) - 200, b = static_cast<long>(rng() % 401) - 200;
        ASSERT_TRUE(observation_identities(a, b, primes[rng() % 10]).identities_hold());
    }
}

TEST(Observation, OnlyTrivialPointHasUnitY) {
    for (unsigned long p : {3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul}) {
        const ThuePolynomial f = thue_coeffs(p, 1);
        for (long a = -200; a <= 200; ++a) {
            for (long b = -200; b <= 200; ++b) {
                if (thue_eval(f, a, b) == 1) EXPECT_TRUE(a == 1 && b == 0) << a << " " << b << " " << p;
            }
        }
    }
}

TEST(Wieferich, Scan) {
    EXPECT_TRUE(wieferich_check(1093));
    EXPECT_TRUE(wieferich_check(3511));
    EXPECT_FALSE(wieferich_check(3));
    for (u64 p : primes_up_to(999)) {
        if (p > 2) EXPECT_FALSE(wieferich_check(p)) << p;
    }
}

TEST(DirectSearch, FindsOnlyTheTrivialSolution) {
    for (auto [p, bound] : {std::pair{3ul, u64{1'000'000}}, std::pair{5ul, u64{10'000}}}) {
        const auto sols = direct_search(p, bound);
        ASSERT_EQ(sols.size(), 1u);
        EXPECT_EQ(sols[0].x(), 1);
        EXPECT_EQ(sols[0].y(), -1);
    }
    EXPECT_TRUE(direct_search(7, 0).empty());
}
