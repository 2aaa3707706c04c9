#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "lnagell/errors.hpp"
#include "lnagell/local_count.hpp"

using namespace lnagell;

namespace {

bool unit_has_pth_root_by_search(u64 p, u64 q) {
    const auto mul = [q](std::pair<u64, u64> x, std::pair<u64, u64> y) {
        return std::pair<u64, u64>{(x.first * y.first + 2 * x.second * y.second) % q,
                                   (x.first * y.second + x.second * y.first) % q};
    };
    for (u64 u = 0; u < q; ++u) {
        for (u64 v = 0; v < q; ++v) {
            std::pair<u64, u64> z{1, 0};
            for (u64 i = 0; i < p; ++i) z = mul(z, {u, v});
            if (z == std::pair<u64, u64>{1, 1}) return true;
        }
    }
    return false;
}

}  // namespace

TEST(LocalCount, Examples) {
    const auto a = count_mod_prime_power(5, 7, 1);
    EXPECT_EQ(a.count, 7);
    EXPECT_EQ(a.case_tag, "1a");
    const auto b = count_mod_prime_power(3, 5, 1);
    EXPECT_EQ(b.count, 6);
    EXPECT_EQ(b.case_tag, "2-nonpower");
    EXPECT_EQ(count_mod_prime_power(3, 17, 1).case_tag, "1b");
    EXPECT_EQ(count_mod_prime_power(5, 5, 1).case_tag, "1c");
    EXPECT_EQ(count_mod_prime_power(5, 5, 1).count, 5);
    const auto c = count_mod_prime_power(3, 2, 3);
    EXPECT_EQ(c.case_tag, "3");
    EXPECT_EQ(c.count, 4);
    const auto d = count_mod_prime_power(3, 7, 1);
    EXPECT_EQ(d.case_tag, "4");
    EXPECT_EQ(d.d, std::optional<u64>(3));
    EXPECT_EQ(d.count, 9);
    EXPECT_EQ(count_mod_prime_power(5, 11, 2).count, 220);
    EXPECT_EQ(count_mod_n(3, 10), 6);
    EXPECT_EQ(count_mod_n(3, 40), 24);
    EXPECT_EQ(count_mod_n(3, 1), 1);
}

TEST(LocalCount, AgreesWithEnumeration) {
    std::set<std::string> tags;
    for (u64 p : {3ull, 5ull, 7ull, 11ull, 13ull}) {
        for (u64 q : primes_up_to(2000)) {
            u64 qs = q;
            for (unsigned s = 1; qs <= 2000; ++s, qs *= q) {
                const auto r = count_mod_prime_power(p, q, s);
                tags.insert(r.case_tag);
                ASSERT_EQ(r.count, brute_force_count(p, qs)) << "p=" << p << " q=" << q << " s=" << s;
            }
        }
    }
    EXPECT_EQ(tags, (std::set<std::string>{"1a", "1b", "1c", "2-nonpower", "2-power", "3", "4"}));
}

TEST(LocalCount, MultiplicativeOverCoprimeModuli) {
    for (u64 p : {3ull, 5ull}) {
        for (u64 m = 1; m <= 60; ++m) {
            for (u64 n = 1; n <= 60; ++n) {
                if (std::gcd(m, n) != 1) continue;
                ASSERT_EQ(count_mod_n(p, m * n), count_mod_n(p, m) * count_mod_n(p, n)) << m << " " << n;
            }
        }
        for (u64 n : {6ull, 15ull, 21ull, 77ull, 120ull, 300ull}) EXPECT_EQ(count_mod_n(p, n), brute_force_count(p, n));
    }
}

TEST(LocalCount, InertDichotomyMatchesRootSearch) {
    for (u64 p : {3ull, 5ull, 7ull}) {
        for (u64 q : primes_up_to(300)) {
            if (q == 2 || q % p != p - 1 || legendre(2, q) == 1) continue;
            const auto r = count_mod_prime_power(p, q, 1);
            const bool power = unit_is_pth_power_inert(p, q);
            EXPECT_EQ(r.case_tag, power ? "2-power" : "2-nonpower");
            EXPECT_EQ(power, unit_has_pth_root_by_search(p, q)) << p << " " << q;
        }
    }
}

TEST(LocalCount, CaseFourMultiplierIsIndependentOfExponent) {
    for (u64 p : {3ull, 5ull, 7ull}) {
        for (u64 q : primes_up_to(200)) {
            if (q != p && q % p != 1) continue;
            const auto r1 = count_mod_prime_power(p, q, 1);
            for (unsigned s = 2; s <= 3; ++s) {
                const auto rs = count_mod_prime_power(p, q, s);
                if (r1.case_tag != "4") continue;
                EXPECT_EQ(rs.d, r1.d);
                EXPECT_EQ(rs.d, case4_d(p, q));
            }
        }
    }
}

TEST(LocalCount, CsvAndCaps) {
    EXPECT_EQ(local_count_csv_header(), "p,q,s,case,count,d");
    EXPECT_EQ(local_count_csv_row(count_mod_prime_power(3, 7, 1)), "3,7,1,4,9,3");
    EXPECT_EQ(local_count_csv_row(count_mod_prime_power(3, 5, 1)), "3,5,1,2-nonpower,6,");
    EXPECT_THROW(brute_force_count(3, 200000), PreconditionError);
    EXPECT_THROW(count_mod_n(3, 1000, 100), PreconditionError);
}
