#include <cmath>

#include <gtest/gtest.h>

#include "lnagell/errors.hpp"
#include "lnagell/large_y.hpp"

using namespace lnagell;

namespace {

const std::string kTable = LNAGELL_ASSET_DIR "/large_y_table.csv";

TableRow mismatched_row(const std::vector<TableRow>& rows) {
    TableRow r = rows.back();
    r.primes = {919};
    r.range_lo = r.range_hi = 919;
    return r;
}

}  // namespace

TEST(ParameterTable, ParsesRowsAndRanges) {
    const auto rows = load_table(kTable);
    ASSERT_EQ(rows.size(), 8u);
    EXPECT_EQ(rows[0].primes, std::vector<u64>{919});
    EXPECT_EQ(rows[0].L, 9u);
    EXPECT_EQ(rows[0].R2, 64u);
    EXPECT_EQ(rows[0].K_prime, parse_rational("26.64"));
    EXPECT_EQ(rows[0].rho, parse_rational("27.22"));
    for (const auto& r : rows) {
        for (u64 p : r.primes) EXPECT_TRUE(is_prime(p) && p >= r.range_lo && p <= r.range_hi);
    }
    EXPECT_THROW(parse_table("primes,y\n919,10\n"), PreconditionError);
}

TEST(ParameterTable, FirstRowConstants) {
    const auto rows = load_table(kTable);
    const auto rep = verify_table_row(rows[0], 919);
    EXPECT_TRUE(rep.passed);
    EXPECT_EQ(rep.constants.K, 49073u);
    EXPECT_GT(rep.constants.C8, 0.0);
    for (const auto& v : rep.constants.checks) EXPECT_TRUE(v.passed) << v.name << ": " << v.detail;
}

TEST(ParameterTable, EveryPrimeVerifiesAndOverlapIsFlagged) {
    const auto rep = verify_table(load_table(kTable));
    EXPECT_TRUE(rep.passed);
    EXPECT_EQ(rep.primes.size(), 141u);
    ASSERT_EQ(rep.overlaps.size(), 1u);
    EXPECT_NE(rep.overlaps[0].find("1200"), std::string::npos);
    for (const auto& r : rep.primes) EXPECT_TRUE(r.passed) << r.p;
}

TEST(ParameterTable, MismatchedRowFails) {
    const auto rows = load_table(kTable);
    const auto rep = verify_table_row(mismatched_row(rows), 919);
    EXPECT_FALSE(rep.passed);
    const auto* v = find_verdict(rep.constants.checks, "bound_contradiction");
    ASSERT_NE(v, nullptr);
    EXPECT_FALSE(v->passed);
}

TEST(RhoCondition, RhoMinimumSolvesEquality) {
    const auto c = rho_condition_coeffs(916, 26.587, 9, 1, 64, 0.58066);
    const auto rho = rho_condition_min(c);
    ASSERT_TRUE(rho.has_value());
    EXPECT_NEAR(c.A * std::log(*rho) - c.B * *rho, c.C, 1e-6 * std::fabs(c.C));
    EXPECT_GT(*rho, 1.0);
}

TEST(ParamSearch, FeasibleAt916InfeasibleAt911) {
    const auto a = param_search(916);
    ASSERT_TRUE(a.best.has_value());
    EXPECT_LT(a.best->objective, 458.0);
    EXPECT_TRUE(a.contradiction);
    EXPECT_TRUE(a.reverified);
    EXPECT_EQ(a.best->L, 9u);
    EXPECT_EQ(a.best->R1, 1u);
    EXPECT_NEAR(static_cast<double>(a.best->R2), 64.0, 4.0);
    EXPECT_NEAR(a.best->K_prime, 26.62, 0.5);
    EXPECT_NEAR(a.best->mu, 0.58, 0.02);
    EXPECT_TRUE(verify_rho_condition(916, a.K_prime, a.best->L, a.best->R1, a.best->R2, a.mu, a.rho));

    const auto b = param_search(911);
    ASSERT_TRUE(b.best.has_value());
    EXPECT_GE(b.best->objective, 455.5);
    EXPECT_FALSE(b.contradiction);
}

TEST(ParamSearch, WorkerCountDoesNotChangeResult) {
    SearchOptions opt;
    opt.L_min = 8;
    opt.L_max = 10;
    opt.R2_min = 60;
    opt.R2_max = 68;
    opt.budget = 800;
    opt.workers = 1;
    const auto a = param_search(930, opt);
    opt.workers = 3;
    const auto b = param_search(930, opt);
    ASSERT_TRUE(a.best && b.best);
    EXPECT_EQ(a.best->objective, b.best->objective);
    EXPECT_EQ(a.K_prime, b.K_prime);
    EXPECT_EQ(a.rho, b.rho);
}
