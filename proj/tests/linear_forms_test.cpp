#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "lnagell/errors.hpp"
#include "lnagell/linear_forms.hpp"

using namespace lnagell;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

InterpolationParams interpolation_params_for(u64 p, double log_y, double K_prime, u64 L, u64 R1, u64 R2, const mpq_class& mu,
                           const mpq_class& rho) {
    InterpolationParams P;
    P.K = static_cast<u64>(std::ceil(K_prime * log_y));
    P.L = L;
    P.R1 = R1;
    P.R2 = R2;
    P.S1 = (L + R1 - 1) / R1;
    const u64 m = std::min(R2, p);
    P.S2 = ((P.K - 1) * L + 1 - 2 * R2 + m - 1) / m + 2;
    P.mu = mu;
    P.rho = rho;
    return P;
}

}  // namespace

TEST(LambdaUpper, Examples) {
    EXPECT_NEAR(lambda_upper(23, 17).mid(), 1.053 - 17 * std::log(23.0) / 2, 1e-12);
    EXPECT_NEAR(lambda_upper(23, 17).mid(), -25.599, 1e-3);
    EXPECT_TRUE(lambda_exact(17).certainly_positive());
    EXPECT_TRUE(upper_constant_check());
}

TEST(TwoLogBound, DerivedQuantities) {
    const auto unit = LinearFormInstance::make(1973, 23, RMode::unit);
    const auto r = two_log_lower_bound(unit, choose_two_log_params(1973, parse_rational("22.5978"), mpq_class(1, 3), RMode::unit));
    EXPECT_NEAR(r.values.sigma, 7.0 / 9.0, 1e-15);
    EXPECT_NEAR(r.values.lambda, 2.4249, 1e-4);
    const auto gen = LinearFormInstance::make(6959, 23, RMode::general);
    const auto g = two_log_lower_bound(gen, choose_two_log_params(6959, parse_rational("7.99202"), parse_rational("0.508613"),
                                                            RMode::general));
    EXPECT_NEAR(g.values.a2, 7.92533, 1e-5);
    EXPECT_NEAR(g.values.a2, (7.99202 + 1) * std::log(1 + std::sqrt(2.0)), 1e-12);
    EXPECT_TRUE(g.bound_emitted);
    EXPECT_TRUE(g.contradiction);
    EXPECT_LT(g.upper_bound, g.lower_bound);
}

TEST(TwoLogBound, ViolatedConditionIsNamedAndNoBoundEmitted) {
    const auto inst = LinearFormInstance::make(1973, 23, RMode::unit);
    auto params = choose_two_log_params(1973, parse_rational("22.5978"), mpq_class(1, 3), RMode::unit);
    params.a1 = mpq_class(2);
    params.a2 = mpq_class(2);
    const auto r = two_log_lower_bound(inst, params);
    EXPECT_FALSE(r.bound_emitted);
    EXPECT_FALSE(r.contradiction);
    const auto* v = find_verdict(r.conditions, "a1a2_ge_lambda_sq");
    ASSERT_NE(v, nullptr);
    EXPECT_FALSE(v->passed);
}

TEST(TwoLogBound, ParameterPreconditions) {
    EXPECT_THROW(choose_two_log_params(97, 20, mpq_class(1, 3), RMode::unit), PreconditionError);
    EXPECT_THROW(choose_two_log_params(1973, 20, mpq_class(1, 4), RMode::general), PreconditionError);
    EXPECT_THROW(choose_two_log_params(1973, 1, mpq_class(1, 2), RMode::general), PreconditionError);
}

TEST(GUpper, AnchorsAreNegative) {
    const auto plan = initial_bound_plan();
    EXPECT_TRUE(g_upper(plan.setup, 23, 6993).certainly_negative());
    EXPECT_TRUE(g_upper(plan.setup, 31, 6959).certainly_negative());
    const auto improved = improved_bound_plan();
    EXPECT_TRUE(g_upper(improved.setup, 23, 1973).certainly_negative());
}

TEST(GUpper, DominatesGAboveThreshold) {
    std::mt19937_64 rng(31);
    for (const auto& plan : {initial_bound_plan(), improved_bound_plan()}) {
        for (int i = 0; i < 200; ++i) {
            const long y = 23 + static_cast<long>(rng() % 2000);
            const long p = static_cast<long>(plan.setup.p_ell + rng() % 20000);
            const Interval g = g_function(y, p, plan.setup.mu, plan.setup.rho, plan.setup.mode);
            const Interval u = g_upper(plan.setup, y, p);
            ASSERT_TRUE((u - g).certainly_positive() || u.lo_q() >= g.hi_q()) << y << " " << p;
        }
    }
}

TEST(Monotonicity, GuardValues) {
    const auto improved = improved_bound_plan();
    const auto m = monotonicity_guard(improved.setup, 23, 1973);
    EXPECT_TRUE(m.ok);
    EXPECT_NEAR(m.third_value, 19.07, 0.01);
    EXPECT_FALSE(monotonicity_guard(improved.setup, 15, 1973).ok);
}

TEST(Monotonicity, ScaledUpperBoundDecreasesOnGrid) {
    for (const auto& plan : {initial_bound_plan(), improved_bound_plan()}) {
        const auto [y0, p0] = plan.anchors.front();
        ASSERT_TRUE(monotonicity_guard(plan.setup, y0, p0).ok);
        std::vector<std::vector<double>> u(50, std::vector<double>(50));
        for (int i = 0; i < 50; ++i) {
            for (int j = 0; j < 50; ++j) {
                const mpq_class y = y0 + i * i, p = p0 + 200 * j;
                u[i][j] = g_upper(plan.setup, y, p).mid() / (p.get_d() * std::log(y.get_d()));
            }
        }
        for (int i = 0; i < 50; ++i) {
            for (int j = 0; j < 50; ++j) {
                if (i) EXPECT_LE(u[i][j], u[i - 1][j] + 1e-15);
                if (j) EXPECT_LE(u[i][j], u[i][j - 1] + 1e-15);
            }
        }
    }
}

TEST(CriticalSystem, ReproducesAnchorPoints) {
    const auto g = solve_critical_system(23, RMode::general);
    EXPECT_LT(rel(g.p, 6950.6), 1e-3);
    EXPECT_LT(rel(g.mu, 0.508613), 1e-3);
    EXPECT_LT(rel(g.rho, 7.99202), 1e-3);
    EXPECT_LT(g.residual, 1e-8);
    const auto u = solve_critical_system(23, RMode::unit);
    EXPECT_LT(rel(u.p, 1971.41), 1e-3);
    EXPECT_LT(rel(u.rho, 22.5978), 1e-3);
    EXPECT_DOUBLE_EQ(u.mu, 1.0 / 3.0);
    EXPECT_LT(u.residual, 1e-8);
}

TEST(CriticalSystem, FailsWithTraceOnTinyBudget) {
    CriticalOptions opt;
    opt.max_iterations = 1;
    opt.start = std::vector<double>{3000, 0.9, 2.0};
    EXPECT_THROW(solve_critical_system(23, RMode::general, opt), BudgetError);
}

TEST(BoundPlans, Certify) {
    const auto a = certify_p_bound(initial_bound_plan());
    EXPECT_TRUE(a.passed);
    EXPECT_EQ(a.plan.setup.p_ell, 6959u);
    const auto b = certify_p_bound(improved_bound_plan());
    EXPECT_TRUE(b.passed);
    EXPECT_EQ(b.plan.setup.p_ell, 1973u);
    EXPECT_NEAR(b.constants.lambda, 2.424996, 1e-5);
}

TEST(Cardinalities, Examples) {
    EXPECT_EQ(interpolation_cardinalities(2, 3, 5, 4, 17), std::make_pair(u64{10}, u64{12}));
    EXPECT_EQ(interpolation_cardinalities(1, 20, 1, 3, 17).second, 57u);
    EXPECT_EQ(interpolation_cardinalities(1, 9, 1, 2, 17).second, 18u);
}

TEST(Cardinalities, MatchSetEnumeration) {
    for (u64 p : {5u, 17u}) {
        for (u64 R2 = 1; R2 <= 40; ++R2) {
            for (u64 S2 = 2; S2 <= 40; ++S2) {
                std::set<u64> s;
                for (u64 t = 0; t < R2; ++t) {
                    for (u64 q = 0; q < S2; ++q) s.insert(2 * t + p * q);
                }
                ASSERT_EQ(interpolation_cardinalities(1, R2, 1, S2, p).second, s.size()) << p << " " << R2 << " " << S2;
            }
        }
    }
}

TEST(Stirling, Examples) {
    const auto s = stirling_bounds(10, 5);
    EXPECT_NEAR(log_factorial(10).mid(), std::log(3628800.0), 1e-12);
    EXPECT_TRUE((s.log_factorial_upper - log_factorial(10)).certainly_positive());
    EXPECT_NEAR(s.log_factorial_upper.mid(), 15.10442, 1e-5);
    EXPECT_NEAR(log_superfactorial(5).mid(), std::log(288.0), 1e-12);
    EXPECT_TRUE((log_superfactorial(5) - s.superfactorial_log_lower).certainly_positive());
}

TEST(Stirling, BoundsHoldAgainstExactValues) {
    for (u64 n = 1; n <= 200; ++n) {
        const auto s = stirling_bounds(n, n);
        ASSERT_TRUE((s.log_factorial_upper - log_factorial(n)).certainly_positive()) << n;
        ASSERT_TRUE((log_superfactorial(n) - s.superfactorial_log_lower).certainly_positive()) << n;
        if (n >= 2) ASSERT_TRUE((s.eps_upper - eps_exact(n)).sign() != -1) << n;
        if (n >= 3) {
            ASSERT_TRUE((stirling_bounds(n - 1, 1).eps_upper - s.eps_upper).certainly_positive()) << n;
        }
    }
}

TEST(InterpolationBound, TableParametersGiveContradiction) {
    mpz_class y;
    mpz_ui_pow_ui(y.get_mpz_t(), 10, 800);
    const auto inst = LinearFormInstance::make(919, y, RMode::unit);
    const auto P = interpolation_params_for(919, 800 * std::log(10.0), 26.64, 9, 1, 64, parse_rational("0.58"), parse_rational("27.22"));
    const auto r = interpolation_bound(inst, P);
    EXPECT_TRUE(all_passed(r.conditions));
    EXPECT_TRUE(r.bound_emitted);
    EXPECT_TRUE(r.contradiction);
    EXPECT_GE(r.g, 1.0 / 6.0);
    EXPECT_LE(r.g, 0.25);
    EXPECT_TRUE(r.rho_feasible);
}

TEST(InterpolationBound, InfeasibleWhenOptimalRhoBelowOne) {
    mpz_class y;
    mpz_ui_pow_ui(y.get_mpz_t(), 10, 800);
    const auto inst = LinearFormInstance::make(919, y, RMode::unit);
    const auto P = interpolation_params_for(919, 800 * std::log(10.0), 0.5, 2, 1, 2, parse_rational("0.58"), parse_rational("27.22"));
    const auto r = interpolation_bound(inst, P);
    EXPECT_FALSE(r.rho_feasible);
    EXPECT_FALSE(r.contradiction);
}
