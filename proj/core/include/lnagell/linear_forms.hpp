#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "lnagell/interval.hpp"
#include "lnagell/numerics.hpp"
#include "lnagell/verdict.hpp"

namespace lnagell {

/// general: |r| <= (p-1)/2 with a_1 = 0.9(rho+1) + 2 log y.
/// unit: r = +-1 with the sharpened a_1 and h (needs p >= 100).
enum class RMode { general, unit };
std::string to_string(RMode m);
RMode parse_rmode(const std::string& s);

/// The linear form b2 log(alpha2) - b1 log(alpha1) attached to a putative solution.
struct LinearFormInstance {
    unsigned long p = 0;
    mpq_class y;
    RMode mode = RMode::general;
    long r = 0;  ///< |r| used for b2; defaults to (p-1)/2 (general) or 1 (unit)

    static LinearFormInstance make(unsigned long p, const mpq_class& y, RMode mode, long r = 0);
    unsigned long b1() const { return p; }
    unsigned long b2() const { return 2 * static_cast<unsigned long>(r < 0 ? -r : r); }
    /// h(alpha2) = log(1 + sqrt2)/2.
    static Interval height_alpha2(mpfr_prec_t prec);
};

/// 1.053 - p log(y)/2, an upper bound for log Lambda.
Interval lambda_upper(const mpq_class& y, unsigned long p, mpfr_prec_t prec = kDefaultBasePrecision);
/// Lambda = log((x + sqrt2)/(x - sqrt2)) for an explicit x > sqrt2.
Interval lambda_exact(const mpz_class& x, mpfr_prec_t prec = kDefaultBasePrecision);
/// 2 sqrt2 / (1 - sqrt2/23^(3/2)) < 2.866, decided rigorously.
bool upper_constant_check();

struct TwoLogParams {
    RMode mode = RMode::general;
    mpq_class mu, rho;
    /// Replace the mode's choice of a1, a2 or h (used to exercise the side conditions).
    std::optional<mpq_class> a1, a2, h;
};

/// Validates mu in [1/3, 1], rho > 1 and p >= 100 in unit mode.
TwoLogParams choose_two_log_params(unsigned long p, const mpq_class& rho, const mpq_class& mu, RMode mode);

/// Midpoints of every derived quantity of the two-logarithm bound.
struct TwoLogValues {
    double sigma = 0, lambda = 0, a1 = 0, a2 = 0, h = 0, H = 0, omega = 0, theta_aux = 0;
    double C = 0, C_prime = 0, f = 0;
};

struct LinearFormBoundReport {
    std::vector<ConditionVerdict> conditions;
    bool bound_emitted = false;
    double lower_bound = 0;  ///< on log|Lambda|, valid only when bound_emitted
    double upper_bound = 0;  ///< 1.053 - p log(y)/2
    bool contradiction = false;
    mpfr_prec_t precision = 0;
    std::string failed_condition() const;
};

struct TwoLogReport : LinearFormBoundReport {
    TwoLogValues values;
};

TwoLogReport two_log_lower_bound(const LinearFormInstance& inst, const TwoLogParams& params,
                            mpfr_prec_t prec = kDefaultBasePrecision);

/// g = 1.053 - p log(y)/2 - f(y, p, mu, rho), with p allowed to be real.
Interval g_function(const mpq_class& y, const mpq_class& p, const mpq_class& mu, const mpq_class& rho, RMode mode,
                    mpfr_prec_t prec = kDefaultBasePrecision);
double g_function_d(double y, double p, double mu, double rho, RMode mode);

/// Fixed (mu, rho, p_l) determining the simplified upper bound g^(u).
struct GUpperSetup {
    RMode mode = RMode::general;
    mpq_class mu, rho;
    unsigned long p_ell = 0;
};

struct GUpperConstants {
    double C1 = 0, C2 = 0, C3 = 0, C4 = 0, C5 = 0;
    double h_ell = 0, a1_ell_a2 = 0, lambda = 0;
};

GUpperConstants g_upper_constants(const GUpperSetup& setup, mpfr_prec_t prec = kDefaultBasePrecision);
Interval g_upper(const GUpperSetup& setup, const mpq_class& y, const mpq_class& p, mpfr_prec_t prec = kDefaultBasePrecision);

struct MonotonicityReport {
    bool ok = false;
    std::vector<ConditionVerdict> hypotheses;
    double third_value = 0;  ///< (log p0 + C3) log(log p0 + C3)
};

/// Checks the hypotheses licensing u(y0, p0) < 0 => u(y, p) < 0 for y >= y0, p >= p0.
MonotonicityReport monotonicity_guard(const GUpperSetup& setup, const mpq_class& y0, const mpq_class& p0,
                                      mpfr_prec_t prec = kDefaultBasePrecision);

struct CriticalPoint {
    double p = 0, mu = 0, rho = 0;
    double residual = 0;
    int iterations = 0;
    std::vector<std::string> trace;
};

struct CriticalOptions {
    int max_iterations = 100;
    mpfr_prec_t precision = 256;
    double tolerance = 1e-8;
    std::optional<std::vector<double>> start;  ///< (p, mu, rho) or (p, rho)
};

/// general: (g, dg/dmu, dg/drho) = 0; unit: mu = 1/3 and (g, dg/drho) = 0. Throws BudgetError on failure.
CriticalPoint solve_critical_system(const mpq_class& y0, RMode mode, const CriticalOptions& opt = {});

/// End-to-end verification of an explicit p-bound from the two-logarithm estimate.
struct PBoundPlan {
    GUpperSetup setup;
    std::vector<std::pair<mpq_class, mpq_class>> anchors;  ///< (y0, p0) where g^(u) < 0 and the guard holds
    mpq_class finite_y = 23;
    unsigned long finite_p_to = 0;  ///< direct g < 0 checks for primes p_ell <= p < finite_p_to
    std::optional<CriticalPoint> critical;
};

PBoundPlan initial_bound_plan();
PBoundPlan improved_bound_plan();

struct PBoundCertificate {
    PBoundPlan plan;
    GUpperConstants constants;
    std::vector<ConditionVerdict> checks;
    std::vector<unsigned long> finite_primes;
    bool passed = false;
};

PBoundCertificate certify_p_bound(const PBoundPlan& plan, mpfr_prec_t prec = kDefaultBasePrecision);

// ---- the three-parameter interpolation estimate ----

/// (#{alpha1^t alpha2^s}, #{2t + ps}) for b2 = 2.
std::pair<u64, u64> interpolation_cardinalities(u64 R1, u64 R2, u64 S1, u64 S2, u64 p);

struct StirlingBounds {
    Interval log_factorial_upper;       ///< bound on log N!
    Interval eps_upper;                 ///< bound on eps(N)
    Interval superfactorial_log_lower;  ///< bound on log prod_{k<K} k!
};

StirlingBounds stirling_bounds(u64 N, u64 K, mpfr_prec_t prec = kDefaultBasePrecision);
Interval log_factorial(u64 N, mpfr_prec_t prec = kDefaultBasePrecision);
Interval log_superfactorial(u64 K, mpfr_prec_t prec = kDefaultBasePrecision);  ///< log prod_{k=1}^{K-1} k!
Interval eps_exact(u64 N, mpfr_prec_t prec = kDefaultBasePrecision);
/// Glaisher-Kinkelin constant.
Interval glaisher(mpfr_prec_t prec);

struct InterpolationParams {
    u64 K = 0, L = 0, R1 = 0, R2 = 0, S1 = 0, S2 = 0;
    mpq_class rho, mu;
};

struct InterpolationReport : LinearFormBoundReport {
    double g = 0, log_b = 0, eps = 0, T = 0;
    double A = 0, B = 0, C = 0;  ///< the rho condition as A log rho - B rho > C
    double rho0 = 0;             ///< maximiser A/B
    bool rho_feasible = false;
    double rho_min = 0;          ///< smallest rho satisfying A log rho - B rho = C
};

/// Unit-mode instance only (b2 = 2). The bound is log|Lambda| + log T + |Lambda| T > -mu K L log rho.
InterpolationReport interpolation_bound(const LinearFormInstance& inst, const InterpolationParams& params,
                      mpfr_prec_t prec = kDefaultBasePrecision);

}  // namespace lnagell
