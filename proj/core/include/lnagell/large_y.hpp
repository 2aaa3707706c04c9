#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lnagell/interval.hpp"
#include "lnagell/numerics.hpp"
#include "lnagell/verdict.hpp"

namespace lnagell {

/// Parameters of the interpolation determinant in the regime K = ceil(K' log y).
struct LargeYParams {
    u64 p = 0;
    mpq_class K_prime;
    u64 L = 0, R1 = 0, R2 = 0;
    mpq_class mu, rho;
};

/// Constants C1..C9 and the derived bounds at a fixed y0, and their sign verdicts.
struct LargeYConstants {
    double C1 = 0, C2 = 0, C3 = 0, C4 = 0, C5 = 0, C6 = 0, C7 = 0, C8 = 0, C9 = 0;
    u64 K = 0, N = 0, R = 0, S1 = 0, S2 = 0;
    double S_upper = 0;      ///< C1 + C2 log y0
    double log_b_upper = 0;  ///< log(C3/K + C4) + 3/2
    double g_upper = 0;      ///< 1/4 - C5 K/(C6 + K)
    double eps_upper = 0;
    double rho_condition = 0;         ///< A log rho - B rho - C, the y -> infinity limit of C8
    double contradiction_lhs = 0, determinant_margin = 0, slope_limit = 0;
    std::vector<ConditionVerdict> checks;
    bool passed() const { return all_passed(checks); }
};

/// Every check is decided with outward rounding; PrecisionError propagates.
LargeYConstants large_y_constants(const LargeYParams& params, const mpq_class& y0,
                                  mpfr_prec_t prec = kDefaultBasePrecision);

/// Coefficients of the rho condition A log rho - B rho > C.
struct RhoConditionCoeffs {
    double A = 0, B = 0, C = 0;
};
RhoConditionCoeffs rho_condition_coeffs(u64 p, double K_prime, u64 L, u64 R1, u64 R2, double mu);
/// Smallest rho with A log rho - B rho > C, or nullopt when no rho > 1 works.
std::optional<double> rho_condition_min(const RhoConditionCoeffs& c);

struct TableRow {
    std::string primes_text;  ///< "919", "937 941" or "967-997"
    std::vector<u64> primes;  ///< expanded list
    u64 range_lo = 0, range_hi = 0;
    std::string y_text;
    mpq_class y;
    mpq_class K_prime;
    u64 L = 0, R1 = 0, R2 = 0;
    mpq_class mu, rho;
};

/// CSV with header primes,y,K_prime,L,R1,R2,mu,rho.
std::vector<TableRow> parse_table(const std::string& csv);
std::vector<TableRow> load_table(const std::string& path);

struct TableRowReport {
    u64 p = 0;
    std::size_t row = 0;
    LargeYConstants constants;
    bool passed = false;
};

TableRowReport verify_table_row(const TableRow& row, u64 p, mpfr_prec_t prec = kDefaultBasePrecision);

struct TableReport {
    std::vector<TableRowReport> primes;
    std::vector<std::string> overlaps;  ///< shared range endpoints between rows, with whether a prime is affected
    bool passed = false;
};

TableReport verify_table(const std::vector<TableRow>& rows, mpfr_prec_t prec = kDefaultBasePrecision,
                         unsigned workers = 0);

struct SearchOptions {
    u64 budget = 5000;  ///< objective evaluations per descent start
    unsigned workers = 0;  ///< 0 = hardware concurrency
    u64 L_min = 4, L_max = 19;
    u64 R1_max = 3;
    u64 R2_min = 10, R2_max = 198, R2_step = 2;
};

struct SearchCandidate {
    u64 L = 0, R1 = 0, R2 = 0;
    double K_prime = 0, mu = 0, rho = 0;
    double objective = 0;  ///< log(rho) mu L K'
};

struct SearchResult {
    u64 p = 0;
    std::optional<SearchCandidate> best;
    u64 evaluations = 0;
    u64 cells = 0;
    bool contradiction = false;  ///< objective < p/2, re-verified with intervals
    bool reverified = false;     ///< the rho condition holds rigorously at the rational parameters below
    mpq_class K_prime, mu, rho;  ///< exact parameters used for re-verification
};

/// Lattice over (L, R1, R2) with compass descent on (K', mu) and the closed-form optimal rho.
/// Deterministic for any worker count.
SearchResult param_search(u64 p, const SearchOptions& opt = {});

/// Rigorous check of the rho condition at exact parameters.
bool verify_rho_condition(u64 p, const mpq_class& K_prime, u64 L, u64 R1, u64 R2, const mpq_class& mu, const mpq_class& rho,
                 mpfr_prec_t prec = kDefaultBasePrecision);

}  // namespace lnagell
