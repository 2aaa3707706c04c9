#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lnagell/interval.hpp"
#include "lnagell/numerics.hpp"

namespace lnagell {

/// Enclosure of the real root theta of f_{1,p}(x, 1): sqrt2 - 2 sqrt2/((1+sqrt2)^(-2/p) + 1).
Interval theta_interval(u64 p, mpfr_prec_t prec);

/// Partial quotients valid for every real in [lo, hi]: the common prefix of the exact expansions of
/// both endpoints, each with its last term dropped.
std::vector<mpz_class> certified_prefix(const mpq_class& lo, const mpq_class& hi);

struct ContinuedFraction {
    u64 p = 0;
    std::vector<mpz_class> q;     ///< q_0, q_1, ...
    std::vector<mpz_class> P, Q;  ///< P_k, Q_k for each emitted k
    mpfr_prec_t precision = 0;             ///< working precision
    mpfr_prec_t validation_precision = 0;  ///< twice the working precision
    bool partial = false;                  ///< fewer than the requested terms were certified
};

/// Quotients agreeing between the working and doubled precision, at most max_terms of them.
ContinuedFraction contfrac_theta(u64 p, std::size_t max_terms, mpfr_prec_t precision);

/// |theta - P_k/Q_k| < 1/(Q_k Q_{k+1}) for every k with a successor, decided at the validation precision.
bool check_convergent_bounds(const ContinuedFraction& cf);

/// p 2^((3p-7)/2) - 2.
mpz_class quotient_ceiling(u64 p);
/// C_p = 2^((3-p)/2) / p.
Interval cp_constant(u64 p, mpfr_prec_t prec);

struct ConvergentBoundReport {
    u64 p = 0;
    bool success = false;
    bool candidate_window = false;  ///< a quotient above the ceiling was met first
    std::size_t k = 0;              ///< certified index: q_{i+1} <= ceiling for 1 <= i <= k
    std::size_t terms = 0;          ///< quotients examined
    mpz_class ceiling, max_quotient, Q_next;
    std::optional<std::pair<mpz_class, mpz_class>> window;  ///< (P_k, Q_k) at the oversized quotient
    mpfr_prec_t precision = 0;
    mpz_class b0, a0, y0;
    std::string detail;
};

/// Finds the first k with Q_{k+1} >= target, with every q_{i+1} (1 <= i <= k) at most the ceiling.
/// Throws PrecisionError when the precision cap is reached first.
ConvergentBoundReport lower_bound_b(u64 p, const mpz_class& target, mpfr_prec_t cap = mpfr_prec_t{1} << 22);

struct PropagatedBounds {
    mpz_class a0, y0;
};

/// a0 = floor(b0 (|theta| - C_p/2^p)) and y0 = floor(1.99 b0^2), both rounded toward the safe side.
PropagatedBounds propagate_bounds(u64 p, const mpz_class& b0);

struct SmallYRangeReport {
    std::vector<ConvergentBoundReport> primes;
    bool passed = false;
};

SmallYRangeReport certify_small_y_range(const std::vector<u64>& primes, const mpz_class& target, unsigned workers = 0);

/// {p, precision_bits, terms, max_quotient, Q_final_digits, b0, a0, y0_digits, success, candidate_window}.
std::string report_to_json(const ConvergentBoundReport& r);

}  // namespace lnagell
