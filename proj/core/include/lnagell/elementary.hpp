#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lnagell/numerics.hpp"
#include "lnagell/verdict.hpp"

namespace lnagell {

inline constexpr u64 kDefaultTrialBound = 1'000'000;

/// An integer triple (x, y, p) intended as a solution of x^2 - 2 = y^p.
class CandidateSolution {
public:
    /// Validated construction: throws PreconditionError unless x^2 - 2 = y^p exactly.
    static CandidateSolution make(const mpz_class& x, const mpz_class& y, unsigned long p);
    /// Skips the equation check, so that sieve predicates can be exercised on synthetic triples.
    static CandidateSolution unchecked(const mpz_class& x, const mpz_class& y, unsigned long p);

    const mpz_class& x() const { return x_; }
    const mpz_class& y() const { return y_; }
    unsigned long p() const { return p_; }
    bool validated() const { return validated_; }
    bool trivial() const { return y_ == -1; }

private:
    CandidateSolution(mpz_class x, mpz_class y, unsigned long p, bool validated)
        : x_(std::move(x)), y_(std::move(y)), p_(p), validated_(validated) {}
    mpz_class x_, y_;
    unsigned long p_;
    bool validated_;
};

struct SieveReport {
    std::vector<ConditionVerdict> conditions;
    bool passed() const;
    const ConditionVerdict* find(const std::string& name) const;
};

struct CoprimeQuotientReport {
    mpz_class quotient;                         ///< (y^p - a^p)/(y - a)
    mpz_class gcd_value;                        ///< gcd(y - a, quotient)
    bool p_divides_equivalence = false;         ///< p | (y-a)  <=>  p | quotient
    std::optional<mpz_class> quotient_mod_p2;   ///< set when p | (y - a)
    bool quotient_class_ok = true;              ///< quotient = p or 0 mod p^2 as appropriate
    bool prime_factor_congruences_ok = false;   ///< every prime q != p of the quotient is 1 mod p
    bool prime_factors_fully_verified = true;
};

CoprimeQuotientReport coprime_quotient_properties(const mpz_class& y, const mpz_class& a, unsigned long p,
                               u64 trial_bound = kDefaultTrialBound);

/// Runs every necessary condition on a nontrivial candidate. Throws for y = -1.
SieveReport sieve_check(const CandidateSolution& c, u64 trial_bound = kDefaultTrialBound);

struct UnitPowerPair {
    mpz_class X, Y;
    mpz_class a, b;
    unsigned long p = 0;
    long r = 0;
};

/// (1 + sqrt2)^r (a + b sqrt2)^p = X + Y sqrt2, exactly.
UnitPowerPair unit_power_pair(const mpz_class& a, const mpz_class& b, unsigned long p, long r);

struct ObservationReport {
    mpz_class X, Y, S, T;
    bool x_is_s_plus_2t = false;
    bool y_is_s_plus_t = false;
    bool difference_is_odd_binomial_sum = false;   ///< X - Y = T = sum C(p,2j+1) a^(p-2j-1) b^(2j+1) 2^j
    bool difference_is_even_binomial_sum = false;  ///< X - 2Y = -S = -sum C(p,2j) a^(p-2j) b^(2j) 2^j
    bool battery_ran = false;                      ///< true when Y = 1
    std::vector<ConditionVerdict> battery;
    bool identities_hold() const {
        return x_is_s_plus_2t && y_is_s_plus_t && difference_is_odd_binomial_sum &&
               difference_is_even_binomial_sum;
    }
    bool passed() const;
};

ObservationReport observation_identities(const mpz_class& a, const mpz_class& b, unsigned long p);

/// The predicates that hold for any solution (a, b) of f_{1,p}(a, b) = 1 with x = X.
/// Divisibility uses the convention 0 | 0 true, 0 | n false for n != 0.
std::vector<ConditionVerdict> observation_battery(const mpz_class& a, const mpz_class& b,
                                                  unsigned long p, const mpz_class& x);

/// True iff 2^(p-1) = 1 mod p^2.
bool wieferich_check(u64 p);

/// All (x, y) with 1 <= x <= x_bound and x^2 - 2 a perfect p-th power.
std::vector<CandidateSolution> direct_search(unsigned long p, u64 x_bound);

/// Binomial coefficient as an exact integer.
mpz_class binomial(unsigned long n, unsigned long k);

}  // namespace lnagell
