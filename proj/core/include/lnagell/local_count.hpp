#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "lnagell/numerics.hpp"

namespace lnagell {

struct LocalCountReport {
    u64 p = 0;
    u64 q = 0;
    unsigned s = 0;
    mpz_class modulus;     ///< q^s
    std::string case_tag;  ///< 1a, 1b, 1c, 2-nonpower, 2-power, 3, 4
    mpz_class count;
    std::optional<u64> d;  ///< case 4 only
};

/// Number of (a, b) mod q^s with f_{1,p}(a, b) = 1, by the casewise formula.
LocalCountReport count_mod_prime_power(u64 p, u64 q, unsigned s);

/// Product of prime-power counts over the factorisation of n (n = 1 gives 1).
/// Throws PreconditionError when n exceeds `cap`.
mpz_class count_mod_n(u64 p, u64 n, u64 cap = u64{1} << 40);

/// Exhaustive count over (Z/n)^2. Throws PreconditionError when n exceeds `cap`.
u64 brute_force_count(u64 p, u64 n, u64 cap = 100000);

/// Whether 1 + sqrt2 is a p-th power in F_q(sqrt 2), for q inert.
bool unit_is_pth_power_inert(u64 p, u64 q);

/// 1 + #{c : f(c, 1) is a unit p-th power}, with c mod q and the test mod q when q = 1 (mod p),
/// and c mod p with the test mod p^2 when q = p.
u64 case4_d(u64 p, u64 q);

std::string local_count_csv_header();
std::string local_count_csv_row(const LocalCountReport& r);

}  // namespace lnagell
