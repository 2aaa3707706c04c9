#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <ostream>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace lnagell {

using u64 = std::uint64_t;
using i64 = std::int64_t;

// ---- word-size modular arithmetic (moduli below 2^63) ----

u64 mulmod(u64 a, u64 b, u64 m);
u64 modpow(u64 base, u64 exp, u64 m);
/// Reduces any signed integer into [0, m).
u64 reduce(i64 n, u64 m);
u64 invmod(u64 a, u64 m);

mpz_class modpow(const mpz_class& base, const mpz_class& exp, const mpz_class& m);

/// Euler-criterion Legendre symbol (n/q) for an odd prime q.
int legendre(i64 n, u64 q);
int legendre(const mpz_class& n, u64 q);

/// Tonelli-Shanks square root; the smaller of the two roots, or nullopt for non-residues.
std::optional<u64> sqrt_mod(i64 n, u64 q);

/// Baby-step giant-step discrete logarithm of x to base g modulo the prime l.
/// Throws PreconditionError when no exponent exists (g not primitive, or x not a unit).
u64 discrete_log(u64 g, u64 x, u64 l);

/// Smallest primitive root modulo the prime l, found by trial.
u64 primitive_root(u64 l);

bool is_prime(u64 n);
bool is_prime(const mpz_class& n);
std::vector<u64> primes_up_to(u64 limit);
u64 next_prime(u64 n);

struct Factor {
    u64 prime;
    unsigned exponent;
};
/// Trial-division factorisation of a word-size integer.
std::vector<Factor> factorize(u64 n);

struct PartialFactorization {
    std::vector<std::pair<mpz_class, unsigned>> factors;
    mpz_class cofactor = 1;  ///< unfactored part; 1 when fully factored
    bool complete() const { return cofactor == 1; }
};
/// Trial division of |n| by primes up to `bound`.
PartialFactorization trial_factor(const mpz_class& n, u64 bound);

/// Parses "7.99202", "1/3", "1e-50" or "10^800" into an exact rational.
mpq_class parse_rational(const std::string& s);

// ---- valuations ----

struct Valuation {
    mpz_class base;
    bool infinite = false;
    unsigned long value = 0;

    static Valuation infinity(const mpz_class& q) { return {q, true, 0}; }
    bool operator==(const Valuation& o) const {
        return infinite == o.infinite && (infinite || value == o.value);
    }
    bool operator<(const Valuation& o) const {
        if (infinite) return false;
        return o.infinite || value < o.value;
    }
    Valuation operator+(const Valuation& o) const;
};
std::ostream& operator<<(std::ostream& os, const Valuation& v);

/// q-adic valuation; returns the +infinity marker for n = 0.
Valuation valuation(const mpz_class& n, const mpz_class& q);

// ---- arithmetic in F_l[theta], theta^2 = 2 ----

class QuadRing {
public:
    enum class Mode { split, inert };

    struct Elem {
        u64 u = 0;
        u64 v = 0;
        bool operator==(const Elem&) const = default;
    };

    explicit QuadRing(u64 l);

    u64 modulus() const { return l_; }
    Mode mode() const { return mode_; }
    /// The explicit square root of 2 in split mode (the smaller root).
    std::optional<u64> theta() const { return theta_; }

    Elem make(i64 u, i64 v) const { return {reduce(u, l_), reduce(v, l_)}; }
    Elem one() const { return {1 % l_, 0}; }
    Elem add(Elem a, Elem b) const;
    Elem sub(Elem a, Elem b) const;
    Elem mul(Elem a, Elem b) const;
    Elem pow(Elem a, u64 e) const;
    Elem pow(Elem a, const mpz_class& e) const;
    Elem conj(Elem a) const { return {a.u, (l_ - a.v) % l_}; }
    /// u^2 - 2 v^2 mod l.
    u64 norm(Elem a) const;
    /// Image in F_l under theta -> sqrt(2) (split mode only).
    u64 to_field(Elem a) const;

private:
    u64 l_;
    Mode mode_;
    std::optional<u64> theta_;
};

// ---- exact arithmetic in Z[sqrt 2] ----

struct ZSqrt2 {
    mpz_class x = 0;  ///< rational part
    mpz_class y = 0;  ///< coefficient of sqrt 2

    ZSqrt2() = default;
    ZSqrt2(mpz_class a, mpz_class b) : x(std::move(a)), y(std::move(b)) {}

    ZSqrt2 operator*(const ZSqrt2& o) const { return {x * o.x + 2 * y * o.y, x * o.y + y * o.x}; }
    ZSqrt2 operator+(const ZSqrt2& o) const { return {x + o.x, y + o.y}; }
    ZSqrt2 operator-(const ZSqrt2& o) const { return {x - o.x, y - o.y}; }
    ZSqrt2 conj() const { return {x, -y}; }
    mpz_class norm() const { return x * x - 2 * y * y; }
    bool operator==(const ZSqrt2&) const = default;

    /// (1 + sqrt 2)^r for any integer r, using (1+sqrt2)^-1 = -(1 - sqrt2).
    static ZSqrt2 unit_power(long r);
};
ZSqrt2 pow(ZSqrt2 base, unsigned long e);

}  // namespace lnagell
