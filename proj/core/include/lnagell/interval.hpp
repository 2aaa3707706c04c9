#pragma once

#include <optional>
#include <string>

#include <gmpxx.h>
#include <mpfr.h>

#include "lnagell/errors.hpp"

namespace lnagell {

/// Closed real interval [lo, hi] with outward-rounded MPFR endpoints.
///
/// Every operation returns an enclosure of the exact image of its operands,
/// so a sign read off an Interval is rigorous. Operations whose domain is
/// violated by part of the operand widen the result to infinite endpoints
/// instead of throwing, which surfaces later as an undecided comparison.
class Interval {
public:
    explicit Interval(mpfr_prec_t prec = 128);
    Interval(long v, mpfr_prec_t prec);
    Interval(const mpz_class& v, mpfr_prec_t prec);
    Interval(const mpq_class& v, mpfr_prec_t prec);
    /// Encloses a decimal literal such as "1.053" or "1e-50".
    Interval(const std::string& decimal, mpfr_prec_t prec);
    Interval(const char* decimal, mpfr_prec_t prec) : Interval(std::string(decimal), prec) {}

    Interval(const Interval& o);
    Interval(Interval&& o) noexcept;
    Interval& operator=(const Interval& o);
    Interval& operator=(Interval&& o) noexcept;
    ~Interval();

    static Interval hull(const Interval& a, const Interval& b);
    static Interval pi(mpfr_prec_t prec);
    static Interval e(mpfr_prec_t prec);
    static Interval sqrt2(mpfr_prec_t prec);
    /// log(1 + sqrt 2).
    static Interval log_unit(mpfr_prec_t prec);

    mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }
    mpfr_srcptr lo() const { return lo_; }
    mpfr_srcptr hi() const { return hi_; }
    double lo_d() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_d() const { return mpfr_get_d(hi_, MPFR_RNDU); }
    double mid() const;
    /// Exact rational value of each endpoint (both must be finite).
    mpq_class lo_q() const;
    mpq_class hi_q() const;
    bool bounded() const { return mpfr_number_p(lo_) && mpfr_number_p(hi_); }

    /// +1 if certainly positive, -1 if certainly negative, nullopt otherwise.
    std::optional<int> sign() const;
    bool certainly_positive() const { return sign() == 1; }
    bool certainly_negative() const { return sign() == -1; }
    bool contains(long v) const;
    /// ceil(x) when it is the same integer across the whole interval.
    std::optional<long> ceil_exact() const;
    std::string str(int digits = 17) const;

    Interval& operator+=(const Interval& o);
    Interval& operator-=(const Interval& o);
    Interval& operator*=(const Interval& o);
    Interval& operator/=(const Interval& o);
    friend Interval operator+(Interval a, const Interval& b) { return a += b; }
    friend Interval operator-(Interval a, const Interval& b) { return a -= b; }
    friend Interval operator*(Interval a, const Interval& b) { return a *= b; }
    friend Interval operator/(Interval a, const Interval& b) { return a /= b; }
    friend Interval operator+(Interval a, long b) { return a += Interval(b, a.precision()); }
    friend Interval operator-(Interval a, long b) { return a -= Interval(b, a.precision()); }
    friend Interval operator*(Interval a, long b) { return a *= Interval(b, a.precision()); }
    friend Interval operator/(Interval a, long b) { return a /= Interval(b, a.precision()); }
    friend Interval operator+(long a, const Interval& b) { return Interval(a, b.precision()) + b; }
    friend Interval operator-(long a, const Interval& b) { return Interval(a, b.precision()) - b; }
    friend Interval operator*(long a, const Interval& b) { return Interval(a, b.precision()) * b; }
    friend Interval operator/(long a, const Interval& b) { return Interval(a, b.precision()) / b; }
    Interval operator-() const;

    friend Interval sqrt(const Interval& x);
    friend Interval log(const Interval& x);
    friend Interval exp(const Interval& x);
    friend Interval square(const Interval& x);
    friend Interval pow(const Interval& x, const Interval& e);
    friend Interval lngamma(const Interval& x);

private:
    void widen_to(mpfr_prec_t p);
    mpfr_t lo_;
    mpfr_t hi_;
};

Interval sqrt(const Interval& x);
Interval log(const Interval& x);
Interval exp(const Interval& x);
Interval square(const Interval& x);
/// x^e for x > 0, evaluated as exp(e log x).
Interval pow(const Interval& x, const Interval& e);
/// log Gamma(x) for x >= 2, where it is increasing.
Interval lngamma(const Interval& x);

/// Result of a precision-escalated sign decision.
struct SignVerdict {
    int sign = 0;              ///< +1 or -1
    mpfr_prec_t precision = 0; ///< lower of the two agreeing precisions
    double value = 0;          ///< midpoint at the decisive precision (for reporting)
};

inline constexpr mpfr_prec_t kDefaultBasePrecision = 128;
inline constexpr mpfr_prec_t kDefaultPrecisionCap = mpfr_prec_t{1} << 20;

/// Decides the sign of the real quantity enclosed by `eval(prec)`.
///
/// The sign is accepted only when evaluations at P and 2P are both decided
/// and agree; otherwise P doubles. Throws PrecisionError past `cap`.
/// `eval` may throw PrecisionError itself to request escalation.
template <class Eval>
SignVerdict decide_sign(Eval&& eval, mpfr_prec_t start = kDefaultBasePrecision,
                        mpfr_prec_t cap = kDefaultPrecisionCap) {
    for (mpfr_prec_t p = start; 2 * p <= cap; p *= 2) {
        std::optional<int> s1, s2;
        Interval v1(p);
        try {
            v1 = eval(p);
            s1 = v1.sign();
            if (!s1) continue;
            s2 = eval(2 * p).sign();
        } catch (const PrecisionError&) {
            continue;
        }
        if (s2 && *s1 == *s2) return {*s1, p, v1.mid()};
    }
    throw PrecisionError("sign undecided up to precision cap of " + std::to_string(cap) + " bits");
}

}  // namespace lnagell
