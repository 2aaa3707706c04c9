#pragma once

#include <cmath>
#include <string>

#include <gmpxx.h>
#include <mpfr.h>

#include "lnagell/bigreal.hpp"
#include "lnagell/interval.hpp"

namespace lnagell::detail {

/// log of an exact rational, evaluated at 128 bits and rounded to double.
inline double log_q_double(const mpq_class& v) {
    mpfr_t t;
    mpfr_init2(t, 128);
    mpfr_set_q(t, v.get_mpq_t(), MPFR_RNDN);
    mpfr_log(t, t, MPFR_RNDN);
    double d = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clear(t);
    return d;
}

/// Plain floating point, for searches and Newton iterations.
struct DoubleCtx {
    using Real = double;
    double num(long v) const { return static_cast<double>(v); }
    double q(const mpq_class& v) const { return v.get_d(); }
    double lit(const char* s) const { return std::stod(s); }
    double log_q(const mpq_class& v) const { return log_q_double(v); }
    double log_unit() const { return std::log1p(std::sqrt(2.0)); }
    double ceil(double v) const { return std::ceil(v); }
};

/// Round-to-nearest multiprecision, for solving systems beyond double accuracy.
struct BigCtx {
    using Real = BigReal;
    mpfr_prec_t prec;
    BigReal num(long v) const { return BigReal(mpz_class(v), prec); }
    BigReal q(const mpq_class& v) const { return BigReal(v, prec); }
    BigReal lit(const char* s) const { return BigReal::from_string(s, prec); }
    BigReal log_q(const mpq_class& v) const { return log(q(v)); }
    BigReal log_unit() const { return log(num(1) + sqrt(num(2))); }
};

/// Outward-rounded enclosures, for verdicts.
struct IntervalCtx {
    using Real = Interval;
    mpfr_prec_t prec;
    Interval num(long v) const { return Interval(v, prec); }
    Interval q(const mpq_class& v) const { return Interval(v, prec); }
    Interval lit(const char* s) const { return Interval(s, prec); }
    Interval log_q(const mpq_class& v) const { return log(q(v)); }
    Interval log_unit() const { return Interval::log_unit(prec); }
};

}  // namespace lnagell::detail
