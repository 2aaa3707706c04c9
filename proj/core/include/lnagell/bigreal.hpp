#pragma once

#include <string>

#include <gmpxx.h>
#include <mpfr.h>

namespace lnagell {

/// Arbitrary-precision real with round-to-nearest semantics.
///
/// Every elementary operation is correctly rounded by MPFR, so the relative
/// error of a single operation is at most 2^(1-precision). Binary operations
/// run at the larger of the two operand precisions.
class BigReal {
public:
    explicit BigReal(mpfr_prec_t prec = 128);
    BigReal(double v, mpfr_prec_t prec);
    BigReal(const mpz_class& v, mpfr_prec_t prec);
    BigReal(const mpq_class& v, mpfr_prec_t prec);
    static BigReal from_string(const std::string& s, mpfr_prec_t prec);

    BigReal(const BigReal& o);
    BigReal(BigReal&& o) noexcept;
    BigReal& operator=(const BigReal& o);
    BigReal& operator=(BigReal&& o) noexcept;
    ~BigReal();

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    mpfr_srcptr get() const { return v_; }
    mpfr_ptr get() { return v_; }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    /// Decimal rendering with `digits` significant digits.
    std::string str(int digits = 20) const;
    int sign() const { return mpfr_sgn(v_); }

    BigReal& operator+=(const BigReal& o);
    BigReal& operator-=(const BigReal& o);
    BigReal& operator*=(const BigReal& o);
    BigReal& operator/=(const BigReal& o);

    friend BigReal operator+(BigReal a, const BigReal& b) { return a += b; }
    friend BigReal operator-(BigReal a, const BigReal& b) { return a -= b; }
    friend BigReal operator*(BigReal a, const BigReal& b) { return a *= b; }
    friend BigReal operator/(BigReal a, const BigReal& b) { return a /= b; }
    BigReal operator-() const;

    friend bool operator<(const BigReal& a, const BigReal& b) { return mpfr_less_p(a.v_, b.v_); }
    friend bool operator>(const BigReal& a, const BigReal& b) { return mpfr_greater_p(a.v_, b.v_); }

private:
    void widen_to(mpfr_prec_t p);
    mpfr_t v_;
};

BigReal sqrt(const BigReal& x);
BigReal log(const BigReal& x);
BigReal exp(const BigReal& x);
BigReal abs(const BigReal& x);
BigReal pow(const BigReal& x, const BigReal& e);
BigReal sin(const BigReal& x);
BigReal cos(const BigReal& x);
BigReal const_pi(mpfr_prec_t prec);

}  // namespace lnagell
