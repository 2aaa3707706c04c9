#include "lnagell/bigreal.hpp"

#include <algorithm>
#include <vector>

#include "lnagell/errors.hpp"

namespace lnagell {

BigReal::BigReal(mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
}

BigReal::BigReal(double v, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, v, MPFR_RNDN);
}

BigReal::BigReal(const mpz_class& v, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
}

BigReal::BigReal(const mpq_class& v, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
}

BigReal BigReal::from_string(const std::string& s, mpfr_prec_t prec) {
    BigReal r(prec);
    if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0 && mpfr_nan_p(r.v_)) {
        throw PreconditionError("BigReal: cannot parse '" + s + "'");
    }
    return r;
}

BigReal::BigReal(const BigReal& o) {
    mpfr_init2(v_, o.precision());
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

BigReal::BigReal(BigReal&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
}

BigReal& BigReal::operator=(const BigReal& o) {
    if (this != &o) {
        mpfr_set_prec(v_, o.precision());
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}

BigReal& BigReal::operator=(BigReal&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
}

BigReal::~BigReal() { mpfr_clear(v_); }

void BigReal::widen_to(mpfr_prec_t p) {
    if (p > precision()) mpfr_prec_round(v_, p, MPFR_RNDN);
}

std::string BigReal::str(int digits) const {
    std::vector<char> buf(static_cast<size_t>(digits) + 64);
    mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
    return buf.data();
}

BigReal& BigReal::operator+=(const BigReal& o) {
    widen_to(o.precision());
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

BigReal& BigReal::operator-=(const BigReal& o) {
    widen_to(o.precision());
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

BigReal& BigReal::operator*=(const BigReal& o) {
    widen_to(o.precision());
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

BigReal& BigReal::operator/=(const BigReal& o) {
    widen_to(o.precision());
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
}

BigReal BigReal::operator-() const {
    BigReal r(*this);
    mpfr_neg(r.v_, r.v_, MPFR_RNDN);
    return r;
}

#define LNAGELL_UNARY(name, fn)                         \
    BigReal name(const BigReal& x) {                    \
        BigReal r(x.precision());                       \
        fn(r.get(), x.get(), MPFR_RNDN);                \
        return r;                                       \
    }

LNAGELL_UNARY(sqrt, mpfr_sqrt)
LNAGELL_UNARY(log, mpfr_log)
LNAGELL_UNARY(exp, mpfr_exp)
LNAGELL_UNARY(abs, mpfr_abs)
LNAGELL_UNARY(sin, mpfr_sin)
LNAGELL_UNARY(cos, mpfr_cos)

#undef LNAGELL_UNARY

BigReal pow(const BigReal& x, const BigReal& e) {
    BigReal r(std::max(x.precision(), e.precision()));
    mpfr_pow(r.get(), x.get(), e.get(), MPFR_RNDN);
    return r;
}

BigReal const_pi(mpfr_prec_t prec) {
    BigReal r(prec);
    mpfr_const_pi(r.get(), MPFR_RNDN);
    return r;
}

}  // namespace lnagell
