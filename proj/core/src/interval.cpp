#include "lnagell/interval.hpp"

#include <algorithm>
#include <vector>

namespace lnagell {

namespace {

void set_inf(mpfr_ptr x, int sign) { mpfr_set_inf(x, sign); }

}  // namespace

Interval::Interval(mpfr_prec_t prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

Interval::Interval(long v, mpfr_prec_t prec) : Interval(prec) {
    mpfr_set_si(lo_, v, MPFR_RNDD);
    mpfr_set_si(hi_, v, MPFR_RNDU);
}

Interval::Interval(const mpz_class& v, mpfr_prec_t prec) : Interval(prec) {
    mpfr_set_z(lo_, v.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(hi_, v.get_mpz_t(), MPFR_RNDU);
}

Interval::Interval(const mpq_class& v, mpfr_prec_t prec) : Interval(prec) {
    mpfr_set_q(lo_, v.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_, v.get_mpq_t(), MPFR_RNDU);
}

Interval::Interval(const std::string& decimal, mpfr_prec_t prec) : Interval(prec) {
    if (mpfr_set_str(lo_, decimal.c_str(), 10, MPFR_RNDD) != 0 ||
        mpfr_set_str(hi_, decimal.c_str(), 10, MPFR_RNDU) != 0) {
        throw PreconditionError("Interval: cannot parse decimal '" + decimal + "'");
    }
}

Interval::Interval(const Interval& o) {
    mpfr_init2(lo_, o.precision());
    mpfr_init2(hi_, o.precision());
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept {
    mpfr_init2(lo_, MPFR_PREC_MIN);
    mpfr_init2(hi_, MPFR_PREC_MIN);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
}

Interval& Interval::operator=(const Interval& o) {
    if (this != &o) {
        mpfr_set_prec(lo_, o.precision());
        mpfr_set_prec(hi_, o.precision());
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
}

Interval& Interval::operator=(Interval&& o) noexcept {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    return *this;
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

void Interval::widen_to(mpfr_prec_t p) {
    if (p > precision()) {
        mpfr_prec_round(lo_, p, MPFR_RNDD);
        mpfr_prec_round(hi_, p, MPFR_RNDU);
    }
}

Interval Interval::hull(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::pi(mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_const_pi(r.lo_, MPFR_RNDD);
    mpfr_const_pi(r.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::e(mpfr_prec_t prec) { return exp(Interval(1L, prec)); }

Interval Interval::sqrt2(mpfr_prec_t prec) { return sqrt(Interval(2L, prec)); }

Interval Interval::log_unit(mpfr_prec_t prec) { return log(1L + sqrt2(prec)); }

double Interval::mid() const {
    mpfr_t m;
    mpfr_init2(m, precision() + 1);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    double d = mpfr_get_d(m, MPFR_RNDN);
    mpfr_clear(m);
    return d;
}

namespace {

mpq_class endpoint_q(mpfr_srcptr x) {
    if (!mpfr_number_p(x)) throw PrecisionError("Interval: unbounded endpoint");
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
    mpq_class q(m);
    if (e >= 0) {
        mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
    } else {
        mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
    }
    return q;
}

}  // namespace

mpq_class Interval::lo_q() const { return endpoint_q(lo_); }
mpq_class Interval::hi_q() const { return endpoint_q(hi_); }

std::optional<int> Interval::sign() const {
    if (mpfr_nan_p(lo_) || mpfr_nan_p(hi_)) return std::nullopt;
    if (mpfr_sgn(lo_) > 0) return 1;
    if (mpfr_sgn(hi_) < 0) return -1;
    return std::nullopt;
}

bool Interval::contains(long v) const {
    return mpfr_cmp_si(lo_, v) <= 0 && mpfr_cmp_si(hi_, v) >= 0;
}

std::optional<long> Interval::ceil_exact() const {
    if (!bounded()) return std::nullopt;
    mpfr_t a, b;
    mpfr_init2(a, precision());
    mpfr_init2(b, precision());
    mpfr_ceil(a, lo_);
    mpfr_ceil(b, hi_);
    std::optional<long> out;
    if (mpfr_equal_p(a, b) && mpfr_fits_slong_p(a, MPFR_RNDN)) out = mpfr_get_si(a, MPFR_RNDN);
    mpfr_clear(a);
    mpfr_clear(b);
    return out;
}

std::string Interval::str(int digits) const {
    std::vector<char> buf(static_cast<size_t>(2 * digits) + 128);
    mpfr_snprintf(buf.data(), buf.size(), "[%.*RDg, %.*RUg]", digits, lo_, digits, hi_);
    return buf.data();
}

Interval& Interval::operator+=(const Interval& o) {
    widen_to(o.precision());
    mpfr_add(lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_add(hi_, hi_, o.hi_, MPFR_RNDU);
    return *this;
}

Interval& Interval::operator-=(const Interval& o) {
    widen_to(o.precision());
    mpfr_t t;
    mpfr_init2(t, precision());
    mpfr_sub(t, lo_, o.hi_, MPFR_RNDD);
    mpfr_sub(hi_, hi_, o.lo_, MPFR_RNDU);
    mpfr_swap(lo_, t);
    mpfr_clear(t);
    return *this;
}

Interval& Interval::operator*=(const Interval& o) {
    widen_to(o.precision());
    const mpfr_prec_t p = precision();
    mpfr_t c[4], d[4];
    for (int i = 0; i < 4; ++i) {
        mpfr_init2(c[i], p);
        mpfr_init2(d[i], p);
    }
    mpfr_mul(c[0], lo_, o.lo_, MPFR_RNDD);
    mpfr_mul(c[1], lo_, o.hi_, MPFR_RNDD);
    mpfr_mul(c[2], hi_, o.lo_, MPFR_RNDD);
    mpfr_mul(c[3], hi_, o.hi_, MPFR_RNDD);
    mpfr_mul(d[0], lo_, o.lo_, MPFR_RNDU);
    mpfr_mul(d[1], lo_, o.hi_, MPFR_RNDU);
    mpfr_mul(d[2], hi_, o.lo_, MPFR_RNDU);
    mpfr_mul(d[3], hi_, o.hi_, MPFR_RNDU);
    // 0 * inf yields NaN; treat it as 0 for enclosure purposes.
    for (int i = 0; i < 4; ++i) {
        if (mpfr_nan_p(c[i])) mpfr_set_zero(c[i], 1);
        if (mpfr_nan_p(d[i])) mpfr_set_zero(d[i], 1);
    }
    mpfr_set(lo_, c[0], MPFR_RNDD);
    mpfr_set(hi_, d[0], MPFR_RNDU);
    for (int i = 1; i < 4; ++i) {
        mpfr_min(lo_, lo_, c[i], MPFR_RNDD);
        mpfr_max(hi_, hi_, d[i], MPFR_RNDU);
    }
    for (int i = 0; i < 4; ++i) {
        mpfr_clear(c[i]);
        mpfr_clear(d[i]);
    }
    return *this;
}

Interval& Interval::operator/=(const Interval& o) {
    widen_to(o.precision());
    if (mpfr_sgn(o.lo_) <= 0 && mpfr_sgn(o.hi_) >= 0) {
        set_inf(lo_, -1);
        set_inf(hi_, 1);
        return *this;
    }
    Interval inv(precision());
    mpfr_ui_div(inv.lo_, 1, o.hi_, MPFR_RNDD);
    mpfr_ui_div(inv.hi_, 1, o.lo_, MPFR_RNDU);
    return *this *= inv;
}

Interval Interval::operator-() const {
    Interval r(precision());
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

Interval sqrt(const Interval& x) {
    Interval r(x.precision());
    if (mpfr_sgn(x.hi_) < 0) throw PreconditionError("Interval sqrt of a negative interval");
    if (mpfr_sgn(x.lo_) <= 0) {
        mpfr_set_zero(r.lo_, 1);
    } else {
        mpfr_sqrt(r.lo_, x.lo_, MPFR_RNDD);
    }
    mpfr_sqrt(r.hi_, x.hi_, MPFR_RNDU);
    return r;
}

Interval log(const Interval& x) {
    Interval r(x.precision());
    if (mpfr_sgn(x.hi_) <= 0) throw PreconditionError("Interval log of a non-positive interval");
    if (mpfr_sgn(x.lo_) <= 0) {
        mpfr_set_inf(r.lo_, -1);
    } else {
        mpfr_log(r.lo_, x.lo_, MPFR_RNDD);
    }
    mpfr_log(r.hi_, x.hi_, MPFR_RNDU);
    return r;
}

Interval exp(const Interval& x) {
    Interval r(x.precision());
    mpfr_exp(r.lo_, x.lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, x.hi_, MPFR_RNDU);
    return r;
}

Interval square(const Interval& x) {
    Interval r(x.precision());
    if (mpfr_sgn(x.lo_) >= 0) {
        mpfr_sqr(r.lo_, x.lo_, MPFR_RNDD);
        mpfr_sqr(r.hi_, x.hi_, MPFR_RNDU);
    } else if (mpfr_sgn(x.hi_) <= 0) {
        mpfr_sqr(r.lo_, x.hi_, MPFR_RNDD);
        mpfr_sqr(r.hi_, x.lo_, MPFR_RNDU);
    } else {
        mpfr_t a;
        mpfr_init2(a, x.precision());
        mpfr_sqr(r.hi_, x.lo_, MPFR_RNDU);
        mpfr_sqr(a, x.hi_, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, a, MPFR_RNDU);
        mpfr_set_zero(r.lo_, 1);
        mpfr_clear(a);
    }
    return r;
}

Interval pow(const Interval& x, const Interval& e) { return exp(e * log(x)); }

Interval lngamma(const Interval& x) {
    if (mpfr_cmp_ui(x.lo_, 2) < 0) throw PreconditionError("Interval lngamma needs x >= 2");
    Interval r(x.precision());
    mpfr_lngamma(r.lo_, x.lo_, MPFR_RNDD);
    mpfr_lngamma(r.hi_, x.hi_, MPFR_RNDU);
    return r;
}

}  // namespace lnagell
