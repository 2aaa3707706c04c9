#include "lnagell/thue.hpp"

#include <stdexcept>

#include "lnagell/errors.hpp"
#include "lnagell/interval.hpp"
#include "lnagell/numerics.hpp"

namespace lnagell {

namespace {

constexpr mpfr_prec_t kRootPrecisionCap = mpfr_prec_t{1} << 16;

void require_valid(unsigned long p, long r) {
    if (p < 3 || !is_prime(static_cast<u64>(p))) throw PreconditionError("p must be an odd prime");
    if (r % static_cast<long>(p) == 0) throw PreconditionError("p must not divide r");
}

BigReal real(long v, mpfr_prec_t prec) { return BigReal(mpz_class(v), prec); }

/// 2^(-e) at the given precision.
BigReal two_pow_neg(long e, mpfr_prec_t prec) {
    BigReal r(prec);
    mpfr_set_ui_2exp(r.get(), 1, -e, MPFR_RNDN);
    return r;
}

/// (-1)^r (1+sqrt2)^(-2r/p), the real multiplier of zeta^i in the root formula.
BigReal root_multiplier(unsigned long p, long r, mpfr_prec_t prec) {
    BigReal u = real(1, prec) + sqrt(real(2, prec));
    BigReal c = exp(real(-2 * r, prec) / real(static_cast<long>(p), prec) * log(u));
    return (r % 2 == 0) ? c : -c;
}

Complex zeta_power(unsigned long p, long m, mpfr_prec_t prec) {
    const long mm = ((m % static_cast<long>(p)) + static_cast<long>(p)) % static_cast<long>(p);
    BigReal angle = real(2 * mm, prec) * const_pi(prec) / real(static_cast<long>(p), prec);
    return {cos(angle), sin(angle)};
}

/// sqrt2 + 2 sqrt2 / (w - 1) for the signed square root s2 = (+-)sqrt2.
Complex root_from(const Complex& w, const BigReal& s2) {
    const mpfr_prec_t prec = s2.precision();
    Complex one(real(1, prec), BigReal(prec));
    Complex two_s2(s2 + s2, BigReal(prec));
    return Complex(s2, BigReal(prec)) + two_s2 / (w - one);
}

Complex derivative_eval(const ThuePolynomial& f, const Complex& x) {
    const mpfr_prec_t prec = x.re.precision();
    Complex acc(prec);
    for (unsigned long k = 0; k < f.p; ++k) {
        BigReal c(mpz_class(f.coeffs[k] * static_cast<long>(f.p - k)), prec);
        acc = acc * x + Complex(c, BigReal(prec));
    }
    return acc;
}

BigReal residual_scale(const ThuePolynomial& f, const Complex& x) {
    const mpfr_prec_t prec = x.re.precision();
    BigReal m = norm(x);
    if (m < real(1, prec)) m = real(1, prec);
    BigReal acc(prec);
    for (unsigned long k = 0; k <= f.p; ++k) acc = acc * m + abs(BigReal(f.coeffs[k], prec));
    return acc;
}

}  // namespace

Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Complex operator/(const Complex& a, const Complex& b) {
    BigReal d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
BigReal norm(const Complex& z) { return sqrt(z.re * z.re + z.im * z.im); }

ThuePolynomial thue_coeffs(unsigned long p, long r) {
    require_valid(p, r);
    const ZSqrt2 unit = ZSqrt2::unit_power(r);
    ThuePolynomial f{p, r, {}};
    f.coeffs.reserve(p + 1);
    for (unsigned long k = 0; k <= p; ++k) {
        mpz_class term;
        mpz_bin_uiui(term.get_mpz_t(), p, k);
        term <<= static_cast<mp_bitcnt_t>(k / 2);
        // (b sqrt2)^k contributes a rational part for even k and a sqrt2 part for odd k.
        f.coeffs.push_back(k % 2 == 0 ? unit.y * term : unit.x * term);
    }
    return f;
}

mpz_class thue_eval(const ThuePolynomial& f, const mpz_class& a, const mpz_class& b) {
    mpz_class acc = 0, bpow = 1;
    std::vector<mpz_class> apow(f.p + 1);
    apow[0] = 1;
    for (unsigned long i = 1; i <= f.p; ++i) apow[i] = apow[i - 1] * a;
    for (unsigned long k = 0; k <= f.p; ++k) {
        acc += f.coeffs[k] * apow[f.p - k] * bpow;
        bpow *= b;
    }
    return acc;
}

Complex evaluate(const ThuePolynomial& f, const Complex& x) {
    const mpfr_prec_t prec = x.re.precision();
    Complex acc(prec);
    for (const auto& c : f.coeffs) acc = acc * x + Complex(BigReal(c, prec), BigReal(prec));
    return acc;
}

BigReal real_root_theta(unsigned long p, long r, mpfr_prec_t precision) {
    require_valid(p, r);
    // Location check with outward rounding: theta against 0 and +-sqrt2.
    auto theta_interval = [&](mpfr_prec_t prec) {
        Interval u = 1L + Interval::sqrt2(prec);
        Interval c = exp(Interval(-2 * r, prec) / static_cast<long>(p) * log(u));
        if (r % 2 != 0) c = -c;
        Interval s2 = Interval::sqrt2(prec);
        return s2 + 2L * s2 / (c - 1L);
    };
    auto check = [&](auto&& quantity) {
        return decide_sign([&](mpfr_prec_t prec) { return quantity(prec); }, std::max<mpfr_prec_t>(precision, 64),
                           kRootPrecisionCap)
            .sign;
    };
    bool ok;
    if (r > 0 && r % 2 == 0) {
        ok = check([&](mpfr_prec_t q) { return theta_interval(q) + Interval::sqrt2(q); }) < 0;
    } else if (r > 0) {
        ok = check([&](mpfr_prec_t q) { return theta_interval(q) + Interval::sqrt2(q); }) > 0 &&
             check([&](mpfr_prec_t q) { return theta_interval(q); }) < 0;
    } else if (r % 2 == 0) {
        ok = check([&](mpfr_prec_t q) { return theta_interval(q) - Interval::sqrt2(q); }) > 0;
    } else {
        ok = check([&](mpfr_prec_t q) { return theta_interval(q); }) > 0 &&
             check([&](mpfr_prec_t q) { return theta_interval(q) - Interval::sqrt2(q); }) < 0;
    }
    if (!ok) throw std::logic_error("real root outside the interval predicted for its sign class");

    BigReal s2 = sqrt(real(2, precision));
    return s2 + (s2 + s2) / (root_multiplier(p, r, precision) - real(1, precision));
}

RootSet all_roots(unsigned long p, long r, mpfr_prec_t precision) {
    require_valid(p, r);
    const ThuePolynomial f = thue_coeffs(p, r);
    for (mpfr_prec_t prec = precision; prec <= kRootPrecisionCap; prec *= 2) {
        const mpfr_prec_t work = prec + 32;
        const BigReal c = root_multiplier(p, r, work);
        const BigReal s2 = sqrt(real(2, work));
        const BigReal threshold = two_pow_neg(prec / 2, work);

        RootSet rs;
        rs.p = p;
        rs.r = r;
        rs.precision = prec;
        rs.max_residual = BigReal(work);
        bool ambiguous = false;
        std::size_t real_count = 0;
        for (unsigned long i = 0; i < p; ++i) {
            Complex z = zeta_power(p, static_cast<long>(i), work);
            Complex rho = root_from(Complex(c * z.re, c * z.im), s2);
            rho = rho - evaluate(f, rho) / derivative_eval(f, rho);
            BigReal res = norm(evaluate(f, rho)) / residual_scale(f, rho);
            if (rs.max_residual < res) rs.max_residual = res;
            BigReal im = abs(rho.im);
            if (im < threshold) {
                ++real_count;
                rs.real_index = i;
            } else if (im < threshold + threshold) {
                ambiguous = true;
            }
            rs.roots.push_back(std::move(rho));
        }
        if (ambiguous || real_count != 1 || !(rs.max_residual < threshold)) continue;
        if (rs.real_index != 0) throw std::logic_error("real root is not rho_0");

        rs.min_separation = BigReal(work);
        bool first = true;
        for (unsigned long i = 0; i < p; ++i) {
            for (unsigned long j = i + 1; j < p; ++j) {
                BigReal d = norm(rs.roots[i] - rs.roots[j]);
                if (first || d < rs.min_separation) rs.min_separation = d;
                first = false;
            }
        }
        if (!(rs.min_separation > threshold)) continue;
        return rs;
    }
    throw PrecisionError("all_roots: could not certify roots below the precision cap");
}

mpz_class discriminant_formula(unsigned long p) {
    if (p < 3 || !is_prime(static_cast<u64>(p))) throw PreconditionError("p must be an odd prime");
    mpz_class v = 1;
    v <<= static_cast<mp_bitcnt_t>(3 * (p - 1) * (p - 2) / 2);
    mpz_class pp;
    mpz_ui_pow_ui(pp.get_mpz_t(), p, p);
    v *= pp;
    return ((p * (p - 1) / 2) % 2 == 0) ? v : mpz_class(-v);
}

mpz_class discriminant_resultant(unsigned long p, long r, unsigned long max_p) {
    if (p > max_p) throw PreconditionError("discriminant_resultant: p exceeds the configured bound");
    const ThuePolynomial f = thue_coeffs(p, r);
    const std::size_t n = p;
    const std::size_t size = 2 * n - 1;
    std::vector<std::vector<mpz_class>> m(size, std::vector<mpz_class>(size, 0));
    for (std::size_t row = 0; row + 1 < n; ++row) {
        for (std::size_t k = 0; k <= n; ++k) m[row][row + k] = f.coeffs[k];
    }
    for (std::size_t row = 0; row < n; ++row) {
        for (std::size_t k = 0; k < n; ++k) m[n - 1 + row][row + k] = f.coeffs[k] * static_cast<long>(n - k);
    }

    // Bareiss elimination keeps every intermediate entry an exact minor.
    int sign = 1;
    mpz_class prev = 1;
    for (std::size_t k = 0; k + 1 < size; ++k) {
        if (m[k][k] == 0) {
            std::size_t swap = k + 1;
            while (swap < size && m[swap][k] == 0) ++swap;
            if (swap == size) return 0;
            std::swap(m[k], m[swap]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < size; ++i) {
            for (std::size_t j = k + 1; j < size; ++j) {
                m[i][j] = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    mpz_class res = sign * m[size - 1][size - 1];
    mpz_class disc;
    mpz_divexact(disc.get_mpz_t(), res.get_mpz_t(), f.coeffs[0].get_mpz_t());
    return ((n * (n - 1) / 2) % 2 == 0) ? disc : mpz_class(-disc);
}

ImProduct im_product(unsigned long p, mpfr_prec_t precision) {
    if (p < 3 || !is_prime(static_cast<u64>(p))) throw PreconditionError("p must be an odd prime");
    const BigReal u = real(1, precision) + sqrt(real(2, precision));
    const BigReal root = exp(log(u) / real(static_cast<long>(p), precision));
    const BigReal s = root + real(1, precision) / root;
    mpz_class pow2 = 1;
    pow2 <<= static_cast<mp_bitcnt_t>((p - 1) / 2);
    const BigReal lead = BigReal(mpz_class(pow2 * p), precision);
    ImProduct out{lead * s * s / real(8, precision), lead / real(2, precision)};
    if (out.closed_form < out.lower_bound) throw std::logic_error("im_product below its lower bound");
    return out;
}

bool galois_action_check(unsigned long p, long r, int s, long j, long k, mpfr_prec_t precision) {
    require_valid(p, r);
    if (s != 0 && s != 1) throw PreconditionError("galois_action_check: s must be 0 or 1");
    const long lp = static_cast<long>(p);
    if (((k % lp) + lp) % lp == 0) throw PreconditionError("galois_action_check: k must be a unit mod p");

    const RootSet rs = all_roots(p, r, precision);
    const mpfr_prec_t work = rs.precision + 32;
    BigReal c = root_multiplier(p, r, work);
    // tau inverts the real multiplier: (1 - sqrt2) = -(1 + sqrt2)^(-1).
    if (s == 1) c = real(1, work) / c;
    BigReal s2 = sqrt(real(2, work));
    if (s == 1) s2 = -s2;
    const BigReal tol = two_pow_neg(rs.precision / 2, work);

    for (long i = 0; i < lp; ++i) {
        const long m = ((k * i - 2 * r * j) % lp + lp) % lp;
        Complex z = zeta_power(p, m, work);
        Complex image = root_from(Complex(c * z.re, c * z.im), s2);
        const long target = ((s == 1 ? -m : m) % lp + lp) % lp;
        const Complex& rho = rs.roots[static_cast<std::size_t>(target)];
        BigReal scale = real(1, work) + norm(rho);
        if (!(norm(image - rho) < tol * scale)) return false;
    }
    return true;
}

}  // namespace lnagell
