#pragma once

#include <vector>

#include <gmpxx.h>

#include "lnagell/bigreal.hpp"

namespace lnagell {

/// Binary form f_{r,p}(a, b) = sum_k c_k a^(p-k) b^k.
struct ThuePolynomial {
    unsigned long p = 0;
    long r = 0;
    std::vector<mpz_class> coeffs;  ///< c_0 .. c_p
};

/// Coefficients from the exact expansion of the sqrt2-part of (1+sqrt2)^r (a+b sqrt2)^p.
ThuePolynomial thue_coeffs(unsigned long p, long r);

mpz_class thue_eval(const ThuePolynomial& f, const mpz_class& a, const mpz_class& b);

struct Complex {
    BigReal re, im;
    explicit Complex(mpfr_prec_t prec) : re(prec), im(prec) {}
    Complex(BigReal r, BigReal i) : re(std::move(r)), im(std::move(i)) {}
};

Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
BigReal norm(const Complex& z);  ///< |z|

/// Evaluates the polynomial sum_k c_k x^(p-k) at a complex point.
Complex evaluate(const ThuePolynomial& f, const Complex& x);

/// The real root theta = rho_0 of f_{r,p}(x, 1), checked against the sign class of r.
BigReal real_root_theta(unsigned long p, long r, mpfr_prec_t precision);

struct RootSet {
    unsigned long p = 0;
    long r = 0;
    mpfr_prec_t precision = 0;
    std::vector<Complex> roots;  ///< rho_i, indexed by i mod p
    std::size_t real_index = 0;
    BigReal max_residual{64};    ///< max_i |f(rho_i)| / scale_i after polishing
    BigReal min_separation{64};  ///< min_{i<j} |rho_i - rho_j|
};

/// All roots from the closed form, Newton-polished, with residuals and separation certified.
/// Doubles the working precision when the real-root classification is ambiguous.
RootSet all_roots(unsigned long p, long r, mpfr_prec_t precision);

/// (-1)^(p(p-1)/2) 2^(3(p-1)(p-2)/2) p^p.
mpz_class discriminant_formula(unsigned long p);

/// Discriminant of f_{r,p}(x, 1) as (-1)^(n(n-1)/2) Res(f, f') / lc(f), via a
/// fraction-free Sylvester determinant.
mpz_class discriminant_resultant(unsigned long p, long r, unsigned long max_p = 13);

struct ImProduct {
    BigReal closed_form;
    BigReal lower_bound;
};

/// prod_{i != 0} |Im rho_i| for r = 1 in closed form, with the bound p 2^((p-3)/2).
ImProduct im_product(unsigned long p, mpfr_prec_t precision = 256);

/// Applies the image formula of the automorphism (tau^s sigma^j, k) to every root
/// and checks it lands on rho_{(-1)^s (k i - 2 r j)}.
bool galois_action_check(unsigned long p, long r, int s, long j, long k, mpfr_prec_t precision = 256);

}  // namespace lnagell
