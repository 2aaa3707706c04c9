#include "lnagell/local_count.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "lnagell/errors.hpp"
#include "lnagell/thue.hpp"

namespace lnagell {

namespace {

void require_inputs(u64 p, u64 q, unsigned s) {
    if (p < 3 || !is_prime(p)) throw PreconditionError("local count: p must be an odd prime");
    if (!is_prime(q)) throw PreconditionError("local count: q must be prime");
    if (s < 1) throw PreconditionError("local count: s must be at least 1");
}

/// C(p, k) 2^floor(k/2) mod m, k = 0..p.
std::vector<u64> binomial_coeffs_mod(u64 p, u64 m) {
    std::vector<u64> out(p + 1);
    mpz_class binom = 1;
    for (u64 k = 0; k <= p; ++k) {
        mpz_class c = binom;
        mpz_mul_2exp(c.get_mpz_t(), c.get_mpz_t(), k / 2);
        out[k] = mpz_class(c % m).get_ui();
        binom = binom * (p - k) / (k + 1);
    }
    return out;
}

/// sum_k coeff[k] c^(p-k) mod m by Horner.
u64 eval_at(const std::vector<u64>& coeff, u64 c, u64 m) {
    u64 acc = 0;
    for (u64 v : coeff) acc = (mulmod(acc, c, m) + v) % m;
    return acc;
}

}  // namespace

bool unit_is_pth_power_inert(u64 p, u64 q) {
    const QuadRing F(q);
    if (F.mode() != QuadRing::Mode::inert) throw PreconditionError("unit_is_pth_power_inert: 2 must be a non-residue mod q");
    if ((q * q - 1) % p != 0) throw PreconditionError("unit_is_pth_power_inert: p must divide q^2 - 1");
    return F.pow(F.make(1, 1), (q * q - 1) / p) == F.one();
}

u64 case4_d(u64 p, u64 q) {
    if (q == p) {
        const u64 m = p * p;
        const auto coeff = binomial_coeffs_mod(p, m);
        u64 d = 1;
        for (u64 c0 = 0; c0 < p; ++c0) {
            const u64 x = eval_at(coeff, c0, m);
            if (x % p != 0 && modpow(x, p - 1, m) == 1) ++d;
        }
        return d;
    }
    if (q % p != 1) throw PreconditionError("case4_d: q must be p or 1 mod p");
    const auto coeff = binomial_coeffs_mod(p, q);
    const u64 e = (q - 1) / p;
    u64 d = 1;
    for (u64 c = 0; c < q; ++c) {
        const u64 x = eval_at(coeff, c, q);
        if (x != 0 && modpow(x, e, q) == 1) ++d;
    }
    return d;
}

LocalCountReport count_mod_prime_power(u64 p, u64 q, unsigned s) {
    require_inputs(p, q, s);
    LocalCountReport r;
    r.p = p;
    r.q = q;
    r.s = s;
    mpz_ui_pow_ui(r.modulus.get_mpz_t(), q, s);
    const mpz_class lower = r.modulus / q;  // q^(s-1)
    if (q == 2) {
        r.case_tag = "3";
        r.count = lower;
    } else if (q == p && s == 1) {
        r.case_tag = "1c";
        r.count = p;
    } else if (q == p || q % p == 1) {
        r.case_tag = "4";
        r.d = case4_d(p, q);
        r.count = lower * p * *r.d;
    } else if (q % p == p - 1) {
        if (legendre(2, q) == 1) {
            r.case_tag = "1b";
            r.count = r.modulus;
        } else if (unit_is_pth_power_inert(p, q)) {
            r.case_tag = "2-power";
            r.count = r.modulus + lower - lower * p;
        } else {
            r.case_tag = "2-nonpower";
            r.count = r.modulus + lower;
        }
    } else {
        r.case_tag = "1a";
        r.count = r.modulus;
    }
    if (r.count < 1) throw std::logic_error("local count: the trivial solution (1, 0) is missing");
    return r;
}

mpz_class count_mod_n(u64 p, u64 n, u64 cap) {
    if (n < 1) throw PreconditionError("count_mod_n: n must be positive");
    if (n > cap) throw PreconditionError("count_mod_n: n exceeds the factorisation cap");
    mpz_class total = 1;
    for (const auto& f : factorize(n)) total *= count_mod_prime_power(p, f.prime, f.exponent).count;
    return total;
}

u64 brute_force_count(u64 p, u64 n, u64 cap) {
    if (p < 3 || !is_prime(p)) throw PreconditionError("brute_force_count: p must be an odd prime");
    if (n < 1) throw PreconditionError("brute_force_count: n must be positive");
    if (n > cap || n > (u64{1} << 31)) throw PreconditionError("brute_force_count: n exceeds the enumeration cap");
    const ThuePolynomial f = thue_coeffs(p, 1);
    std::vector<u64> c(f.coeffs.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = mpz_fdiv_ui(f.coeffs[k].get_mpz_t(), n);
    if (c[0] != 1 % n) throw std::logic_error("brute_force_count: f(1, 0) is not 1");
    const u64 target = 1 % n;
    const std::size_t width = c.size();
    // apow[a * width + j] = a^(p-j) mod n, matching the order of c.
    std::vector<u64> apow(n * width);
    for (u64 a = 0; a < n; ++a) {
        u64 v = 1 % n;
        for (std::size_t j = width; j-- > 0;) {
            apow[a * width + j] = v;
            v = mulmod(v, a, n);
        }
    }
    const u64 sq = (n - 1) * (n - 1);
    const std::size_t chunk = sq == 0 ? width : std::max<std::size_t>(1, std::min<u64>(width, (~u64{0} - n) / sq));
    u64 count = 0;
    std::vector<u64> g(width);
    for (u64 b = 0; b < n; ++b) {
        u64 bk = 1 % n;
        for (std::size_t k = 0; k < width; ++k) {
            g[k] = mulmod(c[k], bk, n);
            bk = mulmod(bk, b, n);
        }
        for (u64 a = 0; a < n; ++a) {
            const u64* row = &apow[a * width];
            u64 acc = 0;
            for (std::size_t k0 = 0; k0 < width; k0 += chunk) {
                const std::size_t k1 = std::min(width, k0 + chunk);
                for (std::size_t k = k0; k < k1; ++k) acc += g[k] * row[k];
                acc %= n;
            }
            if (acc == target) ++count;
        }
    }
    return count;
}

std::string local_count_csv_header() { return "p,q,s,case,count,d"; }

std::string local_count_csv_row(const LocalCountReport& r) {
    std::ostringstream os;
    os << r.p << ',' << r.q << ',' << r.s << ',' << r.case_tag << ',' << r.count.get_str() << ',';
    if (r.d) os << *r.d;
    return os.str();
}

}  // namespace lnagell
