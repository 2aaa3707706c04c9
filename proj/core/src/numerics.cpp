#include "lnagell/numerics.hpp"

#include <cmath>
#include <unordered_map>

#include "lnagell/errors.hpp"

namespace lnagell {

u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

u64 modpow(u64 base, u64 exp, u64 m) {
    if (m == 1) return 0;
    u64 result = 1;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mulmod(result, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

u64 reduce(i64 n, u64 m) {
    i64 r = n % static_cast<i64>(m);
    if (r < 0) r += static_cast<i64>(m);
    return static_cast<u64>(r);
}

u64 invmod(u64 a, u64 m) {
    i64 t = 0, new_t = 1;
    i64 r = static_cast<i64>(m), new_r = static_cast<i64>(a % m);
    while (new_r != 0) {
        i64 q = r / new_r;
        std::tie(t, new_t) = std::make_pair(new_t, t - q * new_t);
        std::tie(r, new_r) = std::make_pair(new_r, r - q * new_r);
    }
    if (r != 1) throw PreconditionError("invmod: argument is not a unit");
    return reduce(t, m);
}

mpz_class modpow(const mpz_class& base, const mpz_class& exp, const mpz_class& m) {
    if (m < 1) throw PreconditionError("modpow: modulus must be positive");
    if (exp < 0) throw PreconditionError("modpow: exponent must be non-negative");
    mpz_class r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), m.get_mpz_t());
    return r;
}

int legendre(i64 n, u64 q) {
    u64 a = reduce(n, q);
    if (a == 0) return 0;
    return modpow(a, (q - 1) / 2, q) == 1 ? 1 : -1;
}

int legendre(const mpz_class& n, u64 q) {
    mpz_class r = n % q;
    if (r < 0) r += q;
    return legendre(static_cast<i64>(r.get_ui()), q);
}

std::optional<u64> sqrt_mod(i64 n, u64 q) {
    u64 a = reduce(n, q);
    if (a == 0) return 0;
    if (legendre(static_cast<i64>(a), q) != 1) return std::nullopt;

    u64 s = 0, d = q - 1;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    u64 z = 2;
    while (legendre(static_cast<i64>(z), q) != -1) ++z;

    u64 m = s;
    u64 c = modpow(z, d, q);
    u64 t = modpow(a, d, q);
    u64 r = modpow(a, (d + 1) / 2, q);
    while (t != 1) {
        u64 i = 0, t2 = t;
        while (t2 != 1) {
            t2 = mulmod(t2, t2, q);
            ++i;
        }
        u64 b = c;
        for (u64 j = 0; j + 1 < m - i; ++j) b = mulmod(b, b, q);
        m = i;
        c = mulmod(b, b, q);
        t = mulmod(t, c, q);
        r = mulmod(r, b, q);
    }
    return std::min(r, q - r);
}

u64 discrete_log(u64 g, u64 x, u64 l) {
    g %= l;
    x %= l;
    if (x == 0 || g == 0) throw PreconditionError("discrete_log: arguments must be units");
    const u64 order = l - 1;
    const u64 m = static_cast<u64>(std::ceil(std::sqrt(static_cast<double>(order))));

    std::unordered_map<u64, u64> baby;
    baby.reserve(m * 2);
    u64 cur = 1;
    for (u64 j = 0; j < m; ++j) {
        baby.emplace(cur, j);
        cur = mulmod(cur, g, l);
    }
    const u64 giant = invmod(modpow(g, m, l), l);
    u64 gamma = x;
    for (u64 i = 0; i <= m; ++i) {
        auto it = baby.find(gamma);
        if (it != baby.end()) {
            u64 k = i * m + it->second;
            if (k < order) return k;
        }
        gamma = mulmod(gamma, giant, l);
    }
    throw PreconditionError("discrete_log: no solution (generator is not primitive)");
}

u64 primitive_root(u64 l) {
    if (l == 2) return 1;
    auto fs = factorize(l - 1);
    for (u64 g = 2; g < l; ++g) {
        bool ok = true;
        for (const auto& f : fs) {
            if (modpow(g, (l - 1) / f.prime, l) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw PreconditionError("primitive_root: modulus is not prime");
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    unsigned s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = modpow(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (unsigned r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

bool is_prime(const mpz_class& n) {
    if (n.fits_ulong_p()) return is_prime(static_cast<u64>(n.get_ui()));
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

std::vector<u64> primes_up_to(u64 limit) {
    std::vector<u64> out;
    if (limit < 2) return out;
    std::vector<bool> composite(limit + 1, false);
    for (u64 i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        out.push_back(i);
        for (u64 j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return out;
}

u64 next_prime(u64 n) {
    u64 c = n + 1;
    while (!is_prime(c)) ++c;
    return c;
}

std::vector<Factor> factorize(u64 n) {
    std::vector<Factor> out;
    for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.push_back({p, e});
    }
    if (n > 1) out.push_back({n, 1});
    return out;
}

PartialFactorization trial_factor(const mpz_class& n, u64 bound) {
    PartialFactorization out;
    mpz_class m = abs(n);
    if (m == 0) {
        out.cofactor = 0;
        return out;
    }
    for (u64 p = 2; p <= bound; p += (p == 2 ? 1 : 2)) {
        if (m == 1) break;
        if (mpz_class(p) * p > m) {
            out.factors.emplace_back(m, 1u);
            m = 1;
            break;
        }
        if (mpz_divisible_ui_p(m.get_mpz_t(), p) == 0) continue;
        unsigned e = 0;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p) != 0) {
            m /= p;
            ++e;
        }
        out.factors.emplace_back(mpz_class(p), e);
    }
    if (m != 1 && is_prime(m)) {
        out.factors.emplace_back(m, 1u);
        m = 1;
    }
    out.cofactor = m;
    return out;
}

Valuation Valuation::operator+(const Valuation& o) const {
    if (infinite || o.infinite) return infinity(base);
    return {base, false, value + o.value};
}

std::ostream& operator<<(std::ostream& os, const Valuation& v) {
    if (v.infinite) return os << "inf";
    return os << v.value;
}

Valuation valuation(const mpz_class& n, const mpz_class& q) {
    if (q < 2) throw PreconditionError("valuation: base must be prime");
    if (n == 0) return Valuation::infinity(q);
    mpz_class rest;
    unsigned long e = mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), q.get_mpz_t());
    return {q, false, e};
}

// ---- QuadRing ----

QuadRing::QuadRing(u64 l) : l_(l) {
    if (l < 3 || l % 2 == 0) throw PreconditionError("QuadRing: modulus must be an odd prime");
    theta_ = sqrt_mod(2, l);
    mode_ = theta_ ? Mode::split : Mode::inert;
}

QuadRing::Elem QuadRing::add(Elem a, Elem b) const {
    return {(a.u + b.u) % l_, (a.v + b.v) % l_};
}

QuadRing::Elem QuadRing::sub(Elem a, Elem b) const {
    return {(a.u + l_ - b.u) % l_, (a.v + l_ - b.v) % l_};
}

QuadRing::Elem QuadRing::mul(Elem a, Elem b) const {
    u64 uu = mulmod(a.u, b.u, l_);
    u64 vv = mulmod(mulmod(a.v, b.v, l_), 2, l_);
    u64 uv = (mulmod(a.u, b.v, l_) + mulmod(a.v, b.u, l_)) % l_;
    return {(uu + vv) % l_, uv};
}

QuadRing::Elem QuadRing::pow(Elem a, u64 e) const {
    Elem r = one();
    while (e > 0) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

QuadRing::Elem QuadRing::pow(Elem a, const mpz_class& e) const {
    Elem r = one();
    const size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (size_t i = bits; i-- > 0;) {
        r = mul(r, r);
        if (mpz_tstbit(e.get_mpz_t(), i)) r = mul(r, a);
    }
    return r;
}

u64 QuadRing::norm(Elem a) const {
    u64 uu = mulmod(a.u, a.u, l_);
    u64 vv = mulmod(mulmod(a.v, a.v, l_), 2, l_);
    return (uu + l_ - vv) % l_;
}

u64 QuadRing::to_field(Elem a) const {
    if (!theta_) throw PreconditionError("QuadRing::to_field: 2 is not a square modulo l");
    return (a.u + mulmod(a.v, *theta_, l_)) % l_;
}

// ---- Z[sqrt 2] ----

ZSqrt2 pow(ZSqrt2 base, unsigned long e) {
    ZSqrt2 r{1, 0};
    while (e > 0) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

ZSqrt2 ZSqrt2::unit_power(long r) {
    if (r >= 0) return pow(ZSqrt2{1, 1}, static_cast<unsigned long>(r));
    return pow(ZSqrt2{-1, 1}, static_cast<unsigned long>(-r));
}

}  // namespace lnagell

namespace lnagell {

mpq_class parse_rational(const std::string& s) {
    auto fail = [&]() -> mpq_class { throw PreconditionError("cannot parse rational '" + s + "'"); };
    if (s.empty()) return fail();
    try {
        if (auto caret = s.find('^'); caret != std::string::npos) {
            mpz_class base(s.substr(0, caret), 10);
            const long e = std::stol(s.substr(caret + 1));
            mpz_class v;
            mpz_pow_ui(v.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(std::labs(e)));
            return e >= 0 ? mpq_class(v) : mpq_class(mpz_class(1), v);
        }
        if (s.find('/') != std::string::npos) {
            mpq_class q(s);
            q.canonicalize();
            return q;
        }
        std::string mant = s;
        long exp10 = 0;
        if (auto e = s.find_first_of("eE"); e != std::string::npos) {
            mant = s.substr(0, e);
            exp10 = std::stol(s.substr(e + 1));
        }
        bool neg = false;
        if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
            neg = mant[0] == '-';
            mant = mant.substr(1);
        }
        std::string digits;
        long frac = 0;
        bool seen_dot = false;
        for (char ch : mant) {
            if (ch == '.') {
                if (seen_dot) return fail();
                seen_dot = true;
            } else if (ch >= '0' && ch <= '9') {
                digits.push_back(ch);
                if (seen_dot) ++frac;
            } else {
                return fail();
            }
        }
        if (digits.empty()) return fail();
        mpq_class q{mpz_class(digits, 10)};
        const long shift = exp10 - frac;
        mpz_class ten;
        mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
        if (shift >= 0) {
            q *= ten;
        } else {
            q /= ten;
        }
        q.canonicalize();
        return neg ? mpq_class(-q) : q;
    } catch (const std::invalid_argument&) {
        return fail();
    } catch (const std::out_of_range&) {
        return fail();
    }
}

}  // namespace lnagell
