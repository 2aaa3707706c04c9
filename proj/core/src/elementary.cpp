#include "lnagell/elementary.hpp"

#include <algorithm>
#include <sstream>

#include "lnagell/errors.hpp"

namespace lnagell {

namespace {

mpz_class mod(const mpz_class& n, const mpz_class& m) {
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t());
    return r;
}

bool divides(const mpz_class& d, const mpz_class& n) {
    if (d == 0) return n == 0;
    return mpz_divisible_p(n.get_mpz_t(), d.get_mpz_t()) != 0;
}

mpz_class ipow(const mpz_class& b, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

/// 1 + y + ... + y^(n-1) mod m, by binary splitting of the geometric sum.
mpz_class geometric_sum_mod(const mpz_class& y, unsigned long n, const mpz_class& m) {
    // (sum, power) for k terms: S(2k) = S(k)(1 + y^k), S(k+1) = S(k) + y^k.
    mpz_class sum = 0, power = 1;
    const mpz_class base = mod(y, m);
    for (int bit = 63; bit >= 0; --bit) {
        sum = mod(sum * (1 + power), m);
        power = mod(power * power, m);
        if ((n >> bit) & 1) {
            sum = mod(sum + power, m);
            power = mod(power * base, m);
        }
    }
    return sum;
}

std::string to_str(const mpz_class& v) { return v.get_str(); }

ConditionVerdict verdict(std::string name, bool passed, std::string detail = {}, bool full = true) {
    return {std::move(name), passed, full, std::move(detail)};
}

/// Checks that every prime factor of |n| (other than those in `skip`) satisfies `pred`.
template <class Pred>
std::pair<bool, bool> all_prime_factors(const mpz_class& n, u64 bound, const std::vector<u64>& skip,
                                        Pred pred, std::string& detail) {
    auto pf = trial_factor(n, bound);
    bool ok = true;
    for (const auto& [q, e] : pf.factors) {
        if (q.fits_ulong_p() && std::find(skip.begin(), skip.end(), q.get_ui()) != skip.end()) continue;
        if (!pred(q)) {
            ok = false;
            detail = "prime factor " + q.get_str() + " violates the congruence";
            break;
        }
    }
    return {ok, pf.complete()};
}

}  // namespace

mpz_class binomial(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

CandidateSolution CandidateSolution::make(const mpz_class& x, const mpz_class& y, unsigned long p) {
    if (x * x - 2 != ipow(y, p)) {
        throw PreconditionError("CandidateSolution: x^2 - 2 != y^p for (" + x.get_str() + ", " +
                                y.get_str() + ", " + std::to_string(p) + ")");
    }
    return CandidateSolution(x, y, p, true);
}

CandidateSolution CandidateSolution::unchecked(const mpz_class& x, const mpz_class& y, unsigned long p) {
    return CandidateSolution(x, y, p, false);
}

bool SieveReport::passed() const { return all_passed(conditions); }

const ConditionVerdict* SieveReport::find(const std::string& name) const { return find_verdict(conditions, name); }

CoprimeQuotientReport coprime_quotient_properties(const mpz_class& y, const mpz_class& a, unsigned long p, u64 trial_bound) {
    if (y == a) throw PreconditionError("coprime_quotient_properties: y must differ from a");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t());
    if (g != 1) throw PreconditionError("coprime_quotient_properties: y and a must be coprime");

    CoprimeQuotientReport out;
    const mpz_class diff = y - a;
    out.quotient = (ipow(y, p) - ipow(a, p)) / diff;
    mpz_gcd(out.gcd_value.get_mpz_t(), diff.get_mpz_t(), out.quotient.get_mpz_t());

    const mpz_class pz(p);
    const bool p_diff = divides(pz, diff);
    out.p_divides_equivalence = p_diff == divides(pz, out.quotient);
    if (p_diff) {
        out.quotient_mod_p2 = mod(out.quotient, pz * pz);
        const mpz_class expected = divides(pz, a) ? mpz_class(0) : pz;
        out.quotient_class_ok = *out.quotient_mod_p2 == expected;
    }

    std::string detail;
    auto [ok, full] = all_prime_factors(
        out.quotient, trial_bound, {p}, [&](const mpz_class& q) { return mod(q, pz) == 1; }, detail);
    out.prime_factor_congruences_ok = ok;
    out.prime_factors_fully_verified = full;
    return out;
}

SieveReport sieve_check(const CandidateSolution& c, u64 trial_bound) {
    if (c.trivial()) throw PreconditionError("sieve_check: trivial solution (y = -1) rejected");
    const mpz_class& x = c.x();
    const mpz_class& y = c.y();
    const unsigned long p = c.p();
    const mpz_class pz(p);
    SieveReport rep;

    {
        const bool ok = mod(x, 2) == 1 && mod(y, 2) == 1 && mod(y, 8) == 7;
        rep.conditions.push_back(verdict("odd_and_y_7_mod_8", ok,
                                         "x mod 2 = " + to_str(mod(x, 2)) + ", y mod 8 = " + to_str(mod(y, 8))));
    }
    {
        std::string detail;
        auto [ok, full] = all_prime_factors(
            y, trial_bound, {}, [](const mpz_class& q) {
                mpz_class r = mod(q, 8);
                return r == 1 || r == 7;
            },
            detail);
        rep.conditions.push_back(verdict("y_prime_factors_pm1_mod_8", ok, detail, full));
    }
    {
        const bool three_x = divides(3, x);
        const mpz_class r24 = mod(y, 24);
        const bool ok = (three_x ? r24 == 7 : r24 == 23) && (divides(3, y - 1) == three_x);
        rep.conditions.push_back(verdict("y_mod_24_matches_3_divides_x", ok, "y mod 24 = " + to_str(r24)));
    }
    {
        const mpz_class ym1 = y - 1;
        const Valuation v2 = valuation(ym1, 2);
        const Valuation v3 = valuation(ym1, 3);
        bool ok = !v2.infinite && v2.value == 1 && !v3.infinite && v3.value <= 1;
        std::string detail = "v2(y-1) = " + std::to_string(v2.value) + ", v3(y-1) = " + std::to_string(v3.value);
        bool full = true;
        if (ok) {
            std::string d2;
            auto [ok2, full2] = all_prime_factors(
                ym1, trial_bound, {2, 3}, [](const mpz_class& q) {
                    mpz_class r = mod(q, 12);
                    return r == 1 || r == 11;
                },
                d2);
            ok = ok2;
            full = full2;
            if (!d2.empty()) detail = d2;
        }
        rep.conditions.push_back(verdict("y_minus_1_valuations", ok, detail, full));
    }
    {
        bool ok;
        std::string detail;
        if (!divides(pz, y + 1)) {
            const mpz_class xr = mod(x, pz);
            ok = xr != 1 && xr != pz - 1;
            detail = "y != -1 mod p; x mod p = " + to_str(xr);
        } else {
            const Valuation lhs = valuation((x - 1) * (x + 1), pz);
            const Valuation rhs = valuation(y + 1, pz);
            ok = lhs == rhs + Valuation{pz, false, 1};
            std::ostringstream os;
            os << "v_p((x-1)(x+1)) = " << lhs << ", v_p(y+1) = " << rhs;
            detail = os.str();
        }
        rep.conditions.push_back(verdict("p_adic_dichotomy", ok, detail));
    }
    {
        // (y^p - 1)/(y - 1) = 1 + y + ... + y^(p-1), reduced without forming y^p.
        const mpz_class q24 = geometric_sum_mod(y, p, 24);
        rep.conditions.push_back(verdict("quotient_1_mod_24", q24 == 1, "quotient mod 24 = " + to_str(q24)));

        const mpz_class p2 = pz * pz;
        const mpz_class qp2 = geometric_sum_mod(y, p, p2);
        bool ok;
        if (!divides(pz, y - 1)) {
            ok = mod(qp2, pz) == 1;
        } else {
            const mpz_class r12 = mod(pz, 12);
            ok = qp2 == pz && (r12 == 1 || r12 == 11);
        }
        rep.conditions.push_back(verdict("quotient_mod_p", ok, "quotient mod p^2 = " + to_str(qp2)));
    }
    {
        const bool applies = p % 3 == 2 || p == 3;
        const bool ok = !applies || !divides(3, x);
        rep.conditions.push_back(verdict("p_2_mod_3_forces_3_not_dividing_x", ok,
                                         applies ? "applies" : "vacuous (p = 1 mod 3)"));
    }
    return rep;
}

UnitPowerPair unit_power_pair(const mpz_class& a, const mpz_class& b, unsigned long p, long r) {
    ZSqrt2 v = ZSqrt2::unit_power(r) * pow(ZSqrt2{a, b}, p);
    return {v.x, v.y, a, b, p, r};
}

std::vector<ConditionVerdict> observation_battery(const mpz_class& a, const mpz_class& b, unsigned long p,
                                                  const mpz_class& x) {
    std::vector<ConditionVerdict> out;
    const mpz_class pz(p);
    const mpz_class y = 2 * b * b - a * a;

    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    out.push_back(verdict("y_is_2b2_minus_a2", x * x - 2 == ipow(y, p), "y = " + y.get_str()));
    out.push_back(verdict("a_b_coprime", g == 1));
    out.push_back(verdict("a_odd_b_even", mod(a, 2) == 1 && mod(b, 2) == 0));
    out.push_back(verdict("b_divides_x_minus_1", divides(b, x - 1)));
    out.push_back(verdict("a_divides_x_minus_2", divides(a, x - 2)));

    const Valuation vp_b = valuation(b, pz);
    out.push_back(verdict("vp_a_minus_1_eq_vp_b", valuation(a - 1, pz) == vp_b));
    {
        const Valuation v = valuation(x - 1, pz);
        const bool ok = divides(pz, b) ? v == vp_b + Valuation{pz, false, 1} : !divides(pz, x - 1);
        out.push_back(verdict("vp_x_minus_1", ok));
    }
    {
        const Valuation v = valuation(x - 2, pz);
        const bool ok = divides(pz, a) ? v == valuation(a, pz) + Valuation{pz, false, 1} : !divides(pz, x - 2);
        out.push_back(verdict("vp_x_minus_2", ok));
    }
    {
        const long chi = legendre(2, static_cast<u64>(p));
        const bool c1 = mod(x - 1 - chi * b, pz) == 0;
        const bool c2 = mod(x - 2 + a, pz) == 0;
        const bool c3 = mod(a - 1 + chi * b, pz) == 0;
        out.push_back(verdict("congruences_mod_p", c1 && c2 && c3));
    }
    {
        const Valuation v1 = valuation(x - 1, 2), v2 = valuation(b, 2), v3 = valuation(a - 1, 2);
        out.push_back(verdict("v2_chain", v1 == v2 && v2 == v3));
    }
    out.push_back(verdict("a_pow_p_1_mod_b", divides(b, ipow(a, p) - 1)));
    out.push_back(verdict("b_pow_p_mod_a", divides(a, ipow(mpz_class(2), (p - 1) / 2) * ipow(b, p) - 1)));
    return out;
}

bool ObservationReport::passed() const {
    if (!identities_hold()) return false;
    return std::all_of(battery.begin(), battery.end(), [](const auto& c) { return c.passed; });
}

ObservationReport observation_identities(const mpz_class& a, const mpz_class& b, unsigned long p) {
    ObservationReport rep;
    const ZSqrt2 z = pow(ZSqrt2{a, b}, p);
    // S = ((a+b r2)^p + (a-b r2)^p)/2 and T = ((a+b r2)^p - (a-b r2)^p)/(2 r2)
    // are the two coordinates of (a + b sqrt2)^p.
    rep.S = z.x;
    rep.T = z.y;
    const UnitPowerPair xy = unit_power_pair(a, b, p, 1);
    rep.X = xy.X;
    rep.Y = xy.Y;
    rep.x_is_s_plus_2t = rep.X == rep.S + 2 * rep.T;
    rep.y_is_s_plus_t = rep.Y == rep.S + rep.T;

    mpz_class odd_sum = 0, even_sum = 0;
    for (unsigned long j = 0; 2 * j + 1 <= p; ++j) {
        odd_sum += binomial(p, 2 * j + 1) * ipow(a, p - 2 * j - 1) * ipow(b, 2 * j + 1) * ipow(mpz_class(2), j);
    }
    for (unsigned long j = 0; 2 * j <= p; ++j) {
        even_sum += binomial(p, 2 * j) * ipow(a, p - 2 * j) * ipow(b, 2 * j) * ipow(mpz_class(2), j);
    }
    rep.difference_is_odd_binomial_sum = rep.X - rep.Y == rep.T && rep.T == odd_sum;
    rep.difference_is_even_binomial_sum = rep.X - 2 * rep.Y == -rep.S && rep.S == even_sum;

    if (rep.Y == 1) {
        rep.battery_ran = true;
        rep.battery = observation_battery(a, b, p, rep.X);
    }
    return rep;
}

bool wieferich_check(u64 p) {
    if (p < 3 || !is_prime(p)) throw PreconditionError("wieferich_check: p must be an odd prime");
    const mpz_class p2 = mpz_class(p) * p;
    return modpow(mpz_class(2), mpz_class(p - 1), p2) == 1;
}

std::vector<CandidateSolution> direct_search(unsigned long p, u64 x_bound) {
    std::vector<CandidateSolution> out;
    mpz_class n, root;
    for (u64 x = 1; x <= x_bound; ++x) {
        mpz_class xz(static_cast<unsigned long>(x));
        n = xz * xz - 2;
        if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), p) != 0) {
            out.push_back(CandidateSolution::make(xz, root, p));
        }
    }
    return out;
}

}  // namespace lnagell
