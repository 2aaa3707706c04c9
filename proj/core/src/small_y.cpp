#include "lnagell/small_y.hpp"

#include <algorithm>
#include <limits>

#include <json.hpp>

#include "lnagell/errors.hpp"
#include "parallel.hpp"

namespace lnagell {

namespace {

std::vector<mpz_class> exact_expansion(const mpq_class& v) {
    std::vector<mpz_class> out;
    mpz_class a = v.get_num(), b = v.get_den();
    while (b != 0) {
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        out.push_back(q);
        mpz_class r = a - q * b;
        a = b;
        b = r;
    }
    return out;
}

std::size_t decimal_digits(const mpz_class& v) {
    const std::string s = mpz_class(abs(v)).get_str();
    return s.size();
}

void require_prime(u64 p) {
    if (p < 17 || !is_prime(p)) throw PreconditionError("p must be a prime >= 17");
}

}  // namespace

Interval theta_interval(u64 p, mpfr_prec_t prec) {
    const Interval s2 = Interval::sqrt2(prec);
    const Interval c = exp(Interval(-2L, prec) / static_cast<long>(p) * Interval::log_unit(prec));
    return s2 - 2L * s2 / (c + 1L);
}

std::vector<mpz_class> certified_prefix(const mpq_class& lo, const mpq_class& hi) {
    auto a = exact_expansion(lo), b = exact_expansion(hi);
    a.pop_back();
    b.pop_back();
    std::vector<mpz_class> out;
    for (std::size_t i = 0; i < std::min(a.size(), b.size()) && a[i] == b[i]; ++i) out.push_back(a[i]);
    return out;
}

ContinuedFraction contfrac_theta(u64 p, std::size_t max_terms, mpfr_prec_t precision) {
    require_prime(p);
    ContinuedFraction cf;
    cf.p = p;
    cf.precision = precision;
    cf.validation_precision = 2 * precision;
    const Interval t1 = theta_interval(p, precision), t2 = theta_interval(p, 2 * precision);
    const auto q1 = certified_prefix(t1.lo_q(), t1.hi_q());
    const auto q2 = certified_prefix(t2.lo_q(), t2.hi_q());
    for (std::size_t i = 0; i < std::min({q1.size(), q2.size(), max_terms}) && q1[i] == q2[i]; ++i) {
        cf.q.push_back(q1[i]);
    }
    cf.partial = cf.q.size() < max_terms;
    // P_{-1} = 1, Q_{-1} = 0, P_{-2} = 0, Q_{-2} = 1.
    mpz_class P2 = 0, Q2 = 1, P1 = 1, Q1 = 0;
    for (const auto& q : cf.q) {
        mpz_class P = q * P1 + P2, Q = q * Q1 + Q2;
        cf.P.push_back(P);
        cf.Q.push_back(Q);
        P2 = P1;
        Q2 = Q1;
        P1 = P;
        Q1 = Q;
    }
    return cf;
}

bool check_convergent_bounds(const ContinuedFraction& cf) {
    const mpfr_prec_t prec = cf.validation_precision;
    const Interval theta = theta_interval(cf.p, prec);
    for (std::size_t k = 0; k + 1 < cf.q.size(); ++k) {
        const Interval err = theta * Interval(cf.Q[k], prec) - Interval(cf.P[k], prec);
        const Interval lhs = square(err) * square(Interval(cf.Q[k + 1], prec)) - 1L;
        if (!lhs.certainly_negative()) return false;
    }
    return true;
}

mpz_class quotient_ceiling(u64 p) {
    if (p < 3 || p % 2 == 0) throw PreconditionError("quotient_ceiling: p must be odd and >= 3");
    mpz_class v;
    mpz_ui_pow_ui(v.get_mpz_t(), 2, (3 * p - 7) / 2);
    return mpz_class(static_cast<unsigned long>(p)) * v - 2;
}

Interval cp_constant(u64 p, mpfr_prec_t prec) {
    if (p < 3 || p % 2 == 0) throw PreconditionError("cp_constant: p must be odd and >= 3");
    mpz_class v;
    mpz_ui_pow_ui(v.get_mpz_t(), 2, (p - 3) / 2);
    return Interval(mpq_class(mpz_class(1), v * static_cast<unsigned long>(p)), prec);
}

PropagatedBounds propagate_bounds(u64 p, const mpz_class& b0) {
    require_prime(p);
    if (b0 < 2) throw PreconditionError("propagate_bounds: b0 must be at least 2");
    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(mpz_sizeinbase(b0.get_mpz_t(), 2)) + 128;
    const Interval theta = theta_interval(p, prec);
    if (!theta.certainly_negative()) throw std::logic_error("propagate_bounds: theta is not certainly negative");
    mpz_class two_p;
    mpz_ui_pow_ui(two_p.get_mpz_t(), 2, p);
    const Interval factor = -theta - cp_constant(p, prec) / Interval(two_p, prec);
    const mpq_class lower = (Interval(b0, prec) * factor).lo_q();
    PropagatedBounds out;
    mpz_fdiv_q(out.a0.get_mpz_t(), lower.get_num_mpz_t(), lower.get_den_mpz_t());
    const mpz_class scaled = 199 * b0 * b0;
    mpz_fdiv_q_ui(out.y0.get_mpz_t(), scaled.get_mpz_t(), 100);
    return out;
}

ConvergentBoundReport lower_bound_b(u64 p, const mpz_class& target, mpfr_prec_t cap) {
    require_prime(p);
    if (target < 1) throw PreconditionError("lower_bound_b: target must be positive");
    ConvergentBoundReport rep;
    rep.p = p;
    rep.ceiling = quotient_ceiling(p);
    const auto bits = static_cast<mpfr_prec_t>(mpz_sizeinbase(target.get_mpz_t(), 2));
    for (mpfr_prec_t prec = std::max<mpfr_prec_t>(64, bits * 6 / 5); prec <= cap; prec *= 2) {
        const auto cf = contfrac_theta(p, std::numeric_limits<std::size_t>::max(), prec);
        rep.precision = prec;
        rep.max_quotient = 0;
        for (std::size_t k = 0; k + 1 < cf.q.size(); ++k) {
            const mpz_class& next = cf.q[k + 1];
            if (next > rep.max_quotient) rep.max_quotient = next;
            rep.terms = k + 2;
            if (k >= 1 && next > rep.ceiling) {
                rep.candidate_window = true;
                rep.k = k;
                rep.window = std::make_pair(cf.P[k], cf.Q[k]);
                rep.detail = "q_" + std::to_string(k + 1) + " exceeds the ceiling; convergent " + std::to_string(k) +
                             " is a candidate window";
                return rep;
            }
            if (cf.Q[k + 1] >= target) {
                rep.success = true;
                rep.k = k;
                rep.Q_next = cf.Q[k + 1];
                rep.b0 = rep.Q_next;
                if (rep.b0 >= 2) {
                    const auto pb = propagate_bounds(p, rep.b0);
                    rep.a0 = pb.a0;
                    rep.y0 = pb.y0;
                }
                rep.detail = "certified through k = " + std::to_string(k) + " at " + std::to_string(prec) + " bits";
                return rep;
            }
        }
    }
    throw PrecisionError("lower_bound_b: precision cap reached before Q_{k+1} >= target for p = " + std::to_string(p));
}

SmallYRangeReport certify_small_y_range(const std::vector<u64>& primes, const mpz_class& target, unsigned workers) {
    SmallYRangeReport rep;
    rep.primes.resize(primes.size());
    detail::parallel_for(primes.size(), workers, [&](std::size_t i) { rep.primes[i] = lower_bound_b(primes[i], target); });
    rep.passed = std::all_of(rep.primes.begin(), rep.primes.end(), [](const auto& r) { return r.success; });
    return rep;
}

std::string report_to_json(const ConvergentBoundReport& r) {
    nlohmann::ordered_json doc;
    doc["p"] = r.p;
    doc["precision_bits"] = r.precision;
    doc["terms"] = r.terms;
    doc["max_quotient"] = r.max_quotient.get_str();
    doc["Q_final_digits"] = r.success ? decimal_digits(r.Q_next) : 0;
    doc["b0"] = r.b0.get_str();
    doc["a0"] = r.a0.get_str();
    doc["y0_digits"] = r.success ? decimal_digits(r.y0) : 0;
    doc["success"] = r.success;
    doc["candidate_window"] = r.candidate_window;
    return doc.dump(2);
}

}  // namespace lnagell
