#include "lnagell/linear_forms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "lnagell/errors.hpp"
#include "real_ctx.hpp"

namespace lnagell {

namespace {

using detail::BigCtx;
using detail::DoubleCtx;
using detail::IntervalCtx;

constexpr mpfr_prec_t kConditionCap = mpfr_prec_t{1} << 16;

template <class Ctx>
struct TwoLogTerms {
    using R = typename Ctx::Real;
    R sigma, lambda, a1, a2, h, H, omega, theta, C, Cp, f;
    explicit TwoLogTerms(const Ctx& c)
        : sigma(c.num(0)), lambda(c.num(0)), a1(c.num(0)), a2(c.num(0)), h(c.num(0)), H(c.num(0)),
          omega(c.num(0)), theta(c.num(0)), C(c.num(0)), Cp(c.num(0)), f(c.num(0)) {}
};

template <class Ctx, class R>
R power(const Ctx& c, const R& x, const char* e) {
    using std::exp;
    using std::log;
    return exp(c.lit(e) * log(x));
}

template <class Ctx, class R>
void sigma_lambda(const Ctx& c, TwoLogTerms<Ctx>& t, const R& mu, const R& rho) {
    using std::log;
    const R one = c.num(1);
    t.sigma = one - (mu - one) * (mu - one) / c.num(2);
    t.lambda = t.sigma * log(rho);
}

/// Everything downstream of (a1, a2, h, sigma, lambda): H, omega, theta, C, C', f.
template <class Ctx, class R>
void laurent_core(const Ctx& c, TwoLogTerms<Ctx>& t, const R& mu) {
    using std::log;
    using std::sqrt;
    const R one = c.num(1);
    t.H = t.h / t.lambda + one / t.sigma;
    const R s = sqrt(one + one / (c.num(4) * t.H * t.H));
    t.omega = c.num(2) * (one + s);
    t.theta = s + one / (c.num(2) * t.H);
    const R inner = t.omega * t.omega / c.num(9) +
                    c.num(8) * t.lambda * power(c, t.omega, "1.25") * power(c, t.theta, "0.25") /
                        (c.num(3) * sqrt(t.a1 * t.a2) * sqrt(t.H)) +
                    c.num(4) / c.num(3) * (one / t.a1 + one / t.a2) * t.lambda * t.omega / t.H;
    const R bracket = t.omega / c.num(6) + sqrt(inner) / c.num(2);
    const R lam3 = t.lambda * t.lambda * t.lambda;
    t.C = mu / (lam3 * t.sigma) * bracket * bracket;
    t.Cp = sqrt(t.C * t.sigma * t.omega * t.theta / (lam3 * mu));
    const R hh = t.h + t.lambda / t.sigma;
    t.f = -(t.C * hh * hh * t.a1 * t.a2) - sqrt(t.omega * t.theta) * hh - log(t.Cp * hh * hh * t.a1 * t.a2);
}

/// (rho+1)(2 log(1+sqrt2) + 10^-50), the unit-mode numerator of a1.
template <class Ctx, class R>
R unit_a1_slope(const Ctx& c, const R& rho) {
    return (rho + c.num(1)) * (c.num(2) * c.log_unit() + c.lit("1e-50"));
}

template <class Ctx, class R>
TwoLogTerms<Ctx> two_log_terms(const Ctx& c, const R& logy, const R& p, const R& mu, const R& rho, RMode mode,
                          const std::optional<R>& a1 = {}, const std::optional<R>& a2 = {},
                          const std::optional<R>& h = {}) {
    using std::log;
    TwoLogTerms<Ctx> t(c);
    sigma_lambda(c, t, mu, rho);
    const R one = c.num(1);
    t.a2 = a2 ? *a2 : (rho + one) * c.log_unit();
    if (a1) {
        t.a1 = *a1;
    } else if (mode == RMode::general) {
        t.a1 = c.lit("0.9") * (rho + one) + c.num(2) * logy;
    } else {
        t.a1 = unit_a1_slope(c, rho) / p + c.num(2) * logy;
    }
    if (h) {
        t.h = *h;
    } else {
        const R second = mode == RMode::general ? p / t.a1 : c.num(2) / t.a1;
        t.h = c.num(2) * (log(p / t.a2 + second) + log(t.lambda) + c.lit("1.78"));
    }
    laurent_core(c, t, mu);
    return t;
}

template <class Ctx, class R>
R g_value(const Ctx& c, const R& logy, const R& p, const R& mu, const R& rho, RMode mode) {
    auto t = two_log_terms(c, logy, p, mu, rho, mode);
    return c.lit("1.053") - p * logy / c.num(2) - t.f;
}

template <class Ctx>
struct UShape {
    using R = typename Ctx::Real;
    R C1, C2, C3, C4, C5, h_ell, a1_ell, a2, lambda;
};

template <class Ctx>
UShape<Ctx> u_shape(const Ctx& c, const GUpperSetup& setup) {
    using R = typename Ctx::Real;
    using std::log;
    using std::sqrt;
    const R mu = c.q(setup.mu), rho = c.q(setup.rho), one = c.num(1);
    const R p_ell = c.num(static_cast<long>(setup.p_ell));
    TwoLogTerms<Ctx> t(c);
    sigma_lambda(c, t, mu, rho);
    t.a2 = (rho + one) * c.log_unit();
    const R log23 = log(c.num(23));
    t.a1 = setup.mode == RMode::general ? c.lit("0.9") * (rho + one) + c.num(2) * log23 : c.num(2) * log23;
    t.h = c.num(2) * (log(p_ell) - log(t.a2) + log(t.lambda) + c.lit("1.78"));
    laurent_core(c, t, mu);

    const R tail = log(t.lambda) + c.lit("1.78") + t.lambda / (c.num(2) * t.sigma);
    R C3 = setup.mode == RMode::general ? log(one / t.a2 + one / t.a1) + tail
                                       : log(one / t.a2 + c.num(2) / (t.a1 * p_ell)) + tail;
    const R sq = sqrt(t.omega * t.theta);
    R C1 = c.lit("1.053") + c.num(2) * sq * C3 + log(c.num(8) * t.Cp * t.a2);
    R C2 = c.num(8) * t.C * t.a2;
    R C4 = setup.mode == RMode::general ? c.lit("0.45") * (rho + one) : unit_a1_slope(c, rho) / (c.num(2) * p_ell);
    R C5 = c.num(2) * sq;
    return {C1, C2, C3, C4, C5, t.h, t.a1, t.a2, t.lambda};
}

template <class Ctx, class R>
R u_value(const Ctx& c, const UShape<Ctx>& u, const R& logy, const R& p) {
    using std::log;
    const R lp = log(p) + u.C3;
    const R ly = logy + u.C4;
    return u.C1 - logy * p / c.num(2) + u.C2 * lp * lp * ly + u.C5 * log(p) + log(lp * lp * ly);
}

/// True iff eval(prec) is certainly positive; undecided comparisons escalate up to the condition cap.
template <class F>
ConditionVerdict positive(std::string name, F&& eval, mpfr_prec_t prec, std::string detail = {}) {
    try {
        auto v = decide_sign(std::forward<F>(eval), prec, kConditionCap);
        std::ostringstream os;
        os << "value " << v.value << " at " << v.precision << " bits";
        if (!detail.empty()) os << "; " << detail;
        return {std::move(name), v.sign > 0, true, os.str()};
    } catch (const PrecisionError& e) {
        return {std::move(name), false, true, std::string("undecided: ") + e.what()};
    }
}

void validate_mu_rho(const mpq_class& mu, const mpq_class& rho) {
    if (mu < mpq_class(1, 3) || mu > 1) throw PreconditionError("mu must lie in [1/3, 1]");
    if (rho <= 1) throw PreconditionError("rho must exceed 1");
}

std::optional<Interval> lift(const std::optional<mpq_class>& v, const IntervalCtx& c) {
    if (!v) return std::nullopt;
    return c.q(*v);
}

}  // namespace

std::string to_string(RMode m) { return m == RMode::general ? "general" : "unit"; }

RMode parse_rmode(const std::string& s) {
    if (s == "general") return RMode::general;
    if (s == "unit") return RMode::unit;
    throw PreconditionError("unknown r-mode '" + s + "' (expected general or unit)");
}

LinearFormInstance LinearFormInstance::make(unsigned long p, const mpq_class& y, RMode mode, long r) {
    if (p < 3 || !is_prime(static_cast<u64>(p))) throw PreconditionError("p must be an odd prime");
    if (y < 23) throw PreconditionError("y must be at least 23");
    LinearFormInstance inst{p, y, mode, r};
    if (r == 0) inst.r = mode == RMode::general ? static_cast<long>((p - 1) / 2) : 1;
    if (mode == RMode::unit && std::labs(inst.r) != 1) throw PreconditionError("unit mode needs r = +-1");
    if (mode == RMode::general && static_cast<unsigned long>(std::labs(inst.r)) > (p - 1) / 2) {
        throw PreconditionError("general mode needs |r| <= (p-1)/2");
    }
    return inst;
}

Interval LinearFormInstance::height_alpha2(mpfr_prec_t prec) { return Interval::log_unit(prec) / 2L; }

Interval lambda_upper(const mpq_class& y, unsigned long p, mpfr_prec_t prec) {
    IntervalCtx c{prec};
    return c.lit("1.053") - c.num(static_cast<long>(p)) * c.log_q(y) / c.num(2);
}

Interval lambda_exact(const mpz_class& x, mpfr_prec_t prec) {
    if (x < 2) throw PreconditionError("lambda_exact needs x > sqrt2");
    Interval xi(x, prec), s2 = Interval::sqrt2(prec);
    return log((xi + s2) / (xi - s2));
}

bool upper_constant_check() {
    auto v = decide_sign([](mpfr_prec_t prec) {
        IntervalCtx c{prec};
        Interval s2 = Interval::sqrt2(prec);
        Interval denom = c.num(1) - s2 / power(c, c.num(23), "1.5");
        return c.lit("2.866") - c.num(2) * s2 / denom;
    });
    return v.sign > 0;
}

TwoLogParams choose_two_log_params(unsigned long p, const mpq_class& rho, const mpq_class& mu, RMode mode) {
    validate_mu_rho(mu, rho);
    if (mode == RMode::unit && p < 100) throw PreconditionError("unit mode requires p >= 100");
    return {mode, mu, rho, std::nullopt, std::nullopt, std::nullopt};
}

std::string LinearFormBoundReport::failed_condition() const {
    for (const auto& c : conditions) {
        if (!c.passed) return c.name;
    }
    return {};
}

TwoLogReport two_log_lower_bound(const LinearFormInstance& inst, const TwoLogParams& params, mpfr_prec_t prec) {
    validate_mu_rho(params.mu, params.rho);
    if (params.mode != inst.mode) throw PreconditionError("parameter mode does not match the instance");
    auto terms = [&](mpfr_prec_t q) {
        IntervalCtx c{q};
        return two_log_terms(c, c.log_q(inst.y), c.num(static_cast<long>(inst.p)), c.q(params.mu), c.q(params.rho),
                          params.mode, lift(params.a1, c), lift(params.a2, c),
                          lift(params.h, c));
    };

    TwoLogReport rep;
    rep.precision = prec;
    const long b1 = static_cast<long>(inst.b1()), b2 = static_cast<long>(inst.b2());

    if (!params.h && !params.a1 && !params.a2) {
        // h differs from the floor only through p/a1 (or 2/a1) against b2/a1.
        const long numer = params.mode == RMode::general ? static_cast<long>(inst.p) : 2;
        rep.conditions.push_back({"h_floor", numer >= b2, true,
                                  numer > b2 ? "strict by construction" : "holds with equality by construction"});
    } else {
        rep.conditions.push_back(positive(
            "h_floor",
            [&](mpfr_prec_t q) {
                IntervalCtx c{q};
                auto t = terms(q);
                Interval floor = c.num(2) * (log(c.num(b1) / t.a2 + c.num(b2) / t.a1) + log(t.lambda) + c.lit("1.75")) +
                                 c.lit("0.06");
                return t.h - floor;
            },
            prec));
    }
    rep.conditions.push_back(positive("h_ge_lambda", [&](mpfr_prec_t q) { auto t = terms(q); return t.h - t.lambda; }, prec));
    rep.conditions.push_back(positive(
        "h_ge_log2", [&](mpfr_prec_t q) { return terms(q).h - log(Interval(2L, q)); }, prec));
    rep.conditions.push_back(positive("a1_ge_1", [&](mpfr_prec_t q) { return terms(q).a1 - 1L; }, prec));
    rep.conditions.push_back(positive(
        "a1_floor",
        [&](mpfr_prec_t q) {
            IntervalCtx c{q};
            auto t = terms(q);
            const Interval logy = c.log_q(inst.y), p = c.num(b1);
            // log|(a + e b sqrt2)/(a - e b sqrt2)| <= (2|r| log(1+sqrt2) + Lambda)/p.
            const Interval lam = c.lit("2.866") * exp(-(p * logy / c.num(2)));
            const Interval ratio = (c.num(b2) * c.log_unit() + lam) / p;
            return t.a1 - ((c.q(params.rho) + c.num(1)) * ratio + c.num(2) * logy);
        },
        prec));
    rep.conditions.push_back(positive("a2_ge_1", [&](mpfr_prec_t q) { return terms(q).a2 - 1L; }, prec));
    if (!params.a2) {
        rep.conditions.push_back({"a2_floor", true, true, "holds with equality by construction"});
    } else {
        rep.conditions.push_back(positive(
            "a2_floor",
            [&](mpfr_prec_t q) {
                IntervalCtx c{q};
                return terms(q).a2 - (c.q(params.rho) + c.num(1)) * c.log_unit();
            },
            prec));
    }
    rep.conditions.push_back(positive(
        "a1a2_ge_lambda_sq", [&](mpfr_prec_t q) { auto t = terms(q); return t.a1 * t.a2 - square(t.lambda); }, prec));

    const auto t = terms(prec);
    rep.values = {t.sigma.mid(), t.lambda.mid(), t.a1.mid(), t.a2.mid(), t.h.mid(), t.H.mid(),
                  t.omega.mid(), t.theta.mid(), t.C.mid(), t.Cp.mid(), t.f.mid()};
    rep.upper_bound = lambda_upper(inst.y, inst.p, prec).hi_d();
    if (all_passed(rep.conditions)) {
        rep.bound_emitted = true;
        rep.lower_bound = t.f.lo_d();
        auto v = decide_sign(
            [&](mpfr_prec_t q) { return lambda_upper(inst.y, inst.p, q) - terms(q).f; }, prec);
        rep.contradiction = v.sign < 0;
    }
    return rep;
}

Interval g_function(const mpq_class& y, const mpq_class& p, const mpq_class& mu, const mpq_class& rho, RMode mode,
                    mpfr_prec_t prec) {
    IntervalCtx c{prec};
    return g_value(c, c.log_q(y), c.q(p), c.q(mu), c.q(rho), mode);
}

double g_function_d(double y, double p, double mu, double rho, RMode mode) {
    DoubleCtx c;
    return g_value(c, std::log(y), p, mu, rho, mode);
}

GUpperConstants g_upper_constants(const GUpperSetup& setup, mpfr_prec_t prec) {
    validate_mu_rho(setup.mu, setup.rho);
    IntervalCtx c{prec};
    auto u = u_shape(c, setup);
    return {u.C1.mid(), u.C2.mid(), u.C3.mid(), u.C4.mid(), u.C5.mid(),
            u.h_ell.mid(), (u.a1_ell * u.a2).mid(), u.lambda.mid()};
}

Interval g_upper(const GUpperSetup& setup, const mpq_class& y, const mpq_class& p, mpfr_prec_t prec) {
    IntervalCtx c{prec};
    auto u = u_shape(c, setup);
    return u_value(c, u, c.log_q(y), c.q(p));
}

MonotonicityReport monotonicity_guard(const GUpperSetup& setup, const mpq_class& y0, const mpq_class& p0,
                                      mpfr_prec_t prec) {
    MonotonicityReport rep;
    auto shape = [&](mpfr_prec_t q) {
        IntervalCtx c{q};
        return u_shape(c, setup);
    };
    const char* names[] = {"C1_positive", "C2_positive", "C3_positive", "C4_positive", "C5_positive"};
    for (int i = 0; i < 5; ++i) {
        rep.hypotheses.push_back(positive(
            names[i],
            [&, i](mpfr_prec_t q) {
                auto u = shape(q);
                const Interval* cs[] = {&u.C1, &u.C2, &u.C3, &u.C4, &u.C5};
                return *cs[i];
            },
            prec));
    }
    rep.hypotheses.push_back(positive(
        "y0_exceeds_e_pow_e",
        [&](mpfr_prec_t q) {
            IntervalCtx c{q};
            return c.log_q(y0) - Interval::e(q);
        },
        prec));
    rep.hypotheses.push_back(positive(
        "p0_exceeds_e_sq",
        [&](mpfr_prec_t q) {
            IntervalCtx c{q};
            return c.log_q(p0) - c.num(2);
        },
        prec));
    auto third = [&](mpfr_prec_t q) {
        IntervalCtx c{q};
        auto u = shape(q);
        Interval v = c.log_q(p0) + u.C3;
        return v * log(v);
    };
    rep.third_value = third(prec).mid();
    rep.hypotheses.push_back(positive("log_term_condition", [&](mpfr_prec_t q) { return third(q) - 1L; }, prec));
    rep.ok = all_passed(rep.hypotheses);
    return rep;
}

CriticalPoint solve_critical_system(const mpq_class& y0, RMode mode, const CriticalOptions& opt) {
    const bool general = mode == RMode::general;
    const std::size_t n = general ? 3 : 2;
    std::vector<double> z = opt.start ? *opt.start
                                      : (general ? std::vector<double>{6900, 0.5, 8} : std::vector<double>{1900, 22});
    if (z.size() != n) throw PreconditionError("solve_critical_system: start has the wrong dimension");

    const BigCtx c{opt.precision};
    const BigReal logy = c.log_q(y0);
    const double rel_step = std::ldexp(1.0, -20);

    // z = (p, mu, rho) in general mode, (p, rho) with mu = 1/3 in unit mode.
    auto g_at = [&](const std::vector<BigReal>& v) {
        const BigReal mu = general ? v[1] : c.q(mpq_class(1, 3));
        const BigReal& rho = general ? v[2] : v[1];
        return g_value(c, logy, v[0], mu, rho, mode);
    };
    auto to_big = [&](const std::vector<double>& v) {
        std::vector<BigReal> out;
        for (double d : v) out.push_back(c.q(mpq_class(d)));
        return out;
    };
    auto partial = [&](std::vector<BigReal> v, std::size_t i, double step) {
        const BigReal h = c.q(mpq_class(step));
        const BigReal orig = v[i];
        v[i] = orig + h;
        BigReal up = g_at(v);
        v[i] = orig - h;
        BigReal down = g_at(v);
        return (up - down) / (h + h);
    };
    auto residual_vec = [&](const std::vector<double>& zd) {
        auto v = to_big(zd);
        std::vector<BigReal> F{g_at(v)};
        for (std::size_t i = 1; i < n; ++i) F.push_back(partial(v, i, rel_step * std::fabs(zd[i])));
        return F;
    };
    auto norm_inf = [](const std::vector<BigReal>& F) {
        double m = 0;
        for (const auto& f : F) m = std::max(m, std::fabs(f.to_double()));
        return m;
    };

    CriticalPoint out;
    std::vector<BigReal> F = residual_vec(z);
    double res = norm_inf(F);
    for (int it = 0; it < opt.max_iterations; ++it) {
        std::ostringstream tr;
        tr << "iter " << it << ": z = (";
        for (std::size_t i = 0; i < n; ++i) tr << (i ? ", " : "") << z[i];
        tr << "), |F| = " << res;
        out.trace.push_back(tr.str());
        if (res < opt.tolerance) {
            out.p = z[0];
            out.mu = general ? z[1] : 1.0 / 3.0;
            out.rho = general ? z[2] : z[1];
            out.residual = res;
            out.iterations = it;
            return out;
        }
        // Jacobian of the residual by central differences.
        std::vector<std::vector<double>> J(n, std::vector<double>(n));
        for (std::size_t j = 0; j < n; ++j) {
            const double h = rel_step * std::fabs(z[j]);
            auto zp = z, zm = z;
            zp[j] += h;
            zm[j] -= h;
            auto Fp = residual_vec(zp), Fm = residual_vec(zm);
            for (std::size_t i = 0; i < n; ++i) J[i][j] = ((Fp[i] - Fm[i]).to_double()) / (zp[j] - zm[j]);
        }
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i) rhs[i] = -F[i].to_double();
        // Gaussian elimination with partial pivoting.
        for (std::size_t k = 0; k < n; ++k) {
            std::size_t piv = k;
            for (std::size_t i = k + 1; i < n; ++i) {
                if (std::fabs(J[i][k]) > std::fabs(J[piv][k])) piv = i;
            }
            std::swap(J[k], J[piv]);
            std::swap(rhs[k], rhs[piv]);
            if (J[k][k] == 0) throw BudgetError("solve_critical_system: singular Jacobian");
            for (std::size_t i = k + 1; i < n; ++i) {
                const double f = J[i][k] / J[k][k];
                for (std::size_t j = k; j < n; ++j) J[i][j] -= f * J[k][j];
                rhs[i] -= f * rhs[k];
            }
        }
        std::vector<double> dz(n);
        for (std::size_t k = n; k-- > 0;) {
            double s = rhs[k];
            for (std::size_t j = k + 1; j < n; ++j) s -= J[k][j] * dz[j];
            dz[k] = s / J[k][k];
        }
        // Backtracking: halve the step until the residual decreases.
        double t = 1.0;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt, t /= 2) {
            std::vector<double> zn(n);
            for (std::size_t i = 0; i < n; ++i) zn[i] = z[i] + t * dz[i];
            if (general && (zn[1] < 1.0 / 3.0 || zn[1] > 1.0)) continue;
            if (zn[n - 1] <= 1.0 || zn[0] <= 3.0) continue;
            auto Fn = residual_vec(zn);
            const double rn = norm_inf(Fn);
            if (rn < res) {
                z = zn;
                F = std::move(Fn);
                res = rn;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }
    std::ostringstream msg;
    msg << "solve_critical_system did not converge (residual " << res << ")";
    for (const auto& line : out.trace) msg << "\n  " << line;
    throw BudgetError(msg.str());
}

PBoundPlan initial_bound_plan() {
    PBoundPlan plan;
    plan.setup = {RMode::general, parse_rational("0.508613"), parse_rational("7.99202"), 6959};
    plan.anchors = {{mpq_class(23), mpq_class(6993)}, {mpq_class(31), mpq_class(6959)}};
    plan.finite_y = 23;
    plan.finite_p_to = 6993;
    return plan;
}

PBoundPlan improved_bound_plan() {
    PBoundPlan plan;
    plan.setup = {RMode::unit, mpq_class(1, 3), parse_rational("22.5978"), 1973};
    plan.anchors = {{mpq_class(23), mpq_class(1973)}};
    plan.finite_y = 23;
    plan.finite_p_to = 0;
    return plan;
}

PBoundCertificate certify_p_bound(const PBoundPlan& plan_in, mpfr_prec_t prec) {
    PBoundCertificate cert;
    cert.plan = plan_in;
    auto& plan = cert.plan;
    const GUpperSetup& setup = plan.setup;
    if (!plan.critical) plan.critical = solve_critical_system(23, setup.mode);
    const CriticalPoint& cp = *plan.critical;
    {
        const u64 next = next_prime(static_cast<u64>(std::floor(cp.p)));
        const double mu = setup.mu.get_d(), rho = setup.rho.get_d();
        const bool close = std::fabs(cp.rho - rho) <= 1e-5 * rho && std::fabs(cp.mu - mu) <= 1e-5 * mu;
        std::ostringstream os;
        os << "critical p = " << cp.p << ", mu = " << cp.mu << ", rho = " << cp.rho << "; next prime " << next;
        cert.checks.push_back({"critical_point_matches_parameters", close && next == setup.p_ell, true, os.str()});
    }
    cert.constants = g_upper_constants(setup, prec);
    auto shape = [&](mpfr_prec_t q) {
        IntervalCtx c{q};
        return u_shape(c, setup);
    };
    cert.checks.push_back(positive(
        "h_ell_exceeds_lambda", [&](mpfr_prec_t q) { auto u = shape(q); return u.h_ell - u.lambda; }, prec));
    cert.checks.push_back(positive(
        "h_ell_exceeds_log2", [&](mpfr_prec_t q) { return shape(q).h_ell - log(Interval(2L, q)); }, prec));
    cert.checks.push_back(positive(
        "a1_ell_a2_exceeds_lambda_sq",
        [&](mpfr_prec_t q) { auto u = shape(q); return u.a1_ell * u.a2 - square(u.lambda); }, prec));
    for (const auto& [y0, p0] : plan.anchors) {
        const std::string tag = "(" + y0.get_str() + ", " + p0.get_str() + ")";
        auto guard = monotonicity_guard(setup, y0, p0, prec);
        std::string detail = guard.ok ? "third hypothesis value " + std::to_string(guard.third_value) : "";
        for (const auto& h : guard.hypotheses) {
            if (!h.passed) detail = "failed " + h.name;
        }
        cert.checks.push_back({"monotonicity_guard" + tag, guard.ok, true, detail});
        auto v = positive("g_upper_negative" + tag, [&](mpfr_prec_t q) { return -g_upper(setup, y0, p0, q); }, prec);
        cert.checks.push_back(v);
    }
    if (plan.finite_p_to > setup.p_ell) {
        bool ok = true;
        std::string detail;
        for (u64 p = setup.p_ell; p < plan.finite_p_to; p = next_prime(p)) {
            if (!is_prime(p)) continue;
            cert.finite_primes.push_back(p);
            auto v = positive("g", [&](mpfr_prec_t q) {
                return -g_function(plan.finite_y, mpq_class(static_cast<unsigned long>(p)), setup.mu, setup.rho,
                                   setup.mode, q);
            }, prec);
            if (!v.passed) {
                ok = false;
                detail = "g >= 0 at p = " + std::to_string(p);
                break;
            }
        }
        if (ok) detail = std::to_string(cert.finite_primes.size()) + " primes checked at y = " + plan.finite_y.get_str();
        cert.checks.push_back({"finite_range_g_negative", ok, true, detail});
    }
    cert.passed = all_passed(cert.checks);
    return cert;
}

std::pair<u64, u64> interpolation_cardinalities(u64 R1, u64 R2, u64 S1, u64 S2, u64 p) {
    if (S2 < 2) throw PreconditionError("interpolation_cardinalities needs S2 >= 2");
    return {R1 * S1, (S2 - 2) * std::min(R2, p) + 2 * R2};
}

Interval glaisher(mpfr_prec_t prec) {
    const char* digits = "1.2824271291006226368753425688697917277676889273250011920637400217404063088588265";
    Interval a(digits, prec);
    Interval slack("1e-78", prec);
    return Interval::hull(a - slack, a + slack);
}

Interval log_factorial(u64 N, mpfr_prec_t prec) {
    if (N <= 1) return Interval(0L, prec);
    return lngamma(Interval(static_cast<long>(N + 1), prec));
}

Interval log_superfactorial(u64 K, mpfr_prec_t prec) {
    Interval acc(0L, prec);
    for (u64 k = 2; k < K; ++k) acc += lngamma(Interval(static_cast<long>(k + 1), prec));
    return acc;
}

Interval eps_exact(u64 N, mpfr_prec_t prec) {
    if (N == 0) throw PreconditionError("eps needs N >= 1");
    IntervalCtx c{prec};
    const Interval n = c.num(static_cast<long>(N));
    const Interval e = Interval::e(prec);
    // log(e^N + (e-1)^N) = N + log(1 + (1 - 1/e)^N).
    const Interval tail = log(c.num(1) + exp(n * log(c.num(1) - c.num(1) / e)));
    return c.num(2) * (log_factorial(N, prec) - (n - c.num(1)) * log(n) + n + tail) / n;
}

StirlingBounds stirling_bounds(u64 N, u64 K, mpfr_prec_t prec) {
    if (N < 1 || K < 1) throw PreconditionError("stirling_bounds needs N, K >= 1");
    IntervalCtx c{prec};
    const Interval n = c.num(static_cast<long>(N)), k = c.num(static_cast<long>(K));
    const Interval log2pi = log(c.num(2) * Interval::pi(prec));
    const Interval one = c.num(1);
    Interval lf = (n + one / c.num(2)) * log(n) - n + log2pi / c.num(2) + one / (c.num(12) * n);
    Interval eps = (c.num(3) * log(n) + log2pi + one / (c.num(6) * n) +
                    c.num(2) * log(one + exp(n * log(one - one / Interval::e(prec))))) /
                   n;
    Interval sf = (k * k / c.num(2) - one / c.num(12)) * log(k) - c.num(3) * k * k / c.num(4) + k / c.num(2) * log2pi +
                  one / c.num(12) - log(glaisher(prec)) - one / (c.num(240) * k * k);
    return {lf, eps, sf};
}

InterpolationReport interpolation_bound(const LinearFormInstance& inst, const InterpolationParams& P, mpfr_prec_t prec) {
    if (inst.mode != RMode::unit) throw PreconditionError("interpolation_bound needs a unit-mode instance (b2 = 2)");
    if (inst.p < 100) throw PreconditionError("interpolation_bound needs p >= 100");
    if (P.K < 2) throw PreconditionError("interpolation_bound needs K >= 2");
    if (P.L < 1 || P.R1 < 1 || P.R2 < 1 || P.S1 < 1) throw PreconditionError("interpolation_bound needs positive integers");
    validate_mu_rho(P.mu, P.rho);
    const u64 p = inst.p;
    const auto [card1, card2] = interpolation_cardinalities(P.R1, P.R2, P.S1, P.S2, p);
    const u64 R = P.R1 + P.R2 - 1, S = P.S1 + P.S2 - 1, N = P.K * P.L;

    struct Terms {
        Interval g, log_b, eps, a1, a2, lhs, T, A, B, C;
    };
    auto terms = [&](mpfr_prec_t q) {
        IntervalCtx c{q};
        const Interval one = c.num(1);
        const Interval mu = c.q(P.mu), rho = c.q(P.rho);
        const Interval K = c.num(static_cast<long>(P.K)), L = c.num(static_cast<long>(P.L));
        const Interval Ri = c.num(static_cast<long>(R)), Si = c.num(static_cast<long>(S));
        const Interval Ni = c.num(static_cast<long>(N)), pi = c.num(static_cast<long>(p));
        const Interval sigma = one - square(mu - one) / c.num(2);
        const Interval g = one / c.num(4) - Ni / (c.num(12) * Ri * Si);
        const Interval base = (c.num(2) * (Ri - one) + (Si - one) * pi) / c.num(2);
        const Interval log_b = log(base) - c.num(2) / (K * K - K) * log_superfactorial(P.K, q);
        const Interval eps = eps_exact(N, q);
        const Interval logy = c.log_q(inst.y);
        const Interval slope = (c.num(2) * c.log_unit() + c.lit("1e-50")) / pi;
        const Interval a1 = (rho + one) * slope + c.num(2) * logy;
        const Interval a2 = (rho + one) * c.log_unit();
        const Interval lhs = K * (sigma * L - one) * log(rho) - c.num(3) * log(Ni) -
                             c.num(2) * (K - one) * log_b - g * L * (Ri * a1 + Si * a2);
        const bool s_side = S * p >= 2 * R;
        const Interval Tv = s_side ? L * Si / c.num(4) : L * Ri / (c.num(2) * pi);
        const Interval A = K * (sigma * L - one);
        const Interval B = g * L * (slope * Ri + c.log_unit() * Si);
        const Interval C = eps + c.num(3) * log(Ni) + c.num(2) * (K - one) * log_b +
                           g * L * ((slope + c.num(2) * logy) * Ri + c.log_unit() * Si);
        return Terms{g, log_b, eps, a1, a2, lhs, Tv, A, B, C};
    };

    InterpolationReport rep;
    rep.precision = prec;
    rep.conditions.push_back({"card1_ge_L", card1 >= P.L, true,
                              "R1 S1 = " + std::to_string(card1) + ", L = " + std::to_string(P.L)});
    rep.conditions.push_back({"card2_gt_Kminus1_L", card2 > (P.K - 1) * P.L, true,
                              "card2 = " + std::to_string(card2) + ", (K-1)L = " + std::to_string((P.K - 1) * P.L)});
    rep.conditions.push_back(positive("rho_condition", [&](mpfr_prec_t q) { auto t = terms(q); return t.lhs - t.eps; }, prec));

    const Terms t = terms(prec);
    rep.g = t.g.mid();
    rep.log_b = t.log_b.mid();
    rep.eps = t.eps.mid();
    rep.T = t.T.mid();
    rep.A = t.A.mid();
    rep.B = t.B.mid();
    rep.C = t.C.mid();
    rep.rho0 = rep.A / rep.B;
    auto phi = [&](double r) { return rep.A * std::log(r) - rep.B * r - rep.C; };
    rep.rho_feasible = rep.B > 0 && rep.rho0 > 1 && phi(rep.rho0) > 0;
    if (rep.rho_feasible) {
        double lo = 1, hi = rep.rho0;
        for (int i = 0; i < 200; ++i) {
            const double mid = (lo + hi) / 2;
            (phi(mid) > 0 ? hi : lo) = mid;
        }
        rep.rho_min = hi;
    }
    rep.upper_bound = lambda_upper(inst.y, inst.p, prec).hi_d();

    if (all_passed(rep.conditions)) {
        rep.bound_emitted = true;
        IntervalCtx c{prec};
        const Interval rhs = -(c.q(P.mu) * c.num(static_cast<long>(P.K * P.L)) * log(c.q(P.rho)));
        rep.lower_bound = rhs.lo_d();
        // x -> log x + x T is increasing, so substituting |Lambda| <= e^(1.053 - p log(y)/2) bounds the left side.
        auto v = decide_sign(
            [&](mpfr_prec_t q) {
                IntervalCtx cq{q};
                const Interval logU = lambda_upper(inst.y, inst.p, q);
                const Interval Tq = terms(q).T;
                const Interval lhs = logU + log(Tq) + exp(logU) * Tq;
                return lhs + cq.q(P.mu) * cq.num(static_cast<long>(P.K * P.L)) * log(cq.q(P.rho));
            },
            prec);
        rep.contradiction = v.sign < 0;
    }
    return rep;
}

}  // namespace lnagell
